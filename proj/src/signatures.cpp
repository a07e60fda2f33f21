#include "wittforge/signatures.hpp"
#include "wittforge/error.hpp"

namespace wf {

std::string to_string(OrderingType t) { return t == OrderingType::Symplectic ? "symplectic" : "orthogonal"; }

OrderingType ordering_type(const QuaternionAlgebra& Q) {
    return ramified_places(Q).places.count(Place::infinity()) ? OrderingType::Symplectic : OrderingType::Orthogonal;
}

int active_type(const AlgebraWithInvolution& A) {
    if (A.is_base()) return 1;
    return ordering_type(*A.quat) == OrderingType::Symplectic ? -1 : 1;
}

HermForm default_reference(const AlgebraWithInvolution& A) {
    if (A.is_base()) return HermForm(A, 1, {element(A, 1)});
    const QuaternionAlgebra& Q = *A.quat;
    auto G = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    if (active_type(A) == -1) return HermForm(G, 1, {Quat(Q, 1)});
    for (int s : {3, 2, 1}) {
        Quat z = Quat::basis(Q, s);
        if ((z * z).w < 0) return HermForm(G, -1, {z});
    }
    internal_error("no pure basis element with negative square at an orthogonal ordering");
}

namespace {
long isqrt_exact(long v) {
    if (v < 0) return -1;
    long r = 0;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r * r == v ? r : -1;
}

MixedWElement as_element(const HermForm& h) { return to_witt(from_herm(h)); }
}

long odd_signature(const MixedWElement& x0, const HermForm& h0) {
    MixedWElement x = to_canonical(x0);
    MixedWElement ref = to_canonical(as_element(h0));
    if (!(x.ambient == ref.ambient)) domain_error("signature: reference lives over a different algebra");
    int t = active_type(x0.ambient);
    const auto& refodd = t == 1 ? ref.orth : ref.symp;
    const auto& otherref = t == 1 ? ref.symp : ref.orth;
    if (refodd.size() != 1 || !otherref.empty() || !ref.c00.empty())
        domain_error("signature: reference must be a rank-one form in the active slot");
    long s2 = invariants((ref * ref).c00).signature;
    long s0 = isqrt_exact(s2);
    if (s0 <= 0) internal_error("signature: reference square has signature " + std::to_string(s2));
    MixedWElement odd{x.ambient, {}, {}, {}};
    (t == 1 ? odd.orth : odd.symp) = t == 1 ? x.orth : x.symp;
    long num = invariants((odd * ref).c00).signature;
    if (num % s0) internal_error("signature: " + std::to_string(num) + " is not divisible by " + std::to_string(s0));
    return num / s0;
}

SignaturePair signature_pair(const MixedWElement& x, const HermForm& h0) {
    long even = invariants(x.c00).signature;
    long s = odd_signature(x, h0);
    return SignaturePair{even + s, even - s, h0};
}

SignaturePair signature_pair(const MixedWElement& x) { return signature_pair(x, default_reference(x.ambient)); }

long signature_of_involution(const AlgebraWithInvolution& A) {
    auto p = signature_pair(to_witt(from_herm(HermForm(A, 1, {element(A, 1)}))));
    return std::labs(p.plus);
}

std::vector<std::vector<long>> signature_morphisms(const std::vector<MixedWElement>& gens) {
    const std::size_t n = gens.size();
    std::vector<std::vector<long>> sig(n, std::vector<long>(n));
    std::vector<long> mag(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            MixedWElement p = gens[i] * gens[j];
            if (!p.orth.empty() || !p.symp.empty()) domain_error("signature_morphisms: generators must be odd");
            sig[i][j] = sig[j][i] = invariants(p.c00).signature;
        }
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = isqrt_exact(sig[i][i]);
        if (mag[i] < 0) return {};
    }
    std::vector<std::vector<long>> out;
    std::vector<long> cur(n);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k < (mag[i] ? 2 : 1); ++k) {
            long v = k ? -mag[i] : mag[i];
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) ok = cur[j] * v == sig[j][i];
            if (!ok) continue;
            cur[i] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}
