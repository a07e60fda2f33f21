#include "wittforge/cohomology.hpp"
#include "wittforge/error.hpp"
#include "wittforge/lambda.hpp"

namespace wf {

BrauerClass symbol_to_brauer(const Rational& a, const Rational& b) {
    if (a == 0 || b == 0) domain_error("symbol: arguments must be nonzero");
    return BrauerClass{invariants(pfister({a, b})).hasse};
}

BrauerClass e2(const QuadraticForm& q) {
    auto inv = invariants(q);
    if (inv.dim % 2 || !inv.disc.is_trivial()) domain_error("e2: form " + to_string(q) + " is not in I^2");
    return BrauerClass{inv.hasse};
}

namespace {
Rational det_scalar(const AlgebraWithInvolution& A) {
    MixedGWElement d = det(from_herm(HermForm(A, 1, {element(A, 1)})));
    if (d.c00.virtual_dim != 1 || d.c00.witt.dim() != 1) internal_error("det of the involution is not a line");
    return d.c00.witt.entries[0];
}
}

BrauerClass mixed_cup(const AlgebraWithInvolution& A, const Quat& a, const Quat& b) {
    if (A.is_base()) domain_error("cup: needs a quaternion ambient");
    int sa = symmetry_sign(A, a), sb = symmetry_sign(A, b);
    if (sa == 0 || sb == 0) domain_error("cup: entries must be symmetric or skew-symmetric");
    if (sa != sb)
        domain_error("cup: entries sit in different slots (" + slot_name(sa * A.type() == 1 ? Slot::Orth : Slot::Symp) +
                     " and " + slot_name(sb * A.type() == 1 ? Slot::Orth : Slot::Symp) + ")");
    if (nrd(a) == 0 || nrd(b) == 0) domain_error("cup: entries must be invertible");
    BrauerClass QA = ramified_places(*A.quat);
    if (sa * A.type() == -1) return QA;
    Rational d = det_scalar(A);
    return symbol_to_brauer(-d * nrd(a), -nrd(a * b)) + QA;
}

std::pair<Rational, Rational> common_slot_witness(const AlgebraWithInvolution& A, const Quat& a, const Quat& b) {
    BrauerClass target = mixed_cup(A, a, b);
    const QuaternionAlgebra& Q = *A.quat;
    std::vector<std::pair<Rational, Rational>> cands{{Q.a, Q.b}};
    Quat z1 = a, z2 = b;
    if (A.inv.kind == InvolutionSpec::Kind::Inner) {
        z1 = A.inv.u * a;
        z2 = A.inv.u * b;
    }
    if (z1.is_pure() && z2.is_pure() && trd(z1 * z2) != 0) {
        Rational zz = trd(z1 * z1);
        for (int s = 1; s <= 3; ++s) {
            Quat e = Quat::basis(Q, s);
            Quat w = e - Rational(trd(e * z1) / zz) * z1;
            if (nrd(w) != 0) {
                cands.emplace_back((z1 * z1).w, (z2 * z2).w * (w * w).w);
                break;
            }
        }
    }
    cands.emplace_back(1, 1);
    for (auto& c : cands)
        if (symbol_to_brauer(c.first, c.second) == target) return c;
    for (long u = -60; u <= 60; ++u)
        for (long v = -60; v <= 60; ++v)
            if (u && v && symbol_to_brauer(u, v) == target) return {u, v};
    internal_error("cup: no common-slot representation found in the search box");
}

SplitImage split_filtration_iso(const MixedWElement& x, int n) {
    if (!x.ambient.is_base()) domain_error("split iso: needs the base ambient");
    if (!x.symp.empty()) domain_error("split iso: base elements carry no alternating part");
    if (!filtration_membership(x, n, false).member)
        domain_error("split iso: element is not in I^" + std::to_string(n) + "(K, Id)");
    QuadraticForm q1;
    for (auto& e : x.orth) q1.entries.push_back(e.w);
    return SplitImage{anisotropic_part(qsum(x.c00, q1)), x.c00};
}

MixedWElement split_filtration_inverse(const SplitImage& s) {
    auto K = AlgebraWithInvolution::base();
    MixedWElement x{K, anisotropic_part(s.first), {}, {}};
    for (auto& a : anisotropic_part(qsum(s.sum, qneg(s.first))).entries) x.orth.push_back(element(K, a));
    return x;
}

}
