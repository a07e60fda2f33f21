#include "doctest.h"
#include "wittforge/error.hpp"
#include "wittforge/signatures.hpp"

#include <random>

using namespace wf;

namespace {
Rational rnd_nz(std::mt19937_64& g, int bound) {
    for (;;) {
        long v = (long)(g() % (2 * bound + 1)) - bound;
        if (v) return Rational(v);
    }
}
Quat random_entry(std::mt19937_64& g, const AlgebraWithInvolution& A, int eps) {
    auto [sym, skew] = sym_skew(A);
    const auto& basis = eps == 1 ? sym : skew;
    for (;;) {
        Quat e(A.algebra());
        for (auto& b : basis) e = e + Rational((long)(g() % 7) - 3) * b;
        if (reduced_norm(A, e) != 0) return e;
    }
}
AlgebraWithInvolution random_ambient(std::mt19937_64& g) {
    QuaternionAlgebra Q(rnd_nz(g, 5), rnd_nz(g, 5));
    if (g() % 2) return AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    for (;;) {
        Quat u(Q, 0, (long)(g() % 7) - 3, (long)(g() % 7) - 3, (long)(g() % 7) - 3);
        if (nrd(u) != 0) return AlgebraWithInvolution::quaternion(Q, InvolutionSpec::inner(u));
    }
}
MixedWElement random_w(std::mt19937_64& g, const AlgebraWithInvolution& A) {
    MixedGWElement x = from_form(A, QuadraticForm(std::vector<Rational>{rnd_nz(g, 5)}));
    for (int eps : {1, -1})
        if (g() % 2) x = x + from_herm(HermForm(A, eps, {random_entry(g, A, eps)}));
    return to_witt(x);
}
}

TEST_CASE("ordering type") {
    CHECK(ordering_type(QuaternionAlgebra(-1, -1)) == OrderingType::Symplectic);
    CHECK(ordering_type(QuaternionAlgebra(1, 1)) == OrderingType::Orthogonal);
    CHECK(ordering_type(QuaternionAlgebra(-1, 3)) == OrderingType::Orthogonal);
}

TEST_CASE("worked signatures") {
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    auto p = signature_pair(to_witt(from_herm(HermForm(A, 1, {Quat(H, 1)}))));
    CHECK(p.plus == 2);
    CHECK(p.minus == -2);
    auto z = signature_pair(to_witt(from_herm(HermForm(A, -1, {Quat::basis(H, 1)}))));
    CHECK(z.plus == 0);
    CHECK(z.minus == 0);
    QuaternionAlgebra M(1, 1);
    auto S = AlgebraWithInvolution::quaternion(M, InvolutionSpec::canonical());
    auto k = signature_pair(to_witt(from_herm(HermForm(S, -1, {Quat::basis(M, 3)}))));
    CHECK(std::labs(k.plus) == 2);
    CHECK(k.minus == -k.plus);
    CHECK(signature_of_involution(A) == 2);
    CHECK(signature_of_involution(S) == 0);
    CHECK(signature_of_involution(AlgebraWithInvolution::base()) == 1);
    auto e = signature_pair(to_witt(from_form(A, QuadraticForm{1, 1, -3, 2})));
    CHECK(e.plus == 2);
    CHECK(e.minus == 2);
}

TEST_CASE("signatures are ring morphisms") {
    std::mt19937_64 g(12);
    for (int it = 0; it < 60; ++it) {
        auto A = random_ambient(g);
        auto x = random_w(g, A), y = random_w(g, A);
        auto px = signature_pair(x), py = signature_pair(y), pxy = signature_pair(x * y), ps = signature_pair(x + y);
        CAPTURE(to_string(A));
        CHECK(pxy.plus == px.plus * py.plus);
        CHECK(pxy.minus == px.minus * py.minus);
        CHECK(ps.plus == px.plus + py.plus);
        // squares of involution signatures
        long s = signature_of_involution(A);
        QuadraticForm t = herm_product(HermForm(A, 1, {element(A, 1)}), HermForm(A, 1, {element(A, 1)}));
        CHECK(s * s == invariants(t).signature);
    }
}

TEST_CASE("reference independence and uniqueness") {
    std::mt19937_64 g(14);
    for (int it = 0; it < 20; ++it) {
        auto A = random_ambient(g);
        int t = active_type(A);
        auto G = AlgebraWithInvolution::quaternion(*A.quat, InvolutionSpec::canonical());
        int eps = t * G.type();
        HermForm alt(G, eps, {random_entry(g, G, eps)});
        if (invariants(herm_product(alt, alt)).signature == 0) continue;
        auto x = random_w(g, A);
        auto p0 = signature_pair(x), p1 = signature_pair(x, alt);
        CHECK(((p0.plus == p1.plus && p0.minus == p1.minus) || (p0.plus == p1.minus && p0.minus == p1.plus)));

        std::vector<MixedWElement> gens;
        for (int k = 0; k < 4; ++k) {
            int e = g() % 2 ? 1 : -1;
            gens.push_back(to_witt(from_herm(HermForm(A, e, {random_entry(g, A, e)}))));
        }
        auto sols = signature_morphisms(gens);
        CHECK(sols.size() <= 2);
        CHECK(!sols.empty());
        for (auto& s : sols) {
            bool is_plus = true, is_minus = true;
            for (std::size_t i = 0; i < gens.size(); ++i) {
                is_plus = is_plus && s[i] == signature_pair(gens[i]).plus - invariants(gens[i].c00).signature;
                is_minus = is_minus && s[i] == signature_pair(gens[i]).minus - invariants(gens[i].c00).signature;
            }
            CHECK((is_plus || is_minus));
        }
    }
}
