#include "doctest.h"
#include "wittforge/cohomology.hpp"
#include "wittforge/error.hpp"

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
BrauerClass places(std::initializer_list<Place> p) { return BrauerClass{PlaceSet(p)}; }
}

TEST_CASE("symbols and e2") {
    CHECK(symbol_to_brauer(-1, -1) == places({Place::prime(2), Place::infinity()}));
    CHECK(symbol_to_brauer(1, 7) == BrauerClass{});
    CHECK(symbol_to_brauer(2, 3) == places({Place::prime(2), Place::prime(3)}));
    CHECK(e2(pfister({2, 3})) == places({Place::prime(2), Place::prime(3)}));
    CHECK(e2(hyperbolic(3)) == BrauerClass{});
    QuaternionAlgebra Q(-3, 5);
    CHECK(e2(norm_form(Q)) == ramified_places(Q));
    CHECK_THROWS_AS(e2(QuadraticForm{1, 1, 1}), Error);
    CHECK_THROWS_AS(symbol_to_brauer(0, 2), Error);
    std::mt19937_64 g(2);
    for (int it = 0; it < 50; ++it) {
        auto p = pfister({rnd_nz(g, 9), rnd_nz(g, 9)}), q = pfister({rnd_nz(g, 9), rnd_nz(g, 9)});
        CHECK(e2(qsum(p, qneg(q))) == e2(p) + e2(q));
        CHECK(e2(p).places.size() % 2 == 0);
    }
}

TEST_CASE("cup product formula") {
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    CHECK(mixed_cup(A, Quat(H, 2), Quat(H, 3)) == ramified_places(H));
    QuaternionAlgebra Q(-1, -3);
    auto B = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    CHECK(mixed_cup(B, Quat::basis(Q, 1), Quat::basis(Q, 2)) == BrauerClass{});
    CHECK_THROWS_AS(mixed_cup(A, Quat(H, 1), Quat::basis(H, 1)), Error);

    std::mt19937_64 g(21);
    for (int it = 0; it < 80; ++it) {
        QuaternionAlgebra R(rnd_nz(g, 6), rnd_nz(g, 6));
        AlgebraWithInvolution C = AlgebraWithInvolution::quaternion(R, InvolutionSpec::canonical());
        if (g() % 2)
            C = AlgebraWithInvolution::quaternion(R, InvolutionSpec::inner(random_entry(g, C, -1)));
        int eps = g() % 2 ? 1 : -1;
        Quat a = random_entry(g, C, eps), b = random_entry(g, C, eps);
        BrauerClass cup = mixed_cup(C, a, b);
        CAPTURE(to_string(C));
        CAPTURE(to_string(a));
        CAPTURE(to_string(b));
        CHECK(cup == e2(trace_form_gram(C, a, b)));
        CHECK(cup == mixed_cup(C, b, a));
        auto [u, v] = common_slot_witness(C, a, b);
        CHECK(symbol_to_brauer(u, v) == cup);
    }
}

TEST_CASE("split filtration isomorphism") {
    auto K = AlgebraWithInvolution::base();
    QuadraticForm q{1, -3};
    MixedWElement x{K, q, {element(K, -1), element(K, 3)}, {}};
    auto s = split_filtration_iso(x, 1);
    CHECK(witt_trivial(s.sum));
    CHECK(witt_equal(s.first, q));
    MixedWElement y{K, pfister({2, 3}), {}, {}};
    auto t = split_filtration_iso(y, 2);
    CHECK(witt_equal(t.sum, pfister({2, 3})));
    CHECK(witt_equal(t.first, pfister({2, 3})));
    MixedWElement bad{K, QuadraticForm{1}, {}, {}};
    CHECK_THROWS_AS(split_filtration_iso(bad, 1), Error);
    std::mt19937_64 g(6);
    for (int it = 0; it < 30; ++it) {
        // (a, b) with a, b in I and a + b in I^2
        QuadraticForm a(std::vector<Rational>{1, -rnd_nz(g, 7)});
        QuadraticForm b = qsum(qneg(a), pfister({rnd_nz(g, 7), rnd_nz(g, 7)}));
        MixedWElement z{K, a, {}, {}};
        for (auto& e : anisotropic_part(b).entries) z.orth.push_back(element(K, e));
        auto img = split_filtration_iso(z, 2);
        auto back = split_filtration_inverse(img);
        CHECK(mixed_equal(back, z) == Verdict::Equal);
    }
}
