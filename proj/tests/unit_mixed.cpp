#include "doctest.h"
#include "wittforge/error.hpp"
#include "wittforge/mixed.hpp"

#include <random>

using namespace wf;

namespace {
Rational rnd(std::mt19937_64& g, int bound) { return Rational((long)(g() % (2 * bound + 1)) - bound); }
Rational rnd_nz(std::mt19937_64& g, int bound) {
    for (;;) {
        Rational r = rnd(g, bound);
        if (r != 0) return r;
    }
}
QuaternionAlgebra random_alg(std::mt19937_64& g) { return QuaternionAlgebra(rnd_nz(g, 6), rnd_nz(g, 6)); }
Quat random_pure(std::mt19937_64& g, const QuaternionAlgebra& Q) {
    for (;;) {
        Quat z(Q, 0, rnd(g, 3), rnd(g, 3), rnd(g, 3));
        if (nrd(z) != 0) return z;
    }
}
AlgebraWithInvolution random_ambient(std::mt19937_64& g) {
    if (g() % 5 == 0) return AlgebraWithInvolution::base();
    auto Q = random_alg(g);
    if (g() % 2) return AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    return AlgebraWithInvolution::quaternion(Q, InvolutionSpec::inner(random_pure(g, Q)));
}
// random invertible element of sign eps, or nullopt when none exists
std::optional<Quat> random_entry(std::mt19937_64& g, const AlgebraWithInvolution& A, int eps) {
    auto [sym, skew] = sym_skew(A);
    const auto& basis = eps == 1 ? sym : skew;
    if (basis.empty()) return std::nullopt;
    for (int tries = 0; tries < 50; ++tries) {
        Quat e(A.algebra());
        for (auto& b : basis) e = e + rnd(g, 3) * b;
        if (reduced_norm(A, e) != 0) return e;
    }
    return std::nullopt;
}
MixedGWElement random_element(std::mt19937_64& g, const AlgebraWithInvolution& A) {
    MixedGWElement x = mixed_zero(A);
    int n = 1 + (int)(g() % 2);
    QuadraticForm q;
    for (int i = 0; i < n; ++i) q.entries.push_back(rnd_nz(g, 5));
    x = x + from_form(A, q);
    if (g() % 3 == 0) x = x + skew_planes(A, 1);
    for (int eps : {1, -1}) {
        if (g() % 2) continue;
        if (auto e = random_entry(g, A, eps)) x = x + from_herm(HermForm(A, eps, {*e}));
        else if (g() % 2) x = x + odd_hyperbolic(A, A.type() * eps);
    }
    if (g() % 4 == 0) x = mixed_neg(x);
    return x;
}
}

TEST_CASE("trace forms on the Hamilton quaternions") {
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    Quat one(H, 1), i = Quat::basis(H, 1), j = Quat::basis(H, 2);
    CHECK(witt_equal(trace_form_gram(A, one, one), QuadraticForm{2, 2, 2, 2}));
    CHECK(invariants(trace_form_gram(A, one, one)).signature == 4);
    QuadraticForm ij = trace_form_gram(A, i, j);
    CHECK(ij.dim() == 4);
    CHECK(witt_trivial(ij));
    QuaternionAlgebra Q(-1, -3);
    auto B = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    CHECK(witt_equal(trace_form_gram(B, Quat(Q, 1), Quat(Q, 1)), QuadraticForm{2, 2, 6, 6}));
    CHECK_THROWS_AS(trace_form_gram(A, one, i), Error);
    CHECK_THROWS_AS(trace_form_gram(A, one + i, one), Error);
}

TEST_CASE("closed forms agree with the Gram computation") {
    std::mt19937_64 g(11);
    for (int it = 0; it < 60; ++it) {
        auto Q = random_alg(g);
        auto A = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
        Rational a = rnd_nz(g, 5), b = rnd_nz(g, 5);
        CHECK(witt_equal(quaternion_closed_form_scalar(Q, a, b), trace_form_gram(A, Quat(Q, a), Quat(Q, b))));
        Quat z1 = random_pure(g, Q), z2 = random_pure(g, Q);
        QuadraticForm gram = trace_form_gram(A, z1, z2);
        QuadraticForm closed = quaternion_closed_form_pure(z1, z2);
        CHECK(closed.dim() == 4);
        CHECK(witt_equal(closed, gram));
        CHECK(witt_equal(closed, quaternion_closed_form_pure(z2, z1)));
    }
}

TEST_CASE("hermitian forms validate their entries") {
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    CHECK_THROWS_AS(HermForm(A, 1, {Quat::basis(H, 1)}), Error);
    CHECK_THROWS_AS(HermForm(A, -1, {Quat(H, 2)}), Error);
    CHECK_THROWS_AS(HermForm(AlgebraWithInvolution::base(), -1, {Quat(H, 1)}), Error);
    QuaternionAlgebra M(1, 1);
    auto S = AlgebraWithInvolution::quaternion(M, InvolutionSpec::canonical());
    CHECK_THROWS_AS(HermForm(S, 1, {Quat(M, 0, 1)}), Error);
    HermForm h(A, -1, {Quat::basis(H, 1)});
    CHECK(h.type() == 1);
    CHECK(HermForm(A, 1, {Quat(H, 3)}).type() == -1);
}

TEST_CASE("slot grading is Z/2 x Z/2") {
    CHECK(slot_product(Slot::Orth, Slot::Symp) == Slot::EvenSkew);
    CHECK(slot_product(Slot::Orth, Slot::Orth) == Slot::Even);
    CHECK(slot_product(Slot::EvenSkew, Slot::Orth) == Slot::Symp);
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    auto i = from_herm(HermForm(A, -1, {Quat::basis(H, 1)}));
    auto one = from_herm(HermForm(A, 1, {Quat(H, 1)}));
    CHECK(i.slot() == Slot::Orth);
    CHECK(one.slot() == Slot::Symp);
    CHECK((i * one).slot() == Slot::EvenSkew);
    CHECK((i * one).c01 == 2);
    CHECK_FALSE((i + one).is_homogeneous());
}

TEST_CASE("ring axioms on random elements") {
    std::mt19937_64 g(5);
    for (int it = 0; it < 40; ++it) {
        auto A = random_ambient(g);
        auto x = random_element(g, A), y = random_element(g, A), z = random_element(g, A);
        CAPTURE(to_string(A));
        CHECK(holds(mixed_equal((x * y) * z, x * (y * z))));
        CHECK(holds(mixed_equal(x * y, y * x)));
        CHECK(holds(mixed_equal(x * (y + z), x * y + x * z)));
        CHECK(holds(mixed_equal(x * mixed_one(A), x)));
        CHECK(mixed_equal(x - x, mixed_zero(A)) == Verdict::Equal);
        auto r = rdim_maps(x * y), rx = rdim_maps(x), ry = rdim_maps(y);
        CHECK(r.total == rx.total * ry.total);
    }
}

TEST_CASE("transfer to the canonical involution is a ring morphism") {
    std::mt19937_64 g(17);
    for (int it = 0; it < 40; ++it) {
        auto Q = random_alg(g);
        auto A = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::inner(random_pure(g, Q)));
        auto x = random_element(g, A), y = random_element(g, A);
        auto lhs = to_canonical(x * y);
        auto rhs = to_canonical(x) * to_canonical(y);
        CAPTURE(to_string(A));
        CHECK(holds(mixed_equal(lhs, rhs)));
        CHECK(holds(mixed_equal(to_canonical(x + y), to_canonical(x) + to_canonical(y))));
        CHECK(rdim_maps(to_canonical(x)).total == rdim_maps(x).total);
    }
}

TEST_CASE("split Morita image of skew-hermitian forms") {
    std::mt19937_64 g(23);
    for (int it = 0; it < 40; ++it) {
        QuaternionAlgebra Q(1, rnd_nz(g, 7));
        auto A = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
        Quat z1 = random_pure(g, Q), z2 = random_pure(g, Q);
        QuadraticForm img = qtensor(split_skew_image({z1}), split_skew_image({z2}));
        CHECK(witt_equal(qscale(2, img), trace_form_gram(A, z1, z2)));
        CHECK(split_skew_image({z1}).dim() == 2);
        CHECK(witt_trivial(split_skew_image({z1, -z1})));
    }
}

TEST_CASE("Jacobson trace form detects hermitian Witt classes") {
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    CHECK(witt_equal(jacobson_qh(HermForm(A, 1, {Quat(H, 1)})), QuadraticForm{1, 1, 1, 1}));
    CHECK(odd_witt_equal(A, -1, {Quat(H, 1)}, {Quat(H, 2)}) == Verdict::Equal);
    CHECK(odd_witt_equal(A, -1, {Quat(H, 1)}, {Quat(H, -1)}) == Verdict::Unequal);
    CHECK(odd_witt_equal(A, -1, {Quat(H, 1), Quat(H, -3)}, {}) == Verdict::Equal);
    QuaternionAlgebra Q(-1, 3);
    auto B = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    CHECK(odd_witt_equal(B, -1, {Quat(Q, 1)}, {Quat(Q, 3)}) == Verdict::Equal);
    // Q is indefinite, so the image of every even-rank form is hyperbolic
    CHECK(odd_witt_equal(B, -1, {Quat(Q, 1)}, {Quat(Q, -7)}) == Verdict::Equal);
    QuaternionAlgebra D(-1, -3);
    auto C = AlgebraWithInvolution::quaternion(D, InvolutionSpec::canonical());
    CHECK(odd_witt_equal(C, -1, {Quat(D, 1)}, {Quat(D, 5)}) == Verdict::Equal);
    CHECK(odd_witt_equal(C, -1, {Quat(D, 1)}, {Quat(D, -1)}) == Verdict::Unequal);
}

TEST_CASE("equality over split and division algebras") {
    QuaternionAlgebra M(1, 1);
    auto S = AlgebraWithInvolution::quaternion(M, InvolutionSpec::canonical());
    auto h = from_herm(HermForm(S, 1, {Quat(M, 3)}));
    CHECK(h.symp.entries.empty());
    CHECK(mixed_equal(h, odd_hyperbolic(S, -1, 0) + h) == Verdict::Equal);
    Quat i = Quat::basis(M, 1), j = Quat::basis(M, 2);
    // j^2 is a square, so <j> is hyperbolic
    CHECK(odd_witt_equal(S, 1, {j}, {-j}) == Verdict::Equal);
    CHECK(odd_witt_equal(S, 1, {i + j}, {}) == Verdict::Unequal);
    CHECK(odd_witt_equal(S, 1, {i, -i}, {}) == Verdict::Equal);

    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    Quat hi = Quat::basis(H, 1), hj = Quat::basis(H, 2);
    CHECK(odd_witt_equal(A, 1, {hi}, {hj}) != Verdict::Unequal);
    CHECK(odd_witt_equal(A, 1, {hi}, {hi, hj, -hj}) == Verdict::Equal);
    CHECK(holds(odd_witt_equal(A, 1, {hi, hj}, {})));
    CHECK(odd_witt_equal(A, 1, {hi}, {}) == Verdict::Unequal);
    CHECK(holds(odd_witt_equal(A, 1, {hi, hi}, {})));
}

TEST_CASE("reduced dimension maps") {
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    auto x = from_form(A, QuadraticForm{1, 2}) + skew_planes(A, 1) + odd_hyperbolic(A, 1) +
             from_herm(HermForm(A, 1, {Quat(H, 1)}));
    auto r = rdim_maps(x);
    CHECK(r.graded[0] == 2);
    CHECK(r.graded[1] == 2);
    CHECK(r.graded[2] == 4);
    CHECK(r.graded[3] == 2);
    CHECK(r.total == 10);
    CHECK(r.mod2[3] == 0);
    auto b = odd_hyperbolic(AlgebraWithInvolution::base(), -1);
    CHECK(rdim_maps(b).graded[3] == 2);
}

TEST_CASE("filtration membership") {
    auto K = AlgebraWithInvolution::base();
    MixedWElement x{K, QuadraticForm{1, 1}, {Quat(QuaternionAlgebra(), 1), Quat(QuaternionAlgebra(), -2)}, {}};
    CHECK(filtration_membership(x, 1).member);
    CHECK_FALSE(filtration_membership(x, 2).member);
    CHECK_THROWS_AS(filtration_membership(x, 4), Error);
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    MixedWElement y{A, QuadraticForm{}, {}, {Quat(H, 1)}};
    CHECK(filtration_membership(y, 1).member);
    auto r2 = filtration_membership(y, 2);
    CHECK_FALSE(r2.member);
    CHECK(r2.exact);
    MixedWElement z{A, QuadraticForm{}, {}, {Quat(H, 1), Quat(H, 1)}};
    CHECK(filtration_membership(z, 2).member);
}

TEST_CASE("worked equality examples") {
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    auto one = from_herm(HermForm(A, 1, {Quat(H, 1)}));
    auto two = from_herm(HermForm(A, 1, {Quat(H, 2)}));
    CHECK(mixed_equal(one, two) == Verdict::Equal);
    auto hyp = from_herm(HermForm(A, 1, {Quat(H, 1), Quat(H, -1)}));
    CHECK(mixed_equal(to_witt(hyp), to_witt(mixed_zero(A))) == Verdict::Equal);
    CHECK(mixed_equal(hyp, mixed_zero(A)) == Verdict::Unequal);
    CHECK(mixed_equal(hyp, odd_hyperbolic(A, -1)) == Verdict::Equal);

    QuaternionAlgebra Q(-1, -3);
    auto B = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    CHECK(odd_witt_equal(B, 1, {Quat::basis(Q, 1)}, {Quat::basis(Q, 2)}) == Verdict::Unequal);

    auto sq = one * one;
    CHECK(witt_equal(sq.c00.witt, QuadraticForm{2, 2, 2, 2}));
    CHECK(sq.orth.empty());
    CHECK(sq.symp.empty());
    auto i = from_herm(HermForm(A, -1, {Quat::basis(H, 1)}));
    auto ii = i * i;
    CHECK(ii.c00.virtual_dim == 4);
    CHECK(ii.c00.witt.empty());
    auto scaled = from_form(A, QuadraticForm{3}) * one;
    CHECK(mixed_equal(scaled, from_herm(HermForm(A, 1, {Quat(H, 3)}))) == Verdict::Equal);
}

TEST_CASE("base ambient is the group ring") {
    std::mt19937_64 g(31);
    auto K = AlgebraWithInvolution::base();
    for (int it = 0; it < 30; ++it) {
        QuadraticForm p(std::vector<Rational>{rnd_nz(g, 9), rnd_nz(g, 9)}), q(std::vector<Rational>{rnd_nz(g, 9)});
        MixedGWElement x = mixed_zero(K), y = mixed_zero(K);
        x.orth = OddPart{2, {element(K, p.entries[0]), element(K, p.entries[1])}};
        y.orth = OddPart{1, {element(K, q.entries[0])}};
        auto xy = x * y;
        CHECK(gw_equal(xy.c00, gw_of(qtensor(p, q))));
        CHECK(xy.orth.empty());
        auto hyp = from_form(K, QuadraticForm{1, -1}) * x;
        CHECK(to_witt(hyp).orth.empty());
    }
}
