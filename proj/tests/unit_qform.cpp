#include "doctest.h"
#include "wittforge/error.hpp"
#include "wittforge/qform.hpp"

#include <random>

using namespace wf;

namespace {
QuadraticForm Q(std::initializer_list<long> e) { return QuadraticForm(e); }
PlaceSet places(std::initializer_list<long> ps) {
    PlaceSet s;
    for (long p : ps) s.insert(p == 0 ? Place::infinity() : Place::prime(p));
    return s;
}
QuadraticForm random_form(std::mt19937_64& g, int n, int bound) {
    QuadraticForm q;
    while ((int)q.dim() < n) {
        long v = (long)(g() % (2 * bound + 1)) - bound;
        if (v) q.entries.emplace_back(v);
    }
    return q;
}
}

TEST_CASE("diagonalize") {
    CHECK(diagonalize({{1, 0}, {0, 1}}).entries == Q({1, 1}).entries);
    CHECK(diagonalize({{0, 1}, {1, 0}}).entries == Q({2, -2}).entries);
    auto d = diagonalize({{2, 1}, {1, 2}});
    CHECK(d.entries == std::vector<Rational>{2, parse_rational("3/2")});
    CHECK_THROWS_AS(diagonalize({{1, 2}, {3, 1}}), Error);
    try {
        diagonalize({{1, 1, 0}, {1, 1, 0}, {0, 0, 0}});
        CHECK(false);
    } catch (const RankError& e) {
        CHECK(e.radical_dim == 2);
    }
    // determinant is preserved up to squares (here exactly, as the change of basis is unimodular)
    std::mt19937_64 g(3);
    for (int t = 0; t < 100; ++t) {
        int n = 1 + g() % 5;
        RatMatrix m(n, std::vector<Rational>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) m[i][j] = m[j][i] = (long)(g() % 7) - 3;
        try {
            auto q = diagonalize(m);
            CHECK(q.dim() == (size_t)n);
        } catch (const RankError&) {
        }
    }
}

TEST_CASE("invariants") {
    auto h = invariants(Q({1, -1}));
    CHECK(h.dim == 2);
    CHECK(h.signature == 0);
    CHECK(h.disc.rep == 1);
    CHECK(h.hasse.empty());
    auto o = invariants(Q({1, 1}));
    CHECK(o.signature == 2);
    CHECK(o.disc.rep == -1);
    CHECK(o.hasse.empty());
    auto p = invariants(Q({1, -2, -3, 6}));
    CHECK(p.disc.rep == 1);
    CHECK(p.hasse == places({2, 3}));
    CHECK(invariants(pfister({-1, -1})).hasse == places({2, 0}));
}

TEST_CASE("combine and pfister") {
    CHECK(combine(CombineOp::Sum, Q({1}), Q({-1})).entries == Q({1, -1}).entries);
    CHECK(combine(CombineOp::Tensor, Q({1, -2}), Q({1, -3})).entries == Q({1, -3, -2, 6}).entries);
    CHECK(combine(CombineOp::Scale, Q({1, 3}), {}, 2).entries == Q({2, 6}).entries);
    CHECK(pfister({2, 3}).entries == Q({1, -3, -2, 6}).entries);
    CHECK(witt_trivial(pfister({1})));
    std::mt19937_64 g(5);
    for (int t = 0; t < 50; ++t) {
        long a = (long)(g() % 41) - 20, b = (long)(g() % 41) - 20;
        if (!a || !b) continue;
        PlaceSet s;
        for (auto v : {Place::infinity(), Place::prime(2), Place::prime(3), Place::prime(5), Place::prime(7),
                       Place::prime(11), Place::prime(13), Place::prime(17), Place::prime(19)})
            if (hilbert_symbol(a, b, v) == -1) s.insert(v);
        CHECK(invariants(pfister({a, b})).hasse == s);
    }
}

TEST_CASE("Clifford invariant is a Witt invariant and additive on I2") {
    std::mt19937_64 g(17);
    for (int t = 0; t < 150; ++t) {
        auto q = random_form(g, 1 + g() % 5, 12);
        auto a = invariants(q), b = invariants(qsum(q, Q({3, -3})));
        CHECK(a.hasse == b.hasse);
        CHECK(a.disc == b.disc);
        // product formula
        CHECK(a.hasse.size() % 2 == 0);
        auto x = pfister({(long)(g() % 9) + 1, -(long)(g() % 9) - 1});
        auto y = pfister({(long)(g() % 19) - 9 ?: 1, (long)(g() % 7) + 1});
        PlaceSet s;
        auto sx = invariants(x).hasse, sy = invariants(y).hasse;
        std::set_symmetric_difference(sx.begin(), sx.end(), sy.begin(), sy.end(), std::inserter(s, s.end()));
        CHECK(invariants(qsum(x, y)).hasse == s);
    }
}

TEST_CASE("isotropy: three routes agree") {
    CHECK(is_isotropic(Q({1, -1})));
    CHECK_FALSE(is_isotropic(Q({1, 1, 1})));
    CHECK(is_isotropic(Q({1, 1, 1, 1, -7})));
    CHECK_FALSE(is_isotropic(Q({1, 1, 1, -7})));
    std::mt19937_64 g(23);
    for (int t = 0; t < 400; ++t) {
        auto q = random_form(g, 2 + g() % 4, 15);
        bool a = is_isotropic(q);
        CHECK(a == is_isotropic_closed(q));
        CHECK(a == (anisotropic_dimension(q) < (int)q.dim()));
        CHECK(isotropic_2adic_search(q) == is_isotropic_at(q, Place::prime(2)));
    }
    for (int t = 0; t < 300; ++t) {
        auto q = random_form(g, 2 + g() % 3, 40);
        CHECK(isotropic_2adic_search(q) == is_isotropic_closed_at(q, Place::prime(2)));
    }
}

TEST_CASE("witt_equal and anisotropic part") {
    CHECK(witt_equal(Q({2, -2}), Q({1, -1})));
    CHECK(witt_equal(Q({2, 2}), Q({1, 1})));
    CHECK_FALSE(witt_equal(pfister({2, 3}), {}));
    CHECK(anisotropic_part(Q({1, -1, 3})).entries == Q({3}).entries);
    CHECK(anisotropic_part(Q({2, 2, -1, -1})).empty());
    CHECK(anisotropic_part(Q({1, 1, 1, 1})).entries == Q({1, 1, 1, 1}).entries);
    std::mt19937_64 g(29);
    for (int t = 0; t < 300; ++t) {
        auto q = random_form(g, 1 + g() % 7, 30);
        auto a = anisotropic_part(q);
        CHECK(witt_equal(a, q));
        CHECK_FALSE(is_isotropic(a));
        CHECK((q.dim() - a.dim()) % 2 == 0);
        CHECK(witt_equal(q, qsum(a, hyperbolic((q.dim() - a.dim()) / 2))));
    }
}

TEST_CASE("trace transfer") {
    CHECK(witt_trivial(trace_transfer_quadratic(2, 0, 1)));
    CHECK(witt_equal(trace_transfer_quadratic(2, 1, 0), Q({2, 1})));
    CHECK(witt_equal(trace_transfer_quadratic(2, 1, 1), Q({2, -1})));
    CHECK(trace_transfer_gram(2, 1, 1).entries == Q({2, -4}).entries);
    CHECK_THROWS_AS(trace_transfer_quadratic(4, 1, 1), Error);
    CHECK_THROWS_AS(trace_transfer_quadratic(3, 0, 0), Error);
    std::mt19937_64 g(31);
    for (int t = 0; t < 200; ++t) {
        Rational d = (long)(g() % 21) - 10, a0 = (long)(g() % 11) - 5, a1 = (long)(g() % 11) - 5;
        if (d == 0 || is_square(d) || (a0 == 0 && a1 == 0)) continue;
        CHECK(witt_equal(trace_transfer_quadratic(d, a0, a1), trace_transfer_gram(d, a0, a1)));
    }
}

TEST_CASE("fundamental filtration") {
    CHECK(in_In(pfister({2, 3}), 2));
    CHECK_FALSE(in_In(Q({1, 1}), 2));
    CHECK(in_In(pfister({-1, -1, -1}), 3));
    CHECK_FALSE(in_In(pfister({-1, -1}), 3));
    CHECK(in_In(Q({5}), 0));
    CHECK_THROWS_AS(in_In(Q({1}), 4), Error);
}

TEST_CASE("GW classes") {
    auto x = gw_of(Q({1, -1, 2}));
    CHECK(x.virtual_dim == 3);
    CHECK(x.witt.dim() == 1);
    auto y = gw_mul(x, gw_of(Q({1, 1})));
    CHECK(y.virtual_dim == 6);
    CHECK(gw_equal(gw_add(x, gw_neg(x)), GWClass{}));
    CHECK(gw_equal(gw_of(Q({2, 2})), gw_of(Q({1, 1}))));
    CHECK_FALSE(gw_equal(gw_of(Q({1, -1})), GWClass{}));
}
