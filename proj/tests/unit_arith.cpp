#include "doctest.h"
#include "wittforge/arith.hpp"
#include "wittforge/error.hpp"

#include <random>

using namespace wf;

namespace {

// z^2 = a x^2 + b y^2 has a primitive solution modulo p^K; with square-free a,b this
// lifts once K = 3 (odd p) or K = 5 (p = 2)
int hilbert_oracle(long a, long b, long p) {
    long K = (p == 2) ? 5 : 3, M = 1;
    for (long i = 0; i < K; ++i) M *= p;
    std::vector<char> root(M, 0), unit_root(M, 0);
    for (long z = 0; z < M; ++z) {
        long v = z * z % M;
        root[v] = 1;
        if (z % p) unit_root[v] = 1;
    }
    auto md = [&](long v) { return ((v % M) + M) % M; };
    for (long x = 0; x < M; ++x)
        for (long y = 0; y < M; ++y) {
            long v = md(md(a) * (x * x % M) + md(b) * (y * y % M));
            bool prim = (x % p) || (y % p);
            if (prim ? root[v] : unit_root[v]) return 1;
        }
    return -1;
}

long squarefree(std::mt19937_64& g) {
    for (;;) {
        long v = (long)(g() % 61) - 30;
        if (v == 0) continue;
        bool ok = true;
        for (long p = 2; p * p <= std::labs(v); ++p)
            if (std::labs(v) % (p * p) == 0) ok = false;
        if (ok) return v;
    }
}

}

TEST_CASE("factor") {
    CHECK(factor(12) == Factorization{{2, 2}, {3, 1}});
    CHECK(factor(1).empty());
    CHECK(factor(9991) == Factorization{{97, 1}, {103, 1}});
    CHECK(factor(-50) == Factorization{{2, 1}, {5, 2}});
    Integer big("18446744030759878681");  // 4294967291^2
    CHECK(factor(big) == Factorization{{Integer("4294967291"), 2}});
    Integer semi = Integer("1000000007") * Integer("998244353");
    CHECK(factor(semi).size() == 2);
    CHECK_THROWS_AS(factor(0), Error);
    Integer p1("340282366920938463463374607431768211507"), p2("170141183460469231731687303715884105727");
    CHECK(factor(3 * p1 * p1) == Factorization{{3, 1}, {p1, 2}});
    CHECK(factor(Integer("1000000000000000000117") * 1000003).size() == 2);
    CHECK_THROWS_AS(factor(p1 * p2), Error);
}

TEST_CASE("square classes") {
    CHECK(square_class(8).rep == 2);
    CHECK(square_class(parse_rational("-18/4")).rep == -2);
    CHECK(square_class(1).rep == 1);
    CHECK(square_class(parse_rational("75/8")).rep == 6);
    CHECK_THROWS_AS(square_class(0), Error);
    std::mt19937_64 g(7);
    for (int i = 0; i < 200; ++i) {
        Rational q(long(g() % 50) + 1, long(g() % 50) + 1), r(long(g() % 99) - 49, long(g() % 30) + 1);
        if (r == 0) continue;
        q.canonicalize();
        r.canonicalize();
        CHECK(square_class(q * q * r) == square_class(r));
    }
}

TEST_CASE("legendre") {
    CHECK(legendre(2, 7) == 1);
    CHECK(legendre(3, 7) == -1);
    CHECK(legendre(14, 7) == 0);
    CHECK(legendre(1, 101) == 1);
    CHECK_THROWS_AS(legendre(3, 9), Error);
    CHECK_THROWS_AS(legendre(3, 2), Error);
    for (long a = -20; a < 20; ++a)
        for (long b = -20; b < 20; ++b)
            CHECK(legendre(a, 13) * legendre(b, 13) == legendre(a * b, 13));
}

TEST_CASE("hilbert symbol closed formula against the local solvability oracle") {
    CHECK(hilbert_symbol(-1, -1, Place::infinity()) == -1);
    CHECK(hilbert_symbol(2, 5, Place::prime(5)) == -1);
    CHECK(hilbert_symbol(1, 7, Place::prime(2)) == 1);
    CHECK_THROWS_AS(hilbert_symbol(0, 3, Place::prime(3)), Error);
    for (long p : {2L, 3L, 5L, 7L})
        for (long a : {-15L, -10L, -7L, -6L, -5L, -3L, -2L, -1L, 1L, 2L, 3L, 5L, 6L, 7L, 10L, 14L, 15L})
            for (long b : {-14L, -5L, -3L, -2L, -1L, 2L, 3L, 5L, 7L, 15L}) {
                INFO("(" << a << "," << b << ")_" << p);
                CHECK(hilbert_symbol(a, b, Place::prime(p)) == hilbert_oracle(a, b, p));
            }
}

TEST_CASE("hilbert symbol algebra") {
    std::mt19937_64 g(11);
    for (int t = 0; t < 300; ++t) {
        long a = squarefree(g), b = squarefree(g), c = squarefree(g);
        for (Place v : {Place::infinity(), Place::prime(2), Place::prime(3), Place::prime(5), Place::prime(7)}) {
            CHECK(hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v));
            CHECK(hilbert_symbol(a, -a, v) == 1);
            CHECK(hilbert_symbol(a, b * c, v) == hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v));
        }
    }
}
