#pragma once
#include <gmpxx.h>
#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace wf {

using Integer = mpz_class;
using Rational = mpq_class;

Rational rat(long n, long d = 1);
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);
int sign(const Rational& q);

// p == 0 encodes the real place
struct Place {
    std::uint64_t p = 0;
    static Place infinity() { return Place{0}; }
    static Place prime(std::uint64_t q) { return Place{q}; }
    bool is_infinite() const { return p == 0; }
    bool operator==(const Place& o) const { return p == o.p; }
    std::strong_ordering operator<=>(const Place& o) const {
        if (p == o.p) return std::strong_ordering::equal;
        if (p == 0) return std::strong_ordering::greater;
        if (o.p == 0) return std::strong_ordering::less;
        return p <=> o.p;
    }
};
std::string to_string(const Place& v);

using Factorization = std::vector<std::pair<Integer, unsigned>>;

Factorization factor(const Integer& n);
bool is_prime(const Integer& n);

struct SquareClass {
    Integer rep;
    bool operator==(const SquareClass& o) const { return rep == o.rep; }
    bool operator<(const SquareClass& o) const { return rep < o.rep; }
    bool is_trivial() const { return rep == 1; }
};

SquareClass square_class(const Rational& q);
// square-free representative of a product of two square-free integers
Integer sqf_mul(const Integer& a, const Integer& b);
bool is_square(const Rational& q);
std::vector<std::uint64_t> prime_divisors(const Integer& n);

int legendre(const Integer& a, const Integer& p);
int hilbert_symbol(const Rational& a, const Rational& b, Place v);
// both arguments already square-free integers
int hilbert_sf(const Integer& a, const Integer& b, Place v);
bool is_local_square(const Rational& q, Place v);
bool is_local_square_sf(const Integer& a, Place v);

}
