#include "wittforge/arith.hpp"
#include "wittforge/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

namespace wf {

Rational rat(long n, long d) {
    if (d == 0) domain_error("rational with zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& s) {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) domain_error("malformed rational '" + s + "'");
    if (q.get_den() == 0) domain_error("rational with zero denominator");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }
int sign(const Rational& q) { return sgn(q); }

std::string to_string(const Place& v) { return v.is_infinite() ? "inf" : std::to_string(v.p); }

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

u64 rho(u64 n) {
    if (n % 2 == 0) return 2;
    std::mt19937_64 gen(n);
    for (;;) {
        u64 c = gen() % (n - 1) + 1;
        u64 x = gen() % n, y = x, d = 1;
        auto f = [&](u64 v) { return (u64)(((u128)mulmod(v, v, n) + c) % n); };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_u64(u64 n, std::map<u64, unsigned>& out) {
    if (n == 1) return;
    if (miller_rabin(n)) { out[n]++; return; }
    u64 d = rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

const std::vector<u64>& small_primes() {
    static const std::vector<u64> ps = [] {
        std::vector<u64> v;
        std::vector<bool> sieve(10000, true);
        for (u64 i = 2; i < 10000; ++i) {
            if (!sieve[i]) continue;
            v.push_back(i);
            for (u64 j = i * i; j < 10000; j += i) sieve[j] = false;
        }
        return v;
    }();
    return ps;
}

// Brent's variant on arbitrary precision; zero when no factor turns up within the budget
Integer rho_big(const Integer& n) {
    unsigned long budget = 1ul << 20;
    for (unsigned long c = 1; c < 8 && budget > 0; ++c) {
        Integer x = 2, y = 2, ys, q = 1, g = 1, t;
        unsigned long r = 1, iters = 0;
        auto f = [&](Integer& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        while (g == 1 && iters < budget) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) f(y);
            for (unsigned long k = 0; k < r && g == 1; k += 128) {
                ys = y;
                for (unsigned long i = 0; i < std::min(128ul, r - k); ++i) {
                    f(y);
                    t = abs(x - y);
                    q = q * t;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                    ++iters;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            r *= 2;
        }
        if (g == n) {
            do {
                f(ys);
                t = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
        budget -= std::min(budget, iters);
    }
    return 0;
}

bool fits_u64(const Integer& n) { return n >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

u64 to_u64(const Integer& n) {
    u64 r = 0;
    mpz_export(&r, nullptr, -1, sizeof(u64), 0, 0, n.get_mpz_t());
    return r;
}

}

Factorization factor(const Integer& n0) {
    if (n0 == 0) domain_error("factor: zero input");
    thread_local std::unordered_map<std::string, Factorization> cache;
    std::string key = n0.get_str(16);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    Integer n = abs(n0);
    std::map<u64, unsigned> fac;
    for (u64 p : small_primes()) {
        if (n == 1) break;
        if ((Integer)p * p > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            fac[p]++;
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
    }
    std::map<Integer, unsigned> big;
    std::vector<Integer> todo;
    if (n != 1) todo.push_back(n);
    while (!todo.empty()) {
        Integer m = todo.back();
        todo.pop_back();
        if (fits_u64(m)) {
            factor_u64(to_u64(m), fac);
            continue;
        }
        if (mpz_probab_prime_p(m.get_mpz_t(), 40) > 0) {
            big[m]++;
            continue;
        }
        Integer root;
        unsigned long k = 2;
        for (; k < mpz_sizeinbase(m.get_mpz_t(), 2); ++k)
            if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k)) break;
        if (k < mpz_sizeinbase(m.get_mpz_t(), 2)) {
            for (unsigned long i = 0; i < k; ++i) todo.push_back(root);
            continue;
        }
        Integer d = rho_big(m);
        if (d == 0) domain_error("factor: could not split the cofactor " + m.get_str());
        todo.push_back(d);
        todo.push_back(m / d);
    }
    Factorization out;
    for (auto& [p, e] : fac) {
        Integer z;
        mpz_import(z.get_mpz_t(), 1, -1, sizeof(u64), 0, 0, &p);
        out.emplace_back(z, e);
    }
    for (auto& [p, e] : big) out.emplace_back(p, e);
    if (cache.size() > 200000) cache.clear();
    cache.emplace(key, out);
    return out;
}

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    if (fits_u64(n)) return miller_rabin(to_u64(n));
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {
Integer squarefree_part(const Integer& n) {
    Integer r = 1;
    for (auto& [p, e] : factor(n))
        if (e % 2) r *= p;
    return r;
}
}

SquareClass square_class(const Rational& q) {
    if (q == 0) domain_error("square_class: zero input");
    Integer r = squarefree_part(q.get_num()) * squarefree_part(q.get_den());
    // numerator and denominator are coprime so the product is square-free
    if (q < 0) r = -r;
    return SquareClass{r};
}

Integer sqf_mul(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Integer r = a * b;
    r /= g;
    r /= g;
    return r;
}

bool is_square(const Rational& q) {
    if (q < 0) return false;
    if (q == 0) return true;
    return mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t());
}

std::vector<std::uint64_t> prime_divisors(const Integer& n) {
    std::vector<std::uint64_t> out;
    for (auto& [p, e] : factor(n)) out.push_back(to_u64(p));
    return out;
}

int legendre(const Integer& a, const Integer& p) {
    if (p <= 2 || !is_prime(p)) domain_error("legendre: modulus " + p.get_str() + " is not an odd prime");
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

namespace {
int mod8(const Integer& u) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), u.get_mpz_t(), 8);
    return (int)r.get_si();
}
}

int hilbert_sf(const Integer& a, const Integer& b, Place v) {
    if (a == 0 || b == 0) domain_error("hilbert_symbol: zero argument");
    if (v.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
    unsigned long p = v.p;
    bool al = mpz_divisible_ui_p(a.get_mpz_t(), p), be = mpz_divisible_ui_p(b.get_mpz_t(), p);
    Integer u = a, w = b;
    if (al) mpz_divexact_ui(u.get_mpz_t(), u.get_mpz_t(), p);
    if (be) mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(), p);
    if (p == 2) {
        int u8 = mod8(u), w8 = mod8(w);
        int eu = ((u8 - 1) / 2) % 2, ew = ((w8 - 1) / 2) % 2;
        int ou = ((u8 * u8 - 1) / 8) % 2, ow = ((w8 * w8 - 1) / 8) % 2;
        int e = eu * ew + (al ? ow : 0) + (be ? ou : 0);
        return (e % 2) ? -1 : 1;
    }
    Integer P = (unsigned long)p;
    int r = 1;
    if (al && be && ((p - 1) / 2) % 2 == 1) r = -r;
    if (be) r *= mpz_legendre(u.get_mpz_t(), P.get_mpz_t());
    if (al) r *= mpz_legendre(w.get_mpz_t(), P.get_mpz_t());
    return r;
}

int hilbert_symbol(const Rational& a, const Rational& b, Place v) {
    if (a == 0 || b == 0) domain_error("hilbert_symbol: zero argument");
    if (!v.is_infinite() && !is_prime(Integer((unsigned long)v.p)))
        domain_error("hilbert_symbol: place " + to_string(v) + " is not prime");
    return hilbert_sf(square_class(a).rep, square_class(b).rep, v);
}

bool is_local_square_sf(const Integer& a, Place v) {
    if (v.is_infinite()) return a > 0;
    unsigned long p = v.p;
    if (mpz_divisible_ui_p(a.get_mpz_t(), p)) return false;
    if (p == 2) return mod8(a) == 1;
    Integer P = p;
    return mpz_legendre(a.get_mpz_t(), P.get_mpz_t()) == 1;
}

bool is_local_square(const Rational& q, Place v) { return is_local_square_sf(square_class(q).rep, v); }

}
