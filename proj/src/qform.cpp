#include "wittforge/qform.hpp"
#include "wittforge/error.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace wf {

QuadraticForm::QuadraticForm(std::vector<Rational> e) : entries(std::move(e)) {
    for (auto& a : entries)
        if (a == 0) domain_error("quadratic form entry must be nonzero");
}

QuadraticForm::QuadraticForm(std::initializer_list<long> e) {
    for (long a : e) {
        if (a == 0) domain_error("quadratic form entry must be nonzero");
        entries.emplace_back(a);
    }
}

std::string to_string(const QuadraticForm& q) {
    std::string s = "<";
    for (std::size_t i = 0; i < q.entries.size(); ++i) {
        if (i) s += ",";
        s += to_string(q.entries[i]);
    }
    return s + ">";
}

QuadraticForm diagonalize(const RatMatrix& g) {
    const std::size_t n = g.size();
    for (auto& row : g)
        if (row.size() != n) domain_error("diagonalize: Gram matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (g[i][j] != g[j][i]) domain_error("diagonalize: Gram matrix is not symmetric");

    RatMatrix m = g;
    std::vector<Rational> out;
    int radical = 0;
    auto swap_idx = [&](std::size_t a, std::size_t b) {
        std::swap(m[a], m[b]);
        for (auto& row : m) std::swap(row[a], row[b]);
    };
    std::size_t k = 0;
    std::size_t live = n;
    while (k < live) {
        if (m[k][k] == 0) {
            std::size_t j = k + 1;
            while (j < live && m[j][j] == 0) ++j;
            if (j < live) {
                swap_idx(k, j);
            } else {
                j = k + 1;
                while (j < live && m[k][j] == 0) ++j;
                if (j == live) {
                    // isotropic vector orthogonal to everything left: part of the radical
                    swap_idx(k, live - 1);
                    --live;
                    ++radical;
                    continue;
                }
                // both diagonal entries vanish: pass to the basis e_k + e_j, e_k - e_j
                for (std::size_t r = 0; r < n; ++r) {
                    Rational a = m[r][k], b = m[r][j];
                    m[r][k] = a + b;
                    m[r][j] = a - b;
                }
                for (std::size_t c = 0; c < n; ++c) {
                    Rational a = m[k][c], b = m[j][c];
                    m[k][c] = a + b;
                    m[j][c] = a - b;
                }
            }
        }
        const Rational p = m[k][k];
        for (std::size_t i = k + 1; i < live; ++i) {
            if (m[i][k] == 0) continue;
            Rational f = m[i][k] / p;
            for (std::size_t c = k; c < live; ++c) m[i][c] -= f * m[k][c];
            for (std::size_t r = k; r < live; ++r) m[r][i] -= f * m[r][k];
        }
        out.push_back(p);
        ++k;
    }
    if (radical)
        throw RankError(radical, "diagonalize: singular Gram matrix, radical of dimension " + std::to_string(radical));
    return QuadraticForm(out);
}

namespace {

std::vector<Integer> sqf_reps(const QuadraticForm& q) {
    std::vector<Integer> r;
    r.reserve(q.dim());
    for (auto& a : q.entries) r.push_back(square_class(a).rep);
    return r;
}

int corr(long n, const Integer& d, Place v) {
    switch (((n % 8) + 8) % 8) {
    case 1:
    case 2: return 1;
    case 3:
    case 4: return hilbert_sf(-1, -d, v);
    case 5:
    case 6: return hilbert_sf(-1, -1, v);
    default: return hilbert_sf(-1, d, v);
    }
}

bool odd_pairs(long n) { return ((n * (n - 1)) / 2) % 2 != 0; }

PlaceSet places_of(const std::vector<Integer>& reps) {
    PlaceSet P{Place::infinity(), Place::prime(2)};
    for (auto& r : reps)
        for (auto p : prime_divisors(r)) P.insert(Place::prime(p));
    return P;
}

// class data of a Witt class: signature, signed discriminant, Clifford set
struct ClassData {
    long sig = 0;
    Integer delta = 1;
    PlaceSet c;
};

PlaceSet class_places(const ClassData& x) {
    PlaceSet P{Place::infinity(), Place::prime(2)};
    for (auto p : prime_divisors(x.delta)) P.insert(Place::prime(p));
    for (auto& v : x.c) P.insert(v);
    return P;
}

bool feasible(long m, const ClassData& x) {
    if (m < std::labs(x.sig)) return false;
    if (m == 0) return x.delta == 1 && x.c.empty() && x.sig == 0;
    if (m >= 3) return true;
    Integer d = odd_pairs(m) ? Integer(-x.delta) : x.delta;
    for (auto& v : class_places(x)) {
        int eps = (x.c.count(v) ? -1 : 1) * corr(m, d, v);
        if (m == 1 && eps != 1) return false;
        if (m == 2 && eps != 1 && is_local_square_sf(-d, v)) return false;
    }
    return true;
}

long anis_dim(const ClassData& x) {
    for (long m = std::labs(x.sig);; m += 2)
        if (feasible(m, x)) return m;
}

ClassData class_of(const QuadraticForm& q) {
    WittInvariants inv = invariants(q);
    return ClassData{inv.signature, inv.disc.rep, inv.hasse};
}

// X of anisotropic dimension m; class of X - <a>
ClassData subtract_line(long m, const ClassData& x, const Integer& a) {
    Integer dm = odd_pairs(m) ? Integer(-x.delta) : x.delta;
    PlaceSet P = class_places(x);
    for (auto p : prime_divisors(a)) P.insert(Place::prime(p));
    Integer na = -a;
    Integer d2 = sqf_mul(dm, na);
    ClassData y;
    y.sig = x.sig - sgn(a);
    y.delta = odd_pairs(m + 1) ? Integer(-d2) : d2;
    for (auto& v : P) {
        int eps = (x.c.count(v) ? -1 : 1) * corr(m, dm, v);
        int eps2 = eps * hilbert_sf(dm, na, v);
        if (eps2 * corr(m + 1, d2, v) == -1) y.c.insert(v);
    }
    return y;
}

bool squarefree_small(long k) {
    for (long p = 2; p * p <= k; ++p)
        if (k % (p * p) == 0) return false;
    return true;
}

// a binary class <a, -a*delta> is fixed by the local symbols (a, delta)_v = eps_v; solve for
// a = (-1)^b0 * prod p^bp * l as a linear system over F2, scanning auxiliary primes l
std::optional<Integer> binary_representative(const ClassData& x) {
    std::vector<Place> places;
    std::vector<Integer> gens{Integer(-1)};
    for (auto& v : class_places(x)) {
        places.push_back(v);
        if (!v.is_infinite()) gens.push_back(Integer((unsigned long)v.p));
    }
    const std::size_t nv = places.size(), ng = gens.size();
    auto bit = [](int s) { return s == -1 ? 1 : 0; };
    std::vector<std::vector<int>> base(nv, std::vector<int>(ng));
    for (std::size_t r = 0; r < nv; ++r)
        for (std::size_t c = 0; c < ng; ++c) base[r][c] = bit(hilbert_sf(gens[c], x.delta, places[r]));
    auto in_places = [&](unsigned long l) {
        for (auto& v : places)
            if (!v.is_infinite() && v.p == l) return true;
        return false;
    };
    for (unsigned long l = 1; l < 2000000; l += (l == 1 ? 2 : 2)) {
        if (l > 1) {
            if (in_places(l) || !is_prime(Integer(l))) continue;
            if (legendre(x.delta, Integer(l)) != 1) continue;
        }
        std::vector<std::vector<int>> a = base;
        for (std::size_t r = 0; r < nv; ++r) {
            int target = x.c.count(places[r]) ? 1 : 0;
            int shift = l > 1 ? bit(hilbert_sf(Integer(l), x.delta, places[r])) : 0;
            a[r].push_back(target ^ shift);
        }
        std::vector<int> pivot_col;
        std::size_t row = 0;
        for (std::size_t c = 0; c < ng && row < nv; ++c) {
            std::size_t piv = row;
            while (piv < nv && !a[piv][c]) ++piv;
            if (piv == nv) continue;
            std::swap(a[piv], a[row]);
            for (std::size_t r = 0; r < nv; ++r)
                if (r != row && a[r][c])
                    for (std::size_t k = c; k <= ng; ++k) a[r][k] ^= a[row][k];
            pivot_col.push_back((int)c);
            ++row;
        }
        bool ok = true;
        for (std::size_t r = row; r < nv; ++r)
            if (a[r][ng]) ok = false;
        if (!ok) continue;
        Integer val = l;
        for (std::size_t r = 0; r < row; ++r)
            if (a[r][ng]) val *= gens[pivot_col[r]];
        return val;
    }
    return std::nullopt;
}

std::vector<Rational> realize(long m, ClassData x, const std::vector<Integer>& hints) {
    std::vector<Rational> out;
    while (m > 0) {
        if (m == 1) {
            if (!feasible(1, x)) internal_error("realize: infeasible line class");
            out.emplace_back(x.delta);
            return out;
        }
        bool found = false;
        auto attempt = [&](const Integer& a) {
            if (a == 0) return false;
            ClassData y = subtract_line(m, x, a);
            if (!feasible(m - 1, y)) return false;
            out.emplace_back(a);
            x = y;
            --m;
            return true;
        };
        for (auto& h : hints)
            if (attempt(h)) { found = true; break; }
        if (!found && m == 2)
            if (auto a = binary_representative(x)) found = attempt(*a);
        // represented values may be forced to carry primes of the class, so scale by their products
        std::vector<Integer> ps;
        for (auto& v : class_places(x))
            if (!v.is_infinite() && ps.size() < 10) ps.push_back(Integer((unsigned long)v.p));
        std::vector<Integer> scales{1};
        for (auto& p : ps) {
            std::size_t s0 = scales.size();
            for (std::size_t i = 0; i < s0; ++i) scales.push_back(scales[i] * p);
        }
        for (long k = 1; !found && k <= 20000; ++k) {
            if (!squarefree_small(k)) continue;
            for (auto& s : scales) {
                Integer a = sqf_mul(s, Integer(k));
                if (attempt(a) || attempt(-a)) { found = true; break; }
            }
        }
        if (!found) internal_error("realize: no representative found within the search bound");
    }
    return out;
}

}

int hasse_product(const QuadraticForm& q, Place v) {
    auto r = sqf_reps(q);
    int eps = 1;
    Integer dd = 1;
    for (auto& a : r) {
        eps *= hilbert_sf(dd, a, v);
        dd = sqf_mul(dd, a);
    }
    return eps;
}

WittInvariants invariants(const QuadraticForm& q) {
    WittInvariants w;
    auto r = sqf_reps(q);
    const long n = (long)r.size();
    w.dim = n;
    Integer d = 1;
    for (auto& a : r) {
        w.signature += sgn(a);
        d = sqf_mul(d, a);
    }
    w.disc = SquareClass{odd_pairs(n) ? Integer(-d) : d};
    for (auto& v : places_of(r)) {
        int eps = 1;
        Integer dd = 1;
        for (auto& a : r) {
            eps *= hilbert_sf(dd, a, v);
            dd = sqf_mul(dd, a);
        }
        if (eps * corr(n, d, v) == -1) w.hasse.insert(v);
    }
    return w;
}

QuadraticForm qsum(const QuadraticForm& a, const QuadraticForm& b) {
    QuadraticForm r = a;
    r.entries.insert(r.entries.end(), b.entries.begin(), b.entries.end());
    return r;
}

QuadraticForm qtensor(const QuadraticForm& a, const QuadraticForm& b) {
    QuadraticForm r;
    r.entries.reserve(a.dim() * b.dim());
    for (auto& x : a.entries)
        for (auto& y : b.entries) r.entries.push_back(x * y);
    return r;
}

QuadraticForm qscale(const Rational& l, const QuadraticForm& a) {
    if (l == 0) domain_error("scale: factor must be nonzero");
    QuadraticForm r = a;
    for (auto& x : r.entries) x *= l;
    return r;
}

QuadraticForm qneg(const QuadraticForm& a) { return qscale(-1, a); }

QuadraticForm combine(CombineOp op, const QuadraticForm& q1, const QuadraticForm& q2, const Rational& l) {
    switch (op) {
    case CombineOp::Sum: return qsum(q1, q2);
    case CombineOp::Tensor: return qtensor(q1, q2);
    case CombineOp::Scale: return qscale(l, q1);
    }
    return q1;
}

QuadraticForm hyperbolic(long planes) {
    QuadraticForm r;
    for (long i = 0; i < planes; ++i) {
        r.entries.emplace_back(1);
        r.entries.emplace_back(-1);
    }
    return r;
}

QuadraticForm pfister(const std::vector<Rational>& a) {
    QuadraticForm r{1};
    for (auto& x : a) {
        if (x == 0) domain_error("pfister: slot must be nonzero");
        r = qtensor(r, QuadraticForm(std::vector<Rational>{Rational(1), Rational(-x)}));
    }
    return r;
}

QuadraticForm normalized(const QuadraticForm& q) {
    QuadraticForm r;
    for (auto& a : q.entries) r.entries.emplace_back(square_class(a).rep);
    return r;
}

bool isotropic_2adic_search(const QuadraticForm& q) {
    const std::size_t n = q.dim();
    if (n < 2) return false;
    if (n >= 5) return true;
    std::vector<int> key;
    for (auto& a : sqf_reps(q)) {
        Integer r;
        mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), 32);
        key.push_back((int)r.get_si());
    }
    std::sort(key.begin(), key.end());
    static std::mutex mu;
    static std::map<std::vector<int>, bool> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    // a primitive zero modulo 32 lifts: every derivative has 2-adic valuation at most 2
    bool found = false;
    std::vector<int> x(n, 0);
    long total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 16;
    for (long idx = 0; idx < total && !found; ++idx) {
        long t = idx;
        bool odd = false;
        long val = 0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = (int)(t % 16);
            t /= 16;
            odd = odd || (x[i] & 1);
            val += (long)key[i] * x[i] * x[i];
        }
        if (odd && val % 32 == 0) found = true;
    }
    std::lock_guard<std::mutex> lk(mu);
    memo[key] = found;
    return found;
}

namespace {
bool closed_local(const std::vector<Integer>& r, Place v) {
    const std::size_t n = r.size();
    if (n < 2) return false;
    Integer d = 1;
    for (auto& a : r) d = sqf_mul(d, a);
    if (v.is_infinite()) {
        bool pos = false, neg = false;
        for (auto& a : r) (a > 0 ? pos : neg) = true;
        return pos && neg;
    }
    if (n >= 5) return true;
    if (n == 2) return is_local_square_sf(-d, v);
    int eps = 1;
    Integer dd = 1;
    for (auto& a : r) {
        eps *= hilbert_sf(dd, a, v);
        dd = sqf_mul(dd, a);
    }
    if (n == 3) return hilbert_sf(-1, -d, v) == eps;
    return !is_local_square_sf(d, v) || eps == hilbert_sf(-1, -1, v);
}
}

bool is_isotropic_at(const QuadraticForm& q, Place v) {
    if (!v.is_infinite() && v.p == 2) return isotropic_2adic_search(q);
    return closed_local(sqf_reps(q), v);
}

bool is_isotropic(const QuadraticForm& q) {
    auto r = sqf_reps(q);
    if (r.size() < 2) return false;
    if (r.size() == 2) {
        Integer m = -sqf_mul(r[0], r[1]);
        return m == 1;
    }
    for (auto& v : places_of(r))
        if (!is_isotropic_at(q, v)) return false;
    return true;
}

bool is_isotropic_closed_at(const QuadraticForm& q, Place v) { return closed_local(sqf_reps(q), v); }

bool is_isotropic_closed(const QuadraticForm& q) {
    auto r = sqf_reps(q);
    if (r.size() < 2) return false;
    if (r.size() == 2) return -sqf_mul(r[0], r[1]) == 1;
    for (auto& v : places_of(r))
        if (!closed_local(r, v)) return false;
    return true;
}

bool witt_trivial(const QuadraticForm& q) {
    if (q.dim() % 2) return false;
    WittInvariants w = invariants(q);
    return w.signature == 0 && w.disc.is_trivial() && w.hasse.empty();
}

bool witt_equal(const QuadraticForm& q1, const QuadraticForm& q2) { return witt_trivial(qsum(q1, qneg(q2))); }

int anisotropic_dimension(const QuadraticForm& q) { return (int)anis_dim(class_of(q)); }

QuadraticForm anisotropic_part(const QuadraticForm& q) {
    QuadraticForm qn = normalized(q);
    // cancel exact opposite pairs first; this never changes the Witt class
    {
        std::vector<Rational> kept;
        std::vector<bool> dead(qn.dim(), false);
        for (std::size_t i = 0; i < qn.dim(); ++i) {
            if (dead[i]) continue;
            for (std::size_t j = i + 1; j < qn.dim(); ++j)
                if (!dead[j] && qn.entries[j] == -qn.entries[i]) {
                    dead[i] = dead[j] = true;
                    break;
                }
            if (!dead[i]) kept.push_back(qn.entries[i]);
        }
        qn.entries = kept;
    }
    ClassData x = class_of(qn);
    long n = (long)qn.dim();
    long m = anis_dim(x);
    if (m == n) return qn;
    if (m == 0) return {};
    // prefer a sub-multiset of the given entries when one exists
    double binom = 1;
    for (long i = 0; i < m; ++i) binom = binom * (n - i) / (i + 1);
    if (binom <= 400) {
        std::vector<int> sel(n, 0);
        std::fill(sel.begin(), sel.begin() + m, 1);
        do {
            QuadraticForm sub;
            for (long i = 0; i < n; ++i)
                if (sel[i]) sub.entries.push_back(qn.entries[i]);
            if (witt_equal(sub, qn)) return sub;
        } while (std::prev_permutation(sel.begin(), sel.end()));
    }
    std::vector<Integer> hints;
    for (auto& a : qn.entries) hints.push_back(a.get_num());
    QuadraticForm r(realize(m, x, hints));
    if (!witt_equal(r, qn)) internal_error("anisotropic_part: realized form has the wrong class");
    return r;
}

QuadraticForm trace_transfer_gram(const Rational& d, const Rational& a0, const Rational& a1) {
    if (is_square(d)) domain_error("trace transfer: d must be a non-square");
    if (a0 == 0 && a1 == 0) domain_error("trace transfer: element must be nonzero");
    RatMatrix g{{2 * a0, 2 * d * a1}, {2 * d * a1, 2 * d * a0}};
    return diagonalize(g);
}

QuadraticForm trace_transfer_quadratic(const Rational& d, const Rational& a0, const Rational& a1) {
    if (is_square(d)) domain_error("trace transfer: d must be a non-square");
    if (a0 == 0 && a1 == 0) domain_error("trace transfer: element must be nonzero");
    if (a0 == 0) return hyperbolic(1);
    Rational norm = a0 * a0 - d * a1 * a1;
    return qtensor(QuadraticForm(std::vector<Rational>{2 * a0}), pfister({-d * norm}));
}

bool in_In(const QuadraticForm& q, int n) {
    if (n < 0) domain_error("in_In: negative depth");
    if (n > 3) unsupported("in_In: depth " + std::to_string(n) + " is beyond the supported bound 3");
    if (n == 0) return true;
    if (q.dim() % 2) return false;
    if (n == 1) return true;
    WittInvariants w = invariants(q);
    if (!w.disc.is_trivial()) return false;
    if (n == 2) return true;
    return w.hasse.empty() && w.signature % 8 == 0;
}

GWClass gw_of(const QuadraticForm& q) { return GWClass{(long)q.dim(), anisotropic_part(q)}; }

GWClass gw_add(const GWClass& x, const GWClass& y) {
    return GWClass{x.virtual_dim + y.virtual_dim, anisotropic_part(qsum(x.witt, y.witt))};
}

GWClass gw_neg(const GWClass& x) { return GWClass{-x.virtual_dim, qneg(x.witt)}; }

GWClass gw_mul(const GWClass& x, const GWClass& y) {
    return GWClass{x.virtual_dim * y.virtual_dim, anisotropic_part(qtensor(x.witt, y.witt))};
}

bool gw_equal(const GWClass& x, const GWClass& y) {
    return x.virtual_dim == y.virtual_dim && witt_equal(x.witt, y.witt);
}

QuadraticForm gw_representative(const GWClass& x) {
    long extra = x.virtual_dim - (long)x.witt.dim();
    if (extra < 0 || extra % 2) domain_error("GW class has no honest representative");
    return qsum(x.witt, hyperbolic(extra / 2));
}

std::string to_string(const GWClass& x) {
    long h = x.virtual_dim - (long)x.witt.dim();
    std::ostringstream os;
    os << to_string(x.witt);
    if (h != 0) os << (h > 0 ? " + " : " - ") << std::labs(h) / 2 << "H";
    return os.str();
}

}
