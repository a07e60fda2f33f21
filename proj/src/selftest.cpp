#include "wittforge/selftest.hpp"
#include "wittforge/cli.hpp"
#include "wittforge/cohomology.hpp"
#include "wittforge/crossed.hpp"
#include "wittforge/error.hpp"
#include "wittforge/lambda.hpp"
#include "wittforge/signatures.hpp"

#include "json.hpp"

#include <chrono>
#include <functional>
#include <sstream>

namespace wf {

Rational GenSource::rat(int bound, bool nonzero) {
    for (;;) {
        long v = (long)(rng_() % (std::uint64_t)(2 * bound + 1)) - bound;
        if (nonzero && v == 0) continue;
        tape_.values.push_back(Rational(v));
        return tape_.values.back();
    }
}

long GenSource::pick(long n) {
    long v = (long)(rng_() % (std::uint64_t)n);
    tape_.picks.push_back(v);
    return v;
}

Rational GenSource::keep(const Rational& r) {
    tape_.values.push_back(r);
    return r;
}

Rational ReplaySource::rat(int, bool) {
    if (vi_ >= tape_.values.size()) domain_error("replay: tape exhausted");
    return tape_.values[vi_++];
}

long ReplaySource::pick(long n) {
    if (pi_ >= tape_.picks.size()) domain_error("replay: tape exhausted");
    long v = tape_.picks[pi_++];
    if (v >= n) domain_error("replay: pick out of range");
    return v;
}

Rational ReplaySource::keep(const Rational&) { return rat(0, false); }

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t name_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
}

std::string qlit(const Quat& e) { return to_string(QuatLit{e.w, e.x, e.y, e.z}); }

}

std::vector<QuaternionAlgebra> algebra_pool(std::uint64_t seed, int size) {
    std::mt19937_64 g(splitmix(seed ^ 0x51ed2701ULL));
    auto nz = [&](int b) {
        for (;;) {
            long v = (long)(g() % (std::uint64_t)(2 * b + 1)) - b;
            if (v) return Rational(v);
        }
    };
    std::vector<QuaternionAlgebra> pool;
    auto fresh = [&](const QuaternionAlgebra& Q) {
        for (auto& P : pool)
            if (P.a == Q.a && P.b == Q.b) return false;
        return true;
    };
    for (int k = 0; k < size; ++k) {
        if (k == 1) {
            pool.emplace_back(-1, -1);
            continue;
        }
        for (;;) {
            QuaternionAlgebra Q = k % 3 == 0 ? QuaternionAlgebra(1, nz(7)) : QuaternionAlgebra(nz(7), nz(7));
            if (!fresh(Q) || (k % 3 != 0 && is_split(Q))) continue;
            pool.push_back(Q);
            break;
        }
    }
    return pool;
}

QuaternionAlgebra gen_algebra(Source& s, const std::vector<QuaternionAlgebra>& pool) {
    const QuaternionAlgebra& Q = pool[(std::size_t)s.pick((long)pool.size())];
    Rational a = s.keep(Q.a), b = s.keep(Q.b);
    if (a == 0 || b == 0) domain_error("algebra with a zero parameter");
    return QuaternionAlgebra(a, b);
}

AlgebraWithInvolution gen_ambient(Source& s, const std::vector<QuaternionAlgebra>& pool, bool allow_base) {
    long kind = s.pick(allow_base ? 5 : 4);
    if (kind == 4) return AlgebraWithInvolution::base();
    QuaternionAlgebra Q = gen_algebra(s, pool);
    if (kind < 2) return AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    for (int tries = 0; tries < 20; ++tries) {
        Quat u(Q, 0, s.rat(3, false), s.rat(3, false), s.rat(3, false));
        if (nrd(u) != 0) return AlgebraWithInvolution::quaternion(Q, InvolutionSpec::inner(u));
    }
    domain_error("no invertible pure quaternion found");
}

Quat gen_entry(Source& s, const AlgebraWithInvolution& A, int eps, int bound) {
    auto [sym, skew] = sym_skew(A);
    const auto& basis = eps == 1 ? sym : skew;
    if (basis.empty()) domain_error("no " + std::string(eps == 1 ? "symmetric" : "skew-symmetric") + " elements in " + to_string(A));
    for (int tries = 0; tries < 30; ++tries) {
        Quat e = element(A, 0);
        for (auto& b : basis) e = e + s.rat(bound, false) * b;
        if (reduced_norm(A, e) != 0) return e;
    }
    domain_error("no invertible entry found");
}

HermForm gen_herm(Source& s, const AlgebraWithInvolution& A, int eps, int rank) {
    std::vector<Quat> e;
    for (int r = 0; r < rank; ++r) e.push_back(gen_entry(s, A, eps));
    return HermForm(A, eps, e);
}

MixedGWElement gen_homogeneous(Source& s, const AlgebraWithInvolution& A, int bound) {
    long slot = s.pick(A.is_base() ? 2 : 3);
    if (slot == 0) {
        QuadraticForm q;
        long n = 1 + s.pick(2);
        for (long i = 0; i < n; ++i) q.entries.push_back(s.rat(bound, true));
        return from_form(A, q);
    }
    int type = slot == 1 ? 1 : -1;
    return from_herm(gen_herm(s, A, type * A.type(), 1 + (int)s.pick(2)));
}

std::string cli_ambient(const AlgebraWithInvolution& A) {
    if (A.is_base()) return "base";
    std::string out = "Q(" + to_string(A.quat->a) + "," + to_string(A.quat->b) + "), ";
    if (A.inv.kind == InvolutionSpec::Kind::Canonical) return out + "gamma";
    return out + "inner(" + qlit(A.inv.u) + ")";
}

std::optional<std::string> cli_literal(const MixedGWElement& x) {
    std::vector<std::string> parts;
    if (x.c00.virtual_dim < (long)x.c00.witt.dim() || x.c01 != 0) return std::nullopt;
    if (x.c00.virtual_dim > 0) {
        QuadraticForm q = gw_representative(x.c00);
        std::string f = "<";
        for (std::size_t i = 0; i < q.dim(); ++i) f += (i ? "," : "") + to_string(q.entries[i]);
        parts.push_back(f + ">");
    }
    for (int type : {1, -1}) {
        const OddPart& p = x.odd(type);
        if (p.empty()) continue;
        if (x.ambient.is_base() || p.rank != (long)p.entries.size()) return std::nullopt;
        std::string h = "h<";
        for (std::size_t i = 0; i < p.entries.size(); ++i) h += (i ? "," : "") + qlit(p.entries[i]);
        h += "> @ (" + cli_ambient(x.ambient) + ", eps=" + std::to_string(type * x.ambient.type()) + ")";
        parts.push_back(h);
    }
    if (parts.empty()) return std::string("0");
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
    return out;
}

namespace {

struct Outcome {
    bool pass = true;
    bool exact = true;
    std::string expr;
    std::string detail;
    std::string tag;  // coverage label
};

struct Ctx {
    const TestConfig& cfg;
    const std::vector<QuaternionAlgebra>& pool;
};

using CaseFn = std::function<Outcome(Source&, const Ctx&, long)>;

struct SuiteDef {
    long default_cases;
    CaseFn fn;
};

std::string paren(const std::string& s) { return "(" + s + ")"; }

void note(Outcome& o, Verdict v, const std::string& what, const std::string& expr = "") {
    if (!holds(v)) {
        if (o.pass) {
            o.detail = what;
            o.expr = expr;
        }
        o.pass = false;
    } else if (v == Verdict::EqualByBattery) {
        o.exact = false;
    }
}

void note(Outcome& o, bool ok, const std::string& what, const std::string& expr = "") {
    note(o, ok ? Verdict::Equal : Verdict::Unequal, what, expr);
}

std::string eq_expr(const std::optional<std::string>& l, const std::optional<std::string>& r) {
    if (!l || !r) return "";
    return "eq(" + *l + ", " + *r + ")";
}

std::optional<std::string> prod(const std::optional<std::string>& a, const std::optional<std::string>& b) {
    if (!a || !b) return std::nullopt;
    return paren(*a) + " * " + paren(*b);
}

std::optional<std::string> sum(const std::optional<std::string>& a, const std::optional<std::string>& b) {
    if (!a || !b) return std::nullopt;
    return paren(*a) + " + " + paren(*b);
}

std::string form_lit(const QuadraticForm& q) {
    std::string f = "<";
    for (std::size_t i = 0; i < q.dim(); ++i) f += (i ? "," : "") + to_string(q.entries[i]);
    return f + ">";
}

// ---- ring axioms

Outcome case_associativity(Source& s, const Ctx& c, long) {
    auto A = gen_ambient(s, c.pool, false);
    int b = c.cfg.coefficient_bound;
    auto x = gen_homogeneous(s, A, b), y = gen_homogeneous(s, A, b), z = gen_homogeneous(s, A, b);
    // w shares the slot of y so that y + w is a graded sum
    MixedGWElement w;
    Slot sy = *y.slot();
    if (sy == Slot::Even) w = from_form(A, QuadraticForm(std::vector<Rational>{s.rat(b, true)}));
    else w = from_herm(gen_herm(s, A, (sy == Slot::Orth ? 1 : -1) * A.type(), 1));
    auto lx = cli_literal(x), ly = cli_literal(y), lz = cli_literal(z), lw = cli_literal(w);
    Outcome o;
    o.tag = to_string(A.algebra()) + (A.type() == 1 ? " orthogonal" : " symplectic");
    note(o, mixed_equal(x * y, y * x), "commutativity", eq_expr(prod(lx, ly), prod(ly, lx)));
    note(o, mixed_equal((x * y) * z, x * (y * z)), "associativity",
         eq_expr(prod(prod(lx, ly), lz), prod(lx, prod(ly, lz))));
    note(o, mixed_equal(x * (y + w), x * y + x * w), "distributivity",
         eq_expr(prod(lx, sum(ly, lw)), sum(prod(lx, ly), prod(lx, lw))));
    // the same identities after passing to W
    auto X = to_witt(x), Y = to_witt(y), Z = to_witt(z);
    note(o, mixed_equal((X * Y) * Z, X * (Y * Z)), "associativity in W");
    return o;
}

// ---- closed forms

Outcome case_closed_form(Source& s, const Ctx& c, long) {
    QuaternionAlgebra Q = gen_algebra(s, c.pool);
    auto A = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    long kind = s.pick(3);
    Quat a, b;
    QuadraticForm closed;
    int eps = 1;
    if (kind == 0) {
        a = Quat(Q, s.rat(c.cfg.coefficient_bound, true));
        b = Quat(Q, s.rat(c.cfg.coefficient_bound, true));
        closed = quaternion_closed_form_scalar(Q, a.w, b.w);
    } else {
        eps = -1;
        a = gen_entry(s, A, -1);
        if (kind == 1) {
            b = gen_entry(s, A, -1);
        } else {
            for (int tries = 0;; ++tries) {
                if (tries == 30) domain_error("commutator is not invertible");
                Quat w = gen_entry(s, A, -1);
                b = a * w - w * a;
                if (nrd(b) != 0) break;
            }
        }
        closed = quaternion_closed_form_pure(a, b);
    }
    QuadraticForm gram = herm_product(HermForm(A, eps, {a}), HermForm(A, eps, {b}));
    std::string lhs = "h<" + qlit(a) + "> @ (" + cli_ambient(A) + ") * h<" + qlit(b) + "> @ (" + cli_ambient(A) + ")";
    Outcome o;
    o.tag = kind == 0 ? "scalar" : kind == 1 ? "pure" : "anti-commuting";
    note(o, witt_equal(closed, gram) && closed.dim() == gram.dim(), "closed form vs Gram",
         "eq(" + lhs + ", " + form_lit(closed) + ")");
    if (kind == 2) note(o, witt_trivial(gram), "anti-commuting product is hyperbolic", "eq(" + lhs + ", 0)");
    return o;
}

// ---- Goldman element

Outcome case_goldman(Source& s, const Ctx& c, long) {
    auto A = gen_ambient(s, c.pool, false);
    const QuaternionAlgebra& Q = A.algebra();
    const InvolutionSpec& sg = A.inv;
    auto rq = [&]() { return Quat(Q, s.rat(3, false), s.rat(3, false), s.rat(3, false), s.rat(3, false)); };
    Quat x = rq(), y = rq();
    auto G = goldman_element(Q);
    int eps = involution_type(sg);
    Outcome o;
    note(o, G * G == TensorElement::unit(Q), "g^2 = 1");
    note(o, apply_each(G, &sg, &sg) == G, "(sigma x sigma)(g) = g");
    note(o, twisted_sandwich(G, x, sg) == Rational(eps) * involution_apply(sg, x), "g . x = eps sigma(x)");
    note(o, twisted_sandwich(apply_each(G, nullptr, &sg), x, sg) == Quat(Q, trd(x)), "(Id x sigma)(g) . x = Trd(x)");
    note(o, twisted_sandwich(apply_each(G, &sg, nullptr), x, sg) == Quat(Q, trd(x)), "(sigma x Id)(g) . x = Trd(x)");
    note(o, twisted_sandwich(apply_each(G, &sg, &sg), x, sg) == Rational(eps) * involution_apply(sg, x),
         "(sigma x sigma)(g) . x = eps sigma(x)");
    note(o, TensorElement::simple(x, y) * G == G * TensorElement::simple(y, x), "(x (x) y) g = g (y (x) x)");
    note(o, sandwich(G, x) == Quat(Q, trd(x)), "untwisted sandwich is Trd");
    return o;
}

// ---- worked constants

Outcome case_constants(Source&, const Ctx&, long index) {
    QuaternionAlgebra H(-1, -1);
    auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
    Outcome o;
    switch (index % 3) {
    case 0: {
        QuadraticForm t = trace_form_gram(A, Quat(H, 1), Quat(H, 1));
        note(o, t.dim() == 4 && witt_equal(t, QuadraticForm{2, 2, 2, 2}), "T_gamma on H = <2,2,2,2>",
             "eq(h<1> @ (Q(-1,-1), gamma) * h<1> @ (Q(-1,-1), gamma), <2,2,2,2>)");
        break;
    }
    case 1: {
        auto i = from_herm(HermForm(A, -1, {Quat::basis(H, 1)}));
        auto sq = i * i;
        note(o, sq.c00.virtual_dim == 4 && sq.c00.witt.empty() && sq.c01 == 0 && sq.orth.empty() && sq.symp.empty(),
             "<i>^2 = 2H on H", "eq(h<i> @ (Q(-1,-1), gamma) * h<i> @ (Q(-1,-1), gamma), 0)");
        break;
    }
    default: {
        QuadraticForm t = trace_transfer_quadratic(2, 1, 1);
        note(o, t.dim() == 2 && witt_equal(t, QuadraticForm{2, -1}), "trace transfer of 1 + sqrt 2 is <2,-1>");
    }
    }
    return o;
}

// ---- lambda identities

MixedGWElement positive_small(Source& s, const AlgebraWithInvolution& A, int bound) {
    if (A.is_base()) {
        switch (s.pick(3)) {
        case 0: return from_form(A, QuadraticForm(std::vector<Rational>{s.rat(bound, true)}));
        case 1: return skew_planes(A, 1);
        default: return from_form(A, QuadraticForm(std::vector<Rational>{s.rat(bound, true), s.rat(bound, true)}));
        }
    }
    switch (s.pick(4)) {
    case 0: return from_herm(HermForm(A, 1, {gen_entry(s, A, 1)}));
    case 1: return from_herm(HermForm(A, -1, {gen_entry(s, A, -1)}));
    case 2: return skew_planes(A, 1);
    default: return from_form(A, QuadraticForm(std::vector<Rational>{s.rat(bound, true), s.rat(bound, true)}));
    }
}

Outcome case_zibrowius(Source& s, const Ctx& c, long) {
    auto A = gen_ambient(s, c.pool, true);
    auto x = positive_small(s, A, c.cfg.coefficient_bound), y = positive_small(s, A, c.cfg.coefficient_bound);
    auto r = check_zibrowius(x, y);
    Outcome o;
    note(o, r.first, "Zibrowius (i)");
    note(o, r.second, "Zibrowius (ii)");
    note(o, r.third, "Zibrowius (iii)");
    return o;
}

Outcome case_duality(Source& s, const Ctx& c, long) {
    auto A = gen_ambient(s, c.pool, true);
    MixedGWElement x;
    if (A.is_base()) {
        QuadraticForm q;
        long n = 1 + s.pick(6);
        for (long i = 0; i < n; ++i) q.entries.push_back(s.rat(c.cfg.coefficient_bound, true));
        x = from_form(A, q);
    } else {
        int eps = s.pick(2) ? 1 : -1;
        x = from_herm(gen_herm(s, A, eps, 1 + (int)s.pick(3)));
    }
    long n = rdim_maps(x).total;
    Outcome o;
    o.tag = "rdim " + std::to_string(n);
    for (long p = 0; p <= n; ++p) {
        std::string e = cli_literal(x) ? "eq(lambda(" + std::to_string(p) + ", " + *cli_literal(x) + "), det(" +
                                             *cli_literal(x) + ") * lambda(" + std::to_string(n - p) + ", " +
                                             *cli_literal(x) + "))"
                                       : "";
        note(o, check_duality(x, p, n - p), "duality at p = " + std::to_string(p), e);
    }
    return o;
}

Outcome case_square(Source& s, const Ctx& c, long index) {
    Outcome o;
    if (index == 0) {
        QuaternionAlgebra H(-1, -1);
        auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
        note(o, check_square_decomposition(HermForm(A, 1, {Quat(H, 1)})), "square decomposition of <1> on H");
        note(o, witt_equal(matrix_trace_form(A, 1), QuadraticForm{2, -2, -2, -2}), "T_H = <2,-2,-2,-2>");
        return o;
    }
    QuaternionAlgebra Q = gen_algebra(s, c.pool);
    auto A = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    int eps = s.pick(2) ? 1 : -1;
    HermForm h = gen_herm(s, A, eps, 1 + (int)s.pick(3));
    note(o, check_square_decomposition(h), "square decomposition of " + to_string(h));
    return o;
}

// ---- symbols

Outcome case_symbols(Source& s, const Ctx& c, long) {
    auto A = gen_ambient(s, c.pool, false);
    int eps = s.pick(2) ? 1 : -1;
    Quat a = gen_entry(s, A, eps), b = gen_entry(s, A, eps);
    BrauerClass cup = mixed_cup(A, a, b);
    Outcome o;
    o.tag = A.type() * eps == 1 ? "orthogonal slot" : "symplectic slot";
    std::string ha = "h<" + qlit(a) + "> @ (" + cli_ambient(A) + ")", hb = "h<" + qlit(b) + "> @ (" + cli_ambient(A) + ")";
    note(o, cup == e2(trace_form_gram(A, a, b)), "cup formula vs e2 of the product",
         "eq(cup(" + ha + ", " + hb + "), e2(" + ha + " * " + hb + "))");
    auto [u, v] = common_slot_witness(A, a, b);
    note(o, symbol_to_brauer(u, v) == cup, "common-slot witness");
    return o;
}

// ---- signatures

MixedWElement random_w(Source& s, const AlgebraWithInvolution& A, int bound) {
    MixedGWElement x = from_form(A, QuadraticForm(std::vector<Rational>{s.rat(bound, true)}));
    for (int eps : {1, -1})
        if (s.pick(2)) x = x + from_herm(HermForm(A, eps, {gen_entry(s, A, eps)}));
    return to_witt(x);
}

Outcome case_signatures(Source& s, const Ctx& c, long index) {
    Outcome o;
    if (index == 0) {
        QuaternionAlgebra H(-1, -1);
        auto A = AlgebraWithInvolution::quaternion(H, InvolutionSpec::canonical());
        auto p = signature_pair(to_witt(from_herm(HermForm(A, 1, {Quat(H, 1)}))));
        note(o, p.plus - p.minus == 4 && p.plus + p.minus == 0 && std::abs(p.plus) == 2, "sign(<1>_gamma on H) = +-2");
    }
    auto A = gen_ambient(s, c.pool, false);
    auto x = random_w(s, A, c.cfg.coefficient_bound), y = random_w(s, A, c.cfg.coefficient_bound);
    auto px = signature_pair(x), py = signature_pair(y), pxy = signature_pair(x * y), ps = signature_pair(x + y);
    note(o, pxy.plus == px.plus * py.plus && pxy.minus == px.minus * py.minus, "multiplicativity");
    note(o, ps.plus == px.plus + py.plus && ps.minus == px.minus + py.minus, "additivity");
    // the slot that is not active carries no signature
    int t = active_type(A);
    int eps = -t * A.type();
    auto [sym, skew] = sym_skew(A);
    if (!(eps == 1 ? sym : skew).empty()) {
        auto z = to_witt(from_herm(HermForm(A, eps, {gen_entry(s, A, eps)})));
        auto pz = signature_pair(z);
        note(o, pz.plus == 0 && pz.minus == 0, "inactive slot has zero signature");
    }
    return o;
}

Outcome case_signature_reference(Source& s, const Ctx& c, long) {
    auto A = gen_ambient(s, c.pool, false);
    int t = active_type(A);
    auto G = AlgebraWithInvolution::quaternion(*A.quat, InvolutionSpec::canonical());
    int eps = t * G.type();
    HermForm alt;
    for (int tries = 0;; ++tries) {
        if (tries == 100) domain_error("no alternative reference with nonzero signature");
        alt = HermForm(G, eps, {gen_entry(s, G, eps, 3 + tries / 10)});
        if (invariants(herm_product(alt, alt)).signature != 0) break;
    }
    auto x = random_w(s, A, c.cfg.coefficient_bound);
    auto p0 = signature_pair(x), p1 = signature_pair(x, alt);
    Outcome o;
    note(o, (p0.plus == p1.plus && p0.minus == p1.minus) || (p0.plus == p1.minus && p0.minus == p1.plus),
         "reference independence up to swap");
    std::vector<MixedWElement> gens;
    for (int k = 0; k < 3; ++k) {
        int e = s.pick(2) ? 1 : -1;
        gens.push_back(to_witt(from_herm(HermForm(A, e, {gen_entry(s, A, e)}))));
    }
    auto sols = signature_morphisms(gens);
    note(o, !sols.empty() && sols.size() <= 2, "one or two signature morphisms");
    return o;
}

// ---- crossed products

LElem norm_one(const Rational& d, const LElem& z) {
    Rational n = z.x * z.x - d * z.y * z.y;
    if (n == 0) domain_error("norm-one element from a zero divisor");
    return {(z.x * z.x + d * z.y * z.y) / n, 2 * z.x * z.y / n};
}

CrossedData gen_crossed(Source& s) {
    CrossedData data;
    for (int tries = 0;; ++tries) {
        if (tries == 20) domain_error("no non-square d found");
        data.d = s.rat(7, true);
        if (!is_square(data.d)) break;
    }
    data.c = s.rat(7, true);
    if (s.pick(2)) {
        data.sigma = LInvolution::Conjugation;
        data.mu_s = LElem{s.pick(2) ? 1 : -1, 0};
    } else {
        data.sigma = LInvolution::Identity;
        LElem z{s.rat(3, false), s.rat(3, false)};
        if (z.x == 0 && z.y == 0) z.x = 1;
        data.mu_s = s.pick(3) ? norm_one(data.d, z) : LElem{s.pick(2) ? 1 : -1, 0};
    }
    return data;
}

std::string crossed_expr(const CrossedData& data, const CrossedAlgebra& C) {
    std::string h = "h<1> @ (" + cli_ambient(C.ambient()) + ")";
    return "eq(crossed(" + to_string(data.d) + ", " + to_string(data.c) + ", " +
           (data.sigma == LInvolution::Conjugation ? "conj" : "id") + ", " +
           to_string(QuatLit{data.mu_s.x, data.mu_s.y, 0, 0}) + "), " + h + " * " + h + ")";
}

Outcome case_crossed(Source& s, const Ctx&, long) {
    CrossedData data = gen_crossed(s);
    CrossedAlgebra C = build_crossed(data);
    auto amb = C.ambient();
    Outcome o;
    auto rb = read_back(C);
    note(o, rb.d == data.d && rb.c == data.c && rb.sigma == data.sigma && rb.mu_s == data.mu_s, "read back");
    note(o, witt_equal(trace_form_crossed(data, 0, {1, 0}), trace_form_gram(amb, Quat(C.Q, 1), Quat(C.Q, 1))),
         "trace form of <1>", crossed_expr(data, C));
    for (int rep = 0; rep < 3; ++rep) {
        int t = (int)s.pick(2);
        LElem xi{s.rat(4, false), s.rat(4, false)};
        Quat a = C.element(t, xi);
        if (nrd(a) != 0 && symmetry_sign(amb, a) == 1)
            note(o, witt_equal(trace_form_crossed(data, t, xi), trace_form_gram(amb, a, Quat(C.Q, 1))),
                 "trace form of xi u_" + std::to_string(t));
    }
    for (int rep = 0; rep < 6; ++rep) {
        int eps = s.pick(2) ? 1 : -1;
        int st = (int)s.pick(2), tt = (int)s.pick(2);
        LElem xi{s.rat(4, false), s.rat(4, false)}, eta{s.rat(4, false), s.rat(4, false)};
        Quat x = C.element(st, xi), y = C.element(tt, eta);
        if (nrd(x) == 0 || nrd(y) == 0 || symmetry_sign(amb, x) != eps || symmetry_sign(amb, y) != eps) continue;
        note(o, witt_equal(product_crossed(data, st, xi, tt, eta, eps), trace_form_gram(amb, x, y)),
             "product of generators");
    }
    return o;
}

Outcome case_gauge(Source& s, const Ctx&, long) {
    CrossedData data = gen_crossed(s);
    LElem cs{s.rat(4, false), s.rat(4, false)};
    for (int tries = 0; cs.x * cs.x - data.d * cs.y * cs.y == 0; ++tries) {
        if (tries == 30) domain_error("gauge cochain is not invertible");
        cs = LElem{s.rat(4, false), s.rat(4, false)};
    }
    CrossedData data2 = gauge(data, cs);
    Outcome o;
    CrossedAlgebra C = build_crossed(data), C2 = build_crossed(data2);
    for (int rep = 0; rep < 4; ++rep) {
        int t = (int)s.pick(2);
        LElem xi{s.rat(4, false), s.rat(4, false)};
        Quat a = C.element(t, xi);
        if (nrd(a) == 0 || symmetry_sign(C.ambient(), a) != 1) continue;
        note(o, witt_equal(trace_form_crossed(data, t, xi), trace_form_crossed(data2, t, gauge_coordinate(t, xi, cs, data.d))),
             "gauge invariance of trace forms");
    }
    for (int rep = 0; rep < 4; ++rep) {
        int eps = s.pick(2) ? 1 : -1;
        int st = (int)s.pick(2), tt = (int)s.pick(2);
        LElem xi{s.rat(4, false), s.rat(4, false)}, eta{s.rat(4, false), s.rat(4, false)};
        Quat x = C.element(st, xi), y = C.element(tt, eta);
        if (nrd(x) == 0 || nrd(y) == 0 || symmetry_sign(C.ambient(), x) != eps || symmetry_sign(C.ambient(), y) != eps)
            continue;
        auto p1 = product_crossed(data, st, xi, tt, eta, eps);
        auto p2 = product_crossed(data2, st, gauge_coordinate(st, xi, cs, data.d), tt, gauge_coordinate(tt, eta, cs, data.d), eps);
        note(o, witt_equal(p1, p2), "gauge invariance of products");
    }
    return o;
}

// ---- classical layer

bool perfect_square(long v) {
    if (v < 0) return false;
    long r = (long)std::llround(std::sqrt((double)v));
    for (long t = std::max(0L, r - 2); t <= r + 2; ++t)
        if (t * t == v) return true;
    return false;
}

// bounded search for a nonzero integer zero of sum a_i x_i^2, the last coordinate solved for
bool brute_isotropic(const std::vector<long>& a) {
    const std::size_t n = a.size();
    if (n < 2) return false;
    const long last = a[n - 1];
    const long B = n == 2 ? 200 : n == 3 ? 40 : 30;
    std::vector<long> x(n - 1, -B);
    for (;;) {
        long s = 0;
        bool zero = true;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            s += a[i] * x[i] * x[i];
            zero = zero && x[i] == 0;
        }
        if (!zero && (-s) % last == 0 && perfect_square(-s / last)) return true;
        std::size_t k = 0;
        while (k < n - 1 && x[k] == B) x[k++] = -B;
        if (k == n - 1) return false;
        ++x[k];
    }
}

int oracle_anisotropic_dim(const std::vector<long>& a) {
    const int n = (int)a.size();
    if (n == 1) return 1;
    if (!brute_isotropic(a)) return n;
    if (n == 4) {
        long det = a[0] * a[1] * a[2] * a[3];
        return perfect_square(det) ? 0 : 2;
    }
    return n - 2;
}

Outcome case_classical(Source& s, const Ctx&, long) {
    long n = 1 + s.pick(4);
    std::vector<long> a;
    for (long i = 0; i < n; ++i) a.push_back(s.rat(10, true).get_num().get_si());
    QuadraticForm q;
    for (long v : a) q.entries.push_back(Rational(v));
    int oracle = oracle_anisotropic_dim(a);
    Outcome o;
    note(o, anisotropic_dimension(q) == oracle,
         "anisotropic dimension of " + to_string(q) + ": oracle " + std::to_string(oracle));
    QuadraticForm q1, q2;
    for (long i = 0; i < n; ++i) {
        if (2 * i < n) q1.entries.push_back(Rational(a[i]));
        else q2.entries.push_back(Rational(-a[i]));
    }
    note(o, witt_equal(q1, q2) == (oracle == 0), "witt_equal vs oracle",
         "eq(" + (q1.empty() ? std::string("0") : form_lit(q1)) + ", " + (q2.empty() ? std::string("0") : form_lit(q2)) + ")");
    return o;
}

Outcome case_hilbert(Source& s, const Ctx&, long) {
    Rational a = s.rat(10000, true), b = s.rat(10000, true);
    if (s.pick(3) == 0) a /= s.rat(50, true);
    PlaceSet places{Place::infinity(), Place::prime(2)};
    for (const Rational& r : {a, b})
        for (auto part : {r.get_num(), r.get_den()})
            for (auto p : prime_divisors(abs(Integer(part)))) places.insert(Place::prime(p));
    int product = 1;
    for (auto& v : places) product *= hilbert_symbol(a, b, v);
    Outcome o;
    note(o, product == 1, "Hilbert product formula for (" + to_string(a) + ", " + to_string(b) + ")");
    return o;
}

// ---- filtration

MixedGWElement filtration_generator(Source& s, const AlgebraWithInvolution& A, int bound) {
    if (A.is_base() || s.pick(2) == 0) return from_form(A, pfister({s.rat(bound, true)}));
    int eps = s.pick(2) ? 1 : -1;
    return from_herm(HermForm(A, eps, {gen_entry(s, A, eps)}));
}

Outcome case_filtration(Source& s, const Ctx& c, long index) {
    int n = 1 + (int)(index % 3);
    auto A = gen_ambient(s, c.pool, true);
    Outcome o;
    o.tag = "n=" + std::to_string(n);
    MixedGWElement p = filtration_generator(s, A, c.cfg.coefficient_bound);
    for (int k = 1; k < n; ++k) p = p * filtration_generator(s, A, c.cfg.coefficient_bound);
    auto r = filtration_membership(to_witt(p), n);
    note(o, r.member ? (r.exact ? Verdict::Equal : Verdict::EqualByBattery) : Verdict::Unequal,
         "product of " + std::to_string(n) + " generators lies in I^" + std::to_string(n));
    return o;
}

Outcome case_split_iso(Source& s, const Ctx& c, long index) {
    auto K = AlgebraWithInvolution::base();
    int bound = c.cfg.coefficient_bound + 2;
    MixedWElement z;
    z.ambient = K;
    int n = 1 + (int)(index % 2);
    if (n == 1) {
        QuadraticForm a(std::vector<Rational>{1, -s.rat(bound, true)});
        QuadraticForm b(std::vector<Rational>{s.rat(bound, true), s.rat(bound, true)});
        z.c00 = a;
        for (auto& e : b.entries) z.orth.push_back(element(K, e));
    } else {
        QuadraticForm a(std::vector<Rational>{1, -s.rat(bound, true)});
        QuadraticForm b = qsum(qneg(a), pfister({s.rat(bound, true), s.rat(bound, true)}));
        z.c00 = a;
        for (auto& e : anisotropic_part(b).entries) z.orth.push_back(element(K, e));
    }
    Outcome o;
    if (!filtration_membership(z, n, false).member) domain_error("generated element is not in the filtration");
    auto img = split_filtration_iso(z, n);
    note(o, mixed_equal(split_filtration_inverse(img), z), "split filtration round trip");
    return o;
}

// ---- dimension functor

Outcome case_rdim(Source& s, const Ctx& c, long) {
    auto A = gen_ambient(s, c.pool, true);
    auto x = gen_homogeneous(s, A, c.cfg.coefficient_bound), y = gen_homogeneous(s, A, c.cfg.coefficient_bound);
    if (s.pick(3) == 0) x = x + skew_planes(A, 1);
    auto rx = rdim_maps(x), ry = rdim_maps(y), rp = rdim_maps(x * y), rs = rdim_maps(x + y);
    Outcome o;
    auto lx = cli_literal(x), ly = cli_literal(y);
    note(o, rp.total == rx.total * ry.total, "multiplicativity",
         lx && ly ? "eq(rdim(" + *prod(lx, ly) + "), " + std::to_string(rx.total * ry.total) + ")" : "");
    note(o, rs.total == rx.total + ry.total, "additivity");
    for (int k = 0; k < 4; ++k) note(o, rs.graded[k] == rx.graded[k] + ry.graded[k], "graded additivity");
    if (auto sy = y.slot(); sy && x.is_homogeneous()) {
        Slot target = slot_product(*x.slot(), *sy);
        for (int k = 0; k < 4; ++k)
            if (k != (int)target) note(o, rp.graded[k] == 0, "product lands in the product slot");
        note(o, rp.graded[(int)target] == rp.total, "product slot carries the whole dimension");
    }
    long sum = 0;
    for (int k = 0; k < 4; ++k) sum += rx.graded[k];
    note(o, sum == rx.total, "graded pieces add up");
    return o;
}

const std::map<std::string, SuiteDef>& registry() {
    static const std::map<std::string, SuiteDef> r = {
        {"associativity", {200, case_associativity}},
        {"closed_form", {200, case_closed_form}},
        {"goldman", {100, case_goldman}},
        {"constants", {3, case_constants}},
        {"zibrowius", {100, case_zibrowius}},
        {"duality", {30, case_duality}},
        {"square", {30, case_square}},
        {"symbols", {100, case_symbols}},
        {"signatures", {200, case_signatures}},
        {"signature_reference", {20, case_signature_reference}},
        {"crossed", {100, case_crossed}},
        {"gauge", {50, case_gauge}},
        {"classical", {300, case_classical}},
        {"hilbert", {500, case_hilbert}},
        {"filtration", {60, case_filtration}},
        {"split_iso", {50, case_split_iso}},
        {"rdim", {200, case_rdim}},
    };
    return r;
}

const SuiteDef& find_suite(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) {
        std::string all;
        for (auto& [k, v] : registry()) all += (all.empty() ? "" : ", ") + k;
        domain_error("unknown suite '" + name + "' (known: " + all + ")");
    }
    return it->second;
}

std::uint64_t case_seed(std::uint64_t seed, const std::string& name, long index) {
    return splitmix(splitmix(seed ^ name_hash(name)) + (std::uint64_t)index);
}

struct CaseResult {
    enum { Pass, Battery, Fail, Skip } status = Pass;
    Outcome outcome;
    CaseTape tape;
    std::string error;
};

CaseResult run_one(const SuiteDef& def, const Ctx& ctx, const std::string& name, long index) {
    CaseResult r;
    GenSource src(case_seed(ctx.cfg.seed, name, index));
    try {
        r.outcome = def.fn(src, ctx, index);
        r.status = !r.outcome.pass ? CaseResult::Fail : r.outcome.exact ? CaseResult::Pass : CaseResult::Battery;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Internal) {
            r.status = CaseResult::Fail;
            r.outcome.detail = std::string("internal error: ") + e.what();
        } else {
            r.status = CaseResult::Skip;
            r.error = e.what();
        }
    } catch (const std::exception& e) {
        r.status = CaseResult::Fail;
        r.outcome.detail = std::string("exception: ") + e.what();
    }
    r.tape = src.tape();
    return r;
}

// halve numerators on the tape while the case keeps failing
int shrink(const SuiteDef& def, const Ctx& ctx, long index, CaseTape& tape, Outcome& out) {
    int steps = 0;
    for (bool changed = true; changed && steps < 200;) {
        changed = false;
        for (std::size_t i = 0; i < tape.values.size(); ++i) {
            Integer num = tape.values[i].get_num();
            if (abs(num) <= 1) continue;
            CaseTape cand = tape;
            Integer half = num / 2;
            cand.values[i] = Rational(half, tape.values[i].get_den());
            cand.values[i].canonicalize();
            ReplaySource rs(cand);
            try {
                Outcome o = def.fn(rs, ctx, index);
                if (o.pass) continue;
                tape = cand;
                out = o;
                changed = true;
                ++steps;
            } catch (const Error&) {
            }
        }
    }
    return steps;
}

std::string replay_line(const std::string& name, const TestConfig& cfg, long index) {
    return "wittforge selftest --suite " + name + " --seed " + std::to_string(cfg.seed) + " --case " + std::to_string(index);
}

SuiteReport run_range(const std::string& name, const TestConfig& cfg, long first, long count) {
    const SuiteDef& def = find_suite(name);
    auto pool = algebra_pool(cfg.seed, std::max(2, cfg.algebra_pool_size));
    Ctx ctx{cfg, pool};
    auto t0 = std::chrono::steady_clock::now();
    std::vector<CaseResult> results((std::size_t)count);
    if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < count; ++i) results[(std::size_t)i] = run_one(def, ctx, name, first + i);
    } else {
        for (long i = 0; i < count; ++i) results[(std::size_t)i] = run_one(def, ctx, name, first + i);
    }
    SuiteReport rep;
    rep.name = name;
    rep.cases = count;
    for (long i = 0; i < count; ++i) {
        CaseResult& r = results[(std::size_t)i];
        if (r.status != CaseResult::Skip && !r.outcome.tag.empty()) ++rep.tags[r.outcome.tag];
        switch (r.status) {
        case CaseResult::Pass: ++rep.passed; break;
        case CaseResult::Battery: ++rep.passed; ++rep.battery; break;
        case CaseResult::Skip:
            ++rep.skipped;
            if (rep.skip_reasons.size() < 5) rep.skip_reasons.push_back(r.error);
            break;
        case CaseResult::Fail:
            ++rep.failed;
            if (!rep.first) {
                Counterexample ce;
                ce.index = first + i;
                ce.replay = replay_line(name, cfg, first + i);
                Outcome out = r.outcome;
                if (cfg.shrink && r.outcome.detail.rfind("internal error", 0) != 0)
                    ce.shrink_steps = shrink(def, ctx, first + i, r.tape, out);
                ce.expr = out.expr;
                ce.detail = out.detail;
                rep.first = ce;
            }
            break;
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}

std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (auto& [k, v] : registry()) out.push_back(k);
    return out;
}

long suite_default_cases(const std::string& name) { return find_suite(name).default_cases; }

SuiteReport run_suite(const std::string& name, const TestConfig& cfg) {
    long n = find_suite(name).default_cases;
    if (auto it = cfg.per_suite.find(name); it != cfg.per_suite.end()) n = it->second;
    else if (cfg.cases > 0) n = cfg.cases;
    return run_range(name, cfg, 0, n);
}

SuiteReport run_case(const std::string& name, const TestConfig& cfg, long index) {
    return run_range(name, cfg, index, 1);
}

std::string report_json(const std::vector<SuiteReport>& reports, const TestConfig& cfg) {
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["parallel"] = cfg.parallel;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    bool ok = true;
    for (auto& r : reports) {
        nlohmann::ordered_json s;
        s["suite"] = r.name;
        s["cases"] = r.cases;
        s["passed"] = r.passed;
        s["failed"] = r.failed;
        s["skipped"] = r.skipped;
        s["battery"] = r.battery;
        s["seconds"] = r.seconds;
        if (r.first) {
            s["counterexample"] = {{"case", r.first->index},
                                   {"replay", r.first->replay},
                                   {"expr", r.first->expr},
                                   {"detail", r.first->detail},
                                   {"shrink_steps", r.first->shrink_steps}};
        }
        if (!r.skip_reasons.empty()) s["skip_reasons"] = r.skip_reasons;
        if (!r.tags.empty()) s["coverage"] = r.tags;
        arr.push_back(s);
        ok = ok && r.ok();
    }
    j["suites"] = arr;
    j["ok"] = ok;
    return j.dump(2);
}

std::string report_text(const SuiteReport& r) {
    std::ostringstream os;
    os << (r.ok() ? "ok   " : "FAIL ") << r.name << ": " << r.passed << "/" << r.cases << " passed";
    if (r.battery) os << " (" << r.battery << " by battery)";
    if (r.skipped) os << ", " << r.skipped << " skipped";
    if (r.failed) os << ", " << r.failed << " failed";
    os << " [" << std::fixed;
    os.precision(2);
    os << r.seconds << "s]";
    if (r.first) {
        os << "\n     first failure: case " << r.first->index << ": " << r.first->detail;
        os << "\n     replay: " << r.first->replay;
        if (!r.first->expr.empty()) os << "\n     expression: " << r.first->expr;
    }
    for (auto& s : r.skip_reasons) os << "\n     skipped: " << s;
    return os.str();
}

}
