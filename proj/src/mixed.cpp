#include "wittforge/mixed.hpp"
#include "wittforge/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace wf {

namespace {
const QuaternionAlgebra& dummy_algebra() {
    static const QuaternionAlgebra A(-1, -1);
    return A;
}
}

AlgebraWithInvolution AlgebraWithInvolution::quaternion(const QuaternionAlgebra& Q, const InvolutionSpec& s) {
    AlgebraWithInvolution A;
    A.quat = Q;
    A.inv = s;
    if (s.kind == InvolutionSpec::Kind::Inner && !(s.u.alg == Q))
        domain_error("involution element lives in a different algebra");
    return A;
}

const QuaternionAlgebra& AlgebraWithInvolution::algebra() const { return quat ? *quat : dummy_algebra(); }

bool AlgebraWithInvolution::operator==(const AlgebraWithInvolution& o) const {
    if (is_base() || o.is_base()) return is_base() == o.is_base();
    if (!(*quat == *o.quat) || inv.kind != o.inv.kind) return false;
    return inv.kind == InvolutionSpec::Kind::Canonical || inv.u == o.inv.u;
}

std::string to_string(const AlgebraWithInvolution& A) {
    if (A.is_base()) return "Base";
    std::string inv = A.inv.kind == InvolutionSpec::Kind::Canonical ? "gamma" : "inner(" + to_string(A.inv.u) + ")";
    return to_string(*A.quat) + ", " + inv;
}

Quat element(const AlgebraWithInvolution& A, const Rational& w, const Rational& x, const Rational& y,
             const Rational& z) {
    if (A.is_base() && (x != 0 || y != 0 || z != 0)) domain_error("base field elements are rational");
    return Quat(A.algebra(), w, x, y, z);
}

Quat sigma(const AlgebraWithInvolution& A, const Quat& e) { return A.is_base() ? e : involution_apply(A.inv, e); }

Rational reduced_trace(const AlgebraWithInvolution& A, const Quat& e) { return A.is_base() ? e.w : trd(e); }
Rational reduced_norm(const AlgebraWithInvolution& A, const Quat& e) { return A.is_base() ? e.w : nrd(e); }

std::vector<Quat> algebra_basis(const AlgebraWithInvolution& A) {
    if (A.is_base()) return {Quat(dummy_algebra(), 1)};
    std::vector<Quat> b;
    for (int s = 0; s < 4; ++s) b.push_back(Quat::basis(*A.quat, s));
    return b;
}

std::pair<std::vector<Quat>, std::vector<Quat>> sym_skew(const AlgebraWithInvolution& A) {
    if (A.is_base()) return {{Quat(dummy_algebra(), 1)}, {}};
    return sym_skew_basis(*A.quat, A.inv);
}

int symmetry_sign(const AlgebraWithInvolution& A, const Quat& e) {
    Quat s = sigma(A, e);
    if (s == e) return 1;
    if (s == -e) return -1;
    return 0;
}

namespace {
void check_entry(const AlgebraWithInvolution& A, int eps, const Quat& e) {
    if (!(e.alg == A.algebra())) domain_error("entry " + to_string(e) + " lives in a different algebra");
    if (A.is_base() && !e.is_scalar()) domain_error("base field entries must be rational");
    if (reduced_norm(A, e) == 0) domain_error("entry " + to_string(e) + " is not invertible");
    if (symmetry_sign(A, e) != eps)
        domain_error("entry " + to_string(e) + " is not " + (eps == 1 ? "symmetric" : "skew-symmetric") +
                     " for the involution");
}
}

HermForm::HermForm(AlgebraWithInvolution A, int eps, std::vector<Quat> e)
    : ambient(std::move(A)), epsilon(eps), entries(std::move(e)) {
    if (eps != 1 && eps != -1) domain_error("sign must be +1 or -1");
    for (auto& x : entries) check_entry(ambient, eps, x);
}

std::string to_string(const HermForm& h) {
    std::string s = "h<";
    for (std::size_t i = 0; i < h.entries.size(); ++i) {
        if (i) s += ",";
        s += to_string(h.entries[i]);
    }
    s += ">@(" + to_string(h.ambient) + ")";
    if (h.epsilon == -1) s += " eps=-1";
    return s;
}

QuadraticForm trace_form_gram(const AlgebraWithInvolution& A, const Quat& a, const Quat& b) {
    if (reduced_norm(A, a) == 0 || reduced_norm(A, b) == 0) domain_error("trace form: entries must be invertible");
    int sa = symmetry_sign(A, a), sb = symmetry_sign(A, b);
    if (sa == 0 || sb == 0) domain_error("trace form: entries must be symmetric or skew-symmetric");
    if (sa != sb) domain_error("trace form: entries of different sign");
    auto basis = algebra_basis(A);
    const std::size_t n = basis.size();
    Quat sb_ = sigma(A, b);
    std::vector<Quat> left;
    for (auto& e : basis) left.push_back(sigma(A, e) * a);
    RatMatrix g(n, std::vector<Rational>(n));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) g[s][t] = reduced_trace(A, left[s] * basis[t] * sb_);
    return diagonalize(g);
}

QuadraticForm herm_product(const HermForm& h1, const HermForm& h2) {
    if (!(h1.ambient == h2.ambient)) domain_error("herm_product: forms over different algebras");
    if (h1.epsilon != h2.epsilon) domain_error("herm_product: forms of different sign");
    QuadraticForm r;
    for (auto& a : h1.entries)
        for (auto& b : h2.entries) r = qsum(r, trace_form_gram(h1.ambient, a, b));
    return r;
}

QuadraticForm quaternion_closed_form_scalar(const QuaternionAlgebra& Q, const Rational& a, const Rational& b) {
    if (a == 0 || b == 0) domain_error("closed form: scalars must be nonzero");
    return qscale(2 * a * b, norm_form(Q));
}

QuadraticForm quaternion_closed_form_pure(const Quat& z1, const Quat& z2) {
    if (!z1.is_pure() || !z2.is_pure()) domain_error("closed form: entries must be pure quaternions");
    if (nrd(z1) == 0 || nrd(z2) == 0) domain_error("closed form: entries must be invertible");
    const QuaternionAlgebra& Q = z1.alg;
    Rational t = trd(z1 * z2);
    if (t == 0) return hyperbolic(2);
    // w pure, anticommuting with z1 and invertible, so that Q = (z1^2, w^2)
    Rational zz = trd(z1 * z1);
    std::optional<Quat> w;
    for (int s = 1; s <= 3 && !w; ++s) {
        Quat e = Quat::basis(Q, s);
        Quat c = e - Rational(trd(e * z1) / zz) * z1;
        if (nrd(c) != 0) w = c;
    }
    if (!w) {
        Quat c = Quat::basis(Q, 1) + Quat::basis(Q, 2);
        c = c - Rational(trd(c * z1) / zz) * z1;
        if (nrd(c) == 0) internal_error("closed form: no invertible element orthogonal to z1");
        w = c;
    }
    Rational z1sq = (z1 * z1).w, z2sq = (z2 * z2).w, wsq = (*w * *w).w;
    return qscale(-t, pfister({z1sq, z2sq * wsq}));
}

QuadraticForm jacobson_qh(const HermForm& h) {
    if (h.ambient.is_base() || h.ambient.inv.kind != InvolutionSpec::Kind::Canonical)
        domain_error("jacobson_qh: needs a quaternion algebra with its canonical involution");
    if (h.epsilon != 1) domain_error("jacobson_qh: needs a hermitian form");
    QuadraticForm a;
    for (auto& e : h.entries) a.entries.push_back(e.w);
    return qtensor(a, norm_form(*h.ambient.quat));
}

std::string slot_name(Slot s) {
    switch (s) {
    case Slot::Even: return "even (0,0)";
    case Slot::EvenSkew: return "even-skew (0,1)";
    case Slot::Orth: return "orthogonal (1,0)";
    case Slot::Symp: return "symplectic (1,1)";
    }
    return "?";
}

Slot slot_product(Slot a, Slot b) {
    auto bits = [](Slot s) {
        switch (s) {
        case Slot::Even: return 0;
        case Slot::EvenSkew: return 1;
        case Slot::Orth: return 2;
        default: return 3;
        }
    };
    static const Slot from[4] = {Slot::Even, Slot::EvenSkew, Slot::Orth, Slot::Symp};
    return from[bits(a) ^ bits(b)];
}

bool MixedGWElement::is_homogeneous() const { return slot().has_value(); }

std::optional<Slot> MixedGWElement::slot() const {
    std::vector<Slot> s;
    if (c00.virtual_dim != 0 || !c00.witt.empty()) s.push_back(Slot::Even);
    if (c01 != 0) s.push_back(Slot::EvenSkew);
    if (!orth.empty()) s.push_back(Slot::Orth);
    if (!symp.empty()) s.push_back(Slot::Symp);
    if (s.size() > 1) return std::nullopt;
    return s.empty() ? Slot::Even : s[0];
}

namespace {

Quat normalize_entry(const Quat& e) {
    Integer num = 0, den = 1;
    for (int s = 0; s < 4; ++s) {
        const Rational& c = e.coeff(s);
        if (c == 0) continue;
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    if (num == 0) return e;
    Rational content(num, den);
    content.canonicalize();
    Rational scale = Rational(square_class(content).rep) / content;
    return scale * e;
}

void reduce_odd(const AlgebraWithInvolution& A, int type, OddPart& o) {
    for (auto& e : o.entries) e = normalize_entry(e);
    if (A.is_base()) {
        if (type == -1) {
            if (!o.entries.empty()) internal_error("base symplectic copy carries no diagonal entries");
            return;
        }
        QuadraticForm q;
        for (auto& e : o.entries) q.entries.push_back(e.w);
        q = anisotropic_part(q);
        o.entries.clear();
        for (auto& a : q.entries) o.entries.push_back(element(A, a));
        return;
    }
    if (type == -1 && is_split(*A.quat)) {
        o.entries.clear();
        return;
    }
    std::vector<Quat> kept;
    std::vector<bool> dead(o.entries.size(), false);
    for (std::size_t i = 0; i < o.entries.size(); ++i) {
        if (dead[i]) continue;
        for (std::size_t j = i + 1; j < o.entries.size(); ++j)
            if (!dead[j] && o.entries[j] == -o.entries[i]) {
                dead[i] = dead[j] = true;
                break;
            }
        if (!dead[i]) kept.push_back(o.entries[i]);
    }
    o.entries = kept;
}

void check_same(const MixedGWElement& x, const MixedGWElement& y) {
    if (!(x.ambient == y.ambient))
        domain_error("elements over different algebras: " + to_string(x.ambient) + " vs " + to_string(y.ambient));
}

OddPart scale_odd(const AlgebraWithInvolution& A, const GWClass& q, const OddPart& o) {
    OddPart r;
    r.rank = q.virtual_dim * o.rank;
    for (auto& a : q.witt.entries)
        for (auto& e : o.entries) r.entries.push_back(a * e);
    (void)A;
    return r;
}

QuadraticForm entries_product(const AlgebraWithInvolution& A, const std::vector<Quat>& x, const std::vector<Quat>& y) {
    QuadraticForm r;
    for (auto& a : x)
        for (auto& b : y) r = qsum(r, trace_form_gram(A, a, b));
    return r;
}

}

MixedGWElement mixed_zero(const AlgebraWithInvolution& A) {
    MixedGWElement x;
    x.ambient = A;
    return x;
}

MixedGWElement mixed_one(const AlgebraWithInvolution& A) { return from_form(A, QuadraticForm{1}); }

MixedGWElement from_form(const AlgebraWithInvolution& A, const QuadraticForm& q) {
    MixedGWElement x = mixed_zero(A);
    x.c00 = gw_of(q);
    return x;
}

MixedGWElement from_herm(const HermForm& h) {
    MixedGWElement x = mixed_zero(h.ambient);
    int t = h.type();
    OddPart& o = x.odd(t);
    o.rank = (long)h.entries.size();
    o.entries = h.entries;
    reduce_odd(h.ambient, t, o);
    return x;
}

MixedGWElement skew_planes(const AlgebraWithInvolution& A, long n) {
    MixedGWElement x = mixed_zero(A);
    x.c01 = n;
    return x;
}

MixedGWElement odd_hyperbolic(const AlgebraWithInvolution& A, int type, long planes) {
    MixedGWElement x = mixed_zero(A);
    x.odd(type).rank = 2 * planes;
    return x;
}

Quat slot_unit(const AlgebraWithInvolution& A, int type) {
    int eps = type * A.type();
    if (eps == 1) return element(A, 1);
    if (A.is_base()) domain_error("no invertible skew-symmetric elements over the base field");
    if (A.inv.kind == InvolutionSpec::Kind::Inner) return A.inv.u;
    for (int s = 1; s <= 3; ++s) {
        Quat e = Quat::basis(*A.quat, s);
        if (nrd(e) != 0) return e;
    }
    internal_error("no invertible pure basis element");
}

MixedGWElement mixed_add(const MixedGWElement& x, const MixedGWElement& y) {
    check_same(x, y);
    MixedGWElement r = mixed_zero(x.ambient);
    r.c00 = gw_add(x.c00, y.c00);
    r.c01 = x.c01 + y.c01;
    for (int t : {1, -1}) {
        OddPart& o = r.odd(t);
        o.rank = x.odd(t).rank + y.odd(t).rank;
        o.entries = x.odd(t).entries;
        o.entries.insert(o.entries.end(), y.odd(t).entries.begin(), y.odd(t).entries.end());
        reduce_odd(r.ambient, t, o);
    }
    return r;
}

MixedGWElement mixed_neg(const MixedGWElement& x) {
    MixedGWElement r = x;
    r.c00 = gw_neg(x.c00);
    r.c01 = -x.c01;
    for (int t : {1, -1}) {
        OddPart& o = r.odd(t);
        o.rank = -o.rank;
        for (auto& e : o.entries) e = -e;
    }
    return r;
}

MixedGWElement mixed_sub(const MixedGWElement& x, const MixedGWElement& y) { return mixed_add(x, mixed_neg(y)); }

MixedGWElement mixed_mul(const MixedGWElement& x, const MixedGWElement& y) {
    check_same(x, y);
    const AlgebraWithInvolution& A = x.ambient;
    const long deg2 = (long)A.degree() * A.degree();
    MixedGWElement r = mixed_zero(A);

    QuadraticForm even = qtensor(x.c00.witt, y.c00.witt);
    long even_dim = x.c00.virtual_dim * y.c00.virtual_dim + 4 * x.c01 * y.c01;
    for (int t : {1, -1}) {
        const OddPart &a = x.odd(t), &b = y.odd(t);
        even_dim += deg2 * a.rank * b.rank;
        if (!a.entries.empty() && !b.entries.empty()) even = qsum(even, entries_product(A, a.entries, b.entries));
    }
    r.c00 = GWClass{even_dim, anisotropic_part(even)};

    long cross = deg2 * (x.orth.rank * y.symp.rank + x.symp.rank * y.orth.rank);
    if (cross % 2) internal_error("odd number of anti-symmetric half-planes");
    r.c01 = x.c00.virtual_dim * y.c01 + x.c01 * y.c00.virtual_dim + cross / 2;

    for (int t : {1, -1}) {
        OddPart o = scale_odd(A, x.c00, y.odd(t));
        OddPart o2 = scale_odd(A, y.c00, x.odd(t));
        o.rank += o2.rank + 2 * (x.c01 * y.odd(-t).rank + y.c01 * x.odd(-t).rank);
        o.entries.insert(o.entries.end(), o2.entries.begin(), o2.entries.end());
        reduce_odd(A, t, o);
        r.odd(t) = o;
    }
    return r;
}

MixedGWElement mixed_scale(long n, const MixedGWElement& x) {
    MixedGWElement r = mixed_zero(x.ambient);
    MixedGWElement base = n >= 0 ? x : mixed_neg(x);
    for (long i = 0; i < std::labs(n); ++i) r = mixed_add(r, base);
    return r;
}

MixedGWElement operator+(const MixedGWElement& x, const MixedGWElement& y) { return mixed_add(x, y); }
MixedGWElement operator-(const MixedGWElement& x, const MixedGWElement& y) { return mixed_sub(x, y); }
MixedGWElement operator*(const MixedGWElement& x, const MixedGWElement& y) { return mixed_mul(x, y); }

MixedWElement to_witt(const MixedGWElement& x) {
    return MixedWElement{x.ambient, x.c00.witt, x.orth.entries, x.symp.entries};
}

MixedGWElement lift(const MixedWElement& x) {
    MixedGWElement r = mixed_zero(x.ambient);
    r.c00 = GWClass{(long)x.c00.dim(), x.c00};
    r.orth = OddPart{(long)x.orth.size(), x.orth};
    r.symp = OddPart{(long)x.symp.size(), x.symp};
    return r;
}

MixedWElement operator+(const MixedWElement& x, const MixedWElement& y) { return to_witt(lift(x) + lift(y)); }
MixedWElement operator*(const MixedWElement& x, const MixedWElement& y) { return to_witt(lift(x) * lift(y)); }

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Equal: return "equal";
    case Verdict::Unequal: return "unequal";
    case Verdict::EqualByBattery: return "equal-by-battery";
    }
    return "?";
}

Verdict operator&&(Verdict a, Verdict b) {
    if (a == Verdict::Unequal || b == Verdict::Unequal) return Verdict::Unequal;
    if (a == Verdict::EqualByBattery || b == Verdict::EqualByBattery) return Verdict::EqualByBattery;
    return Verdict::Equal;
}

bool holds(Verdict v) { return v != Verdict::Unequal; }

HermForm morita_scale_transfer(const Quat& a, const HermForm& h) {
    const AlgebraWithInvolution& T = h.ambient;
    if (T.is_base()) {
        if (a.w == 0) domain_error("morita transfer: scaling element must be invertible");
        std::vector<Quat> out;
        for (auto& b : h.entries) out.push_back(a * b);
        return HermForm(T, h.epsilon, out);
    }
    const QuaternionAlgebra& Q = *T.quat;
    if (nrd(a) == 0) domain_error("morita transfer: scaling element must be invertible");
    // the source involution must be x -> a^{-1} gamma(x) a
    int ea = symmetry_sign(AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical()), a);
    if (ea == 0) domain_error("morita transfer: scaling element must be symmetric or skew for gamma");
    for (int s = 0; s < 4; ++s) {
        Quat e = Quat::basis(Q, s);
        if (!(involution_apply(T.inv, e) == inv(a) * conj(e) * a))
            domain_error("morita transfer: source involution is not gamma twisted by the scaling element");
    }
    std::vector<Quat> out;
    for (auto& b : h.entries) out.push_back(a * b);
    return HermForm(AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical()), h.epsilon * ea, out);
}

MixedGWElement to_canonical(const MixedGWElement& x) {
    if (x.ambient.is_base() || x.ambient.inv.kind == InvolutionSpec::Kind::Canonical) return x;
    const Quat& u = x.ambient.inv.u;
    MixedGWElement r = x;
    r.ambient = AlgebraWithInvolution::quaternion(*x.ambient.quat, InvolutionSpec::canonical());
    for (int t : {1, -1}) {
        for (auto& e : r.odd(t).entries) e = u * e;
        reduce_odd(r.ambient, t, r.odd(t));
    }
    return r;
}

MixedWElement to_canonical(const MixedWElement& x) { return to_witt(to_canonical(lift(x))); }

QuadraticForm split_skew_image(const std::vector<Quat>& entries) {
    QuadraticForm r;
    for (auto& z : entries) {
        Mat2 m = split_morita(z);
        // the symmetric form (v, w) -> omega(v, Z w) for the standard alternating omega
        RatMatrix g{{m[1][0], m[1][1]}, {-m[0][0], -m[0][1]}};
        r = qsum(r, diagonalize(g));
    }
    return r;
}

namespace {

Verdict skew_battery(const QuaternionAlgebra& Q, const std::vector<Quat>& d) {
    auto A = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    if (d.size() % 2) return Verdict::Unequal;
    Rational disc = 1;
    for (auto& z : d) disc *= nrd(z);
    if (!square_class(disc).is_trivial()) return Verdict::Unequal;
    std::vector<Quat> tests;
    for (int s = 1; s <= 3; ++s) tests.push_back(Quat::basis(Q, s));
    tests.insert(tests.end(), d.begin(), d.end());
    for (auto& t : tests) {
        if (nrd(t) == 0) continue;
        if (!witt_trivial(entries_product(A, d, {t}))) return Verdict::Unequal;
    }
    return Verdict::EqualByBattery;
}

}

Verdict odd_witt_equal(const AlgebraWithInvolution& A0, int type, const std::vector<Quat>& x,
                       const std::vector<Quat>& y) {
    MixedGWElement dx = mixed_zero(A0);
    dx.odd(type) = OddPart{(long)(x.size() + y.size()), x};
    for (auto& e : y) dx.odd(type).entries.push_back(-e);
    reduce_odd(A0, type, dx.odd(type));
    MixedGWElement d = to_canonical(dx);
    const AlgebraWithInvolution& A = d.ambient;
    const std::vector<Quat>& D = d.odd(type).entries;
    if (D.empty()) return Verdict::Equal;
    if (A.is_base()) {
        if (type == -1) return Verdict::Equal;
        QuadraticForm q;
        for (auto& e : D) q.entries.push_back(e.w);
        return witt_trivial(q) ? Verdict::Equal : Verdict::Unequal;
    }
    const QuaternionAlgebra& Q = *A.quat;
    if (type == -1) {
        // hermitian over gamma: Jacobson's trace form
        QuadraticForm a;
        for (auto& e : D) a.entries.push_back(e.w);
        return witt_trivial(qtensor(a, norm_form(Q))) ? Verdict::Equal : Verdict::Unequal;
    }
    if (Q.a == 1) return witt_trivial(split_skew_image(D)) ? Verdict::Equal : Verdict::Unequal;
    return skew_battery(Q, D);
}

Verdict mixed_equal(const MixedGWElement& x, const MixedGWElement& y) {
    check_same(x, y);
    if (!gw_equal(x.c00, y.c00) || x.c01 != y.c01) return Verdict::Unequal;
    if (x.orth.rank != y.orth.rank || x.symp.rank != y.symp.rank) return Verdict::Unequal;
    return odd_witt_equal(x.ambient, 1, x.orth.entries, y.orth.entries) &&
           odd_witt_equal(x.ambient, -1, x.symp.entries, y.symp.entries);
}

Verdict mixed_equal(const MixedWElement& x, const MixedWElement& y) {
    if (!(x.ambient == y.ambient)) domain_error("elements over different algebras");
    if (!witt_equal(x.c00, y.c00)) return Verdict::Unequal;
    return odd_witt_equal(x.ambient, 1, x.orth, y.orth) && odd_witt_equal(x.ambient, -1, x.symp, y.symp);
}

RdimReport rdim_maps(const MixedGWElement& x) {
    RdimReport r;
    long deg = x.ambient.degree();
    r.graded[0] = x.c00.virtual_dim;
    r.graded[1] = 2 * x.c01;
    r.graded[2] = deg * x.orth.rank;
    r.graded[3] = deg * x.symp.rank;
    for (int i = 0; i < 4; ++i) {
        r.total += r.graded[i];
        r.mod2[i] = (int)(((r.graded[i] % 2) + 2) % 2);
    }
    return r;
}

namespace {
std::string odd_string(const OddPart& o) {
    std::ostringstream os;
    os << "[rank " << o.rank << "] <";
    for (std::size_t i = 0; i < o.entries.size(); ++i) os << (i ? "," : "") << to_string(o.entries[i]);
    os << ">";
    return os.str();
}
}

std::string to_string(const MixedGWElement& x) {
    std::ostringstream os;
    os << "c00 = " << to_string(x.c00) << "; c01 = " << x.c01 << "H-; orth = " << odd_string(x.orth)
       << "; symp = " << odd_string(x.symp);
    return os.str();
}

std::string to_string(const MixedWElement& x) {
    std::ostringstream os;
    os << "c00 = " << to_string(x.c00) << "; orth = " << odd_string(OddPart{(long)x.orth.size(), x.orth})
       << "; symp = " << odd_string(OddPart{(long)x.symp.size(), x.symp});
    return os.str();
}

namespace {

bool in_I4(const QuadraticForm& q) { return in_In(q, 3) && invariants(q).signature % 16 == 0; }

bool in_level(const QuadraticForm& q, int n) { return n <= 3 ? in_In(q, n) : in_I4(q); }

// odd component of the canonical model, n >= 2
FiltrationResult odd_member(const QuaternionAlgebra& Q, int type, const std::vector<Quat>& D, int n) {
    auto A = AlgebraWithInvolution::quaternion(Q, InvolutionSpec::canonical());
    if (D.empty()) return {true, true};
    if (type == -1) {
        if (is_split(Q)) return {true, true};
        if (n == 2) return {D.size() % 2 == 0, true};
        if (D.size() % 2) return {false, true};
        QuadraticForm a;
        for (auto& e : D) a.entries.push_back(e.w);
        bool ok = in_level(qtensor(a, norm_form(Q)), n + 1);
        return {ok, !ok};
    }
    if (Q.a == 1) return {in_In(split_skew_image(D), n), true};
    if (D.size() % 2) return {false, true};
    Rational disc = 1;
    for (auto& z : D) disc *= nrd(z);
    if (!square_class(disc).is_trivial()) return {false, true};
    std::vector<Quat> tests;
    for (int s = 1; s <= 3; ++s) tests.push_back(Quat::basis(Q, s));
    tests.insert(tests.end(), D.begin(), D.end());
    for (auto& t : tests) {
        if (nrd(t) == 0) continue;
        QuadraticForm p = entries_product(A, D, {t});
        for (int m = 3; m <= n + 1; ++m)
            if (!in_level(p, m)) return {false, true};
    }
    return {true, false};
}

}

FiltrationResult filtration_membership(const MixedWElement& x0, int n, bool homogeneous) {
    if (n < 0) domain_error("filtration depth must be nonnegative");
    if (n > 3) unsupported("filtration depth " + std::to_string(n) + " is beyond the supported bound 3");
    if (n == 0) return {true, true};
    MixedWElement x = to_canonical(x0);
    if (x.ambient.is_base()) {
        QuadraticForm q0 = x.c00, q1;
        for (auto& e : x.orth) q1.entries.push_back(e.w);
        if (homogeneous) return {in_In(q0, n) && in_In(q1, n), true};
        return {in_In(q0, n - 1) && in_In(q1, n - 1) && in_In(qsum(q0, q1), n), true};
    }
    FiltrationResult r{in_In(x.c00, n), true};
    if (!r.member) return r;
    if (n == 1) return r;
    for (int t : {1, -1}) {
        FiltrationResult o = odd_member(*x.ambient.quat, t, t == 1 ? x.orth : x.symp, n);
        if (!o.member) return o;
        r.exact = r.exact && o.exact;
    }
    return r;
}

}
