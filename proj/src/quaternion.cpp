#include "wittforge/quaternion.hpp"
#include "wittforge/error.hpp"

#include <algorithm>

namespace wf {

BrauerClass operator+(const BrauerClass& x, const BrauerClass& y) {
    BrauerClass r;
    std::set_symmetric_difference(x.places.begin(), x.places.end(), y.places.begin(), y.places.end(),
                                  std::inserter(r.places, r.places.end()));
    return r;
}

std::string to_string(const BrauerClass& b) {
    std::string s = "{";
    bool first = true;
    for (auto& v : b.places) {
        if (!first) s += ",";
        s += to_string(v);
        first = false;
    }
    return s + "}";
}

QuaternionAlgebra::QuaternionAlgebra(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a == 0 || b == 0) domain_error("quaternion algebra needs nonzero structure constants");
}

std::string to_string(const QuaternionAlgebra& Q) { return "Q(" + to_string(Q.a) + "," + to_string(Q.b) + ")"; }

Quat Quat::basis(const QuaternionAlgebra& A, int s) {
    Quat q(A);
    q.coeff(s) = 1;
    return q;
}

const Rational& Quat::coeff(int s) const {
    switch (s) {
    case 0: return w;
    case 1: return x;
    case 2: return y;
    default: return z;
    }
}

Rational& Quat::coeff(int s) {
    switch (s) {
    case 0: return w;
    case 1: return x;
    case 2: return y;
    default: return z;
    }
}

namespace {
void same_alg(const Quat& p, const Quat& q) {
    if (!(p.alg == q.alg)) domain_error("quaternions from different algebras");
}
}

Quat operator+(const Quat& p, const Quat& q) {
    same_alg(p, q);
    return Quat(p.alg, p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z);
}

Quat operator-(const Quat& p, const Quat& q) {
    same_alg(p, q);
    return Quat(p.alg, p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z);
}

Quat operator-(const Quat& p) { return Quat(p.alg, -p.w, -p.x, -p.y, -p.z); }

Quat operator*(const Quat& p, const Quat& q) {
    same_alg(p, q);
    const Rational &a = p.alg.a, &b = p.alg.b;
    Rational ab = a * b;
    return Quat(p.alg,
                p.w * q.w + a * p.x * q.x + b * p.y * q.y - ab * p.z * q.z,
                p.w * q.x + p.x * q.w - b * p.y * q.z + b * p.z * q.y,
                p.w * q.y + p.y * q.w + a * p.x * q.z - a * p.z * q.x,
                p.w * q.z + p.z * q.w + p.x * q.y - p.y * q.x);
}

Quat operator*(const Rational& l, const Quat& p) { return Quat(p.alg, l * p.w, l * p.x, l * p.y, l * p.z); }

Quat conj(const Quat& p) { return Quat(p.alg, p.w, -p.x, -p.y, -p.z); }
Rational trd(const Quat& p) { return 2 * p.w; }

Rational nrd(const Quat& p) {
    const Rational &a = p.alg.a, &b = p.alg.b;
    return p.w * p.w - a * p.x * p.x - b * p.y * p.y + a * b * p.z * p.z;
}

Quat inv(const Quat& p) {
    Rational n = nrd(p);
    if (n == 0) domain_error("quaternion " + to_string(p) + " is a zero divisor");
    return Rational(1 / n) * conj(p);
}

std::string to_string(const Quat& q) {
    static const char* names[4] = {"", "i", "j", "k"};
    std::string s;
    for (int t = 0; t < 4; ++t) {
        const Rational& c = q.coeff(t);
        if (c == 0) continue;
        Rational m = abs(c);
        if (c < 0) s += "-";
        else if (!s.empty()) s += "+";
        if (t == 0) s += to_string(m);
        else if (m == 1) s += names[t];
        else s += to_string(m) + "*" + names[t];
    }
    return s.empty() ? "0" : s;
}

Quat quat_ops(QuatOp op, const Quat& p, const Quat* q) {
    switch (op) {
    case QuatOp::Mul:
        if (!q) domain_error("quat_ops: Mul needs two operands");
        return p * *q;
    case QuatOp::Conj: return conj(p);
    case QuatOp::Trd: return Quat(p.alg, trd(p));
    case QuatOp::Nrd: return Quat(p.alg, nrd(p));
    case QuatOp::Inv: return inv(p);
    }
    return p;
}

BrauerClass ramified_places(const QuaternionAlgebra& Q) {
    Integer a = square_class(Q.a).rep, b = square_class(Q.b).rep;
    PlaceSet P{Place::infinity(), Place::prime(2)};
    for (auto p : prime_divisors(a)) P.insert(Place::prime(p));
    for (auto p : prime_divisors(b)) P.insert(Place::prime(p));
    BrauerClass r;
    for (auto& v : P)
        if (hilbert_sf(a, b, v) == -1) r.places.insert(v);
    return r;
}

bool is_split(const QuaternionAlgebra& Q) { return ramified_places(Q).is_zero(); }

QuadraticForm norm_form(const QuaternionAlgebra& Q) { return pfister({Q.a, Q.b}); }

QuadraticForm norm_form_gram(const QuaternionAlgebra& Q) {
    // polarization of Nrd: (p,q) -> Trd(p conj(q)) / 2
    RatMatrix g(4, std::vector<Rational>(4));
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t)
            g[s][t] = trd(Quat::basis(Q, s) * conj(Quat::basis(Q, t))) / 2;
    return diagonalize(g);
}

InvolutionSpec InvolutionSpec::inner(const Quat& u) {
    if (!u.is_pure()) domain_error("inner involution needs a pure quaternion, got " + to_string(u));
    if (nrd(u) == 0) domain_error("inner involution needs an invertible quaternion, got " + to_string(u));
    InvolutionSpec s;
    s.kind = Kind::Inner;
    s.u = u;
    return s;
}

Quat involution_apply(const InvolutionSpec& s, const Quat& q) {
    if (s.kind == InvolutionSpec::Kind::Canonical) return conj(q);
    return inv(s.u) * conj(q) * s.u;
}

int involution_type(const InvolutionSpec& s) { return s.kind == InvolutionSpec::Kind::Canonical ? -1 : 1; }

namespace {
// kernel of a 4x4 rational matrix acting on coordinate columns
std::vector<std::array<Rational, 4>> kernel4(std::array<std::array<Rational, 4>, 4> m) {
    int row = 0;
    std::array<int, 4> pivcol{-1, -1, -1, -1};
    std::vector<int> piv_of_row;
    for (int c = 0; c < 4 && row < 4; ++c) {
        int r = row;
        while (r < 4 && m[r][c] == 0) ++r;
        if (r == 4) continue;
        std::swap(m[r], m[row]);
        Rational p = m[row][c];
        for (int k = 0; k < 4; ++k) m[row][k] /= p;
        for (int i = 0; i < 4; ++i) {
            if (i == row || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (int k = 0; k < 4; ++k) m[i][k] -= f * m[row][k];
        }
        pivcol[c] = row;
        ++row;
    }
    std::vector<std::array<Rational, 4>> out;
    for (int free = 0; free < 4; ++free) {
        if (pivcol[free] != -1) continue;
        std::array<Rational, 4> v{};
        v[free] = 1;
        for (int c = 0; c < 4; ++c)
            if (pivcol[c] != -1) v[c] = -m[pivcol[c]][free];
        out.push_back(v);
    }
    return out;
}
}

std::pair<std::vector<Quat>, std::vector<Quat>> sym_skew_basis(const QuaternionAlgebra& Q, const InvolutionSpec& s) {
    std::array<std::array<Rational, 4>, 4> plus{}, minus{};
    for (int t = 0; t < 4; ++t) {
        Quat img = involution_apply(s, Quat::basis(Q, t));
        for (int r = 0; r < 4; ++r) {
            Rational e = (r == t) ? 1 : 0;
            plus[r][t] = img.coeff(r) - e;
            minus[r][t] = img.coeff(r) + e;
        }
    }
    auto to_quats = [&](const std::vector<std::array<Rational, 4>>& vs) {
        std::vector<Quat> out;
        for (auto& v : vs) out.emplace_back(Q, v[0], v[1], v[2], v[3]);
        return out;
    };
    return {to_quats(kernel4(plus)), to_quats(kernel4(minus))};
}

TensorElement TensorElement::simple(const Quat& x, const Quat& y) {
    same_alg(x, y);
    TensorElement e;
    e.alg = x.alg;
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) e.t[s][t] = x.coeff(s) * y.coeff(t);
    return e;
}

TensorElement TensorElement::unit(const QuaternionAlgebra& A) {
    TensorElement e;
    e.alg = A;
    e.t[0][0] = 1;
    return e;
}

TensorElement operator+(const TensorElement& p, const TensorElement& q) {
    TensorElement r = p;
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) r.t[s][t] += q.t[s][t];
    return r;
}

TensorElement operator*(const TensorElement& p, const TensorElement& q) {
    if (!(p.alg == q.alg)) domain_error("tensor elements over different algebras");
    const QuaternionAlgebra& A = p.alg;
    std::array<std::array<Quat, 4>, 4> prod;
    for (int s = 0; s < 4; ++s)
        for (int u = 0; u < 4; ++u) prod[s][u] = Quat::basis(A, s) * Quat::basis(A, u);
    TensorElement r;
    r.alg = A;
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) {
            if (p.t[s][t] == 0) continue;
            for (int u = 0; u < 4; ++u)
                for (int v = 0; v < 4; ++v) {
                    if (q.t[u][v] == 0) continue;
                    Rational c = p.t[s][t] * q.t[u][v];
                    const Quat &l = prod[s][u], &rr = prod[t][v];
                    for (int m = 0; m < 4; ++m) {
                        if (l.coeff(m) == 0) continue;
                        for (int n = 0; n < 4; ++n)
                            if (rr.coeff(n) != 0) r.t[m][n] += c * l.coeff(m) * rr.coeff(n);
                    }
                }
        }
    return r;
}

TensorElement apply_each(const TensorElement& g, const InvolutionSpec* left, const InvolutionSpec* right) {
    const QuaternionAlgebra& A = g.alg;
    TensorElement r;
    r.alg = A;
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) {
            if (g.t[s][t] == 0) continue;
            Quat l = Quat::basis(A, s), rr = Quat::basis(A, t);
            if (left) l = involution_apply(*left, l);
            if (right) rr = involution_apply(*right, rr);
            TensorElement e = TensorElement::simple(g.t[s][t] * l, rr);
            r = r + e;
        }
    return r;
}

TensorElement goldman_element(const QuaternionAlgebra& Q) {
    // sum of u_k (x) u^k over a basis and its Trd-dual basis
    TensorElement g;
    g.alg = Q;
    g.t[0][0] = Rational(1, 2);
    g.t[1][1] = 1 / (2 * Q.a);
    g.t[2][2] = 1 / (2 * Q.b);
    g.t[3][3] = -1 / (2 * Q.a * Q.b);
    for (auto& row : g.t)
        for (auto& c : row) c.canonicalize();
    return g;
}

Quat twisted_sandwich(const TensorElement& t, const Quat& x, const InvolutionSpec& s) {
    Quat r(x.alg);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (t.t[a][b] == 0) continue;
            r = r + t.t[a][b] * (Quat::basis(x.alg, a) * x * involution_apply(s, Quat::basis(x.alg, b)));
        }
    return r;
}

Quat sandwich(const TensorElement& t, const Quat& x) {
    Quat r(x.alg);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (t.t[a][b] == 0) continue;
            r = r + t.t[a][b] * (Quat::basis(x.alg, a) * x * Quat::basis(x.alg, b));
        }
    return r;
}

Mat2 split_morita(const Quat& q) {
    if (q.alg.a != 1) unsupported("split_morita: only the family Q(1,b) has an explicit splitting");
    const Rational& b = q.alg.b;
    // w + x diag(1,-1) + y [[0,b],[1,0]] + z [[0,b],[-1,0]]
    return Mat2{{{q.w + q.x, b * (q.y + q.z)}, {q.y - q.z, q.w - q.x}}};
}

Mat2 mat_mul(const Mat2& p, const Mat2& q) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
    return r;
}

Mat2 adjugate(const Mat2& m) { return Mat2{{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}}; }

}
