#include "wittforge/crossed.hpp"
#include "wittforge/error.hpp"

namespace wf {

namespace {

struct LField {
    Rational d;
    LElem mul(const LElem& a, const LElem& b) const { return {a.x * b.x + d * a.y * b.y, a.x * b.y + a.y * b.x}; }
    LElem conj(const LElem& a) const { return {a.x, -a.y}; }
    Rational norm(const LElem& a) const { return a.x * a.x - d * a.y * a.y; }
    LElem inv(const LElem& a) const {
        Rational n = norm(a);
        if (n == 0) domain_error("element of L is not invertible");
        return {a.x / n, -a.y / n};
    }
    // g in {0, 1}: identity or conjugation
    LElem act(int g, const LElem& a) const { return g ? conj(a) : a; }
};

std::string lstr(const LElem& l) { return "(" + to_string(l.x) + "+" + to_string(l.y) + "*sqrt(d))"; }

int sigma_index(const CrossedData& data) { return data.sigma == LInvolution::Conjugation ? 1 : 0; }

void check_data(const CrossedData& data) {
    if (data.c == 0) domain_error("crossed: c must be nonzero");
    if (is_square(data.d)) domain_error("crossed: d = " + to_string(data.d) + " is a square, L is not a field");
    LField L{data.d};
    if (L.norm(data.mu_s) == 0) domain_error("crossed: mu_s must be invertible");
    const int sg = sigma_index(data);
    auto mu = [&](int g) { return g ? data.mu_s : LElem{1, 0}; };
    auto alpha = [&](int g, int h) { return g && h ? LElem{data.c, 0} : LElem{1, 0}; };
    const char* names[2] = {"1", "s"};
    // G is abelian of order 2, so bar(g) = g and sigma_g = g sigma
    for (int g = 0; g < 2; ++g) {
        LElem lhs = L.mul(mu(g), L.act(g ^ sg, mu(g)));
        if (!(lhs == LElem{1, 0}))
            domain_error(std::string("crossed: mu_bar(g) * sigma_g(mu_g) = 1 fails for g = ") + names[g] +
                         " (got " + lstr(lhs) + ")");
    }
    for (int g = 0; g < 2; ++g)
        for (int h = 0; h < 2; ++h) {
            int gh = g ^ h;
            LElem lhs = L.mul(L.mul(mu(h), L.act(h, mu(g))), alpha(h, g));
            LElem rhs = L.mul(mu(gh), L.act(gh ^ sg, alpha(g, h)));
            if (!(lhs == rhs))
                domain_error(std::string("crossed: mu_h * bar(h)(mu_g) * alpha(bar h, bar g) = mu_gh * "
                                         "sigma_bar(gh)(alpha(g,h)) fails for g = ") +
                             names[g] + ", h = " + names[h]);
        }
}

// the involution determined by the data, as a map on quaternions written lambda + lambda' j
Quat apply_data_involution(const CrossedData& data, const QuaternionAlgebra& Q, const Quat& q) {
    LField L{data.d};
    const int sg = sigma_index(data);
    LElem lam{q.w, q.x}, lam2{q.y, q.z};
    LElem a = L.act(sg, lam);
    LElem b = L.mul(data.mu_s, L.conj(L.act(sg, lam2)));
    return Quat(Q, a.x, a.y, b.x, b.y);
}

}

std::string to_string(const CrossedData& data) {
    return "crossed(" + to_string(data.d) + "," + to_string(data.c) + "," +
           (data.sigma == LInvolution::Conjugation ? "conj" : "id") + "," + to_string(data.mu_s.x) +
           (data.mu_s.y == 0 ? "" : "+" + to_string(data.mu_s.y) + "*i") + ")";
}

Quat CrossedAlgebra::embed(const LElem& l) const { return Quat(Q, l.x, l.y); }

Quat CrossedAlgebra::element(int t, const LElem& xi) const {
    if (t == 0) return embed(xi);
    return Quat(Q, 0, 0, xi.x, xi.y);
}

CrossedAlgebra build_crossed(const CrossedData& data) {
    check_data(data);
    QuaternionAlgebra Q(data.d, data.c);
    std::vector<Quat> skew;
    std::vector<std::vector<Rational>> rows;
    for (int s = 0; s < 4; ++s) {
        Quat e = Quat::basis(Q, s);
        Quat im = apply_data_involution(data, Q, e);
        if (!(im == e) && !(im == -e)) break;
        if (im == -e) skew.push_back(e);
    }
    InvolutionSpec inv;
    if (skew.size() == 3) {
        inv = InvolutionSpec::canonical();
    } else {
        // skew part of an orthogonal involution on a quaternion algebra is a line
        std::vector<Quat> sk;
        Quat basis[4] = {Quat::basis(Q, 0), Quat::basis(Q, 1), Quat::basis(Q, 2), Quat::basis(Q, 3)};
        for (int s = 1; s < 4; ++s) {
            Quat v = basis[s] - apply_data_involution(data, Q, basis[s]);
            if (!(v == Quat(Q))) sk.push_back(v);
        }
        if (sk.empty()) internal_error("crossed: involution fixes everything");
        inv = InvolutionSpec::inner(sk[0]);
    }
    for (int s = 0; s < 4; ++s) {
        Quat e = Quat::basis(Q, s);
        if (!(involution_apply(inv, e) == apply_data_involution(data, Q, e)))
            internal_error("crossed: the data do not define an anti-automorphism");
    }
    return CrossedAlgebra{data, Q, inv};
}

CrossedData read_back(const CrossedAlgebra& A) {
    CrossedData out;
    out.d = A.Q.a;
    Quat j = Quat::basis(A.Q, 2);
    Quat jj = j * j;
    out.c = jj.w;
    Quat i = Quat::basis(A.Q, 1);
    Quat si = involution_apply(A.inv, i);
    if (si == i) out.sigma = LInvolution::Identity;
    else if (si == -i) out.sigma = LInvolution::Conjugation;
    else domain_error("crossed: the involution does not preserve L");
    Quat mu = involution_apply(A.inv, j) * inv(j);
    if (mu.y != 0 || mu.z != 0) domain_error("crossed: sigma(u_s) u_s^-1 is not in L");
    out.mu_s = LElem{mu.w, mu.x};
    return out;
}

namespace {

QuadraticForm transfer_sum(const CrossedData& data, bool over_L, const std::vector<LElem>& omegas) {
    QuadraticForm r;
    for (auto& w : omegas) {
        if (over_L) {
            r = qsum(r, trace_transfer_quadratic(data.d, w.x, w.y));
        } else {
            if (w.y != 0) internal_error("crossed: omega does not lie in the fixed field");
            r = qsum(r, qscale(2 * w.x, pfister({data.d})));
        }
    }
    return r;
}

LElem to_l(const Quat& q) {
    if (q.y != 0 || q.z != 0) internal_error("crossed: element does not lie in L");
    return LElem{q.w, q.x};
}

}

QuadraticForm trace_form_crossed(const CrossedData& data, int t, const LElem& xi) {
    CrossedAlgebra A = build_crossed(data);
    auto amb = A.ambient();
    Quat a = A.element(t, xi);
    if (nrd(a) == 0) domain_error("crossed: element is not invertible");
    if (symmetry_sign(amb, a) != 1) domain_error("crossed: element is not symmetric");
    // G is abelian, so the commutator condition selects every g when t = 1 and none otherwise
    if (t != 0) return hyperbolic(2);
    std::vector<LElem> omegas;
    for (int g = 0; g < 2; ++g) {
        Quat u = A.element(g, {1, 0});
        omegas.push_back(to_l(sigma(amb, u) * a * u));
    }
    return transfer_sum(data, data.sigma == LInvolution::Identity, omegas);
}

QuadraticForm product_crossed(const CrossedData& data, int s, const LElem& xi, int t, const LElem& eta, int eps) {
    CrossedAlgebra A = build_crossed(data);
    auto amb = A.ambient();
    Quat x = A.element(s, xi), y = A.element(t, eta);
    if (nrd(x) == 0 || nrd(y) == 0) domain_error("crossed: entries must be invertible");
    if (symmetry_sign(amb, x) != eps || symmetry_sign(amb, y) != eps)
        domain_error("crossed: entries are not " + std::string(eps == 1 ? "symmetric" : "skew-symmetric"));
    if (s != t) return hyperbolic(2);
    std::vector<LElem> omegas;
    Quat xinv = inv(x);
    for (int g = 0; g < 2; ++g) {
        Quat u = A.element(g, {1, 0});
        omegas.push_back(to_l(xinv * sigma(amb, u) * y * u));
    }
    // sigma' = Int(x^-1) sigma restricts to sigma s on L
    bool fixed_is_L = (sigma_index(data) ^ s) == 0;
    return transfer_sum(data, fixed_is_L, omegas);
}

CrossedData gauge(const CrossedData& data, const LElem& c_s) {
    LField L{data.d};
    if (L.norm(c_s) == 0) domain_error("gauge: cochain must be invertible");
    CrossedData out = data;
    out.c = L.norm(c_s) * data.c;
    int sg = sigma_index(data);
    out.mu_s = L.mul(L.mul(L.act(1 ^ sg, c_s), L.inv(c_s)), data.mu_s);
    return out;
}

LElem gauge_coordinate(int t, const LElem& xi, const LElem& c_s, const Rational& d) {
    if (t == 0) return xi;
    LField L{d};
    return L.mul(xi, L.inv(c_s));
}

}
