#include "wittforge/lambda.hpp"
#include "wittforge/error.hpp"

namespace wf {

MixedGWElement lambda2_line(const AlgebraWithInvolution& A, const Quat& a) {
    if (A.is_base()) return mixed_zero(A);
    auto [sym, skew] = sym_skew(A);
    const auto& carrier = A.type() == 1 ? skew : sym;
    Quat sa = sigma(A, a);
    RatMatrix g(carrier.size(), std::vector<Rational>(carrier.size()));
    for (std::size_t s = 0; s < carrier.size(); ++s)
        for (std::size_t t = 0; t < carrier.size(); ++t)
            g[s][t] = trd(sigma(A, carrier[s]) * a * carrier[t] * sa);
    return from_form(A, qscale(Rational(1, 2), diagonalize(g)));
}

namespace {

LambdaSeries unit_series(const AlgebraWithInvolution& A, std::size_t order) {
    LambdaSeries s;
    s.coeffs.assign(order + 1, mixed_zero(A));
    s.coeffs[0] = mixed_one(A);
    return s;
}

LambdaSeries poly_series(const AlgebraWithInvolution& A, std::size_t order, std::vector<MixedGWElement> c) {
    LambdaSeries s = unit_series(A, order);
    for (std::size_t d = 1; d < c.size() && d <= order; ++d) s.coeffs[d] = c[d];
    return s;
}

LambdaSeries series_inverse(const LambdaSeries& s) {
    const AlgebraWithInvolution& A = s.coeffs[0].ambient;
    LambdaSeries b = unit_series(A, s.order());
    for (std::size_t n = 1; n <= s.order(); ++n) {
        MixedGWElement acc = mixed_zero(A);
        for (std::size_t k = 1; k <= n; ++k) acc = acc + s.coeffs[k] * b.coeffs[n - k];
        b.coeffs[n] = mixed_neg(acc);
    }
    return b;
}

LambdaSeries series_pow(const LambdaSeries& s, long k) {
    const AlgebraWithInvolution& A = s.coeffs[0].ambient;
    LambdaSeries base = k >= 0 ? s : series_inverse(s);
    LambdaSeries r = unit_series(A, s.order());
    for (long i = 0; i < std::labs(k); ++i) r = series_mul(r, base);
    return r;
}

MixedGWElement line_element(const AlgebraWithInvolution& A, int type, const Quat& e) {
    MixedGWElement x = mixed_zero(A);
    x.odd(type) = OddPart{1, {e}};
    if (type == -1 && !A.is_base() && is_split(*A.quat)) x.odd(type).entries.clear();
    return x;
}

LambdaSeries odd_line_series(const AlgebraWithInvolution& A, int type, const Quat& e, std::size_t order) {
    if (A.is_base()) return poly_series(A, order, {mixed_one(A), line_element(A, type, e)});
    return poly_series(A, order, {mixed_one(A), line_element(A, type, e), lambda2_line(A, e)});
}

}

LambdaSeries series_mul(const LambdaSeries& s, const LambdaSeries& t) {
    std::size_t n = std::min(s.order(), t.order());
    const AlgebraWithInvolution& A = s.coeffs[0].ambient;
    LambdaSeries r = unit_series(A, n);
    for (std::size_t d = 0; d <= n; ++d) {
        MixedGWElement acc = mixed_zero(A);
        for (std::size_t k = 0; k <= d; ++k) {
            const MixedGWElement &a = s.coeffs[k], &b = t.coeffs[d - k];
            if (k == 0) acc = acc + b;
            else if (k == d) acc = acc + a;
            else acc = acc + a * b;
        }
        r.coeffs[d] = acc;
    }
    return r;
}

LambdaSeries lambda_series(const MixedGWElement& x, std::size_t order) {
    const AlgebraWithInvolution& A = x.ambient;
    LambdaSeries r = unit_series(A, order);
    if (order == 0) return r;

    for (auto& a : x.c00.witt.entries)
        r = series_mul(r, poly_series(A, order, {mixed_one(A), from_form(A, QuadraticForm(std::vector<Rational>{a}))}));
    long extra = x.c00.virtual_dim - (long)x.c00.witt.dim();
    if (extra % 2) internal_error("lambda: virtual dimension and Witt part have different parity");
    if (extra) {
        LambdaSeries h = series_mul(poly_series(A, order, {mixed_one(A), from_form(A, QuadraticForm{1})}),
                                    poly_series(A, order, {mixed_one(A), from_form(A, QuadraticForm{-1})}));
        r = series_mul(r, series_pow(h, extra / 2));
    }
    if (x.c01) {
        LambdaSeries p = poly_series(A, order, {mixed_one(A), skew_planes(A, 1), mixed_one(A)});
        r = series_mul(r, series_pow(p, x.c01));
    }
    for (int t : {1, -1}) {
        const OddPart& o = x.odd(t);
        if (o.empty()) continue;
        if (A.is_base() && t == -1) {
            if (o.rank % 2) internal_error("lambda: alternating part of odd dimension");
            LambdaSeries p = poly_series(A, order, {mixed_one(A), odd_hyperbolic(A, -1, 1), mixed_one(A)});
            r = series_mul(r, series_pow(p, o.rank / 2));
            continue;
        }
        Quat u = slot_unit(A, t);
        if (t == -1 && !A.is_base() && is_split(*A.quat)) {
            // every rank-one hermitian form is isometric to <u> here
            r = series_mul(r, series_pow(odd_line_series(A, t, u, order), o.rank));
            continue;
        }
        for (auto& e : o.entries) r = series_mul(r, odd_line_series(A, t, e, order));
        long ex = o.rank - (long)o.entries.size();
        if (ex % 2) internal_error("lambda: virtual rank and entries have different parity");
        if (ex) {
            LambdaSeries h = series_mul(odd_line_series(A, t, u, order), odd_line_series(A, t, -u, order));
            r = series_mul(r, series_pow(h, ex / 2));
        }
    }
    return r;
}

MixedGWElement lambda_d(const MixedGWElement& x, std::size_t d) { return lambda_series(x, d).coeffs[d]; }

bool is_positive(const MixedGWElement& x) {
    if (x.c00.virtual_dim < (long)x.c00.witt.dim() || x.c01 < 0) return false;
    for (int t : {1, -1})
        if (x.odd(t).rank < (long)x.odd(t).entries.size()) return false;
    return true;
}

MixedGWElement det(const MixedGWElement& h) {
    if (!is_positive(h)) domain_error("det: the element is not positive");
    return lambda_d(h, (std::size_t)rdim_maps(h).total);
}

ZibrowiusReport check_zibrowius(const MixedGWElement& x, const MixedGWElement& y) {
    if (!is_positive(x) || !is_positive(y)) domain_error("zibrowius: inputs must be positive");
    if (rdim_maps(x).total > 2 || rdim_maps(y).total > 2)
        domain_error("zibrowius: reduced dimensions must be at most 2");
    auto lx = lambda_series(x, 2), ly = lambda_series(y, 2);
    MixedGWElement xy = x * y;
    auto lxy = lambda_series(xy, 4);
    const MixedGWElement &l2x = lx.coeffs[2], &l2y = ly.coeffs[2];
    ZibrowiusReport r;
    r.first = mixed_equal(lxy.coeffs[2], x * x * l2y + l2x * y * y - mixed_scale(2, l2x * l2y));
    r.second = mixed_equal(lxy.coeffs[3], xy * l2x * l2y);
    r.third = mixed_equal(lxy.coeffs[4], l2x * l2x * l2y * l2y);
    return r;
}

Verdict check_duality(const MixedGWElement& h, long p, long q) {
    if (!is_positive(h)) domain_error("duality: the element is not positive");
    long n = rdim_maps(h).total;
    if (p < 0 || q < 0 || p + q != n) domain_error("duality: p + q must equal the reduced dimension");
    auto s = lambda_series(h, (std::size_t)n);
    return mixed_equal(s.coeffs[p], s.coeffs[n] * s.coeffs[q]);
}

QuadraticForm matrix_trace_form(const AlgebraWithInvolution& A, long n) {
    auto basis = algebra_basis(A);
    const long m = (long)basis.size();
    const long N = n * n * m;
    RatMatrix g(N, std::vector<Rational>(N));
    auto idx = [&](long i, long j, long s) { return (i * n + j) * m + s; };
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            for (long s = 0; s < m; ++s)
                for (long t = 0; t < m; ++t)
                    g[idx(i, j, s)][idx(j, i, t)] = reduced_trace(A, basis[s] * basis[t]);
    return diagonalize(g);
}

Verdict check_square_decomposition(const HermForm& h) {
    const AlgebraWithInvolution& A = h.ambient;
    MixedGWElement x = from_herm(h);
    long r = (long)A.degree() * (long)h.rank();
    QuadraticForm tb = qscale(h.type(), matrix_trace_form(A, (long)h.rank()));
    MixedGWElement rhs = from_form(A, tb) - mixed_scale(r * (r - 1) / 2, from_form(A, QuadraticForm{1, -1})) +
                         mixed_scale(2, lambda_d(x, 2));
    return mixed_equal(x * x, rhs);
}

}
