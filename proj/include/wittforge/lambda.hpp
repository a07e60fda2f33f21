#pragma once
#include "wittforge/mixed.hpp"

#include <vector>

namespace wf {

// coefficients of lambda_t(x) = sum lambda^d(x) t^d up to a truncation order
struct LambdaSeries {
    std::vector<MixedGWElement> coeffs;
    std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

// lambda^2 of the rank-one generator <a>_sigma over a quaternion ambient
MixedGWElement lambda2_line(const AlgebraWithInvolution& A, const Quat& a);

LambdaSeries lambda_series(const MixedGWElement& x, std::size_t order);
LambdaSeries series_mul(const LambdaSeries& s, const LambdaSeries& t);
MixedGWElement lambda_d(const MixedGWElement& x, std::size_t d);

// positive: representable by an honest (non-virtual) module
bool is_positive(const MixedGWElement& x);
MixedGWElement det(const MixedGWElement& h);

struct ZibrowiusReport {
    Verdict first = Verdict::Equal, second = Verdict::Equal, third = Verdict::Equal;
    bool all() const { return holds(first) && holds(second) && holds(third); }
};
ZibrowiusReport check_zibrowius(const MixedGWElement& x, const MixedGWElement& y);
Verdict check_duality(const MixedGWElement& h, long p, long q);

// trace form (X, Y) -> Trd(XY) of M_n over the ambient, diagonalized
QuadraticForm matrix_trace_form(const AlgebraWithInvolution& A, long n);
Verdict check_square_decomposition(const HermForm& h);

}
