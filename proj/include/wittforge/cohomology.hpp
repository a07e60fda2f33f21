#pragma once
#include "wittforge/mixed.hpp"

#include <utility>

namespace wf {

BrauerClass symbol_to_brauer(const Rational& a, const Rational& b);
BrauerClass e2(const QuadraticForm& q);

// the symbol formula for <a>_sigma * <b>_sigma over a quaternion ambient
BrauerClass mixed_cup(const AlgebraWithInvolution& A, const Quat& a, const Quat& b);
// (u, v) with symbol_to_brauer(u, v) equal to the cup product
std::pair<Rational, Rational> common_slot_witness(const AlgebraWithInvolution& A, const Quat& a, const Quat& b);

struct SplitImage {
    QuadraticForm sum;    // in I^n
    QuadraticForm first;  // in I^{n-1}
};
SplitImage split_filtration_iso(const MixedWElement& x, int n);
MixedWElement split_filtration_inverse(const SplitImage& s);

}
