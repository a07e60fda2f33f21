#pragma once
#include "wittforge/mixed.hpp"

namespace wf {

// x + y*sqrt(d) in L = Q(sqrt d)
struct LElem {
    Rational x = 0, y = 0;
    bool operator==(const LElem& o) const { return x == o.x && y == o.y; }
};

enum class LInvolution { Identity, Conjugation };

// G = Z/2 = {1, s} acting on L by conjugation; reduced cocycle alpha(s,s) = c, sigma(u_s) = mu_s u_s
struct CrossedData {
    Rational d, c;
    LInvolution sigma = LInvolution::Conjugation;
    LElem mu_s{1, 0};
};
std::string to_string(const CrossedData& data);

struct CrossedAlgebra {
    CrossedData data;
    QuaternionAlgebra Q;
    InvolutionSpec inv;
    AlgebraWithInvolution ambient() const { return AlgebraWithInvolution::quaternion(Q, inv); }
    Quat embed(const LElem& l) const;
    // xi * u_t for t in {0 = identity, 1 = s}
    Quat element(int t, const LElem& xi) const;
};

CrossedAlgebra build_crossed(const CrossedData& data);
// (alpha, mu) read off the built algebra with the generators 1 and j
CrossedData read_back(const CrossedAlgebra& A);

QuadraticForm trace_form_crossed(const CrossedData& data, int t, const LElem& xi);
QuadraticForm product_crossed(const CrossedData& data, int s, const LElem& xi, int t, const LElem& eta, int eps);

// new data for the generators u'_s = c_s u_s, and the coordinate of xi*u_t in them
CrossedData gauge(const CrossedData& data, const LElem& c_s);
LElem gauge_coordinate(int t, const LElem& xi, const LElem& c_s, const Rational& d);

}
