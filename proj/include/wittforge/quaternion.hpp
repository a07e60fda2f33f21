#pragma once
#include "wittforge/arith.hpp"
#include "wittforge/qform.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace wf {

struct BrauerClass {
    PlaceSet places;
    bool operator==(const BrauerClass& o) const { return places == o.places; }
    bool is_zero() const { return places.empty(); }
};
BrauerClass operator+(const BrauerClass& x, const BrauerClass& y);
std::string to_string(const BrauerClass& b);

struct QuaternionAlgebra {
    Rational a, b;
    QuaternionAlgebra() : a(-1), b(-1) {}
    QuaternionAlgebra(Rational a_, Rational b_);
    bool operator==(const QuaternionAlgebra& o) const { return a == o.a && b == o.b; }
};
std::string to_string(const QuaternionAlgebra& Q);

struct Quat {
    QuaternionAlgebra alg;
    Rational w, x, y, z;
    Quat() = default;
    Quat(const QuaternionAlgebra& A, Rational w_ = 0, Rational x_ = 0, Rational y_ = 0, Rational z_ = 0)
        : alg(A), w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}
    static Quat basis(const QuaternionAlgebra& A, int s);
    const Rational& coeff(int s) const;
    Rational& coeff(int s);
    bool is_zero() const { return w == 0 && x == 0 && y == 0 && z == 0; }
    bool is_pure() const { return w == 0; }
    bool is_scalar() const { return x == 0 && y == 0 && z == 0; }
    bool operator==(const Quat& o) const { return w == o.w && x == o.x && y == o.y && z == o.z; }
};

Quat operator+(const Quat& p, const Quat& q);
Quat operator-(const Quat& p, const Quat& q);
Quat operator-(const Quat& p);
Quat operator*(const Quat& p, const Quat& q);
Quat operator*(const Rational& l, const Quat& p);
Quat conj(const Quat& p);
Rational trd(const Quat& p);
Rational nrd(const Quat& p);
Quat inv(const Quat& p);
std::string to_string(const Quat& q);

enum class QuatOp { Mul, Conj, Trd, Nrd, Inv };
// Trd and Nrd are returned as scalar quaternions
Quat quat_ops(QuatOp op, const Quat& p, const Quat* q = nullptr);

BrauerClass ramified_places(const QuaternionAlgebra& Q);
bool is_split(const QuaternionAlgebra& Q);
QuadraticForm norm_form(const QuaternionAlgebra& Q);
QuadraticForm norm_form_gram(const QuaternionAlgebra& Q);

struct InvolutionSpec {
    enum class Kind { Canonical, Inner } kind = Kind::Canonical;
    Quat u;
    static InvolutionSpec canonical() { return {}; }
    static InvolutionSpec inner(const Quat& u);
};

Quat involution_apply(const InvolutionSpec& s, const Quat& q);
// +1 orthogonal, -1 symplectic
int involution_type(const InvolutionSpec& s);
std::pair<std::vector<Quat>, std::vector<Quat>> sym_skew_basis(const QuaternionAlgebra& Q, const InvolutionSpec& s);

struct TensorElement {
    QuaternionAlgebra alg;
    std::array<std::array<Rational, 4>, 4> t{};
    static TensorElement simple(const Quat& x, const Quat& y);
    static TensorElement unit(const QuaternionAlgebra& A);
    bool operator==(const TensorElement& o) const { return t == o.t; }
};
TensorElement operator*(const TensorElement& p, const TensorElement& q);
TensorElement operator+(const TensorElement& p, const TensorElement& q);
TensorElement apply_each(const TensorElement& g, const InvolutionSpec* left, const InvolutionSpec* right);

TensorElement goldman_element(const QuaternionAlgebra& Q);
Quat twisted_sandwich(const TensorElement& t, const Quat& x, const InvolutionSpec& s);
Quat sandwich(const TensorElement& t, const Quat& x);

using Mat2 = std::array<std::array<Rational, 2>, 2>;
Mat2 split_morita(const Quat& q);
Mat2 mat_mul(const Mat2& p, const Mat2& q);
Mat2 adjugate(const Mat2& m);

}
