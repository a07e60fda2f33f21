#pragma once
#include "wittforge/qform.hpp"
#include "wittforge/quaternion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wf {

struct AlgebraWithInvolution {
    std::optional<QuaternionAlgebra> quat;  // empty: the base field with the identity
    InvolutionSpec inv;

    static AlgebraWithInvolution base() { return {}; }
    static AlgebraWithInvolution quaternion(const QuaternionAlgebra& Q, const InvolutionSpec& s);
    bool is_base() const { return !quat.has_value(); }
    int degree() const { return is_base() ? 1 : 2; }
    // +1 orthogonal, -1 symplectic
    int type() const { return is_base() ? 1 : involution_type(inv); }
    const QuaternionAlgebra& algebra() const;
    bool operator==(const AlgebraWithInvolution& o) const;
};
std::string to_string(const AlgebraWithInvolution& A);

// algebra elements are quaternions; over the base field only the scalar part is used
Quat element(const AlgebraWithInvolution& A, const Rational& w, const Rational& x = 0, const Rational& y = 0,
             const Rational& z = 0);
Quat sigma(const AlgebraWithInvolution& A, const Quat& e);
Rational reduced_trace(const AlgebraWithInvolution& A, const Quat& e);
Rational reduced_norm(const AlgebraWithInvolution& A, const Quat& e);
std::vector<Quat> algebra_basis(const AlgebraWithInvolution& A);
std::pair<std::vector<Quat>, std::vector<Quat>> sym_skew(const AlgebraWithInvolution& A);
// +1 if sigma(e) = e, -1 if sigma(e) = -e, 0 otherwise
int symmetry_sign(const AlgebraWithInvolution& A, const Quat& e);

struct HermForm {
    AlgebraWithInvolution ambient;
    int epsilon = 1;
    std::vector<Quat> entries;

    HermForm() = default;
    HermForm(AlgebraWithInvolution A, int eps, std::vector<Quat> e);
    int type() const { return ambient.type() * epsilon; }
    std::size_t rank() const { return entries.size(); }
};
std::string to_string(const HermForm& h);

QuadraticForm trace_form_gram(const AlgebraWithInvolution& A, const Quat& a, const Quat& b);
QuadraticForm herm_product(const HermForm& h1, const HermForm& h2);
QuadraticForm quaternion_closed_form_scalar(const QuaternionAlgebra& Q, const Rational& a, const Rational& b);
QuadraticForm quaternion_closed_form_pure(const Quat& z1, const Quat& z2);
QuadraticForm jacobson_qh(const HermForm& h);

enum class Slot { Even, EvenSkew, Orth, Symp };
std::string slot_name(Slot s);
Slot slot_product(Slot a, Slot b);

struct OddPart {
    long rank = 0;  // virtual rank over the algebra (dimension for the base symplectic copy)
    std::vector<Quat> entries;
    bool empty() const { return rank == 0 && entries.empty(); }
};

struct MixedGWElement {
    AlgebraWithInvolution ambient;
    GWClass c00;
    long c01 = 0;
    OddPart orth, symp;

    const OddPart& odd(int type) const { return type == 1 ? orth : symp; }
    OddPart& odd(int type) { return type == 1 ? orth : symp; }
    bool is_homogeneous() const;
    std::optional<Slot> slot() const;
};

struct MixedWElement {
    AlgebraWithInvolution ambient;
    QuadraticForm c00;
    std::vector<Quat> orth, symp;
};

MixedGWElement mixed_zero(const AlgebraWithInvolution& A);
MixedGWElement mixed_one(const AlgebraWithInvolution& A);
MixedGWElement from_form(const AlgebraWithInvolution& A, const QuadraticForm& q);
MixedGWElement from_herm(const HermForm& h);
// n anti-symmetric hyperbolic planes; over the base field this lives in GW^-(K)
MixedGWElement skew_planes(const AlgebraWithInvolution& A, long n);
// hyperbolic rank-2 hermitian form in the given odd slot
MixedGWElement odd_hyperbolic(const AlgebraWithInvolution& A, int type, long planes = 1);
Quat slot_unit(const AlgebraWithInvolution& A, int type);

MixedGWElement mixed_add(const MixedGWElement& x, const MixedGWElement& y);
MixedGWElement mixed_neg(const MixedGWElement& x);
MixedGWElement mixed_sub(const MixedGWElement& x, const MixedGWElement& y);
MixedGWElement mixed_mul(const MixedGWElement& x, const MixedGWElement& y);
MixedGWElement mixed_scale(long n, const MixedGWElement& x);
MixedGWElement operator+(const MixedGWElement& x, const MixedGWElement& y);
MixedGWElement operator-(const MixedGWElement& x, const MixedGWElement& y);
MixedGWElement operator*(const MixedGWElement& x, const MixedGWElement& y);

MixedWElement to_witt(const MixedGWElement& x);
MixedGWElement lift(const MixedWElement& x);
MixedWElement operator+(const MixedWElement& x, const MixedWElement& y);
MixedWElement operator*(const MixedWElement& x, const MixedWElement& y);

enum class Verdict { Equal, Unequal, EqualByBattery };
std::string to_string(Verdict v);
Verdict operator&&(Verdict a, Verdict b);
bool holds(Verdict v);

// Witt equality of two lists of entries in one odd slot
Verdict odd_witt_equal(const AlgebraWithInvolution& A, int type, const std::vector<Quat>& x,
                       const std::vector<Quat>& y);
Verdict mixed_equal(const MixedGWElement& x, const MixedGWElement& y);
Verdict mixed_equal(const MixedWElement& x, const MixedWElement& y);

struct RdimReport {
    long graded[4] = {0, 0, 0, 0};  // Even, EvenSkew, Orth, Symp
    long total = 0;
    int mod2[4] = {0, 0, 0, 0};
};
RdimReport rdim_maps(const MixedGWElement& x);

HermForm morita_scale_transfer(const Quat& a, const HermForm& h);
// transfer of a whole element over (Q, Int(u)) to (Q, gamma) along <u>_gamma
MixedGWElement to_canonical(const MixedGWElement& x);
MixedWElement to_canonical(const MixedWElement& x);

// explicit Morita image in W(K) of a skew-hermitian diagonal form over (Q(1,b), gamma)
QuadraticForm split_skew_image(const std::vector<Quat>& entries);

std::string to_string(const MixedGWElement& x);
std::string to_string(const MixedWElement& x);

struct FiltrationResult {
    bool member = false;
    bool exact = true;  // false when an odd component was certified by the test battery only
};
FiltrationResult filtration_membership(const MixedWElement& x, int n, bool homogeneous = true);

}
