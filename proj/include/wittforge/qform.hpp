#pragma once
#include "wittforge/arith.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wf {

using RatMatrix = std::vector<std::vector<Rational>>;
using PlaceSet = std::set<Place>;

struct QuadraticForm {
    std::vector<Rational> entries;

    QuadraticForm() = default;
    QuadraticForm(std::vector<Rational> e);
    QuadraticForm(std::initializer_list<long> e);
    std::size_t dim() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

std::string to_string(const QuadraticForm& q);

// hasse records the Witt-class (Clifford) invariant, including the real place
struct WittInvariants {
    long dim = 0;
    long signature = 0;
    SquareClass disc{1};
    PlaceSet hasse;
};

QuadraticForm diagonalize(const RatMatrix& gram);
WittInvariants invariants(const QuadraticForm& q);

// the classical product over pairs i<j, kept for cross-checks
int hasse_product(const QuadraticForm& q, Place v);

enum class CombineOp { Sum, Tensor, Scale };
QuadraticForm combine(CombineOp op, const QuadraticForm& q1, const QuadraticForm& q2 = {},
                      const Rational& lambda = 1);
QuadraticForm qsum(const QuadraticForm& a, const QuadraticForm& b);
QuadraticForm qtensor(const QuadraticForm& a, const QuadraticForm& b);
QuadraticForm qscale(const Rational& l, const QuadraticForm& a);
QuadraticForm qneg(const QuadraticForm& a);
QuadraticForm hyperbolic(long planes);
QuadraticForm pfister(const std::vector<Rational>& a);

// entries replaced by square-free integer representatives (an isometry)
QuadraticForm normalized(const QuadraticForm& q);

bool is_isotropic(const QuadraticForm& q);
bool is_isotropic_at(const QuadraticForm& q, Place v);
bool is_isotropic_closed(const QuadraticForm& q);
bool is_isotropic_closed_at(const QuadraticForm& q, Place v);
bool isotropic_2adic_search(const QuadraticForm& q);

bool witt_equal(const QuadraticForm& q1, const QuadraticForm& q2);
bool witt_trivial(const QuadraticForm& q);
int anisotropic_dimension(const QuadraticForm& q);
QuadraticForm anisotropic_part(const QuadraticForm& q);

QuadraticForm trace_transfer_quadratic(const Rational& d, const Rational& a0, const Rational& a1);
QuadraticForm trace_transfer_gram(const Rational& d, const Rational& a0, const Rational& a1);

bool in_In(const QuadraticForm& q, int n);

struct GWClass {
    long virtual_dim = 0;
    QuadraticForm witt;
};

GWClass gw_of(const QuadraticForm& q);
GWClass gw_add(const GWClass& x, const GWClass& y);
GWClass gw_neg(const GWClass& x);
GWClass gw_mul(const GWClass& x, const GWClass& y);
bool gw_equal(const GWClass& x, const GWClass& y);
// honest representative: witt part plus the right number of hyperbolic planes; requires
// virtual_dim >= dim(witt)
QuadraticForm gw_representative(const GWClass& x);
std::string to_string(const GWClass& x);

}
