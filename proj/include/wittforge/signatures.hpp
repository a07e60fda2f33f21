#pragma once
#include "wittforge/mixed.hpp"

#include <optional>
#include <vector>

namespace wf {

enum class OrderingType { Orthogonal, Symplectic };
std::string to_string(OrderingType t);

OrderingType ordering_type(const QuaternionAlgebra& Q);
// slot type (+1 orthogonal, -1 symplectic) carrying the nonzero odd signature
int active_type(const AlgebraWithInvolution& A);

struct SignaturePair {
    long plus = 0, minus = 0;
    HermForm reference;
};

// reference over the canonical model: <1> for Base, <1>_gamma or <z>_gamma otherwise
HermForm default_reference(const AlgebraWithInvolution& A);
// signature of the odd component of the active slot relative to h0
long odd_signature(const MixedWElement& x, const HermForm& h0);
SignaturePair signature_pair(const MixedWElement& x);
SignaturePair signature_pair(const MixedWElement& x, const HermForm& h0);
long signature_of_involution(const AlgebraWithInvolution& A);

// all maps phi from the given odd generators to Z with phi(g)phi(h) = sig(g*h); each solution lists the
// values on the generators in order
std::vector<std::vector<long>> signature_morphisms(const std::vector<MixedWElement>& gens);

}
