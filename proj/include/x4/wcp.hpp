#pragma once

// Weighted projective planes CP^2_{a,b,c} and finite quotients realizing a
// triple of invariants: the weights span the kernel of the 2x3 matrix whose
// rows are the alphas and the betas.

#include <array>
#include <stdexcept>
#include <vector>

#include "x4/invariants.hpp"

namespace x4 {

struct WeightTriple {
  Integer a, b, c;
  friend bool operator==(const WeightTriple&, const WeightTriple&) = default;
};

struct QuotientDescriptor {
  WeightTriple weights;
  Integer alpha_bar = 1;  // gcd of the alpha row
  Integer beta_bar = 1;   // gcd of the nonzero entries of the beta row
};

// all three fractions equal: the matrix has rank < 2
struct RankDeficient : std::logic_error {
  using std::logic_error::logic_error;
};
// a kernel entry vanished, so the circle would not act almost freely
struct ZeroWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// rows (alpha_i), (beta_i) of t_i = beta_i / alpha_i
std::array<std::array<Integer, 3>, 2> invariant_matrix(const InvariantTuple& t);

// cross product of the rows, made primitive, sign kept
QuotientDescriptor weights_from_invariants(const InvariantTuple& t);

struct SignedWeights {
  WeightTriple weights;
  int orientation_class;  // parity of the number of sign flips
};

// the eight (+-a, +-b, +-c), in two classes of four swapped by the global flip
std::vector<SignedWeights> sign_representatives(const WeightTriple& w);

bool verify_kernel(const WeightTriple& w, const InvariantTuple& t);

}  // namespace x4
