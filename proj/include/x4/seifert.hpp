#pragma once

// Unnormalized Seifert data {g; (a1,b1), ..., (an,bn)} over S^2.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "x4/rational.hpp"
#include "x4/smith.hpp"

namespace x4 {

struct Fiber {
  std::int64_t alpha;  // > 0
  std::int64_t beta;   // gcd(alpha, |beta|) = 1
  friend bool operator==(const Fiber&, const Fiber&) = default;
  friend auto operator<=>(const Fiber&, const Fiber&) = default;
};

struct SeifertPresentation {
  int genus = 0;
  std::vector<Fiber> fibers;
  bool trivial_fibration = false;  // the only way fibers may be empty

  friend bool operator==(const SeifertPresentation&, const SeifertPresentation&) = default;
};

// throws std::invalid_argument for alpha <= 0, non-coprime pairs, negative genus,
// or an unflagged empty fiber list
void check_presentation(const SeifertPresentation& p);

// [[alpha, gamma], [-beta, delta]] with alpha*delta + beta*gamma = 1
struct TorusBasisChange {
  std::int64_t alpha, gamma, minus_beta, delta;
};

// gamma = beta^-1 mod alpha in [0, alpha); (1, b) gives gamma = 0, delta = 1
TorusBasisChange sl2_complete(std::int64_t alpha, std::int64_t beta);

struct MeridianCoefficients {
  std::int64_t q, h;
};
// m = alpha q + beta h
MeridianCoefficients meridian_coefficients(std::int64_t alpha, std::int64_t beta);

// -sum beta_i / alpha_i
Rational euler_number(const SeifertPresentation& p);

// 0 < beta < alpha for alpha > 1, with one (1, b) fiber carrying the rest
SeifertPresentation normalize(const SeifertPresentation& p);

// <q1..qn, h | [qi,h], qi^ai h^bi, q1...qn>; genus 0 only
GroupPresentation fundamental_group(const SeifertPresentation& p);

// |a1 b2 + a2 b1|, nullopt when it vanishes (S^2 x S^1); needs exactly two fibers
std::optional<Integer> abelian_order_two_fibers(const SeifertPresentation& p);

enum class BoundaryKind { sphere, lens_space, s2xs1, prism, tetrahedral, other };
std::string to_string(BoundaryKind k);

struct BoundaryRecognition {
  BoundaryKind kind = BoundaryKind::other;
  std::optional<Integer> order;     // |pi_1| when known
  std::optional<bool> admissible;   // nullopt: not decided
  std::string note;
};

BoundaryRecognition recognize_boundary(const SeifertPresentation& p);

}  // namespace x4
