#pragma once

// Invariant tuples in Q^n and the relation generated by rotating, reversing
// (with a sign change) and translating by an integer.

#include <vector>

#include "x4/rational.hpp"

namespace x4 {

class InvariantTuple {
 public:
  explicit InvariantTuple(std::vector<Rational> entries);  // n >= 2

  std::size_t size() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Rational>& entries() const { return entries_; }

  friend bool operator==(const InvariantTuple&, const InvariantTuple&) = default;

 private:
  std::vector<Rational> entries_;
};

// lexicographic, entrywise in the usual order on Q
bool lex_less(const InvariantTuple& a, const InvariantTuple& b);

struct EquivalenceMove {
  enum class Kind { rotation, reversal, translation };
  Kind kind;
  Integer k = 0;  // translation only

  static EquivalenceMove rotation() { return {Kind::rotation, 0}; }
  static EquivalenceMove reversal() { return {Kind::reversal, 0}; }
  static EquivalenceMove translation(Integer k) { return {Kind::translation, std::move(k)}; }
};

InvariantTuple apply_move(const InvariantTuple& t, const EquivalenceMove& m);

// first entry moved into [0,1), then the least image over the dihedral orbit
InvariantTuple canonicalize(const InvariantTuple& t);

// throws std::invalid_argument on length mismatch
bool are_equivalent(const InvariantTuple& a, const InvariantTuple& b);

// consecutive entries (indices mod n) differ; for n = 3 that is pairwise distinct
bool is_realizable(const InvariantTuple& t);

// -(sum of entries)
Rational euler_sum(const InvariantTuple& t);

// sorted multiset {t[i+1] - t[i]}
std::vector<Rational> cyclic_differences(const InvariantTuple& t);

}  // namespace x4
