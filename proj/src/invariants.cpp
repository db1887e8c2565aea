#include "x4/invariants.hpp"

#include <algorithm>
#include <stdexcept>

namespace x4 {

InvariantTuple::InvariantTuple(std::vector<Rational> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) throw std::invalid_argument("invariant tuple needs at least two entries");
}

bool lex_less(const InvariantTuple& a, const InvariantTuple& b) {
  return std::lexicographical_compare(a.entries().begin(), a.entries().end(),
                                      b.entries().begin(), b.entries().end());
}

InvariantTuple apply_move(const InvariantTuple& t, const EquivalenceMove& m) {
  std::vector<Rational> e = t.entries();
  switch (m.kind) {
    case EquivalenceMove::Kind::rotation:
      std::rotate(e.begin(), e.begin() + 1, e.end());
      break;
    case EquivalenceMove::Kind::reversal:
      std::reverse(e.begin(), e.end());
      for (auto& x : e) x = -x;
      break;
    case EquivalenceMove::Kind::translation:
      for (auto& x : e) x += m.k;
      break;
  }
  return InvariantTuple(std::move(e));
}

namespace {

void normalize_first(std::vector<Rational>& e) {
  Integer shift = -floor(e.front());
  if (shift != 0)
    for (auto& x : e) x += shift;
}

}  // namespace

InvariantTuple canonicalize(const InvariantTuple& t) {
  const std::size_t n = t.size();
  std::vector<Rational> best;
  std::vector<Rational> img(n);
  for (int flip = 0; flip < 2; ++flip) {
    for (std::size_t r = 0; r < n; ++r) {
      // rotation by r, optionally followed by reversal
      for (std::size_t i = 0; i < n; ++i) {
        if (flip == 0)
          img[i] = t[(i + r) % n];
        else
          img[i] = -t[(r + n - 1 - i) % n];
      }
      normalize_first(img);
      if (best.empty() || std::lexicographical_compare(img.begin(), img.end(), best.begin(), best.end()))
        best = img;
    }
  }
  return InvariantTuple(std::move(best));
}

bool are_equivalent(const InvariantTuple& a, const InvariantTuple& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tuples of different length");
  return canonicalize(a) == canonicalize(b);
}

bool is_realizable(const InvariantTuple& t) {
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i)
    if (t[i] == t[(i + 1) % n]) return false;
  return true;
}

Rational euler_sum(const InvariantTuple& t) {
  Rational s = 0;
  for (const auto& x : t.entries()) s -= x;
  return s;
}

std::vector<Rational> cyclic_differences(const InvariantTuple& t) {
  const std::size_t n = t.size();
  std::vector<Rational> d;
  d.reserve(n);
  for (std::size_t i = 0; i < n; ++i) d.push_back(t[(i + 1) % n] - t[i]);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace x4
