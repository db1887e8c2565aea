#include "x4/wcp.hpp"

#include <boost/integer/common_factor.hpp>

namespace x4 {

std::array<std::array<Integer, 3>, 2> invariant_matrix(const InvariantTuple& t) {
  if (t.size() != 3) throw std::invalid_argument("weighted projective planes need exactly three invariants");
  std::array<std::array<Integer, 3>, 2> m;
  for (std::size_t i = 0; i < 3; ++i) {
    m[0][i] = denominator(t[i]);
    m[1][i] = numerator(t[i]);
  }
  return m;
}

namespace {

Integer gcd_row(const std::array<Integer, 3>& r) {
  Integer g = 0;
  for (const auto& x : r) g = boost::integer::gcd(g, Integer(abs(x)));
  return g;
}

}  // namespace

QuotientDescriptor weights_from_invariants(const InvariantTuple& t) {
  auto m = invariant_matrix(t);
  const auto& a = m[0];
  const auto& b = m[1];
  std::array<Integer, 3> w = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  Integer g = gcd_row(w);
  if (g == 0) throw RankDeficient("invariant matrix has rank < 2 (all fractions equal)");
  for (auto& x : w) {
    if (x == 0) throw ZeroWeight("kernel has a zero entry (two equal fractions)");
    x /= g;
  }
  QuotientDescriptor q;
  q.weights = {w[0], w[1], w[2]};
  q.alpha_bar = gcd_row(a);
  q.beta_bar = gcd_row(b);
  if (q.beta_bar == 0) q.beta_bar = 1;  // unreachable when the rank is 2
  return q;
}

std::vector<SignedWeights> sign_representatives(const WeightTriple& w) {
  std::vector<SignedWeights> out;
  for (int mask = 0; mask < 8; ++mask) {
    WeightTriple s{(mask & 1) ? Integer(-w.a) : w.a, (mask & 2) ? Integer(-w.b) : w.b, (mask & 4) ? Integer(-w.c) : w.c};
    int flips = (mask & 1) + ((mask >> 1) & 1) + ((mask >> 2) & 1);
    bool dup = false;
    for (const auto& o : out) dup = dup || o.weights == s;
    if (!dup) out.push_back({s, flips % 2});
  }
  return out;
}

bool verify_kernel(const WeightTriple& w, const InvariantTuple& t) {
  auto m = invariant_matrix(t);
  for (const auto& row : m)
    if (row[0] * w.a + row[1] * w.b + row[2] * w.c != 0) return false;
  return true;
}

}  // namespace x4
