#pragma once

// Reference computations shared by the unit tests and the acceptance binary.
// None of them call into the library code they are used to check.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "x4/rational.hpp"

namespace oracle {

using x4::Integer;
using x4::Rational;
using Tuple = std::vector<Rational>;

// -- equivalence of invariant tuples by breadth-first search over the moves.
// Translations are confined to a window wide enough to reach every tuple that
// could equal the target, which keeps the orbit finite.
inline bool bfs_equivalent(const Tuple& a, const Tuple& b) {
  if (a.size() != b.size()) return false;
  auto span = [](const Tuple& t) {
    auto [lo, hi] = std::minmax_element(t.begin(), t.end());
    return std::make_pair(*lo, *hi);
  };
  auto [alo, ahi] = span(a);
  auto [blo, bhi] = span(b);
  // reversal negates, so the window must hold both signs of either tuple
  Rational bound = 2;
  for (const Rational& r : {alo, ahi, blo, bhi}) bound = std::max(bound, Rational(abs(r) + 2));
  auto inside = [&](const Tuple& t) {
    return std::all_of(t.begin(), t.end(), [&](const Rational& r) { return abs(r) <= bound + 1; });
  };
  std::set<Tuple> seen{a};
  std::vector<Tuple> frontier{a};
  while (!frontier.empty()) {
    std::vector<Tuple> next;
    for (const Tuple& t : frontier) {
      if (t == b) return true;
      std::vector<Tuple> moves;
      Tuple r(t.begin() + 1, t.end());
      r.push_back(t.front());
      moves.push_back(r);
      Tuple v(t.rbegin(), t.rend());
      for (auto& x : v) x = -x;
      moves.push_back(v);
      for (int k : {1, -1}) {
        Tuple s = t;
        for (auto& x : s) x += k;
        moves.push_back(s);
      }
      for (auto& m : moves)
        if (inside(m) && seen.insert(m).second) next.push_back(std::move(m));
    }
    frontier = std::move(next);
  }
  return false;
}

inline Rational random_fraction(std::mt19937_64& rng, int max_den = 4, int max_num = 4) {
  std::uniform_int_distribution<int> den(1, max_den), num(-max_num, max_num);
  return Rational(num(rng), den(rng));
}

// -- exact determinant by fraction-free elimination
inline Integer determinant(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Order of Z^n modulo the row span: the gcd of the maximal minors, or nullopt
// when they all vanish (the quotient is infinite).
inline std::optional<Integer> quotient_order(const std::vector<std::vector<Integer>>& rows, std::size_t n) {
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (std::any_of(rows[i].begin(), rows[i].end(), [](const Integer& x) { return x != 0; })) live.push_back(i);
  if (live.size() < n) return std::nullopt;
  Integer g = 0;
  std::vector<bool> pick(live.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
  do {
    std::vector<std::vector<Integer>> sub;
    for (std::size_t i = 0; i < live.size(); ++i)
      if (pick[i]) sub.push_back(rows[live[i]]);
    Integer d = determinant(sub);
    g = gcd(g, abs(d));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  if (g == 0) return std::nullopt;
  return g;
}

// relation rows of <q1..qn, h | [qi,h], qi^ai h^bi, q1...qn> after abelianizing,
// written out by hand from the fibre data
inline std::vector<std::vector<Integer>> seifert_rows(const std::vector<std::array<std::int64_t, 2>>& fibers) {
  const std::size_t n = fibers.size();
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Integer> r(n + 1, 0);
    r[i] = fibers[i][0];
    r[n] = fibers[i][1];
    rows.push_back(r);
  }
  std::vector<Integer> last(n + 1, 1);
  last[n] = 0;
  rows.push_back(last);
  return rows;
}

// -- integer kernel of a 2x3 matrix by unimodular column reduction; the last
// column of the accumulated transform spans the kernel
inline std::array<std::int64_t, 3> kernel_2x3(std::array<std::array<std::int64_t, 3>, 2> m) {
  std::array<std::array<std::int64_t, 3>, 3> u{};
  for (int i = 0; i < 3; ++i) u[i][i] = 1;
  auto colop = [&](int dst, int src, std::int64_t k) {  // col dst -= k col src
    for (int r = 0; r < 2; ++r) m[r][dst] -= k * m[r][src];
    for (int r = 0; r < 3; ++r) u[r][dst] -= k * u[r][src];
  };
  auto swapcol = [&](int a, int b) {
    for (int r = 0; r < 2; ++r) std::swap(m[r][a], m[r][b]);
    for (int r = 0; r < 3; ++r) std::swap(u[r][a], u[r][b]);
  };
  for (int row = 0; row < 2; ++row) {
    // Euclid across columns row..2 until only column `row` is nonzero in this row
    for (;;) {
      int piv = -1;
      for (int c = row; c < 3; ++c)
        if (m[row][c] != 0 && (piv < 0 || std::llabs(m[row][c]) < std::llabs(m[row][piv]))) piv = c;
      if (piv < 0) break;
      swapcol(row, piv);
      bool done = true;
      for (int c = row + 1; c < 3; ++c) {
        if (m[row][c] == 0) continue;
        colop(c, row, m[row][c] / m[row][row]);
        if (m[row][c] != 0) done = false;
      }
      if (done) break;
    }
  }
  return {u[0][2], u[1][2], u[2][2]};
}

}  // namespace oracle
