#include "x4/smith.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace x4 {

void check_presentation(const GroupPresentation& g) {
  const int n = static_cast<int>(g.generators.size());
  for (const auto& w : g.relators)
    for (int l : w)
      if (l == 0 || std::abs(l) > n) throw std::invalid_argument("relator uses an undeclared generator");
}

std::string relator_string(const GroupPresentation& g, const Word& w) {
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    int gen = std::abs(w[i]);
    long e = 0;
    std::size_t j = i;
    while (j < w.size() && std::abs(w[j]) == gen) e += w[j++] > 0 ? 1 : -1;
    if (!out.empty()) out += ' ';
    out += g.generators[gen - 1] + "^" + std::to_string(e);
    i = j;
  }
  return out.empty() ? "1" : out;
}

IntMatrix relation_matrix(const GroupPresentation& g) {
  check_presentation(g);
  IntMatrix m(g.relators.size(), std::vector<Integer>(g.generators.size(), 0));
  for (std::size_t r = 0; r < g.relators.size(); ++r)
    for (int l : g.relators[r]) m[r][std::abs(l) - 1] += l > 0 ? 1 : -1;
  return m;
}

std::vector<Integer> smith_diagonal(IntMatrix a, std::size_t cols) {
  const std::size_t rows = a.size();
  std::vector<Integer> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // pivot: smallest nonzero |entry| in the trailing block
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) pr = i, pc = j;
    if (pr == rows) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Integer q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Integer q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (!clean) continue;
      // divisibility: fold any offending row into the pivot row
      for (std::size_t i = t + 1; i < rows && clean; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
            clean = false;
            break;
          }
    }
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  return diag;
}

std::optional<Integer> AbelianGroup::order() const {
  if (!finite()) return std::nullopt;
  Integer n = 1;
  for (const auto& d : torsion) n *= d;
  return n;
}

AbelianGroup abelianize(const GroupPresentation& g) {
  auto diag = smith_diagonal(relation_matrix(g), g.generators.size());
  AbelianGroup out;
  out.free_rank = g.generators.size() - diag.size();
  for (auto& d : diag)
    if (d > 1) out.torsion.push_back(d);
  return out;
}

}  // namespace x4
