#pragma once

// Finitely presented groups, their abelianization, and Smith normal form.

#include <optional>
#include <string>
#include <vector>

#include "x4/rational.hpp"

namespace x4 {

// letters are +/-(index+1): +2 is the second generator, -2 its inverse
using Word = std::vector<int>;

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
};

// throws std::invalid_argument when a relator names an unknown generator
void check_presentation(const GroupPresentation& g);

// "q1^2 h^1" style, consecutive equal generators merged
std::string relator_string(const GroupPresentation& g, const Word& w);

using IntMatrix = std::vector<std::vector<Integer>>;

// rows = relators, columns = generators, entries = exponent sums
IntMatrix relation_matrix(const GroupPresentation& g);

// nonzero diagonal of the Smith form, each dividing the next
std::vector<Integer> smith_diagonal(IntMatrix m, std::size_t cols);

struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // entries > 1 only

  bool finite() const { return free_rank == 0; }
  // nullopt for infinite groups
  std::optional<Integer> order() const;
};

AbelianGroup abelianize(const GroupPresentation& g);

}  // namespace x4
