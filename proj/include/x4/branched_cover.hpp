#pragma once

// Two-sheeted covers of a sampled surface quotient, branched over two points,
// metrized by shortest paths on glued nearest-neighbour graphs. A sparse graph
// cut along a path between the branch points fixes which lifts are adjacent;
// a denser graph, lifted accordingly, supplies the distances.

#include <array>
#include <cstddef>
#include <vector>

#include "x4/sphere_action.hpp"

namespace x4 {

struct CoverOptions {
  std::size_t neighbours = 12;         // graph that decides the sheets
  std::size_t metric_neighbours = 64;  // denser graph whose shortest paths give the distances
  double tol = 0.02;           // certificate requires drift <= 2 tol
  bool certify = true;         // recompute at twice the sample count
};

struct ConvergenceCertificate {
  bool computed = false;
  std::size_t n_coarse = 0, n_fine = 0;  // samples at the two resolutions
  double drift = 0;                      // max change of deck-invariant distance pairs
  double threshold = 0;
  bool achieved = false;
};

struct BranchedCover {
  SampledMetricSpace space;          // branch points once, every other point twice
  std::vector<std::size_t> base_index;
  std::vector<int> sheet;            // -1 for the branch points
  std::array<std::size_t, 2> branch; // indices in the cover
  std::vector<std::size_t> cut;      // base indices along the cut, branch to branch
  ConvergenceCertificate certificate;
};

// throws std::invalid_argument when the branch points coincide or are not
// marked, std::runtime_error when the neighbour graph is disconnected
BranchedCover double_branched_cover(const SampledMetricSpace& base, std::array<std::size_t, 2> branch,
                                    const CoverOptions& opt = {});

}  // namespace x4
