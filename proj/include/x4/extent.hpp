#pragma once

// q-extents: the largest average pairwise distance over q-point configurations.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "x4/sphere_action.hpp"

namespace x4 {

enum class ExtentMethod { automatic, exact, heuristic };

struct ExtentReport {
  int q = 0;
  double value = 0;
  std::vector<std::size_t> witness;
  ExtentMethod method = ExtentMethod::exact;  // never automatic here
  int restarts = 0;                           // heuristic only
  std::size_t sample_size = 0;
};

struct ExtentOptions {
  ExtentMethod method = ExtentMethod::automatic;
  int restarts = 64;
  std::size_t exact_limit = 300;  // automatic: q = 3 enumerates up to this size
};

// q = 2 is always exact; q = 3 enumerates when N <= 300, otherwise runs
// seeded restarts of single-point exchange ascent. Throws for q < 2 or q > N.
ExtentReport extent(const SampledMetricSpace& space, int q, const ExtentOptions& opt = {});

// average pairwise distance of a configuration, summed in sorted index order
double average_distance(const SampledMetricSpace& space, std::vector<std::size_t> idx);

struct SmallnessReport {
  bool small = false;
  double margin = 0;  // pi/3 - xt3
  double xt3 = 0;
  ExtentReport extent3;
};

// xt3 <= pi/3 + tol; spaces with fewer than three points use repeated points
SmallnessReport is_small(const SampledMetricSpace& space, double tol, const ExtentOptions& opt = {});

struct ExtentGap {
  double gap = 0;  // xt_q(a) - xt_q(b)
  ExtentReport a, b;
};

ExtentGap compare_extents(const SampledMetricSpace& a, const SampledMetricSpace& b, int q, const ExtentOptions& opt = {});

std::string to_string(ExtentMethod m);

// 16-byte header: "X4EXT1" padded with zeros to 8 bytes, then N as u64 LE;
// followed by N*N little-endian f64 in row-major order
void export_distance_matrix(const SampledMetricSpace& space, std::ostream& out);
std::vector<double> import_distance_matrix(std::istream& in, std::size_t& n);

// largest violation of d(i,k) <= d(i,j) + d(j,k); every triple when N <= full_limit,
// otherwise `samples` seeded random triples
double triangle_violation(const SampledMetricSpace& space, std::size_t full_limit = 300,
                          std::size_t samples = 1000000, std::uint64_t seed = 1);

}  // namespace x4
