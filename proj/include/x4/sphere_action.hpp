#pragma once

// Round quotients (S^3/Gamma)/T^1 for the circle theta.(z1,z2) = (e^{ip theta} z1,
// e^{iq theta} z2), sampled as finite metric spaces.

#include <array>
#include <cstdint>
#include <memory>
#include <utility>
#include <string>
#include <vector>

namespace x4 {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<double, 16>;  // row-major

struct IsometricActionSpec {
  std::int64_t p = 1, q = 1;
  std::vector<Mat4> gamma;    // empty means trivial
  std::string gamma_label = "trivial";
  std::size_t samples = 1500;
  std::uint64_t seed = 42;
};

Mat4 identity4();
Mat4 mul(const Mat4& a, const Mat4& b);
Vec4 apply(const Mat4& m, const Vec4& x);
double dot(const Vec4& a, const Vec4& b);

// presets; matrices act on (Re z1, Im z1, Re z2, Im z2)
std::vector<Mat4> gamma_trivial();
// z -> z * e^{2 pi i/m} as a quaternion, i.e. (e^{2 pi i/m} z1, e^{-2 pi i/m} z2)
std::vector<Mat4> gamma_cyclic(int m);
// right multiplication by the binary dihedral group <e^{i pi/m}, j> of order 4m
std::vector<Mat4> gamma_binary_dihedral(int m);

// "trivial", "cyclic:m", "binary-dihedral:m"; throws std::invalid_argument
std::vector<Mat4> gamma_preset(const std::string& name);

// throws std::invalid_argument: weights zero or not coprime, N < 50, a matrix
// not orthogonal to 1e-12, list not closed, or not commuting with the circle
void validate_spec(const IsometricActionSpec& spec);

struct MarkedPoint {
  std::size_t index;
  std::string label;
  std::int64_t isotropy_order;  // 1: marked but principal
};

class Geometry;

struct SampledMetricSpace {
  std::vector<Vec4> points;
  std::vector<double> dist;  // n x n, row-major
  std::vector<MarkedPoint> marked;
  std::size_t samples = 0;   // requested N (marked points come on top)
  std::uint64_t seed = 0;
  std::string label;
  std::shared_ptr<const Geometry> geometry;  // null for derived spaces

  std::size_t size() const { return points.size(); }
  double d(std::size_t i, std::size_t j) const { return dist[i * points.size() + j]; }
};

// the metric a sample lives in, and enough local structure to cut along a path
class Geometry {
 public:
  virtual ~Geometry() = default;
  virtual double distance(const Vec4& x, const Vec4& y) const = 0;
  // the representative of y's class nearest to x
  virtual Vec4 align(const Vec4& x, const Vec4& y) const = 0;
  // y moved along its own orbit to the point nearest x, no group element applied
  virtual Vec4 slide(const Vec4& x, const Vec4& y) const = 0;
  // y under every element of the finite group, identity first
  virtual std::vector<Vec4> images(const Vec4& y) const = 0;
  // unit vector spanning the collapsed (orbit) direction at x, orthogonal to x
  virtual Vec4 fiber_direction(const Vec4& x) const = 0;
  virtual SampledMetricSpace sample(std::size_t n) const = 0;
};

struct Alignment {
  double cosine;       // max over gamma, theta of <x, R(theta) gamma y>
  std::size_t gamma;
  double theta;
};

class QuotientGeometry : public Geometry, public std::enable_shared_from_this<QuotientGeometry> {
 public:
  explicit QuotientGeometry(IsometricActionSpec spec);  // validates

  double distance(const Vec4& x, const Vec4& y) const override;
  Vec4 align(const Vec4& x, const Vec4& y) const override;
  Vec4 slide(const Vec4& x, const Vec4& y) const override;
  std::vector<Vec4> images(const Vec4& y) const override;
  Vec4 fiber_direction(const Vec4& x) const override;
  SampledMetricSpace sample(std::size_t n) const override;

  Alignment best_alignment(const Vec4& x, const Vec4& y) const;
  Vec4 rotate(const Vec4& x, double theta) const;  // R(theta) x
  const IsometricActionSpec& spec() const { return spec_; }
  std::int64_t isotropy_order(const Vec4& x) const;

  // class representatives of exceptional orbits (and the coordinate circles)
  std::vector<std::pair<Vec4, std::string>> marked_candidates() const;

 private:
  // f(theta) = Re(a e^{ip theta}) + Re(b e^{iq theta})
  struct Coefficients {
    double ar, ai, br, bi;
  };
  static Coefficients coefficients(const Vec4& x, const Vec4& y);
  double scan(const Coefficients& c, std::vector<double>& f) const;
  std::pair<double, double> refine(const Coefficients& c, std::size_t k) const;
  std::pair<double, double> peak(const Coefficients& c) const;  // (max, argmax)
  bool in_circle(const Mat4& g) const;

  IsometricActionSpec spec_;  // internally p, q > 0; gamma conjugated to match
  std::int64_t sign_p_ = 1, sign_q_ = 1;
  std::size_t scan_points_ = 256;
  std::vector<double> cp_, sp_, cq_, sq_;
  double scan_slack_ = 0;
};

class RoundSphereGeometry : public Geometry, public std::enable_shared_from_this<RoundSphereGeometry> {
 public:
  RoundSphereGeometry(double radius, std::uint64_t seed) : radius_(radius), seed_(seed) {}
  double distance(const Vec4& x, const Vec4& y) const override;
  Vec4 align(const Vec4&, const Vec4& y) const override { return y; }
  Vec4 slide(const Vec4&, const Vec4& y) const override { return y; }
  std::vector<Vec4> images(const Vec4& y) const override { return {y}; }
  Vec4 fiber_direction(const Vec4&) const override { return {0, 0, 0, 1}; }
  SampledMetricSpace sample(std::size_t n) const override;

 private:
  double radius_;
  std::uint64_t seed_;
};

SampledMetricSpace sample_quotient(const IsometricActionSpec& spec);

// the round 2-sphere of the given radius, stored as (x, y, z, 0)
SampledMetricSpace sample_round_sphere(std::size_t n, std::uint64_t seed, double radius = 1.0);

// Hopf image on the unit S^2 of a point of S^3
std::array<double, 3> hopf(const Vec4& x);

// N unit vectors in R^dim, from mt19937_64 with an explicit Box-Muller so the
// stream is reproducible across standard libraries
std::vector<Vec4> random_unit_vectors(std::size_t n, std::uint64_t seed, int dim);

}  // namespace x4
