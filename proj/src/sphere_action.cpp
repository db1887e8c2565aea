#include "x4/sphere_action.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "x4/parallel.hpp"

namespace x4 {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double golden_tol = 1e-10;

using cplx = std::complex<double>;

double clamp_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

std::array<double, 4> quat_mul(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Mat4 right_mul_matrix(const std::array<double, 4>& g) {
  Mat4 m{};
  for (int c = 0; c < 4; ++c) {
    std::array<double, 4> e{};
    e[c] = 1;
    auto col = quat_mul(e, g);
    for (int r = 0; r < 4; ++r) m[r * 4 + c] = col[r];
  }
  return m;
}

double max_abs_diff(const Mat4& a, const Mat4& b) {
  double d = 0;
  for (int i = 0; i < 16; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Mat4 transpose(const Mat4& a) {
  Mat4 t{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) t[c * 4 + r] = a[r * 4 + c];
  return t;
}

Mat4 circle_matrix(std::int64_t p, std::int64_t q, double theta) {
  double c1 = std::cos(p * theta), s1 = std::sin(p * theta);
  double c2 = std::cos(q * theta), s2 = std::sin(q * theta);
  return {c1, -s1, 0, 0, s1, c1, 0, 0, 0, 0, c2, -s2, 0, 0, s2, c2};
}

}  // namespace

Mat4 identity4() { return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}; }

Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k)
      for (int col = 0; col < 4; ++col) c[r * 4 + col] += a[r * 4 + k] * b[k * 4 + col];
  return c;
}

Vec4 apply(const Mat4& m, const Vec4& x) {
  Vec4 y{};
  for (int r = 0; r < 4; ++r) y[r] = m[r * 4] * x[0] + m[r * 4 + 1] * x[1] + m[r * 4 + 2] * x[2] + m[r * 4 + 3] * x[3];
  return y;
}

double dot(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

std::vector<Mat4> gamma_trivial() { return {identity4()}; }

std::vector<Mat4> gamma_cyclic(int m) {
  if (m < 1) throw std::invalid_argument("cyclic group order must be >= 1");
  std::vector<Mat4> g;
  for (int k = 0; k < m; ++k) {
    double a = 2 * pi * k / m;
    g.push_back(right_mul_matrix({std::cos(a), std::sin(a), 0, 0}));
  }
  return g;
}

std::vector<Mat4> gamma_binary_dihedral(int m) {
  if (m < 1) throw std::invalid_argument("binary dihedral parameter must be >= 1");
  std::vector<Mat4> g;
  const std::array<double, 4> j = {0, 0, 1, 0};
  for (int k = 0; k < 2 * m; ++k) {
    double a = pi * k / m;
    std::array<double, 4> ak = {std::cos(a), std::sin(a), 0, 0};
    g.push_back(right_mul_matrix(ak));
    g.push_back(right_mul_matrix(quat_mul(ak, j)));
  }
  return g;
}

std::vector<Mat4> gamma_preset(const std::string& name) {
  if (name == "trivial") return gamma_trivial();
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    std::string kind = name.substr(0, colon);
    int m = 0;
    try {
      std::size_t used = 0;
      m = std::stoi(name.substr(colon + 1), &used);
      if (used != name.size() - colon - 1) m = 0;
    } catch (const std::exception&) {
      m = 0;
    }
    if (m >= 1 && kind == "cyclic") return gamma_cyclic(m);
    if (m >= 1 && kind == "binary-dihedral") return gamma_binary_dihedral(m);
  }
  throw std::invalid_argument("unknown group preset '" + name + "'");
}

void validate_spec(const IsometricActionSpec& spec) {
  if (spec.p == 0 || spec.q == 0) throw std::invalid_argument("circle weights must be nonzero");
  if (std::gcd(spec.p, spec.q) != 1) throw std::invalid_argument("circle weights must be coprime");
  if (spec.samples < 50) throw std::invalid_argument("at least 50 samples are needed");
  const auto& g = spec.gamma;
  if (g.empty()) return;
  const Mat4 id = identity4();
  const Mat4 r1 = circle_matrix(spec.p, spec.q, 0.7), r2 = circle_matrix(spec.p, spec.q, 1.9);
  for (const auto& m : g) {
    if (max_abs_diff(mul(transpose(m), m), id) > 1e-12) throw std::invalid_argument("group element is not orthogonal");
    if (max_abs_diff(mul(m, r1), mul(r1, m)) > 1e-9 || max_abs_diff(mul(m, r2), mul(r2, m)) > 1e-9)
      throw std::invalid_argument("group element does not commute with the circle action");
  }
  for (const auto& a : g)
    for (const auto& b : g) {
      Mat4 ab = mul(a, b);
      bool found = std::any_of(g.begin(), g.end(), [&](const Mat4& c) { return max_abs_diff(ab, c) <= 1e-9; });
      if (!found) throw std::invalid_argument("group list is not closed under composition");
    }
}

std::vector<Vec4> random_unit_vectors(std::size_t n, std::uint64_t seed, int dim) {
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };  // [0,1)
  std::vector<Vec4> out;
  out.reserve(n);
  double spare = 0;
  bool have_spare = false;
  auto gauss = [&] {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = 1.0 - uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare = r * std::sin(2 * pi * u2);
    have_spare = true;
    return r * std::cos(2 * pi * u2);
  };
  while (out.size() < n) {
    Vec4 v{};
    double s = 0;
    for (int i = 0; i < dim; ++i) {
      v[i] = gauss();
      s += v[i] * v[i];
    }
    if (s < 1e-24) continue;
    s = std::sqrt(s);
    for (int i = 0; i < dim; ++i) v[i] /= s;
    out.push_back(v);
  }
  return out;
}

std::array<double, 3> hopf(const Vec4& x) {
  cplx z1(x[0], x[1]), z2(x[2], x[3]);
  cplx w = z1 * std::conj(z2);
  return {2 * w.real(), 2 * w.imag(), std::norm(z1) - std::norm(z2)};
}

// ---------------------------------------------------------------------------

QuotientGeometry::QuotientGeometry(IsometricActionSpec spec) : spec_(std::move(spec)) {
  validate_spec(spec_);
  if (spec_.gamma.empty()) spec_.gamma = gamma_trivial();
  sign_p_ = spec_.p > 0 ? 1 : -1;
  sign_q_ = spec_.q > 0 ? 1 : -1;
  const std::int64_t w = std::max(std::abs(spec_.p), std::abs(spec_.q));
  scan_points_ = 256 * static_cast<std::size_t>(w);
  cp_.resize(scan_points_);
  sp_.resize(scan_points_);
  cq_.resize(scan_points_);
  sq_.resize(scan_points_);
  for (std::size_t k = 0; k < scan_points_; ++k) {
    double t = 2 * pi * static_cast<double>(k) / static_cast<double>(scan_points_);
    cp_[k] = std::cos(spec_.p * t);
    sp_[k] = std::sin(spec_.p * t);
    cq_[k] = std::cos(spec_.q * t);
    sq_[k] = std::sin(spec_.q * t);
  }
  // f'' <= w^2 (|a| + |b|) <= w^2, and the scan misses a peak by at most h/2
  const double half_step = pi / static_cast<double>(scan_points_);
  scan_slack_ = 0.5 * static_cast<double>(w * w) * half_step * half_step * 1.01 + 1e-15;
}

Vec4 QuotientGeometry::rotate(const Vec4& x, double theta) const {
  double c1 = std::cos(spec_.p * theta), s1 = std::sin(spec_.p * theta);
  double c2 = std::cos(spec_.q * theta), s2 = std::sin(spec_.q * theta);
  return {c1 * x[0] - s1 * x[1], s1 * x[0] + c1 * x[1], c2 * x[2] - s2 * x[3], s2 * x[2] + c2 * x[3]};
}

std::pair<double, double> QuotientGeometry::refine(const Coefficients& c, std::size_t k) const {
  const double h = 2 * pi / static_cast<double>(scan_points_);
  auto eval = [&](double t) {
    return c.ar * std::cos(spec_.p * t) - c.ai * std::sin(spec_.p * t) + c.br * std::cos(spec_.q * t) -
           c.bi * std::sin(spec_.q * t);
  };
  // golden-section search for the maximum on [t_k - h, t_k + h]
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  double lo = h * static_cast<double>(k) - h, hi = lo + 2 * h;
  double a = hi - invphi * (hi - lo), b = lo + invphi * (hi - lo);
  double fa = eval(a), fb = eval(b);
  while (hi - lo > golden_tol) {
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - invphi * (hi - lo);
      fa = eval(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + invphi * (hi - lo);
      fb = eval(b);
    }
  }
  double t = 0.5 * (lo + hi);
  // the maximum is flat, so values only pin t to ~1e-8; finish with Newton on f'
  for (int it = 0; it < 3; ++it) {
    const double P = static_cast<double>(spec_.p), Q = static_cast<double>(spec_.q);
    double sp = std::sin(P * t), cp = std::cos(P * t), sq = std::sin(Q * t), cq = std::cos(Q * t);
    double d1 = -P * (c.ar * sp + c.ai * cp) - Q * (c.br * sq + c.bi * cq);
    double d2 = -P * P * (c.ar * cp - c.ai * sp) - Q * Q * (c.br * cq - c.bi * sq);
    if (d2 >= 0) break;
    double step = d1 / d2;
    if (std::abs(step) > h) break;
    t -= step;
  }
  double v = eval(t);
  double tk = h * static_cast<double>(k), vk = eval(tk);
  if (vk > v) return {vk, tk};
  return {v, t};
}

double QuotientGeometry::scan(const Coefficients& c, std::vector<double>& f) const {
  const std::size_t M = scan_points_;
  double best = -1e300;
  for (std::size_t k = 0; k < M; ++k) {
    f[k] = c.ar * cp_[k] - c.ai * sp_[k] + c.br * cq_[k] - c.bi * sq_[k];
    best = std::max(best, f[k]);
  }
  return best;
}

std::pair<double, double> QuotientGeometry::peak(const Coefficients& c) const {
  std::vector<double> f(scan_points_);
  double top = scan(c, f);
  std::pair<double, double> best{-1e300, 0};
  const std::size_t M = scan_points_;
  for (std::size_t k = 0; k < M; ++k) {
    if (f[k] < top - scan_slack_ || f[k] < f[(k + M - 1) % M] || f[k] < f[(k + 1) % M]) continue;
    auto r = refine(c, k);
    if (r.first > best.first) best = r;
  }
  return best;
}

Alignment QuotientGeometry::best_alignment(const Vec4& x, const Vec4& y) const {
  const std::size_t ng = spec_.gamma.size();
  const std::size_t M = scan_points_;

  struct Peak {
    double value;
    std::size_t gamma, k;
    Coefficients c;
  };
  std::vector<Peak> peaks;
  double best_scan = -1e300;
  std::vector<double> f(M);

  for (std::size_t g = 0; g < ng; ++g) {
    Vec4 gy = ng == 1 ? y : x4::apply(spec_.gamma[g], y);
    Coefficients c = coefficients(x, gy);
    if (std::hypot(c.ar, c.ai) + std::hypot(c.br, c.bi) < best_scan - scan_slack_) continue;
    best_scan = std::max(best_scan, scan(c, f));
    for (std::size_t k = 0; k < M; ++k) {
      if (f[k] < best_scan - scan_slack_ || f[k] < f[(k + M - 1) % M] || f[k] < f[(k + 1) % M]) continue;
      peaks.push_back({f[k], g, k, c});
    }
  }

  Alignment best{-1e300, 0, 0};
  for (const auto& pk : peaks) {
    if (pk.value < best_scan - scan_slack_) continue;
    auto r = refine(pk.c, pk.k);
    if (r.first > best.cosine) best = {r.first, pk.gamma, r.second};
  }
  return best;
}

double QuotientGeometry::distance(const Vec4& x, const Vec4& y) const {
  // chord form, acos loses half the digits near zero
  Alignment a = best_alignment(x, y);
  Vec4 z = rotate(x4::apply(spec_.gamma[a.gamma], y), a.theta);
  double c = 0;
  for (int i = 0; i < 4; ++i) c += (x[i] - z[i]) * (x[i] - z[i]);
  return 2 * std::asin(std::min(1.0, 0.5 * std::sqrt(c)));
}

Vec4 QuotientGeometry::align(const Vec4& x, const Vec4& y) const {
  Alignment a = best_alignment(x, y);
  return rotate(x4::apply(spec_.gamma[a.gamma], y), a.theta);
}

Vec4 QuotientGeometry::slide(const Vec4& x, const Vec4& y) const { return rotate(y, peak(coefficients(x, y)).second); }

std::vector<Vec4> QuotientGeometry::images(const Vec4& y) const {
  std::vector<Vec4> out{y};
  for (const auto& g : spec_.gamma)
    if (max_abs_diff(g, identity4()) > 0) out.push_back(x4::apply(g, y));
  return out;
}

Vec4 QuotientGeometry::fiber_direction(const Vec4& x) const {
  Vec4 v = {-static_cast<double>(spec_.p) * x[1], static_cast<double>(spec_.p) * x[0],
            -static_cast<double>(spec_.q) * x[3], static_cast<double>(spec_.q) * x[2]};
  double n = std::sqrt(dot(v, v));
  for (auto& c : v) c /= n;
  return v;
}

QuotientGeometry::Coefficients QuotientGeometry::coefficients(const Vec4& x, const Vec4& y) {
  // a = conj(x1) y1, b = conj(x2) y2 in complex coordinates
  return {x[0] * y[0] + x[1] * y[1], x[0] * y[1] - x[1] * y[0], x[2] * y[2] + x[3] * y[3], x[2] * y[3] - x[3] * y[2]};
}

bool QuotientGeometry::in_circle(const Mat4& g) const {
  // trace(R(theta)^T g) reaches 4 only when g = R(theta)
  Coefficients c{g[0] + g[5], g[1] - g[4], g[10] + g[15], g[11] - g[14]};
  return peak(c).first > 4 - 1e-7;
}

std::int64_t QuotientGeometry::isotropy_order(const Vec4& x) const {
  const double eps = 1e-9;
  std::int64_t s = 0;  // order of the circle stabilizer of x
  if (std::hypot(x[0], x[1]) > eps) s = std::gcd(s, std::abs(spec_.p));
  if (std::hypot(x[2], x[3]) > eps) s = std::gcd(s, std::abs(spec_.q));
  std::int64_t stab = 0, kernel = 0;
  for (const auto& g : spec_.gamma) {
    if (peak(coefficients(x, x4::apply(g, x))).first > 1 - 1e-9) stab += s;
    if (in_circle(g)) ++kernel;
  }
  return stab / kernel;
}

std::vector<std::pair<Vec4, std::string>> QuotientGeometry::marked_candidates() const {
  std::vector<std::pair<Vec4, std::string>> cand = {{{1, 0, 0, 0}, "z2=0"}, {{0, 0, 1, 0}, "z1=0"}};
  // in the frame where both weights are positive every element is complex linear
  const double fp = sign_p_, fq = sign_q_;
  auto flip = [&](const Vec4& v) { return Vec4{v[0], fp * v[1], v[2], fq * v[3]}; };
  for (const auto& g : spec_.gamma) {
    auto col = [&](int k) { return flip(x4::apply(g, flip(Vec4{k == 0 ? 1.0 : 0.0, 0, k == 1 ? 1.0 : 0.0, 0}))); };
    Vec4 c0 = col(0), c1 = col(1);
    cplx u00(c0[0], c0[1]), u10(c0[2], c0[3]), u01(c1[0], c1[1]), u11(c1[2], c1[3]);
    if (std::abs(u01) < 1e-9 && std::abs(u10) < 1e-9 && std::abs(u00 - u11) < 1e-9) continue;  // scalar
    cplx tr = u00 + u11, det = u00 * u11 - u01 * u10;
    cplx disc = std::sqrt(tr * tr - 4.0 * det);
    for (cplx lambda : {(tr + disc) / 2.0, (tr - disc) / 2.0}) {
      cplx v1, v2;
      if (std::abs(u01) > 1e-9) {
        v1 = u01;
        v2 = lambda - u00;
      } else if (std::abs(u10) > 1e-9) {
        v1 = lambda - u11;
        v2 = u10;
      } else if (std::abs(lambda - u00) < std::abs(lambda - u11)) {
        v1 = 1;
        v2 = 0;
      } else {
        v1 = 0;
        v2 = 1;
      }
      double n = std::sqrt(std::norm(v1) + std::norm(v2));
      cand.push_back({flip(Vec4{v1.real() / n, v1.imag() / n, v2.real() / n, v2.imag() / n}), "gamma-axis"});
    }
  }
  return cand;
}

SampledMetricSpace QuotientGeometry::sample(std::size_t n) const {
  if (n < 50) throw std::invalid_argument("at least 50 samples are needed");
  SampledMetricSpace s;
  for (const auto& [v, label] : marked_candidates()) {
    bool seen = std::any_of(s.points.begin(), s.points.end(), [&](const Vec4& w) { return distance(v, w) < 1e-7; });
    if (seen) continue;
    s.marked.push_back({s.points.size(), label, isotropy_order(v)});
    s.points.push_back(v);
  }
  auto rnd = random_unit_vectors(n, spec_.seed, 4);
  s.points.insert(s.points.end(), rnd.begin(), rnd.end());
  s.samples = n;
  s.seed = spec_.seed;
  s.label = "quotient p=" + std::to_string(spec_.p) + " q=" + std::to_string(spec_.q) + " gamma=" + spec_.gamma_label;
  s.geometry = shared_from_this();

  const std::size_t N = s.points.size();
  s.dist.assign(N * N, 0.0);
  parallel_for(N, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      double d = distance(s.points[i], s.points[j]);
      s.dist[i * N + j] = d;
      s.dist[j * N + i] = d;
    }
  });
  return s;
}

double RoundSphereGeometry::distance(const Vec4& x, const Vec4& y) const { return radius_ * clamp_acos(dot(x, y)); }

SampledMetricSpace RoundSphereGeometry::sample(std::size_t n) const {
  SampledMetricSpace s;
  s.points = random_unit_vectors(n, seed_, 3);
  s.samples = n;
  s.seed = seed_;
  s.label = "round S^2 radius " + std::to_string(radius_);
  s.geometry = shared_from_this();
  const std::size_t N = n;
  s.dist.assign(N * N, 0.0);
  parallel_for(N, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      double d = distance(s.points[i], s.points[j]);
      s.dist[i * N + j] = d;
      s.dist[j * N + i] = d;
    }
  });
  return s;
}

SampledMetricSpace sample_quotient(const IsometricActionSpec& spec) {
  auto g = std::make_shared<QuotientGeometry>(spec);
  return g->sample(spec.samples);
}

SampledMetricSpace sample_round_sphere(std::size_t n, std::uint64_t seed, double radius) {
  auto g = std::make_shared<RoundSphereGeometry>(radius, seed);
  return g->sample(n);
}

}  // namespace x4
