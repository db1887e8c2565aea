#include "x4/qprime.hpp"

#include <numbers>

namespace x4 {

namespace {

std::string label_of(const SampledMetricSpace& s, std::size_t index) {
  for (const auto& m : s.marked)
    if (m.index == index) return m.label + " (order " + std::to_string(m.isotropy_order) + ")";
  return "point " + std::to_string(index);
}

}  // namespace

QprimeReport check_condition_qprime(const IsometricActionSpec& spec, const QprimeOptions& opt) {
  constexpr double pi = std::numbers::pi;
  auto geometry = std::make_shared<QuotientGeometry>(spec);
  SampledMetricSpace space = geometry->sample(spec.samples);

  QprimeReport r;
  r.marked = space.marked;
  std::vector<std::size_t> finite;
  for (const auto& m : space.marked)
    if (m.isotropy_order > 1) finite.push_back(m.index);
  r.finite_isotropy_points = finite.size();

  auto xt2 = extent(space, 2, opt.extent);
  auto small = is_small(space, opt.tol, opt.extent);
  r.xt2 = xt2.value;
  r.xt3 = small.xt3;

  QprimeCheck c1;
  c1.item = "small";
  c1.detail = "xt3 of the quotient";
  c1.value = small.xt3;
  c1.bound = pi / 3;
  c1.margin = small.margin;
  c1.passed = small.small;
  r.checks.push_back(c1);

  if (finite.size() >= 2) {
    SampledMetricSpace cover_base = spec.samples == opt.cover_samples ? space : geometry->sample(opt.cover_samples);
    CoverOptions co;
    co.tol = opt.tol;
    for (std::size_t a = 0; a < finite.size(); ++a)
      for (std::size_t b = a + 1; b < finite.size(); ++b) {
        // marked points come first and in the same order at every resolution
        BranchedCover cover = double_branched_cover(cover_base, {finite[a], finite[b]}, co);
        auto s = is_small(cover.space, opt.tol, opt.extent);
        QprimeCheck c;
        c.item = "cover-small";
        c.detail = "cover branched over " + label_of(cover_base, finite[a]) + " and " + label_of(cover_base, finite[b]);
        c.value = s.xt3;
        c.bound = pi / 3;
        c.margin = s.margin;
        c.certificate = cover.certificate;
        c.converged = cover.certificate.achieved;
        c.passed = s.small && c.converged;
        r.converged = r.converged && c.converged;
        r.checks.push_back(c);
      }
  }

  if (finite.size() == 3) {
    QprimeCheck c3;
    c3.item = "diameter";
    c3.detail = "three components of finite isotropy";
    c3.value = xt2.value;
    c3.bound = pi / 4;
    c3.margin = pi / 4 - xt2.value;
    c3.passed = xt2.value <= pi / 4 + opt.tol;
    r.checks.push_back(c3);
  }

  r.all_passed = true;
  for (const auto& c : r.checks) r.all_passed = r.all_passed && c.passed;
  return r;
}

}  // namespace x4
