#include "x4/seifert.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <boost/integer/mod_inverse.hpp>

namespace x4 {

namespace {

bool coprime(std::int64_t a, std::int64_t b) { return std::gcd(a, b < 0 ? -b : b) == 1; }

std::int64_t mod_pos(std::int64_t b, std::int64_t a) {
  std::int64_t r = b % a;
  return r < 0 ? r + a : r;
}

}  // namespace

void check_presentation(const SeifertPresentation& p) {
  if (p.genus < 0) throw std::invalid_argument("negative genus");
  if (p.fibers.empty() && !p.trivial_fibration)
    throw std::invalid_argument("empty fiber list must be flagged as the trivial fibration");
  for (const auto& f : p.fibers) {
    if (f.alpha <= 0) throw std::invalid_argument("fiber alpha must be positive");
    if (!coprime(f.alpha, f.beta))
      throw std::invalid_argument("fiber (" + std::to_string(f.alpha) + "," + std::to_string(f.beta) +
                                  ") is not coprime");
  }
}

TorusBasisChange sl2_complete(std::int64_t alpha, std::int64_t beta) {
  if (alpha <= 0 || !coprime(alpha, beta)) throw std::invalid_argument("sl2_complete: need alpha > 0, gcd(alpha,|beta|) = 1");
  if (alpha == 1) return {1, 0, -beta, 1};
  std::int64_t gamma = boost::integer::mod_inverse(mod_pos(beta, alpha), alpha);
  // exact: alpha divides 1 - beta*gamma
  std::int64_t delta = (1 - beta * gamma) / alpha;
  return {alpha, gamma, -beta, delta};
}

MeridianCoefficients meridian_coefficients(std::int64_t alpha, std::int64_t beta) {
  if (alpha <= 0 || !coprime(alpha, beta)) throw std::invalid_argument("meridian_coefficients: need alpha > 0, gcd(alpha,|beta|) = 1");
  return {alpha, beta};
}

Rational euler_number(const SeifertPresentation& p) {
  Rational e = 0;
  for (const auto& f : p.fibers) e -= Rational(f.beta, f.alpha);
  return e;
}

SeifertPresentation normalize(const SeifertPresentation& p) {
  check_presentation(p);
  SeifertPresentation out;
  out.genus = p.genus;
  std::int64_t b = 0;
  bool saw_unit = false;
  for (const auto& f : p.fibers) {
    if (f.alpha == 1) {
      b += f.beta;
      saw_unit = true;
      continue;
    }
    std::int64_t r = mod_pos(f.beta, f.alpha);
    // beta = r + alpha*k, so beta/alpha = r/alpha + k
    b += (f.beta - r) / f.alpha;
    out.fibers.push_back({f.alpha, r});
  }
  if (b != 0 || saw_unit || out.fibers.empty()) out.fibers.push_back({1, b});
  return out;
}

GroupPresentation fundamental_group(const SeifertPresentation& p) {
  check_presentation(p);
  if (p.genus != 0) throw std::invalid_argument("fundamental_group: only genus 0 is supported");
  const int n = static_cast<int>(p.fibers.size());
  GroupPresentation g;
  for (int i = 1; i <= n; ++i) g.generators.push_back("q" + std::to_string(i));
  g.generators.push_back("h");
  const int h = n + 1;
  for (int i = 1; i <= n; ++i) g.relators.push_back({i, h, -i, -h});
  for (int i = 1; i <= n; ++i) {
    const auto& f = p.fibers[i - 1];
    Word w(f.alpha, i);
    for (std::int64_t k = 0; k < (f.beta < 0 ? -f.beta : f.beta); ++k) w.push_back(f.beta > 0 ? h : -h);
    g.relators.push_back(std::move(w));
  }
  Word prod;
  for (int i = 1; i <= n; ++i) prod.push_back(i);
  g.relators.push_back(std::move(prod));
  return g;
}

std::optional<Integer> abelian_order_two_fibers(const SeifertPresentation& p) {
  check_presentation(p);
  if (p.fibers.size() != 2) throw std::invalid_argument("abelian_order_two_fibers: need exactly two fibers");
  Integer d = Integer(p.fibers[0].alpha) * p.fibers[1].beta + Integer(p.fibers[1].alpha) * p.fibers[0].beta;
  if (d == 0) return std::nullopt;
  return abs(d);
}

std::string to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::sphere: return "sphere";
    case BoundaryKind::lens_space: return "lens-space";
    case BoundaryKind::s2xs1: return "s2xs1";
    case BoundaryKind::prism: return "prism";
    case BoundaryKind::tetrahedral: return "tetrahedral";
    case BoundaryKind::other: return "other";
  }
  return "other";
}

namespace {

BoundaryRecognition from_cyclic_order(std::optional<Integer> order) {
  BoundaryRecognition r;
  if (!order) {
    r.kind = BoundaryKind::s2xs1;
    r.admissible = false;
    r.note = "infinite fundamental group";
  } else if (*order == 1) {
    r.kind = BoundaryKind::sphere;
    r.order = order;
    r.admissible = true;
  } else {
    r.kind = BoundaryKind::lens_space;
    r.order = order;
    r.admissible = true;
  }
  return r;
}

// |pi_1| = |e| (2/chi)^2 for a spherical base orbifold with orbifold Euler
// characteristic chi (the base group has order 2/chi)
std::optional<Integer> spherical_order(const SeifertPresentation& p) {
  Rational chi = 2 - static_cast<long>(p.fibers.size());
  for (const auto& f : p.fibers) chi += Rational(1, f.alpha);
  if (chi <= 0) return std::nullopt;
  Rational n = abs(euler_number(p)) * 4 / (chi * chi);
  if (denominator(n) != 1) return std::nullopt;
  return numerator(n);
}

}  // namespace

BoundaryRecognition recognize_boundary(const SeifertPresentation& p) {
  check_presentation(p);
  if (p.genus != 0) throw std::invalid_argument("recognize_boundary: only genus 0 is supported");
  BoundaryRecognition other;
  other.note = "fiber count or shape not recognized";
  if (p.fibers.size() > 3) return other;

  if (p.fibers.size() == 2) return from_cyclic_order(abelian_order_two_fibers(p));

  std::size_t exceptional = std::count_if(p.fibers.begin(), p.fibers.end(), [](const Fiber& f) { return f.alpha > 1; });
  if (exceptional <= 2) {
    // at most two exceptional fibers over S^2: pi_1 is cyclic, so H_1 decides
    return from_cyclic_order(abelianize(fundamental_group(p)).order());
  }

  // three exceptional fibers: look for {(k,-1), (k,1), (a,b)} in any order
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const Fiber& m = p.fibers[i];
      const Fiber& pl = p.fibers[j];
      if (m.alpha != pl.alpha || m.beta != -1 || pl.beta != 1) continue;
      const Fiber& rest = p.fibers[3 - i - j];
      const std::int64_t k = m.alpha;
      BoundaryRecognition r;
      if (k == 2) {
        r.order = spherical_order(p);
        r.kind = BoundaryKind::prism;
        r.admissible = true;
        return r;
      }
      if (k == 3) {
        if (rest.alpha == 2) {
          r.order = spherical_order(p);
          r.kind = BoundaryKind::tetrahedral;
          r.admissible = true;
          return r;
        }
        // base orbifold S^2(3,3,a) with a >= 3 is not spherical
        r.kind = BoundaryKind::other;
        r.admissible = false;
        r.note = "base orbifold S^2(3,3," + std::to_string(rest.alpha) + ") is not spherical";
        return r;
      }
    }
  }
  return other;
}

}  // namespace x4
