#pragma once

// Numerical check of the infinitesimal hypotheses at a fixed point whose
// space of directions is a round S^3/Gamma with a linear circle action.

#include <string>
#include <vector>

#include "x4/branched_cover.hpp"
#include "x4/extent.hpp"

namespace x4 {

struct QprimeOptions {
  double tol = 0.02;
  std::size_t cover_samples = 800;  // resolution for the covers (certified at twice this)
  ExtentOptions extent;
};

struct QprimeCheck {
  std::string item;    // "small", "cover-small", "diameter"
  std::string detail;
  double value = 0;
  double bound = 0;
  double margin = 0;   // bound - value
  bool passed = false;
  bool converged = true;
  ConvergenceCertificate certificate;
};

struct QprimeReport {
  std::vector<MarkedPoint> marked;
  std::size_t finite_isotropy_points = 0;
  double xt2 = 0, xt3 = 0;
  std::vector<QprimeCheck> checks;
  bool all_passed = false;
  bool converged = true;
};

QprimeReport check_condition_qprime(const IsometricActionSpec& spec, const QprimeOptions& opt = {});

}  // namespace x4
