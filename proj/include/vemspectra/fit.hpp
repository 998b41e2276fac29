#pragma once

#include <stdexcept>
#include <vector>

namespace vems {

struct ConvergenceFit {
  double order = 0.0;        // t in  y ~ y_inf + C x^t
  double extrapolated = 0.0; // y_inf
  double coefficient = 0.0;  // C
  double residual = 0.0;     // rms misfit
};

// Three-parameter power-law fit y_i ~ y_inf + C x_i^t over monotone positive
// x. The order is seeded from log-transformed successive differences, then
// refined by a golden-section pass on t with linear least squares inside.
// Needs at least 3 points.
ConvergenceFit fit_convergence(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log|y| against log x (plain linear regression); used for
// error-vs-DOF convergence rates.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vems
