#include "vemspectra/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace vems {

namespace {

// best (y_inf, C) for a fixed order, returning the rms residual
double linear_pass(const std::vector<double>& x, const std::vector<double>& y,
                   double order, double* y_inf, double* coeff) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::pow(x[i], order);
    b[i] = y[i];
  }
  const Eigen::Vector2d sol = (A.transpose() * A).ldlt().solve(A.transpose() * b);
  if (y_inf) *y_inf = sol[0];
  if (coeff) *coeff = sol[1];
  return std::sqrt((A * sol - b).squaredNorm() / n);
}

}  // namespace

ConvergenceFit fit_convergence(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 3 || y.size() != x.size())
    throw std::invalid_argument("fit_convergence needs at least 3 (x, y) pairs");
  for (int i = 1; i < n; ++i)
    if (!(x[i] > 0.0) || !((x[i] - x[i - 1]) * (x[1] - x[0]) > 0.0))
      throw std::invalid_argument("fit_convergence needs monotone positive x");

  // initial order from successive differences: y_{i+1}-y_i ~ C (x_{i+1}^t - x_i^t),
  // regressed in log-log against the geometric midpoints
  std::vector<double> lx, ly;
  for (int i = 0; i + 1 < n; ++i) {
    const double dy = std::abs(y[i + 1] - y[i]);
    if (dy <= 0.0) continue;
    lx.push_back(0.5 * (std::log(x[i]) + std::log(x[i + 1])));
    ly.push_back(std::log(dy));
  }
  double t0 = 1.0;
  if (lx.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double m = lx.size();
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) > 0.0) t0 = (m * sxy - sx * sy) / denom;
  }
  t0 = std::clamp(t0, 0.05, 8.0);

  // golden-section refinement of the order on a bracket around the seed
  double lo = std::max(0.05, t0 - 1.5);
  double hi = std::min(8.0, t0 + 1.5);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = linear_pass(x, y, c, nullptr, nullptr);
  double fd = linear_pass(x, y, d, nullptr, nullptr);
  for (int it = 0; it < 120; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = linear_pass(x, y, c, nullptr, nullptr);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = linear_pass(x, y, d, nullptr, nullptr);
    }
  }

  ConvergenceFit fit;
  fit.order = 0.5 * (lo + hi);
  fit.residual = linear_pass(x, y, fit.order, &fit.extrapolated, &fit.coefficient);
  return fit;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope needs at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("loglog_slope: too few usable points");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace vems
