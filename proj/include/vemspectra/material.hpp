#pragma once

#include <stdexcept>
#include <utility>

namespace vems {

// Plane-strain Hooke's law: C tau = 2 mu_s tau + lambda_s tr(tau) I.
std::pair<double, double> lame_from_engineering(double young, double poisson);

struct Material {
  double rho;      // density
  double young;    // Young modulus
  double poisson;  // Poisson ratio
  double lambda_s; // first Lame parameter
  double mu_s;     // shear modulus

  Material(double rho_, double young_, double poisson_)
      : rho(rho_), young(young_), poisson(poisson_) {
    if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
    auto [l, m] = lame_from_engineering(young_, poisson_);
    lambda_s = l;
    mu_s = m;
  }

  static Material steel_test() { return {7.7e3, 1.44e11, 0.35}; }
  static Material unit_test2() { return {1.0, 1.0, 0.35}; }
};

}  // namespace vems
