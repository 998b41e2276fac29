#pragma once

#include "vemspectra/assembly.hpp"

#include <optional>

namespace vems {

// Residual a-posteriori indicator for a computed eigenpair. All terms are
// closed-form for the lowest-order space: the projected displacement is
// linear per element, so stresses are elementwise constant, the strong-form
// divergence vanishes, and edge jumps are constant per edge.
struct EstimatorReport {
  std::vector<double> theta_sq;  // per-element inconsistency term
  std::vector<double> vol_sq;    // per-element volumetric residual
  std::vector<double> jump_sq;   // per-element h_E-weighted edge jump sum
  std::vector<double> eta_sq;    // theta + vol + jump

  double total_theta_sq = 0.0;
  double total_vol_sq = 0.0;
  double total_jump_sq = 0.0;
  double total_eta_sq = 0.0;

  double eta() const;
  std::vector<double> eta_per_element() const;  // sqrt of eta_sq

  // |omega_ref - omega_h| / eta^2 when a reference frequency is supplied
  std::optional<double> effectivity;
};

double theta_term(const LocalOperators& ops, const Eigen::VectorXd& elem_dofs);
double volume_residual(const LocalOperators& ops, const Eigen::VectorXd& elem_dofs,
                       double lambda_h, const Material& mat);

// Constant traction jumps: interior edges get the halved two-sided jump,
// Neumann edges the negated traction, Dirichlet edges zero.
std::vector<Vec2> edge_jumps(const PolyMesh& mesh,
                             const std::vector<LocalOperators>& local,
                             const Eigen::VectorXd& full_field, const Material& mat);

EstimatorReport estimate(const PolyMesh& mesh, const std::vector<LocalOperators>& local,
                         const Eigen::VectorXd& full_field, double lambda_h,
                         double omega_h, const Material& mat,
                         std::optional<double> omega_ref = std::nullopt);

}  // namespace vems
