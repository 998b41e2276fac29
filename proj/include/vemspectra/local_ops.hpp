#pragma once

#include "vemspectra/material.hpp"
#include "vemspectra/mesh.hpp"

#include <Eigen/Dense>

namespace vems {

// Lowest-order local virtual element operators on one polygon.
//
// The polynomial space is [P1]^2 in the scaled monomial basis
//   { (1,0), (0,1), (xi,0), (0,xi), (eta,0), (0,eta) },
//   xi = (x - x_c)/h_E,  eta = (y - y_c)/h_E,
// and DOF i = 2r + c is component c of the displacement at vertex r.
//
// `proj` maps DOF vectors to polynomial coefficients of the energy projection;
// for k = 1 the enhanced-space constraint makes the L2 projection coincide
// with it, so the same matrix serves both roles.
struct LocalOperators {
  int num_vertices = 0;
  double h = 0.0;
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();

  Eigen::MatrixXd proj;        // 6 x 2N, energy (= L2) projector
  Eigen::MatrixXd dof_of_poly; // 2N x 6, evaluates the basis at vertex DOFs
  Eigen::MatrixXd proj_dof;    // 2N x 2N, dof_of_poly * proj

  Eigen::Matrix<double, 6, 6> poly_stiffness; // a^E Gram matrix of the basis
  Eigen::Matrix<double, 6, 6> poly_mass;      // rho-weighted L2 Gram matrix

  Eigen::MatrixXd stiffness_c, stiffness_s, stiffness; // K_c, K_s, K_E
  Eigen::MatrixXd mass_c, mass_s, mass;                // M_c, M_s, M_E
  double sigma = 0.0;   // stabilization scale for the energy form
  double sigma0 = 0.0;  // stabilization scale for the mass form

  // L2 projector in DOF coordinates. The enhancement constraint of the local
  // space forces it to coincide with the energy projector at lowest order,
  // so this returns `proj` itself.
  const Eigen::MatrixXd& l2_projector() const { return proj; }

  // Constant strain/stress tensors of the projected field.
  Eigen::Matrix2d projected_stress(const Eigen::VectorXd& dofs, const Material& mat) const;

  // Exact squared L2 norm of the projected (linear) field over the element.
  double projected_l2_norm_sq(const Eigen::VectorXd& dofs) const;
};

// Constant strain of basis member beta (scaled monomial basis above).
Eigen::Matrix2d basis_strain(int beta, double h);
Eigen::Matrix2d hooke_stress(const Eigen::Matrix2d& strain, const Material& mat);

LocalOperators build_local_operators(std::span<const Vec2> poly, const Material& mat);

}  // namespace vems
