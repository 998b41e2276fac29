#pragma once

#include "vemspectra/assembly.hpp"

#include <vector>

namespace vems {

class EigenSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenSolution {
  std::vector<double> eigenvalues;          // ascending
  std::vector<double> residuals;            // ||A w - lambda B w|| / ||A w||
  std::vector<Eigen::VectorXd> eigenvectors;

  std::vector<double> frequencies() const;  // sqrt(lambda), order preserved
};

// m smallest eigenpairs of A w = lambda B w for SPD A, B. Dense solve for
// dimensions up to 1000, otherwise shift-invert Lanczos (shift 0, LDLT
// factorization of A) with full B-reorthogonalization. Eigenvectors are
// B-orthogonal and scaled to w^T B w = mass_scale, sign fixed by making the
// largest-magnitude entry positive.
EigenSolution solve_smallest(const SpMat& A, const SpMat& B, int m,
                             double tol = 1e-9, double mass_scale = 1.0);

}  // namespace vems
