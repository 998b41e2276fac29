#include "vemspectra/eigsolve.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vems {

std::vector<double> EigenSolution::frequencies() const {
  std::vector<double> out;
  out.reserve(eigenvalues.size());
  for (double lam : eigenvalues) {
    if (lam < 0.0)
      throw EigenSolveError("negative eigenvalue " + std::to_string(lam) +
                            ": discrete spectrum must be positive");
    out.push_back(std::sqrt(lam));
  }
  return out;
}

namespace {

constexpr int kDenseThreshold = 1000;

void fix_sign(Eigen::VectorXd& w) {
  int imax = 0;
  double best = 0.0;
  for (int i = 0; i < w.size(); ++i)
    if (std::abs(w[i]) > best) {
      best = std::abs(w[i]);
      imax = i;
    }
  if (w[imax] < 0.0) w = -w;
}

double relative_residual(const SpMat& A, const SpMat& B, double lam,
                         const Eigen::VectorXd& w) {
  const Eigen::VectorXd aw = A * w;
  return (aw - lam * (B * w)).norm() / aw.norm();
}

EigenSolution finalize_solution(const SpMat& A, const SpMat& B,
                                std::vector<double> lambda,
                                std::vector<Eigen::VectorXd> vecs,
                                double mass_scale) {
  EigenSolution sol;
  std::vector<int> order(lambda.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lambda[a] < lambda[b]; });
  for (int idx : order) {
    Eigen::VectorXd w = vecs[idx];
    const double bnorm = std::sqrt(w.dot(B * w));
    w *= std::sqrt(mass_scale) / bnorm;
    fix_sign(w);
    sol.eigenvalues.push_back(lambda[idx]);
    sol.residuals.push_back(relative_residual(A, B, lambda[idx], w));
    sol.eigenvectors.push_back(std::move(w));
  }
  return sol;
}

EigenSolution solve_dense(const SpMat& A, const SpMat& B, int m, double mass_scale) {
  const Eigen::MatrixXd Ad(A);
  const Eigen::MatrixXd Bd(B);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad, Bd);
  if (es.info() != Eigen::Success)
    throw EigenSolveError("dense generalized eigensolver failed (matrix pair not SPD?)");
  std::vector<double> lambda;
  std::vector<Eigen::VectorXd> vecs;
  for (int i = 0; i < m; ++i) {
    lambda.push_back(es.eigenvalues()[i]);
    vecs.push_back(es.eigenvectors().col(i));
  }
  return finalize_solution(A, B, std::move(lambda), std::move(vecs), mass_scale);
}

Eigen::VectorXd deterministic_start(int n) {
  Eigen::VectorXd v(n);
  std::uint64_t z = 0x853c49e6748fea9bull;
  for (int i = 0; i < n; ++i) {
    z = z * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = 0.5 + static_cast<double>(z >> 11) / 9007199254740992.0;
  }
  return v;
}

EigenSolution solve_lanczos(const SpMat& A, const SpMat& B, int m, double tol,
                            double mass_scale) {
  const int n = static_cast<int>(A.rows());
  Eigen::SimplicialLDLT<SpMat> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw EigenSolveError("LDLT factorization failed: stiffness is not SPD");

  const int ncv = std::min(n, std::max(3 * m + 30, 80));
  std::vector<Eigen::VectorXd> basis;  // B-orthonormal Lanczos vectors
  basis.reserve(ncv + 1);
  std::vector<double> alpha, beta;

  auto b_dot = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return x.dot(B * y);
  };

  Eigen::VectorXd v = deterministic_start(n);
  v /= std::sqrt(b_dot(v, v));
  basis.push_back(v);

  Eigen::VectorXd last_residuals;
  for (int j = 0; j < ncv; ++j) {
    Eigen::VectorXd w = ldlt.solve(B * basis[j]);
    const double a = b_dot(w, basis[j]);
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= b_dot(w, q) * q;
    const double b = std::sqrt(std::max(0.0, b_dot(w, w)));
    beta.push_back(b);

    const int k = j + 1;
    if (k >= std::max(m + 2, 8) || k == ncv || b < 1e-14) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
      for (int i = 0; i < k; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(T);
      // largest theta of the inverse operator <-> smallest lambda
      last_residuals = Eigen::VectorXd::Constant(m, 1.0);
      bool converged = k > m;
      for (int i = 0; i < std::min(m, k); ++i) {
        const int col = k - 1 - i;
        const double theta = tes.eigenvalues()[col];
        const double bound =
            b * std::abs(tes.eigenvectors()(k - 1, col)) / std::max(std::abs(theta), 1e-300);
        last_residuals[i] = bound;
        if (!(bound <= 0.02 * tol) || theta <= 0.0) converged = false;
      }
      if (converged || b < 1e-14) {
        std::vector<double> lambda;
        std::vector<Eigen::VectorXd> vecs;
        for (int i = 0; i < m; ++i) {
          const int col = k - 1 - i;
          const double theta = tes.eigenvalues()[col];
          if (theta <= 0.0)
            throw EigenSolveError("shift-invert produced a non-positive Ritz value");
          Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);
          for (int r = 0; r < k; ++r) w2 += tes.eigenvectors()(r, col) * basis[r];
          lambda.push_back(1.0 / theta);
          vecs.push_back(std::move(w2));
        }
        return finalize_solution(A, B, std::move(lambda), std::move(vecs), mass_scale);
      }
    }
    if (b < 1e-14) break;
    basis.push_back(w / b);
  }

  std::ostringstream msg;
  msg << "Lanczos did not converge within " << ncv
      << " iterations; residual bounds:";
  for (int i = 0; i < last_residuals.size(); ++i) msg << ' ' << last_residuals[i];
  throw EigenSolveError(msg.str());
}

}  // namespace

EigenSolution solve_smallest(const SpMat& A, const SpMat& B, int m, double tol,
                             double mass_scale) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw EigenSolveError("matrix dimensions mismatch");
  const int n = static_cast<int>(A.rows());
  if (n == 0) return {};  // fully constrained system, degenerate success
  if (m < 1) throw EigenSolveError("need at least one requested mode");
  if (m > n) m = n;
  if (n <= kDenseThreshold || m + 2 >= n) return solve_dense(A, B, m, mass_scale);
  return solve_lanczos(A, B, m, tol, mass_scale);
}

}  // namespace vems
