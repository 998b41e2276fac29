#include "vemspectra/local_ops.hpp"

#include <cmath>

namespace vems {

std::pair<double, double> lame_from_engineering(double young, double poisson) {
  if (!(young > 0.0)) throw std::invalid_argument("Young modulus must be positive");
  if (!(poisson > 0.0 && poisson < 0.5))
    throw std::invalid_argument("Poisson ratio must lie in (0, 0.5)");
  const double lambda_s = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  const double mu_s = young / (2.0 * (1.0 + poisson));
  return {lambda_s, mu_s};
}

Eigen::Matrix2d basis_strain(int beta, double h) {
  Eigen::Matrix2d e = Eigen::Matrix2d::Zero();
  const double g = 1.0 / h;
  switch (beta) {
    case 0: case 1: break;               // constants
    case 2: e(0, 0) = g; break;          // (xi, 0)
    case 3: e(0, 1) = e(1, 0) = 0.5 * g; break;  // (0, xi)
    case 4: e(0, 1) = e(1, 0) = 0.5 * g; break;  // (eta, 0)
    case 5: e(1, 1) = g; break;          // (0, eta)
    default: throw std::out_of_range("basis index");
  }
  return e;
}

Eigen::Matrix2d hooke_stress(const Eigen::Matrix2d& strain, const Material& mat) {
  return 2.0 * mat.mu_s * strain +
         mat.lambda_s * strain.trace() * Eigen::Matrix2d::Identity();
}

namespace {

// value of basis member beta at point (xi, eta), by component
Vec2 basis_value(int beta, double xi, double eta) {
  const double m[3] = {1.0, xi, eta};
  Vec2 v = Vec2::Zero();
  v[beta % 2] = m[beta / 2];
  return v;
}

// integrals of the scaled monomials {1, xi, eta} products over the polygon,
// exact for quadratics via the 3-point edge-midpoint rule on a fan
Eigen::Matrix3d monomial_gram(std::span<const Vec2> poly, const Vec2& xc, double h) {
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  const auto tris = subtriangulate_polygon(poly);
  for (const Triangle& t : tris) {
    const Vec2 mids[3] = {0.5 * (t.a + t.b), 0.5 * (t.b + t.c), 0.5 * (t.c + t.a)};
    const double w = t.area() / 3.0;
    for (const Vec2& q : mids) {
      const double m[3] = {1.0, (q.x() - xc.x()) / h, (q.y() - xc.y()) / h};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) H(i, j) += w * m[i] * m[j];
    }
  }
  return H;
}

}  // namespace

Eigen::Matrix2d LocalOperators::projected_stress(const Eigen::VectorXd& dofs,
                                                 const Material& mat) const {
  const Eigen::VectorXd s = proj * dofs;
  Eigen::Matrix2d strain = Eigen::Matrix2d::Zero();
  for (int beta = 2; beta < 6; ++beta) strain += s[beta] * basis_strain(beta, h);
  return hooke_stress(strain, mat);
}

double LocalOperators::projected_l2_norm_sq(const Eigen::VectorXd& dofs) const {
  const Eigen::VectorXd s = proj * dofs;
  // poly_mass carries the rho weight
  return s.dot(poly_mass * s);
}

LocalOperators build_local_operators(std::span<const Vec2> poly, const Material& mat) {
  const int nv = static_cast<int>(poly.size());
  if (nv < 3) throw MeshError("element with fewer than 3 vertices");
  const int nd = 2 * nv;

  LocalOperators ops;
  ops.num_vertices = nv;
  ops.area = signed_area(poly);
  if (!(ops.area > 0.0)) throw MeshError("element with non-positive area");
  ops.h = polygon_diameter(poly);
  ops.centroid = polygon_centroid(poly);
  const double h = ops.h;
  const Vec2 xc = ops.centroid;

  // a^E Gram matrix of the basis: constant strains, so area * (C eps : eps)
  Eigen::Matrix2d sigma_b[6], eps_b[6];
  for (int b = 0; b < 6; ++b) {
    eps_b[b] = basis_strain(b, h);
    sigma_b[b] = hooke_stress(eps_b[b], mat);
  }
  Eigen::Matrix<double, 6, 6>& G = ops.poly_stiffness;
  for (int b = 0; b < 6; ++b)
    for (int g = 0; g < 6; ++g)
      G(b, g) = ops.area * (sigma_b[b].array() * eps_b[g].array()).sum();

  // a^E(p_b, phi_i): boundary tractions against the piecewise-linear trace,
  // the trapezoid rule on each edge is exact
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(6, nd);
  for (int r = 0; r < nv; ++r) {
    const Vec2& a = poly[r];
    const Vec2& b2 = poly[(r + 1) % nv];
    const Vec2 d = b2 - a;
    const double len = d.norm();
    const Vec2 nrm(d.y() / len, -d.x() / len);  // outward for a CCW cycle
    for (int b = 0; b < 6; ++b) {
      const Vec2 traction = sigma_b[b] * nrm;
      for (int comp = 0; comp < 2; ++comp) {
        B(b, 2 * r + comp) += 0.5 * len * traction[comp];
        B(b, 2 * ((r + 1) % nv) + comp) += 0.5 * len * traction[comp];
      }
    }
  }

  // vertex-average pairing against the rigid modes fixes the kernel of a^E
  auto rigid_value = [&](int k, const Vec2& p) -> Vec2 {
    switch (k) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      default: return {-(p.y() - xc.y()), p.x() - xc.x()};
    }
  };
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(3, 6);
  Eigen::MatrixXd Rrhs = Eigen::MatrixXd::Zero(3, nd);
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < nv; ++r) {
      const Vec2 rv = rigid_value(k, poly[r]);
      const double xi = (poly[r].x() - xc.x()) / h;
      const double eta = (poly[r].y() - xc.y()) / h;
      for (int b = 0; b < 6; ++b) R(k, b) += rv.dot(basis_value(b, xi, eta)) / nv;
      Rrhs(k, 2 * r + 0) += rv[0] / nv;
      Rrhs(k, 2 * r + 1) += rv[1] / nv;
    }

  // both blocks are simultaneously satisfiable, so the least-squares solution
  // of the stacked system is the exact projector; the energy block is scaled
  // to O(1) so the vertex-average rows are not swamped for stiff materials
  const double gscale = G.cwiseAbs().maxCoeff();
  if (!(gscale > 0.0)) throw MeshError("degenerate element: zero energy Gram matrix");
  Eigen::MatrixXd M(9, 6), rhs(9, nd);
  M << G / gscale, R;
  rhs << B / gscale, Rrhs;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  if (qr.rank() < 6)
    throw MeshError("degenerate element: projector system is rank deficient");
  ops.proj = qr.solve(rhs);

  // basis evaluated at the vertex DOFs
  Eigen::MatrixXd& D = ops.dof_of_poly;
  D = Eigen::MatrixXd::Zero(nd, 6);
  for (int r = 0; r < nv; ++r) {
    const double xi = (poly[r].x() - xc.x()) / h;
    const double eta = (poly[r].y() - xc.y()) / h;
    for (int b = 0; b < 6; ++b) {
      const Vec2 v = basis_value(b, xi, eta);
      D(2 * r + 0, b) = v[0];
      D(2 * r + 1, b) = v[1];
    }
  }
  ops.proj_dof = D * ops.proj;

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(nd, nd);
  const Eigen::MatrixXd residual = I - ops.proj_dof;

  // stabilization scale: mean of the eigenvalues of the consistency block,
  // evaluated as trace over dimension
  ops.stiffness_c = ops.proj.transpose() * G * ops.proj;
  ops.sigma = ops.stiffness_c.trace() / nd;
  ops.stiffness_s = ops.sigma * residual.transpose() * residual;
  ops.stiffness = ops.stiffness_c + ops.stiffness_s;

  const Eigen::Matrix3d H = monomial_gram(poly, xc, h);
  Eigen::Matrix<double, 6, 6>& Mhat = ops.poly_mass;
  Mhat.setZero();
  for (int b = 0; b < 6; ++b)
    for (int g = 0; g < 6; ++g)
      if (b % 2 == g % 2) Mhat(b, g) = mat.rho * H(b / 2, g / 2);

  ops.mass_c = ops.proj.transpose() * Mhat * ops.proj;
  ops.sigma0 = ops.mass_c.trace() / nd;
  ops.mass_s = ops.sigma0 * residual.transpose() * residual;
  ops.mass = ops.mass_c + ops.mass_s;

  return ops;
}

}  // namespace vems
