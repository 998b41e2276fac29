#include "vemspectra/fem_p1.hpp"

namespace vems {
namespace fem {

Eigen::Matrix<double, 6, 6> tri_stiffness(const std::array<Vec2, 3>& tri,
                                          const Material& mat) {
  const double twice_area =
      (tri[1].x() - tri[0].x()) * (tri[2].y() - tri[0].y()) -
      (tri[1].y() - tri[0].y()) * (tri[2].x() - tri[0].x());
  if (!(twice_area > 0.0)) throw MeshError("degenerate triangle");
  const double area = 0.5 * twice_area;

  // gradients of the barycentric coordinates
  double b[3], c[3];
  for (int i = 0; i < 3; ++i) {
    const Vec2& pj = tri[(i + 1) % 3];
    const Vec2& pk = tri[(i + 2) % 3];
    b[i] = (pj.y() - pk.y()) / twice_area;
    c[i] = (pk.x() - pj.x()) / twice_area;
  }

  Eigen::Matrix<double, 3, 6> B = Eigen::Matrix<double, 3, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    B(0, 2 * i) = b[i];
    B(1, 2 * i + 1) = c[i];
    B(2, 2 * i) = c[i];
    B(2, 2 * i + 1) = b[i];
  }
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  C(0, 0) = C(1, 1) = mat.lambda_s + 2.0 * mat.mu_s;
  C(0, 1) = C(1, 0) = mat.lambda_s;
  C(2, 2) = mat.mu_s;

  return area * B.transpose() * C * B;
}

Eigen::Matrix<double, 6, 6> tri_mass(const std::array<Vec2, 3>& tri, const Material& mat) {
  const double twice_area =
      (tri[1].x() - tri[0].x()) * (tri[2].y() - tri[0].y()) -
      (tri[1].y() - tri[0].y()) * (tri[2].x() - tri[0].x());
  if (!(twice_area > 0.0)) throw MeshError("degenerate triangle");
  const double scale = mat.rho * 0.5 * twice_area / 12.0;
  Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int comp = 0; comp < 2; ++comp)
        M(2 * i + comp, 2 * j + comp) = scale * (i == j ? 2.0 : 1.0);
  return M;
}

FemSystem assemble_p1(const PolyMesh& mesh, const Material& mat) {
  std::vector<bool> constrained(mesh.num_vertices(), false);
  for (const Edge& ed : mesh.edges)
    if (ed.tag == EdgeTag::Dirichlet) {
      constrained[ed.v0] = true;
      constrained[ed.v1] = true;
    }
  std::vector<int> dof(mesh.num_vertices(), -1);
  int nfree = 0;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!constrained[v]) {
      dof[v] = nfree;
      nfree += 2;
    }
  if (nfree == static_cast<int>(2 * mesh.vertices.size()))
    throw MeshError("empty Dirichlet boundary");

  std::vector<Eigen::Triplet<double>> tk, tm;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& cyc = mesh.elements[e];
    if (cyc.size() != 3) throw MeshError("assemble_p1 requires an all-triangle mesh");
    const std::array<Vec2, 3> tri = {mesh.vertices[cyc[0]], mesh.vertices[cyc[1]],
                                     mesh.vertices[cyc[2]]};
    const auto K = tri_stiffness(tri, mat);
    const auto M = tri_mass(tri, mat);
    int g[6];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 2; ++c)
        g[2 * r + c] = dof[cyc[r]] < 0 ? -1 : dof[cyc[r]] + c;
    for (int i = 0; i < 6; ++i) {
      if (g[i] < 0) continue;
      for (int j = 0; j < 6; ++j) {
        if (g[j] < 0) continue;
        tk.emplace_back(g[i], g[j], K(i, j));
        tm.emplace_back(g[i], g[j], M(i, j));
      }
    }
  }

  FemSystem sys;
  sys.num_free = nfree;
  sys.stiffness.resize(nfree, nfree);
  sys.mass.resize(nfree, nfree);
  sys.stiffness.setFromTriplets(tk.begin(), tk.end());
  sys.mass.setFromTriplets(tm.begin(), tm.end());
  sys.stiffness.makeCompressed();
  sys.mass.makeCompressed();
  return sys;
}

}  // namespace fem
}  // namespace vems
