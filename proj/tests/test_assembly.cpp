#include "vemspectra/eigsolve.hpp"
#include "vemspectra/fem_p1.hpp"
#include "vemspectra/generators.hpp"

#include <doctest.h>

#include <Eigen/SparseCholesky>

using namespace vems;

namespace {

double sparse_max_abs_diff(const SpMat& a, const SpMat& b) {
  return Eigen::MatrixXd(a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("assemble rejects meshes without a Dirichlet boundary") {
  PolyMesh mesh;
  mesh.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mesh.elements = {{0, 1, 2, 3}};
  mesh.finalize([](int, int) { return EdgeTag::Neumann; });
  CHECK_THROWS_AS(assemble(mesh, Material::unit_test2()), MeshError);
}

TEST_CASE("fully constrained mesh yields an empty system") {
  const PolyMesh mesh = generate_trapezoidal_mesh(1);
  // retag every boundary edge Dirichlet
  PolyMesh all_fixed;
  all_fixed.vertices = mesh.vertices;
  all_fixed.elements = mesh.elements;
  all_fixed.finalize([](int, int) { return EdgeTag::Dirichlet; });
  const GlobalSystem sys = assemble(all_fixed, Material::unit_test2());
  CHECK(sys.dofs.num_free == 0);
  const EigenSolution sol = solve_smallest(sys.stiffness, sys.mass, 1);
  CHECK(sol.eigenvalues.empty());
}

TEST_CASE("assembled stiffness is SPD and mass is SPD") {
  const PolyMesh mesh = generate_trapezoidal_mesh(4);
  const GlobalSystem sys = assemble(mesh, Material::steel_test());
  const int expected_free = 2 * (mesh.num_vertices() - (2 * 4 + 1));
  CHECK(sys.dofs.num_free == expected_free);

  Eigen::SimplicialLLT<SpMat> llt_a(sys.stiffness);
  CHECK(llt_a.info() == Eigen::Success);
  Eigen::SimplicialLLT<SpMat> llt_b(sys.mass);
  CHECK(llt_b.info() == Eigen::Success);

  const Eigen::MatrixXd A(sys.stiffness);
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-12 * A.cwiseAbs().maxCoeff());
}

TEST_CASE("VEM equals FEM on all-triangle meshes") {
  for (VesselFixity fix : {VesselFixity::OuterBoundary, VesselFixity::OuterBottom}) {
    const PolyMesh mesh = generate_vessel_mesh(fix);
    const Material mat = Material::unit_test2();
    const GlobalSystem vem_sys = assemble(mesh, mat);
    const fem::FemSystem fem_sys = fem::assemble_p1(mesh, mat);
    REQUIRE(vem_sys.dofs.num_free == fem_sys.num_free);
    const double ka = Eigen::MatrixXd(vem_sys.stiffness).cwiseAbs().maxCoeff();
    const double ma = Eigen::MatrixXd(vem_sys.mass).cwiseAbs().maxCoeff();
    CHECK(sparse_max_abs_diff(vem_sys.stiffness, fem_sys.stiffness) < 1e-12 * ka);
    CHECK(sparse_max_abs_diff(vem_sys.mass, fem_sys.mass) < 1e-12 * ma);
  }
}

TEST_CASE("assembly is independent of the thread count") {
  const PolyMesh mesh = generate_trapezoidal_mesh(6);
  const Material mat = Material::steel_test();
  // chunk merge order is fixed, so triplet streams are identical
  setenv("VEM_SPECTRA_THREADS", "1", 1);
  const GlobalSystem s1 = assemble(mesh, mat);
  setenv("VEM_SPECTRA_THREADS", "4", 1);
  const GlobalSystem s4 = assemble(mesh, mat);
  unsetenv("VEM_SPECTRA_THREADS");
  CHECK(sparse_max_abs_diff(s1.stiffness, s4.stiffness) == 0.0);
  CHECK(sparse_max_abs_diff(s1.mass, s4.mass) == 0.0);
}

TEST_CASE("element-local rigid modes stay in the global nullspace pattern") {
  const PolyMesh mesh = generate_hexagonal_mesh(4);
  const Material mat = Material::unit_test2();
  std::vector<LocalOperators> local;
  const GlobalSystem sys = assemble(mesh, mat, &local);
  // global stiffness applied to a global translation restricted to free DOFs
  // is nonzero (Dirichlet boundary gives ellipticity)
  Eigen::VectorXd tx = Eigen::VectorXd::Zero(sys.dofs.num_free);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (sys.dofs.vertex_dof[v] >= 0) tx[sys.dofs.vertex_dof[v]] = 1.0;
  CHECK((sys.stiffness * tx).norm() > 0.0);
  // but each element stiffness annihilates its local rigid restriction
  Eigen::VectorXd full = Eigen::VectorXd::Zero(2 * mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) full[2 * v] = 1.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Eigen::VectorXd dofs = element_dofs(mesh, e, full);
    CHECK((local[e].stiffness * dofs).cwiseAbs().maxCoeff() <
          1e-10 * local[e].stiffness.cwiseAbs().maxCoeff());
  }
}
