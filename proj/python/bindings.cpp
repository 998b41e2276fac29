#include "vemspectra/adapt.hpp"
#include "vemspectra/eigsolve.hpp"
#include "vemspectra/experiments.hpp"
#include "vemspectra/fem_p1.hpp"
#include "vemspectra/mesh_io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>

namespace py = pybind11;
using namespace vems;

namespace {

py::dict mesh_to_dict(const PolyMesh& mesh) {
  py::dict d;
  py::list verts, elems, edges;
  for (const Vec2& p : mesh.vertices) verts.append(py::make_tuple(p.x(), p.y()));
  for (const auto& cyc : mesh.elements) elems.append(py::cast(cyc));
  for (const Edge& ed : mesh.edges)
    edges.append(py::make_tuple(ed.v0, ed.v1, edge_tag_name(ed.tag)));
  d["vertices"] = verts;
  d["elements"] = elems;
  d["edges"] = edges;
  return d;
}

struct SolveResult {
  int dofs = 0;
  std::vector<double> eigenvalues;
  std::vector<double> frequencies;
  std::vector<double> residuals;
};

SolveResult solve_mesh(const PolyMesh& mesh, const Material& mat, int m, double tol) {
  const GlobalSystem sys = assemble(mesh, mat);
  const EigenSolution sol = solve_smallest(sys.stiffness, sys.mass, m, tol, mat.rho);
  SolveResult out;
  out.dofs = sys.dofs.num_free;
  out.eigenvalues = sol.eigenvalues;
  out.frequencies = sol.frequencies();
  out.residuals = sol.residuals;
  return out;
}

py::dict estimate_first_mode(const PolyMesh& mesh, const Material& mat, double tol,
                             std::optional<double> omega_ref) {
  std::vector<LocalOperators> local;
  const GlobalSystem sys = assemble(mesh, mat, &local);
  const EigenSolution sol = solve_smallest(sys.stiffness, sys.mass, 1, tol, mat.rho);
  const Eigen::VectorXd full =
      expand_to_full(sys.dofs, mesh.num_vertices(), sol.eigenvectors[0]);
  const EstimatorReport rep = estimate(mesh, local, full, sol.eigenvalues[0],
                                       std::sqrt(sol.eigenvalues[0]), mat, omega_ref);
  py::dict d;
  d["dofs"] = sys.dofs.num_free;
  d["omega1"] = std::sqrt(sol.eigenvalues[0]);
  d["theta2"] = rep.total_theta_sq;
  d["R2"] = rep.total_vol_sq;
  d["J2"] = rep.total_jump_sq;
  d["eta2"] = rep.total_eta_sq;
  d["eta_per_element"] = rep.eta_per_element();
  if (rep.effectivity) d["effectivity"] = *rep.effectivity;
  return d;
}

}  // namespace

PYBIND11_MODULE(_vemspectra, m) {
  m.doc() = "Lowest-order virtual element analysis of elastic vibration modes";

  py::class_<Material>(m, "Material")
      .def(py::init<double, double, double>(), py::arg("rho"), py::arg("young"),
           py::arg("poisson"))
      .def_readonly("rho", &Material::rho)
      .def_readonly("young", &Material::young)
      .def_readonly("poisson", &Material::poisson)
      .def_readonly("lambda_s", &Material::lambda_s)
      .def_readonly("mu_s", &Material::mu_s);

  py::class_<PolyMesh>(m, "PolyMesh")
      .def_property_readonly("num_vertices", &PolyMesh::num_vertices)
      .def_property_readonly("num_elements", &PolyMesh::num_elements)
      .def("total_area", &PolyMesh::total_area)
      .def("validate", &PolyMesh::validate)
      .def("to_dict", &mesh_to_dict)
      .def(
          "save", [](const PolyMesh& mesh, const std::string& path) { save_mesh(mesh, path); },
          py::arg("path"));

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("dofs", &SolveResult::dofs)
      .def_readonly("eigenvalues", &SolveResult::eigenvalues)
      .def_readonly("frequencies", &SolveResult::frequencies)
      .def_readonly("residuals", &SolveResult::residuals);

  m.def("lame_from_engineering", &lame_from_engineering, py::arg("young"),
        py::arg("poisson"));
  m.def("trapezoidal_mesh", &generate_trapezoidal_mesh, py::arg("n"));
  m.def("hexagonal_mesh", &generate_hexagonal_mesh, py::arg("n"), py::arg("seed") = 1u);
  m.def(
      "vessel_mesh",
      [](const std::string& fixity) {
        return generate_vessel_mesh(fixity == "outer" ? VesselFixity::OuterBoundary
                                                       : VesselFixity::OuterBottom);
      },
      py::arg("fixity") = "outer-bottom");
  m.def("load_mesh", &load_mesh, py::arg("path"));
  m.def("save_mesh", &save_mesh, py::arg("mesh"), py::arg("path"));

  m.def("solve", &solve_mesh, py::arg("mesh"), py::arg("material"),
        py::arg("num_modes") = 6, py::arg("eig_tol") = 1e-9);
  m.def("estimate", &estimate_first_mode, py::arg("mesh"), py::arg("material"),
        py::arg("eig_tol") = 1e-9, py::arg("omega_ref") = std::nullopt);

  m.def(
      "adaptive_run",
      [](const std::string& strategy, const Material& mat, int max_dofs,
         double mark_fraction, double omega_ref, const std::string& fixity) {
        AdaptiveConfig cfg;
        cfg.strategy = strategy == "fem"       ? RefineStrategy::AdaptiveFEM
                       : strategy == "uniform" ? RefineStrategy::UniformRed
                                               : RefineStrategy::AdaptiveVEM;
        cfg.max_dofs = max_dofs;
        cfg.mark_fraction = mark_fraction;
        cfg.omega_ref = omega_ref;
        const auto steps = adaptive_loop(
            generate_vessel_mesh(fixity == "outer" ? VesselFixity::OuterBoundary
                                                    : VesselFixity::OuterBottom),
            mat, cfg);
        py::list out;
        for (const AdaptiveStep& s : steps) {
          py::dict d;
          d["step"] = s.index;
          d["dofs"] = s.dofs;
          d["omega1"] = s.omega1;
          d["eta2"] = s.eta_sq;
          d["theta2"] = s.theta_sq;
          d["R2"] = s.vol_sq;
          d["J2"] = s.jump_sq;
          d["marked"] = s.marked;
          if (s.effectivity) d["effectivity"] = *s.effectivity;
          out.append(d);
        }
        return out;
      },
      py::arg("strategy") = "vem", py::arg("material") = Material::unit_test2(),
      py::arg("max_dofs") = 2000, py::arg("mark_fraction") = 0.5,
      py::arg("omega_ref") = 0.1538, py::arg("fixity") = "outer-bottom");
}
