#include "vemspectra/eigsolve.hpp"
#include "vemspectra/experiments.hpp"
#include "vemspectra/mesh_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace vems;

PolyMesh make_mesh(const std::string& family, int n, const std::string& fixity) {
  if (family == "trapezoid") return generate_trapezoidal_mesh(n);
  if (family == "hexagon") return generate_hexagonal_mesh(n);
  if (family == "vessel")
    return generate_vessel_mesh(fixity == "outer" ? VesselFixity::OuterBoundary
                                                   : VesselFixity::OuterBottom);
  throw std::runtime_error("unknown mesh family " + family);
}

void dump_matrix(const SpMat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << fmt6(it.value()) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual element vibration analysis on polygonal meshes"};
  app.require_subcommand(1);

  // mesh gen
  auto* mesh_cmd = app.add_subcommand("mesh", "mesh utilities");
  auto* gen = mesh_cmd->add_subcommand("gen", "generate a mesh file");
  std::string family = "trapezoid", out_file = "mesh.json", fixity = "outer-bottom";
  int n = 8;
  gen->add_option("--family", family, "trapezoid|hexagon|vessel")->required();
  gen->add_option("--n", n, "elements per side (square families)");
  gen->add_option("--out", out_file, "output mesh file")->required();
  gen->add_option("--vessel-dirichlet", fixity, "outer|outer-bottom");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "assemble and solve for the smallest modes");
  std::string mesh_file, solve_family, dump_dir, solve_out;
  int solve_n = 16, num_modes = 6;
  double rho = 7.7e3, young = 1.44e11, poisson = 0.35, eig_tol = 1e-9;
  solve_cmd->add_option("--mesh", mesh_file, "mesh file (overrides --family)");
  solve_cmd->add_option("--family", solve_family, "trapezoid|hexagon|vessel");
  solve_cmd->add_option("--n", solve_n, "elements per side");
  solve_cmd->add_option("--num-modes", num_modes, "number of modes");
  solve_cmd->add_option("--eig-tol", eig_tol, "eigensolver residual tolerance");
  solve_cmd->add_option("--rho", rho, "density");
  solve_cmd->add_option("--young", young, "Young modulus");
  solve_cmd->add_option("--poisson", poisson, "Poisson ratio");
  solve_cmd->add_option("--dump-matrices", dump_dir, "write A/B in coordinate format");
  solve_cmd->add_option("--out", solve_out, "write frequencies as JSON");

  // adapt
  auto* adapt_cmd = app.add_subcommand("adapt", "adaptive refinement loop on the vessel");
  std::string domain = "vessel", strategy = "vem", adapt_out = "out";
  int max_dofs = 25000;
  double mark_fraction = 0.5, a_rho = 1.0, a_young = 1.0, a_poisson = 0.35,
         omega_ref = 0.1538;
  adapt_cmd->add_option("--domain", domain, "vessel");
  adapt_cmd->add_option("--strategy", strategy, "vem|fem|uniform")->required();
  adapt_cmd->add_option("--max-dofs", max_dofs, "DOF cap");
  adapt_cmd->add_option("--mark-fraction", mark_fraction, "maximum-strategy fraction");
  adapt_cmd->add_option("--out", adapt_out, "output directory")->required();
  adapt_cmd->add_option("--rho", a_rho, "density");
  adapt_cmd->add_option("--young", a_young, "Young modulus");
  adapt_cmd->add_option("--poisson", a_poisson, "Poisson ratio");
  adapt_cmd->add_option("--reference-omega", omega_ref, "reference frequency");
  adapt_cmd->add_option("--vessel-dirichlet", fixity, "outer|outer-bottom");

  // report
  auto* report_cmd = app.add_subcommand("report", "run a configured experiment");
  std::string config_file, report_out = "out";
  report_cmd->add_option("--config", config_file, "experiment config JSON")->required();
  report_cmd->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const PolyMesh mesh = make_mesh(family, n, fixity);
      mesh.validate();
      save_mesh(mesh, out_file);
      std::cout << "wrote " << out_file << ": " << mesh.num_vertices() << " vertices, "
                << mesh.num_elements() << " elements\n";
    } else if (solve_cmd->parsed()) {
      PolyMesh mesh = mesh_file.empty() ? make_mesh(solve_family, solve_n, fixity)
                                        : load_mesh(mesh_file);
      const Material mat{rho, young, poisson};
      const GlobalSystem sys = assemble(mesh, mat);
      if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        dump_matrix(sys.stiffness, dump_dir + "/stiffness.txt");
        dump_matrix(sys.mass, dump_dir + "/mass.txt");
      }
      const EigenSolution sol =
          solve_smallest(sys.stiffness, sys.mass, num_modes, eig_tol, mat.rho);
      const auto freqs = sol.frequencies();
      std::cout << "free DOFs: " << sys.dofs.num_free << '\n';
      for (std::size_t i = 0; i < freqs.size(); ++i)
        std::cout << "omega_h" << (i + 1) << " = " << fmt6(freqs[i])
                  << "  (residual " << fmt6(sol.residuals[i]) << ")\n";
      if (!solve_out.empty()) {
        std::ostringstream os;
        os << "{\n  \"dofs\": " << sys.dofs.num_free << ",\n  \"omega\": [";
        for (std::size_t i = 0; i < freqs.size(); ++i)
          os << (i ? ", " : "") << fmt6(freqs[i]);
        os << "]\n}\n";
        write_text_file(solve_out, os.str());
      }
    } else if (adapt_cmd->parsed()) {
      if (domain != "vessel") throw std::runtime_error("only the vessel domain is wired up");
      ExperimentConfig cfg;
      cfg.test = "vessel";
      cfg.rho = a_rho;
      cfg.young = a_young;
      cfg.poisson = a_poisson;
      cfg.max_dofs = max_dofs;
      cfg.mark_fraction = mark_fraction;
      cfg.omega_ref = omega_ref;
      cfg.vessel_dirichlet = fixity;
      cfg.formats = {"csv", "json", "svg"};
      cfg.strategies = {strategy == "vem"   ? "adaptive-vem"
                        : strategy == "fem" ? "adaptive-fem"
                                            : "uniform"};
      const Test2Table table = run_test2(cfg);
      for (const std::string& p : emit_report(table, cfg, adapt_out))
        std::cout << "wrote " << p << '\n';
      std::cout << "error rate: N^" << fmt6(table.runs[0].error_rate) << '\n';
    } else if (report_cmd->parsed()) {
      const ExperimentConfig cfg = load_config(config_file);
      if (cfg.test == "square") {
        const Test1Table table = run_test1(cfg);
        for (const std::string& p : emit_report(table, cfg, report_out))
          std::cout << "wrote " << p << '\n';
      } else if (cfg.test == "vessel") {
        const Test2Table table = run_test2(cfg);
        for (const std::string& p : emit_report(table, cfg, report_out))
          std::cout << "wrote " << p << '\n';
      } else {
        throw std::runtime_error("config test must be 'square' or 'vessel'");
      }
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
