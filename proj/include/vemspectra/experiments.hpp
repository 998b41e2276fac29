#pragma once

#include "vemspectra/generators.hpp"
#include "vemspectra/report.hpp"

namespace vems {

struct ExperimentConfig {
  std::string test = "square";        // "square" | "vessel"
  std::string family = "trapezoid";   // "trapezoid" | "hexagon"
  std::vector<int> sizes = {16, 32, 64, 128};
  std::vector<std::string> strategies = {"uniform", "adaptive-fem", "adaptive-vem"};
  double rho = 7.7e3;
  double young = 1.44e11;
  double poisson = 0.35;
  int num_modes = 6;
  int max_dofs = 25000;
  double mark_fraction = 0.5;
  double eig_tol = 1e-9;
  double omega_ref = 0.1538;
  std::string vessel_dirichlet = "outer-bottom";  // "outer-bottom" | "outer"
  std::vector<std::string> formats = {"csv", "json"};

  Material material() const { return {rho, young, poisson}; }
  VesselFixity fixity() const {
    return vessel_dirichlet == "outer" ? VesselFixity::OuterBoundary
                                       : VesselFixity::OuterBottom;
  }
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

// Frequencies of the first `num_modes` modes across the uniform mesh family,
// with per-mode power-law fits against h = 1/n.
Test1Table run_test1(const ExperimentConfig& config);

// Adaptive/uniform refinement histories on the vessel with the error-vs-N
// convergence rate per strategy.
Test2Table run_test2(const ExperimentConfig& config);

// Writes table files for the requested formats into `out_dir`; returns the
// emitted paths in order.
std::vector<std::string> emit_report(const Test1Table& table, const ExperimentConfig& config,
                                     const std::string& out_dir);
std::vector<std::string> emit_report(const Test2Table& table, const ExperimentConfig& config,
                                     const std::string& out_dir);

}  // namespace vems
