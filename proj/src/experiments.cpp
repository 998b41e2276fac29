#include "vemspectra/experiments.hpp"

#include "vemspectra/eigsolve.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace vems {

using nlohmann::json;

ExperimentConfig config_from_json(const std::string& text) {
  const json doc = json::parse(text);
  ExperimentConfig cfg;
  auto get = [&doc](const char* key, auto& field) {
    if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("test", cfg.test);
  get("family", cfg.family);
  get("sizes", cfg.sizes);
  get("strategies", cfg.strategies);
  get("num_modes", cfg.num_modes);
  get("max_dofs", cfg.max_dofs);
  get("mark_fraction", cfg.mark_fraction);
  get("eig_tol", cfg.eig_tol);
  get("reference_omega", cfg.omega_ref);
  get("vessel_dirichlet", cfg.vessel_dirichlet);
  get("formats", cfg.formats);
  if (doc.contains("material")) {
    const json& m = doc.at("material");
    cfg.rho = m.value("rho", cfg.rho);
    cfg.young = m.value("young", cfg.young);
    cfg.poisson = m.value("poisson", cfg.poisson);
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["test"] = cfg.test;
  doc["family"] = cfg.family;
  doc["sizes"] = cfg.sizes;
  doc["strategies"] = cfg.strategies;
  doc["material"] = {{"rho", cfg.rho}, {"young", cfg.young}, {"poisson", cfg.poisson}};
  doc["num_modes"] = cfg.num_modes;
  doc["max_dofs"] = cfg.max_dofs;
  doc["mark_fraction"] = cfg.mark_fraction;
  doc["eig_tol"] = cfg.eig_tol;
  doc["reference_omega"] = cfg.omega_ref;
  doc["vessel_dirichlet"] = cfg.vessel_dirichlet;
  doc["formats"] = cfg.formats;
  return doc.dump(2);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json(text);
}

Test1Table run_test1(const ExperimentConfig& config) {
  if (config.sizes.empty()) throw std::invalid_argument("test 1 needs a mesh-size list");
  const Material mat = config.material();

  Test1Table table;
  table.family = config.family;
  table.sizes = config.sizes;
  table.omegas.assign(config.num_modes, {});

  for (int n : config.sizes) {
    const PolyMesh mesh = config.family == "hexagon" ? generate_hexagonal_mesh(n)
                                                     : generate_trapezoidal_mesh(n);
    const GlobalSystem sys = assemble(mesh, mat);
    const EigenSolution sol =
        solve_smallest(sys.stiffness, sys.mass, config.num_modes, config.eig_tol, mat.rho);
    const auto freqs = sol.frequencies();
    for (int mode = 0; mode < config.num_modes; ++mode)
      table.omegas[mode].push_back(freqs[mode]);
  }

  std::vector<double> hs;
  for (int n : config.sizes) hs.push_back(1.0 / n);
  std::reverse(hs.begin(), hs.end());
  for (int mode = 0; mode < config.num_modes; ++mode) {
    std::vector<double> w(table.omegas[mode].rbegin(), table.omegas[mode].rend());
    table.fits.push_back(fit_convergence(hs, w));
  }
  return table;
}

Test2Table run_test2(const ExperimentConfig& config) {
  const Material mat = config.material();
  Test2Table table;
  table.omega_ref = config.omega_ref;

  for (const std::string& name : config.strategies) {
    AdaptiveConfig acfg;
    if (name == "uniform") acfg.strategy = RefineStrategy::UniformRed;
    else if (name == "adaptive-fem") acfg.strategy = RefineStrategy::AdaptiveFEM;
    else if (name == "adaptive-vem") acfg.strategy = RefineStrategy::AdaptiveVEM;
    else throw std::invalid_argument("unknown strategy " + name);
    acfg.mark_fraction = config.mark_fraction;
    acfg.max_dofs = config.max_dofs;
    acfg.eig_tol = config.eig_tol;
    acfg.omega_ref = config.omega_ref;

    StrategyRun run;
    run.name = name;
    run.steps = adaptive_loop(generate_vessel_mesh(config.fixity()), mat, acfg);

    std::vector<double> ns, errs;
    for (const AdaptiveStep& s : run.steps) {
      ns.push_back(s.dofs);
      errs.push_back(std::abs(config.omega_ref - s.omega1));
    }
    run.error_rate = loglog_slope(ns, errs);
    table.runs.push_back(std::move(run));
  }
  return table;
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

bool wants(const ExperimentConfig& config, const std::string& fmt) {
  return std::find(config.formats.begin(), config.formats.end(), fmt) !=
         config.formats.end();
}

}  // namespace

std::vector<std::string> emit_report(const Test1Table& table, const ExperimentConfig& config,
                                     const std::string& out_dir) {
  ensure_dir(out_dir);
  std::vector<std::string> paths;
  if (wants(config, "csv")) {
    const std::string p = out_dir + "/test1_" + table.family + ".csv";
    write_text_file(p, test1_csv(table));
    paths.push_back(p);
  }
  if (wants(config, "json")) {
    const std::string p = out_dir + "/test1_" + table.family + ".json";
    write_text_file(p, test1_json(table));
    paths.push_back(p);
  }
  return paths;
}

std::vector<std::string> emit_report(const Test2Table& table, const ExperimentConfig& config,
                                     const std::string& out_dir) {
  ensure_dir(out_dir);
  std::vector<std::string> paths;
  if (wants(config, "csv")) {
    for (const StrategyRun& run : table.runs) {
      const std::string p = out_dir + "/test2_" + run.name + ".csv";
      write_text_file(p, test2_csv(run, table.omega_ref));
      paths.push_back(p);
    }
  }
  if (wants(config, "json")) {
    const std::string p = out_dir + "/test2.json";
    write_text_file(p, test2_json(table));
    paths.push_back(p);
  }
  if (wants(config, "svg")) {
    const std::string p = out_dir + "/test2_error_curves.svg";
    write_text_file(p, test2_svg(table));
    paths.push_back(p);
  }
  return paths;
}

}  // namespace vems
