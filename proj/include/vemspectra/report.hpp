#pragma once

#include "vemspectra/adapt.hpp"
#include "vemspectra/fit.hpp"

#include <string>
#include <vector>

namespace vems {

// Deterministic float formatting (6 significant digits) so identical runs
// produce byte-identical reports.
std::string fmt6(double v);

struct Test1Table {
  std::string family;
  std::vector<int> sizes;
  std::vector<std::vector<double>> omegas;  // [mode][size index]
  std::vector<ConvergenceFit> fits;         // per mode, against h = 1/n
};

struct StrategyRun {
  std::string name;  // "uniform" | "adaptive-fem" | "adaptive-vem"
  std::vector<AdaptiveStep> steps;
  double error_rate = 0.0;  // exponent of |omega_ref - omega_h1| ~ N^rate
};

struct Test2Table {
  double omega_ref = 0.0;
  std::vector<StrategyRun> runs;
};

std::string test1_csv(const Test1Table& table);
std::string test2_csv(const StrategyRun& run, double omega_ref);
std::string test1_json(const Test1Table& table);
std::string test2_json(const Test2Table& table);

// Minimal self-contained log-log SVG: error-vs-N polyline per strategy.
std::string test2_svg(const Test2Table& table);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace vems
