#include "vemspectra/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vems {

using nlohmann::json;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string test1_csv(const Test1Table& table) {
  std::ostringstream out;
  out << "mode";
  for (int n : table.sizes) out << ",N=" << n;
  out << ",order,extrapolated\n";
  for (std::size_t mode = 0; mode < table.omegas.size(); ++mode) {
    out << "omega_h" << (mode + 1);
    for (double w : table.omegas[mode]) out << ',' << fmt6(w);
    out << ',' << fmt6(table.fits[mode].order) << ','
        << fmt6(table.fits[mode].extrapolated) << '\n';
  }
  return out.str();
}

std::string test2_csv(const StrategyRun& run, double omega_ref) {
  std::ostringstream out;
  out << "N,omega_h1,error,R2,theta2,J2,eta2,effectivity\n";
  for (const AdaptiveStep& s : run.steps) {
    out << s.dofs << ',' << fmt6(s.omega1) << ',' << fmt6(std::abs(omega_ref - s.omega1))
        << ',' << fmt6(s.vol_sq) << ',' << fmt6(s.theta_sq) << ',' << fmt6(s.jump_sq)
        << ',' << fmt6(s.eta_sq) << ','
        << (s.effectivity ? fmt6(*s.effectivity) : std::string("nan")) << '\n';
  }
  return out.str();
}

namespace {

json fit_to_json(const ConvergenceFit& fit) {
  return {{"order", fit.order},
          {"extrapolated", fit.extrapolated},
          {"coefficient", fit.coefficient},
          {"residual", fit.residual}};
}

json steps_to_json(const std::vector<AdaptiveStep>& steps, double omega_ref) {
  json arr = json::array();
  for (const AdaptiveStep& s : steps) {
    json row = {{"step", s.index},        {"dofs", s.dofs},
                {"omega1", s.omega1},     {"error", std::abs(omega_ref - s.omega1)},
                {"R2", s.vol_sq},         {"theta2", s.theta_sq},
                {"J2", s.jump_sq},        {"eta2", s.eta_sq},
                {"marked", s.marked}};
    if (s.effectivity) row["effectivity"] = *s.effectivity;
    arr.push_back(row);
  }
  return arr;
}

}  // namespace

std::string test1_json(const Test1Table& table) {
  json doc;
  doc["family"] = table.family;
  doc["sizes"] = table.sizes;
  json modes = json::array();
  for (std::size_t mode = 0; mode < table.omegas.size(); ++mode)
    modes.push_back({{"mode", mode + 1},
                     {"omega", table.omegas[mode]},
                     {"fit", fit_to_json(table.fits[mode])}});
  doc["modes"] = modes;
  return doc.dump(2);
}

std::string test2_json(const Test2Table& table) {
  json doc;
  doc["omega_ref"] = table.omega_ref;
  json runs = json::array();
  for (const StrategyRun& run : table.runs)
    runs.push_back({{"strategy", run.name},
                    {"error_rate", run.error_rate},
                    {"steps", steps_to_json(run.steps, table.omega_ref)}});
  doc["runs"] = runs;
  return doc.dump(2);
}

std::string test2_svg(const Test2Table& table) {
  const double width = 640, height = 480, margin = 60;
  double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
  for (const StrategyRun& run : table.runs)
    for (const AdaptiveStep& s : run.steps) {
      const double err = std::abs(table.omega_ref - s.omega1);
      if (!(err > 0.0) || s.dofs <= 0) continue;
      lx_min = std::min(lx_min, std::log10(double(s.dofs)));
      lx_max = std::max(lx_max, std::log10(double(s.dofs)));
      ly_min = std::min(ly_min, std::log10(err));
      ly_max = std::max(ly_max, std::log10(err));
    }
  if (lx_max <= lx_min) lx_max = lx_min + 1.0;
  if (ly_max <= ly_min) ly_max = ly_min + 1.0;
  auto px = [&](double lx) { return margin + (lx - lx_min) / (lx_max - lx_min) * (width - 2 * margin); };
  auto py = [&](double ly) { return height - margin - (ly - ly_min) / (ly_max - ly_min) * (height - 2 * margin); };

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
      << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - margin / 3
      << "\" text-anchor=\"middle\" font-size=\"14\">log10 N</text>\n";
  out << "<text x=\"" << margin / 3 << "\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 " << margin / 3
      << ' ' << height / 2 << ")\">log10 |error|</text>\n";

  int color = 0;
  for (const StrategyRun& run : table.runs) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[color % 4]
        << "\" stroke-width=\"1.5\" points=\"";
    for (const AdaptiveStep& s : run.steps) {
      const double err = std::abs(table.omega_ref - s.omega1);
      if (!(err > 0.0) || s.dofs <= 0) continue;
      out << fmt6(px(std::log10(double(s.dofs)))) << ',' << fmt6(py(std::log10(err))) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 18 * color
        << "\" font-size=\"12\" fill=\"" << colors[color % 4] << "\">" << run.name
        << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

}  // namespace vems
