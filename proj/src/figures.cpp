#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "su11/sweep.hpp"
#include "su11/version.hpp"

namespace su11 {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;
constexpr int kPhaseGridCount = 201;  // default (theta, phi) resolution

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

double grid_phase(int i) {
  return -kPi + 2.0 * kPi * static_cast<double>(i) / (kPhaseGridCount - 1);
}

struct PhasePanel {
  std::vector<double> gamma_sid, gamma_hd, sigma_sid, sigma_hd, xi;
  std::vector<double> dphi_sid_pr, dphi_hd_pr;
  std::vector<bool> stable;
  std::size_t unstable = 0;
};

PhasePanel evaluate_phase_panel(const PointParams& base, int jobs, RecyclingVacuum vacuum) {
  const std::size_t n = static_cast<std::size_t>(kPhaseGridCount) * kPhaseGridCount;
  PhasePanel panel;
  panel.gamma_sid.resize(n);
  panel.gamma_hd.resize(n);
  panel.sigma_sid.resize(n);
  panel.sigma_hd.resize(n);
  panel.xi.resize(n);
  panel.dphi_sid_pr.resize(n);
  panel.dphi_hd_pr.resize(n);
  panel.stable.resize(n);
  std::atomic<std::size_t> unstable{0};
  parallel_for(n, jobs, [&](std::size_t i) {
    PointParams p = base;
    p.theta = grid_phase(static_cast<int>(i) / kPhaseGridCount);
    p.phi = grid_phase(static_cast<int>(i) % kPhaseGridCount);
    const auto e = enhancement_factors(to_config(p), p.phi, vacuum);
    panel.gamma_sid[i] = e.gamma_sid;
    panel.gamma_hd[i] = e.gamma_hd;
    panel.sigma_sid[i] = e.sigma_sid;
    panel.sigma_hd[i] = e.sigma_hd;
    panel.xi[i] = e.xi;
    panel.dphi_sid_pr[i] = e.dphi_sid_pr;
    panel.dphi_hd_pr[i] = e.dphi_hd_pr;
    panel.stable[i] = e.stable;
    if (!e.stable) unstable.fetch_add(1, std::memory_order_relaxed);
  });
  panel.unstable = unstable.load();
  return panel;
}

double finite_max(const std::vector<double>& v, const std::vector<bool>& ok) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!ok[i] || !std::isfinite(v[i])) continue;
    if (std::isnan(best) || v[i] > best) best = v[i];
  }
  return best;
}

std::size_t finite_argmax(const std::vector<double>& v, const std::vector<bool>& ok) {
  std::size_t arg = 0;
  double best = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!ok[i] || !std::isfinite(v[i])) continue;
    if (std::isnan(best) || v[i] > best) {
      best = v[i];
      arg = i;
    }
  }
  return arg;
}

/// value[argmin(cost)] over stable, finite entries.
double value_at_optimum(const std::vector<double>& value, const std::vector<double>& cost,
                        const std::vector<bool>& ok) {
  double best_cost = std::numeric_limits<double>::infinity();
  double out = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!ok[i] || !std::isfinite(cost[i]) || !std::isfinite(value[i])) continue;
    if (cost[i] < best_cost) {
      best_cost = cost[i];
      out = value[i];
    }
  }
  return out;
}

std::string phase_panel_csv(const PhasePanel& panel, bool gammas) {
  std::string csv = gammas ? "theta,phi,gamma_sid,gamma_hd,stable\n"
                           : "theta,phi,sigma_sid,sigma_hd,xi,stable\n";
  for (std::size_t i = 0; i < panel.stable.size(); ++i) {
    csv += format_double(grid_phase(static_cast<int>(i) / kPhaseGridCount));
    csv += ',';
    csv += format_double(grid_phase(static_cast<int>(i) % kPhaseGridCount));
    csv += ',';
    if (gammas) {
      csv += format_double(panel.gamma_sid[i]);
      csv += ',';
      csv += format_double(panel.gamma_hd[i]);
    } else {
      csv += format_double(panel.sigma_sid[i]);
      csv += ',';
      csv += format_double(panel.sigma_hd[i]);
      csv += ',';
      csv += format_double(panel.xi[i]);
    }
    csv += ',';
    csv += panel.stable[i] ? "true" : "false";
    csv += '\n';
  }
  return csv;
}

json base_manifest(const std::string& name, const PointParams& fixed,
                   RecyclingVacuum vacuum) {
  json m;
  m["tool"] = kToolName;
  m["version"] = kVersion;
  m["figure"] = name;
  m["vacuum_model"] = vacuum == RecyclingVacuum::fresh ? "fresh" : "shared";
  m["fixed"] = {{"g", fixed.g},         {"r", fixed.r},
                {"gamma", fixed.gamma}, {"T", fixed.T},
                {"theta", fixed.theta}, {"phi", fixed.phi}};
  return m;
}

// The (theta, phi) slices emitted alongside the max-over-grid envelope where a
// caption leaves the phases unspecified.
const std::vector<std::pair<double, double>>& ratio_slices() {
  static const std::vector<std::pair<double, double>> s{
      {-kPi / 8, 0.1}, {-kPi / 8, 0.3}, {-kPi / 4, 0.2}};
  return s;
}

std::vector<std::string> write_ratio_vs_T(const std::string& name, const fs::path& dir,
                                          int jobs, RecyclingVacuum vacuum) {
  // Enhancement over the conventional instrument as a function of T.
  const auto fp = figure_parameters(name);
  const bool is_sigma = name == "fig3";
  std::string csv = "T";
  for (std::size_t s = 0; s < ratio_slices().size(); ++s) {
    if (is_sigma) {
      csv += ",sigma_sid_slice" + std::to_string(s + 1);
      csv += ",sigma_hd_slice" + std::to_string(s + 1);
    } else {
      csv += ",xi_slice" + std::to_string(s + 1);
    }
  }
  csv += is_sigma ? ",sigma_sid_max,sigma_hd_max,sigma_sid_at_opt,sigma_hd_at_opt\n"
                  : ",xi_max\n";

  std::size_t unstable_total = 0;
  for (int i = 0; i < fp.sweep_grid.count; ++i) {
    PointParams p = fp.fixed;
    p.T = fp.sweep_grid.value(i);
    csv += format_double(p.T);
    for (const auto& [theta, phi] : ratio_slices()) {
      PointParams q = p;
      q.theta = theta;
      q.phi = phi;
      const auto e = enhancement_factors(to_config(q), q.phi, vacuum);
      if (is_sigma) {
        csv += ',';
        csv += format_double(e.sigma_sid);
        csv += ',';
        csv += format_double(e.sigma_hd);
      } else {
        csv += ',';
        csv += format_double(e.xi);
      }
    }
    const auto panel = evaluate_phase_panel(p, jobs, vacuum);
    unstable_total += panel.unstable;
    if (is_sigma) {
      csv += ',';
      csv += format_double(finite_max(panel.sigma_sid, panel.stable));
      csv += ',';
      csv += format_double(finite_max(panel.sigma_hd, panel.stable));
      // the ratio at the point a recycled instrument would actually operate:
      // the grid argmin of its own sensitivity
      csv += ',';
      csv += format_double(
          value_at_optimum(panel.sigma_sid, panel.dphi_sid_pr, panel.stable));
      csv += ',';
      csv += format_double(
          value_at_optimum(panel.sigma_hd, panel.dphi_hd_pr, panel.stable));
    } else {
      csv += ',';
      csv += format_double(finite_max(panel.xi, panel.stable));
    }
    csv += '\n';
  }

  json m = base_manifest(name, fp.fixed, vacuum);
  m["T_grid"] = {{"start", fp.sweep_grid.start},
                 {"stop", fp.sweep_grid.stop},
                 {"count", fp.sweep_grid.count}};
  json slices = json::array();
  for (const auto& [theta, phi] : ratio_slices()) slices.push_back({{"theta", theta}, {"phi", phi}});
  m["slices"] = slices;
  m["envelope"] = "max over stable points of the 201x201 (theta, phi) grid; the "
                  "*_at_opt columns evaluate the ratio at the grid point minimizing "
                  "the recycled instrument's own sensitivity (the max alone is "
                  "dominated by the conventional instrument's flat-fringe blind spots)";
  m["stability"] = {{"unstable_grid_points", unstable_total}};

  const fs::path data = dir / (name + ".csv");
  const fs::path manifest = dir / (name + ".manifest.json");
  write_text_file(data, csv);
  write_text_file(manifest, m.dump(2));
  return {data.string(), manifest.string()};
}

std::vector<std::string> write_phase_panels(const std::string& name, const fs::path& dir,
                                            int jobs, RecyclingVacuum vacuum) {
  const auto fp = figure_parameters(name);
  std::vector<std::string> files;
  json m = base_manifest(name, fp.fixed, vacuum);
  m["panel_parameter"] = fp.panel_key;
  m["grid"] = {{"theta", {{"start", -kPi}, {"stop", kPi}, {"count", kPhaseGridCount}}},
               {"phi", {{"start", -kPi}, {"stop", kPi}, {"count", kPhaseGridCount}}}};
  json panels = json::array();
  for (std::size_t pi = 0; pi < fp.panel_values.size(); ++pi) {
    PointParams p = fp.fixed;
    const double v = fp.panel_values[pi];
    if (fp.panel_key == "T") p.T = v;
    else if (fp.panel_key == "g") p.g = v;
    else if (fp.panel_key == "gamma") p.gamma = v;
    else if (fp.panel_key == "r") p.r = v;
    const auto panel = evaluate_phase_panel(p, jobs, vacuum);
    const std::string fname = name + "_panel" + std::to_string(pi + 1) + ".csv";
    write_text_file(dir / fname, phase_panel_csv(panel, true));
    files.push_back((dir / fname).string());
    const std::size_t arg_sid = finite_argmax(panel.gamma_sid, panel.stable);
    const std::size_t arg_hd = finite_argmax(panel.gamma_hd, panel.stable);
    panels.push_back(
        {{fp.panel_key, v},
         {"file", fname},
         {"max_gamma_sid", finite_max(panel.gamma_sid, panel.stable)},
         {"argmax_gamma_sid",
          {{"theta", grid_phase(static_cast<int>(arg_sid) / kPhaseGridCount)},
           {"phi", grid_phase(static_cast<int>(arg_sid) % kPhaseGridCount)}}},
         {"max_gamma_hd", finite_max(panel.gamma_hd, panel.stable)},
         {"argmax_gamma_hd",
          {{"theta", grid_phase(static_cast<int>(arg_hd) / kPhaseGridCount)},
           {"phi", grid_phase(static_cast<int>(arg_hd) % kPhaseGridCount)}}},
         {"unstable_fraction",
          static_cast<double>(panel.unstable) / panel.stable.size()}});
  }
  m["panels"] = panels;
  const fs::path manifest = dir / (name + ".manifest.json");
  write_text_file(manifest, m.dump(2));
  files.push_back(manifest.string());
  return files;
}

std::vector<std::string> write_lambda_curves(const std::string& name, const fs::path& dir,
                                             int jobs, RecyclingVacuum vacuum) {
  const auto fp = figure_parameters(name);
  const bool vs_r = name == "fig9";
  std::string csv = vs_r ? "r" : "T";
  for (double v : fp.panel_values) {
    csv += ",lambda_" + fp.panel_key + format_double(v);
  }
  csv += '\n';
  std::size_t unstable = 0;
  for (int i = 0; i < fp.sweep_grid.count; ++i) {
    const double x = fp.sweep_grid.value(i);
    csv += format_double(x);
    for (double v : fp.panel_values) {
      PointParams p = fp.fixed;
      if (vs_r) {
        p.r = x;
        p.g = v;
      } else {
        p.T = x;
        p.gamma = v;
      }
      const auto e = enhancement_factors(to_config(p), p.phi, vacuum);
      if (!e.stable) ++unstable;
      csv += ',';
      csv += format_double(e.lambda);
    }
    csv += '\n';
  }
  json m = base_manifest(name, fp.fixed, vacuum);
  m["panel_parameter"] = fp.panel_key;
  m["panel_values"] = fp.panel_values;
  m["x_axis"] = vs_r ? "r" : "T";
  m["x_grid"] = {{"start", fp.sweep_grid.start},
                 {"stop", fp.sweep_grid.stop},
                 {"count", fp.sweep_grid.count}};
  m["stability"] = {{"unstable_points", unstable}};
  const fs::path data = dir / (name + ".csv");
  const fs::path manifest = dir / (name + ".manifest.json");
  write_text_file(data, csv);
  write_text_file(manifest, m.dump(2));
  return {data.string(), manifest.string()};
}

std::vector<std::string> write_sensitivity_vs_gain(const fs::path& dir, int jobs,
                                                   RecyclingVacuum vacuum) {
  const auto fp = figure_parameters("fig11");
  std::string csv =
      "g,dphi_sid,dphi_hd,snl,qcrb,log10_dphi_sid,log10_dphi_hd,log10_snl,log10_qcrb\n";
  std::size_t unstable = 0;
  std::vector<std::array<double, 5>> rows(fp.sweep_grid.count);
  parallel_for(fp.sweep_grid.count, jobs, [&](std::size_t i) {
    PointParams p = fp.fixed;
    p.g = fp.sweep_grid.value(static_cast<int>(i));
    const auto e = enhancement_factors(to_config(p), p.phi, vacuum);
    rows[i] = {p.g, e.dphi_sid_pr, e.dphi_hd_pr, e.snl, e.qcrb_pr};
  });
  for (const auto& row : rows) {
    if (!std::isfinite(row[1])) ++unstable;
    csv += format_double(row[0]);
    for (int k = 1; k < 5; ++k) {
      csv += ',';
      csv += format_double(row[k]);
    }
    for (int k = 1; k < 5; ++k) {
      csv += ',';
      csv += format_double(std::log10(row[k]));
    }
    csv += '\n';
  }
  json m = base_manifest("fig11", fp.fixed, vacuum);
  m["g_grid"] = {{"start", fp.sweep_grid.start},
                 {"stop", fp.sweep_grid.stop},
                 {"count", fp.sweep_grid.count}};
  m["columns"] = {"g", "dphi_sid", "dphi_hd", "snl", "qcrb"};
  m["stability"] = {{"nonfinite_rows", unstable}};
  const fs::path data = dir / "fig11.csv";
  const fs::path manifest = dir / "fig11.manifest.json";
  write_text_file(data, csv);
  write_text_file(manifest, m.dump(2));
  return {data.string(), manifest.string()};
}

}  // namespace

bool is_figure_name(const std::string& name) {
  return name == "fig3" || name == "fig4" || name == "fig5" || name == "fig6" ||
         name == "fig7" || name == "fig8" || name == "fig9" || name == "fig10" ||
         name == "fig11";
}

FigureParams figure_parameters(const std::string& name) {
  FigureParams fp;
  if (name == "fig3" || name == "fig4") {
    fp.fixed = {1.0, 0.5, 1.0, 0.0, -kPi / 8, 0.1};
    fp.sweep_grid = {0.05, 0.95, 19};
    fp.panel_key = "T";
  } else if (name == "fig5") {
    fp.fixed = {1.2, 0.5, 1.0, 0.75, 0.0, 0.0};
    fp.panel_values = {0.75, 0.85, 0.95};
    fp.panel_key = "T";
    fp.sweep_grid = {-kPi, kPi, kPhaseGridCount};
  } else if (name == "fig6") {
    fp.fixed = {0.5, 0.5, 1.0, 0.80, 0.0, 0.0};
    fp.panel_values = {0.5, 1.0, 1.5};
    fp.panel_key = "g";
    fp.sweep_grid = {-kPi, kPi, kPhaseGridCount};
  } else if (name == "fig7") {
    fp.fixed = {1.0, 0.7, 1.0, 0.80, 0.0, 0.0};
    fp.panel_values = {1.0, 2.0, 3.0};
    fp.panel_key = "gamma";
    fp.sweep_grid = {-kPi, kPi, kPhaseGridCount};
  } else if (name == "fig8") {
    fp.fixed = {1.0, 0.0, 3.0, 0.80, 0.0, 0.0};
    fp.panel_values = {0.0, 0.5, 1.0};
    fp.panel_key = "r";
    fp.sweep_grid = {-kPi, kPi, kPhaseGridCount};
  } else if (name == "fig9") {
    fp.fixed = {0.5, 0.0, 1.0, 0.80, -kPi / 8, 0.0};
    fp.panel_values = {0.5, 0.7, 1.0, 1.2};
    fp.panel_key = "g";
    fp.sweep_grid = {0.0, 1.5, 31};
  } else if (name == "fig10") {
    fp.fixed = {1.2, 0.5, 0.0, 0.0, -kPi / 8, 0.0};
    fp.panel_values = {0.0, 0.5, 1.0, 2.0};
    fp.panel_key = "gamma";
    fp.sweep_grid = {0.0, 0.95, 20};
  } else if (name == "fig11") {
    fp.fixed = {0.5, 0.5, 1.0, 0.80, -kPi / 8, 0.0};
    fp.sweep_grid = {0.5, 2.0, 31};
    fp.panel_key = "g";
  } else {
    throw invalid_config("unknown figure: " + name);
  }
  return fp;
}

std::vector<std::string> write_figure(const std::string& name, const std::string& out_dir,
                                      int jobs, RecyclingVacuum vacuum) {
  if (!is_figure_name(name)) throw invalid_config("unknown figure: " + name);
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());

  if (name == "fig3" || name == "fig4") return write_ratio_vs_T(name, dir, jobs, vacuum);
  if (name == "fig9" || name == "fig10") return write_lambda_curves(name, dir, jobs, vacuum);
  if (name == "fig11") return write_sensitivity_vs_gain(dir, jobs, vacuum);
  return write_phase_panels(name, dir, jobs, vacuum);
}

}  // namespace su11
