#include "su11/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "su11/chain.hpp"
#include "su11/version.hpp"

namespace su11 {

using nlohmann::json;

InterferometerConfig to_config(const PointParams& p) {
  return InterferometerConfig::balanced(p.g, p.r, p.gamma, p.T, p.theta);
}

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

bool verify_selected(std::size_t row, double fraction) {
  if (fraction <= 0.0) return false;
  if (fraction >= 1.0) return true;
  std::uint64_t z = static_cast<std::uint64_t>(row) + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return static_cast<double>(z) / 18446744073709551616.0 < fraction;
}

void SweepSpec::validate() const {
  static const std::set<std::string> keys{"g", "r", "gamma", "T", "theta", "phi"};
  std::set<std::string> seen;
  for (const auto& [key, grid] : axes) {
    if (!keys.count(key)) throw invalid_config("unknown sweep parameter: " + key);
    if (!seen.insert(key).second) throw invalid_config("duplicate sweep parameter: " + key);
    if (grid.count < 1) throw invalid_config("grid count must be >= 1");
    if (!std::isfinite(grid.start) || !std::isfinite(grid.stop)) {
      throw invalid_config("grid bounds must be finite");
    }
    if (key == "T" && (grid.start < 0.0 || grid.start > 1.0 || grid.stop < 0.0 ||
                       grid.stop > 1.0)) {
      throw invalid_config("T grid must lie inside [0,1]");
    }
  }
  if (verify_fraction < 0.0 || verify_fraction > 1.0) {
    throw invalid_config("verify fraction must lie in [0,1]");
  }
  if (trials < 1) throw invalid_config("trials must be >= 1");
  to_config(fixed).validate();
}

std::size_t SweepSpec::row_count() const {
  std::size_t n = 1;
  for (const auto& [_, grid] : axes) n *= static_cast<std::size_t>(grid.count);
  return n;
}

PointParams SweepSpec::point_at(std::size_t row) const {
  PointParams p = fixed;
  // Row-major: last declared axis varies fastest.
  for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
    const auto& [key, grid] = *it;
    const int i = static_cast<int>(row % static_cast<std::size_t>(grid.count));
    row /= static_cast<std::size_t>(grid.count);
    const double v = grid.value(i);
    if (key == "g") p.g = v;
    else if (key == "r") p.r = v;
    else if (key == "gamma") p.gamma = v;
    else if (key == "T") p.T = v;
    else if (key == "theta") p.theta = v;
    else p.phi = v;
  }
  return p;
}

namespace {

struct RowData {
  PointParams p;
  EnhancementRecord e{};
  double abs_a = 0.0;
  double margin = 0.0;
  double v_sid_mean = 0.0, v_sid_std = 0.0, v_hd_mean = 0.0, v_hd_std = 0.0;
  int v_rounds = 0;
  bool verified = false;
};

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
  return std::abs(a - b) / scale;
}

}  // namespace

SweepOutput run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = spec.row_count();
  std::vector<RowData> rows(n);
  std::atomic<std::size_t> unstable{0};

  parallel_for(n, spec.jobs, [&](std::size_t i) {
    RowData& row = rows[i];
    row.p = spec.point_at(i);
    const auto cfg = to_config(row.p);
    row.e = enhancement_factors(cfg, row.p.phi, spec.vacuum, spec.trials);
    row.margin = stability_margin(cfg, row.p.phi);
    row.abs_a = 1.0 - row.margin;
    if (!row.e.stable) unstable.fetch_add(1, std::memory_order_relaxed);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    row.v_sid_mean = row.v_sid_std = row.v_hd_mean = row.v_hd_std = nan;
    if (verify_selected(i, spec.verify_fraction)) {
      row.verified = true;
      // The chain cross-checks the recycled closed forms; rows restricted to
      // the conventional model are checked through the T = 0 chain.
      auto vcfg = cfg;
      double vphi = row.p.phi;
      if (spec.models == ModelSelection::conventional) vcfg.T = 0.0;
      if (is_stable(vcfg, vphi)) {
        const auto res = iterate_recycling(vcfg, vphi);
        const auto sid = sid_moments(spec.models == ModelSelection::conventional
                                         ? Model::CONVENTIONAL
                                         : Model::PR,
                                     vcfg, vphi);
        const auto hd = hd_moments(spec.models == ModelSelection::conventional
                                       ? Model::CONVENTIONAL
                                       : Model::PR,
                                   vcfg, vphi);
        row.v_sid_mean = rel_diff(sid.mean, res.b_number.mean);
        row.v_sid_std = rel_diff(sid.std_dev, res.b_number.std_dev);
        row.v_hd_mean = rel_diff(hd.mean, res.b_quadrature.mean);
        row.v_hd_std = rel_diff(hd.std_dev, res.b_quadrature.std_dev);
        row.v_rounds = res.rounds_used;
      }
    }
  });

  const bool want_sid =
      spec.schemes == SchemeSelection::sid || spec.schemes == SchemeSelection::both;
  const bool want_hd =
      spec.schemes == SchemeSelection::hd || spec.schemes == SchemeSelection::both;
  const bool want_pr =
      spec.models == ModelSelection::pr || spec.models == ModelSelection::both;
  const bool want_conv = spec.models == ModelSelection::conventional ||
                         spec.models == ModelSelection::both;
  const bool both_models = spec.models == ModelSelection::both;

  std::vector<std::string> cols{"g", "r", "gamma", "T", "theta", "phi", "stable",
                                "abs_A", "margin"};
  if (want_sid && want_pr) cols.push_back("dphi_sid_pr");
  if (want_hd && want_pr) cols.push_back("dphi_hd_pr");
  if (want_sid && want_conv) cols.push_back("dphi_sid_conv");
  if (want_hd && want_conv) cols.push_back("dphi_hd_conv");
  if (want_pr) {
    cols.insert(cols.end(), {"n_total", "snl", "qfi", "qcrb"});
  }
  if (want_conv) cols.insert(cols.end(), {"qfi_conv", "qcrb_conv"});
  if (both_models && want_sid) cols.push_back("sigma_sid");
  if (both_models && want_hd) cols.push_back("sigma_hd");
  if (both_models) cols.push_back("xi");
  if (want_pr && want_sid) cols.push_back("gamma_sid");
  if (want_pr && want_hd) cols.push_back("gamma_hd");
  if (want_pr) cols.push_back("lambda");
  if (spec.verify_fraction > 0.0) {
    cols.insert(cols.end(), {"verify_rel_sid_mean", "verify_rel_sid_std",
                             "verify_rel_hd_mean", "verify_rel_hd_std"});
  }

  std::string csv;
  csv.reserve(64 * (n + 1));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    csv += cols[c];
    csv += c + 1 < cols.size() ? ',' : '\n';
  }

  double max_resid = 0.0;
  for (const auto& row : rows) {
    std::vector<double> vals{row.p.g, row.p.r, row.p.gamma, row.p.T, row.p.theta,
                             row.p.phi};
    std::string line;
    for (double v : vals) {
      line += format_double(v);
      line += ',';
    }
    line += row.e.stable ? "true" : "false";
    line += ',';
    line += format_double(row.abs_a);
    line += ',';
    line += format_double(row.margin);
    const auto push = [&line](double v) {
      line += ',';
      line += format_double(v);
    };
    if (want_sid && want_pr) push(row.e.dphi_sid_pr);
    if (want_hd && want_pr) push(row.e.dphi_hd_pr);
    if (want_sid && want_conv) push(row.e.dphi_sid_conv);
    if (want_hd && want_conv) push(row.e.dphi_hd_conv);
    if (want_pr) {
      push(row.e.n_total);
      push(row.e.snl);
      push(row.e.qfi_pr);
      push(row.e.qcrb_pr);
    }
    if (want_conv) {
      push(row.e.qfi_conv);
      push(row.e.qcrb_conv);
    }
    if (both_models && want_sid) push(row.e.sigma_sid);
    if (both_models && want_hd) push(row.e.sigma_hd);
    if (both_models) push(row.e.xi);
    if (want_pr && want_sid) push(row.e.gamma_sid);
    if (want_pr && want_hd) push(row.e.gamma_hd);
    if (want_pr) push(row.e.lambda);
    if (spec.verify_fraction > 0.0) {
      push(row.v_sid_mean);
      push(row.v_sid_std);
      push(row.v_hd_mean);
      push(row.v_hd_std);
      for (double v : {row.v_sid_mean, row.v_sid_std, row.v_hd_mean, row.v_hd_std}) {
        if (std::isfinite(v)) max_resid = std::max(max_resid, v);
      }
    }
    line += '\n';
    csv += line;
  }

  json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kVersion;
  manifest["fixed"] = {{"g", spec.fixed.g},       {"r", spec.fixed.r},
                       {"gamma", spec.fixed.gamma}, {"T", spec.fixed.T},
                       {"theta", spec.fixed.theta}, {"phi", spec.fixed.phi}};
  json jaxes = json::array();
  for (const auto& [key, grid] : spec.axes) {
    jaxes.push_back({{"parameter", key},
                     {"start", grid.start},
                     {"stop", grid.stop},
                     {"count", grid.count}});
  }
  manifest["axes"] = jaxes;
  manifest["columns"] = cols;
  json descr;
  descr["g"] = "OPA gain (balanced, g1 = g2)";
  descr["r"] = "input squeezing magnitude";
  descr["gamma"] = "displacement magnitude on both arms";
  descr["T"] = "recycling-arm transmission";
  descr["theta"] = "recycling phase";
  descr["phi"] = "interferometer phase";
  descr["stable"] = "loop gain |A| below the convergence bound";
  descr["abs_A"] = "loop gain magnitude |Y sqrt(T) e^{i theta}|";
  descr["margin"] = "1 - |A|";
  descr["dphi_sid_pr"] = "recycled phase sensitivity, intensity detection";
  descr["dphi_hd_pr"] = "recycled phase sensitivity, homodyne detection";
  descr["dphi_sid_conv"] = "conventional phase sensitivity, intensity detection";
  descr["dphi_hd_conv"] = "conventional phase sensitivity, homodyne detection";
  descr["n_total"] = "mean probe photon number inside the instrument";
  descr["snl"] = "shot-noise limit 1/sqrt(n_total)";
  descr["qfi"] = "quantum Fisher information of the recycled probe";
  descr["qcrb"] = "Cramer-Rao bound 1/sqrt(trials * qfi)";
  descr["qfi_conv"] = "conventional-probe Fisher information";
  descr["qcrb_conv"] = "conventional Cramer-Rao bound";
  descr["sigma_sid"] = "dphi_sid_conv / dphi_sid_pr";
  descr["sigma_hd"] = "dphi_hd_conv / dphi_hd_pr";
  descr["xi"] = "qcrb_conv / qcrb";
  descr["gamma_sid"] = "snl / dphi_sid_pr";
  descr["gamma_hd"] = "snl / dphi_hd_pr";
  descr["lambda"] = "snl / qcrb";
  descr["verify_rel_sid_mean"] = "closed form vs chain, photon-number mean";
  descr["verify_rel_sid_std"] = "closed form vs chain, photon-number std";
  descr["verify_rel_hd_mean"] = "closed form vs chain, quadrature mean";
  descr["verify_rel_hd_std"] = "closed form vs chain, quadrature std";
  json cd;
  for (const auto& c : cols) cd[c] = descr.value(c, "");
  manifest["column_descriptions"] = cd;
  manifest["rows"] = n;
  manifest["vacuum_model"] =
      spec.vacuum == RecyclingVacuum::fresh ? "fresh" : "shared";
  manifest["trials"] = spec.trials;
  manifest["stability"] = {
      {"unstable_rows", unstable.load()},
      {"unstable_fraction", n ? static_cast<double>(unstable.load()) / n : 0.0}};
  if (spec.verify_fraction > 0.0) {
    manifest["verify"] = {{"fraction", spec.verify_fraction},
                          {"max_rel_residual", max_resid}};
  }

  SweepOutput out;
  out.csv = std::move(csv);
  out.manifest_json = manifest.dump(2);
  out.rows = n;
  out.unstable = unstable.load();
  out.max_verify_residual = max_resid;
  return out;
}

}  // namespace su11
