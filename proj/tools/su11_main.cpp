// Command-line front end: single-point evaluation, parameter sweeps, figure
// data, oracle verification and identity scans for the photon-recycled
// SU(1,1) interferometer engine.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "su11/chain.hpp"
#include "su11/fock.hpp"
#include "su11/sweep.hpp"
#include "su11/version.hpp"

namespace {

using namespace su11;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerifyFailed = 3;

/// Numeric literal with an optional pi factor: "0.5", "pi", "-pi", "pi/8",
/// "0.25pi", "-3pi/4".
double parse_value(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             text.end());
  if (text.empty()) throw invalid_config("empty numeric value");
  const auto pos = text.find("pi");
  if (pos == std::string::npos) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw invalid_config("bad numeric value: " + text);
    return v;
  }
  std::string head = text.substr(0, pos);
  std::string tail = text.substr(pos + 2);
  double coef = 1.0;
  if (head == "-") coef = -1.0;
  else if (!head.empty()) coef = std::stod(head);
  double div = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/') throw invalid_config("bad numeric value: " + text);
    div = std::stod(tail.substr(1));
  }
  return coef * std::numbers::pi / div;
}

GridSpec parse_grid(const std::string& text) {
  const auto a = text.find(':');
  if (a == std::string::npos) return {parse_value(text), parse_value(text), 1};
  const auto b = text.find(':', a + 1);
  if (b == std::string::npos) throw invalid_config("grid must be start:stop:count");
  GridSpec g;
  g.start = parse_value(text.substr(0, a));
  g.stop = parse_value(text.substr(a + 1, b - a - 1));
  g.count = std::stoi(text.substr(b + 1));
  return g;
}

struct CommonOptions {
  std::string g = "1", r = "0.5", gamma = "1", T = "0.8", theta = "-pi/8", phi = "0";
  std::string scheme = "both", model = "both", vacuum = "fresh";
  std::string out, config_file;
  double verify_fraction = 0.0;
  int jobs = 0;
  long trials = 1;
};

void load_config_file(const std::string& path, CommonOptions& opt,
                      std::vector<std::string>& declared_order) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "g") opt.g = value;
    else if (key == "r") opt.r = value;
    else if (key == "gamma") opt.gamma = value;
    else if (key == "T") opt.T = value;
    else if (key == "theta") opt.theta = value;
    else if (key == "phi") opt.phi = value;
    else if (key == "scheme") opt.scheme = value;
    else if (key == "model") opt.model = value;
    else if (key == "vacuum") opt.vacuum = value;
    else if (key == "out") opt.out = value;
    else if (key == "verify") opt.verify_fraction = parse_value(value);
    else if (key == "jobs") opt.jobs = std::stoi(value);
    else if (key == "trials") opt.trials = std::stol(value);
    else throw invalid_config("unknown config key: " + key);
    if (key == "g" || key == "r" || key == "gamma" || key == "T" || key == "theta" ||
        key == "phi") {
      if (value.find(':') != std::string::npos &&
          std::find(declared_order.begin(), declared_order.end(), key) ==
              declared_order.end()) {
        declared_order.push_back(key);
      }
    }
  }
}

SweepSpec build_spec(const CommonOptions& opt, const std::vector<std::string>& file_order) {
  SweepSpec spec;
  std::vector<std::string> order = file_order;
  const std::vector<std::pair<std::string, const std::string*>> params{
      {"g", &opt.g},     {"r", &opt.r},         {"gamma", &opt.gamma},
      {"T", &opt.T},     {"theta", &opt.theta}, {"phi", &opt.phi}};
  for (const auto& [key, text] : params) {
    if (text->find(':') != std::string::npos &&
        std::find(order.begin(), order.end(), key) == order.end()) {
      order.push_back(key);
    }
  }
  for (const auto& [key, text] : params) {
    const GridSpec grid = parse_grid(*text);
    const double fixed_value = grid.count == 1 ? grid.start : grid.value(0);
    if (key == "g") spec.fixed.g = fixed_value;
    else if (key == "r") spec.fixed.r = fixed_value;
    else if (key == "gamma") spec.fixed.gamma = fixed_value;
    else if (key == "T") spec.fixed.T = fixed_value;
    else if (key == "theta") spec.fixed.theta = fixed_value;
    else spec.fixed.phi = fixed_value;
  }
  for (const std::string& key : order) {
    for (const auto& [k, text] : params) {
      if (k == key && text->find(':') != std::string::npos) {
        spec.axes.emplace_back(key, parse_grid(*text));
      }
    }
  }
  if (opt.scheme == "sid" || opt.scheme == "SID") spec.schemes = SchemeSelection::sid;
  else if (opt.scheme == "hd" || opt.scheme == "HD") spec.schemes = SchemeSelection::hd;
  else if (opt.scheme == "both") spec.schemes = SchemeSelection::both;
  else throw invalid_config("scheme must be sid, hd or both");
  if (opt.model == "pr" || opt.model == "PR") spec.models = ModelSelection::pr;
  else if (opt.model == "conventional") spec.models = ModelSelection::conventional;
  else if (opt.model == "both") spec.models = ModelSelection::both;
  else throw invalid_config("model must be pr, conventional or both");
  if (opt.vacuum == "fresh") spec.vacuum = RecyclingVacuum::fresh;
  else if (opt.vacuum == "shared") spec.vacuum = RecyclingVacuum::shared;
  else throw invalid_config("vacuum must be fresh or shared");
  spec.trials = opt.trials;
  spec.verify_fraction = opt.verify_fraction;
  spec.jobs = opt.jobs;
  return spec;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

int run_point_or_sweep(const CommonOptions& opt, const std::vector<std::string>& order) {
  const SweepSpec spec = build_spec(opt, order);
  const SweepOutput out = run_sweep(spec);
  write_output(opt.out, out.csv);
  if (!opt.out.empty() && opt.out != "-") {
    write_output(opt.out + ".manifest.json", out.manifest_json + "\n");
    std::cerr << "wrote " << out.rows << " rows (" << out.unstable << " unstable) to "
              << opt.out << "\n";
  }
  return kExitOk;
}

struct CheckReporter {
  bool all_ok = true;

  void check(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    all_ok = all_ok && ok;
  }
  void note(const std::string& name, const std::string& detail) {
    std::cout << "[INFO] " << name << ": " << detail << "\n";
  }
};

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

int run_identities(int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ug(0.0, 2.0), ur(0.0, 2.0), ugam(0.0, 3.0),
      uT(0.0, 1.0), uphase(-std::numbers::pi, std::numbers::pi);
  double worst1 = 0.0, worst2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    InterferometerConfig cfg;
    cfg.g1 = ug(rng);
    cfg.g2 = ug(rng);
    cfg.eta1 = uphase(rng);
    cfg.eta2 = uphase(rng);
    cfg.r = ur(rng);
    cfg.delta_xi = uphase(rng);
    cfg.gamma_mag = ugam(rng);
    cfg.delta_gamma = uphase(rng);
    cfg.T = uT(rng);
    cfg.theta = uphase(rng);
    const double phi = uphase(rng);
    const auto [r1, r2] = verify_commutator_identities(cfg, phi);
    worst1 = std::max(worst1, r1);
    if (is_stable(cfg, phi)) worst2 = std::max(worst2, r2);
  }
  CheckReporter rep;
  rep.check("bogoliubov identity |Y|^2-|Z|^2=1", worst1 <= 1e-12,
            "max residual " + format_double(worst1) + " over " +
                std::to_string(samples) + " configs");
  rep.check("output-mode identity |C3|^2-(1-T)|C1|^2|Z|^2=1", worst2 <= 1e-12,
            "max stable-config residual " + format_double(worst2));
  return rep.all_ok ? kExitOk : kExitVerifyFailed;
}

InterferometerConfig random_balanced(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ug(0.0, 2.0), ur(0.0, 1.2), ugam(0.0, 2.0),
      uT(0.0, 1.0), uphase(-std::numbers::pi, std::numbers::pi);
  return InterferometerConfig::balanced(ug(rng), ur(rng), ugam(rng), uT(rng), uphase(rng));
}

int run_verify(int samples, unsigned seed) {
  CheckReporter rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uphase(-std::numbers::pi, std::numbers::pi);

  {  // T = 0 reduction
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      auto cfg = random_balanced(rng);
      cfg.T = 0.0;
      const double phi = uphase(rng);
      worst = std::max(worst, rel_diff(sid_moments(Model::PR, cfg, phi).mean,
                                       sid_moments(Model::CONVENTIONAL, cfg, phi).mean));
      worst = std::max(worst, rel_diff(hd_moments(Model::PR, cfg, phi).std_dev,
                                       hd_moments(Model::CONVENTIONAL, cfg, phi).std_dev));
    }
    rep.check("T=0 reduction", worst <= 1e-10, "max rel diff " + format_double(worst));
  }

  {  // closed forms vs iterative chain (shared-vacuum algebra)
    double worst = 0.0;
    int used = 0;
    while (used < std::max(10, samples / 10)) {
      auto cfg = random_balanced(rng);
      const double phi = uphase(rng);
      if (stability_margin(cfg, phi) < 0.1) continue;
      ++used;
      const auto res = iterate_recycling(cfg, phi);
      const auto sid = sid_moments(Model::PR, cfg, phi);
      const auto hd = hd_moments(Model::PR, cfg, phi);
      worst = std::max({worst, rel_diff(sid.mean, res.b_number.mean),
                        rel_diff(sid.std_dev, res.b_number.std_dev),
                        rel_diff(hd.mean, res.b_quadrature.mean),
                        rel_diff(hd.std_dev, res.b_quadrature.std_dev)});
    }
    rep.check("closed forms vs iterative chain", worst <= 1e-8,
              "max rel diff " + format_double(worst) + " over " + std::to_string(used) +
                  " stable configs");
  }

  {  // derivative engine vs finite differences
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      auto cfg = random_balanced(rng);
      const double phi = uphase(rng);
      if (!is_stable(cfg, phi)) continue;
      for (auto obs : {Observable::sid_mean, Observable::hd_mean}) {
        const double ad = dphi_derivative(obs, Model::PR, cfg, phi);
        const double fd =
            dphi_derivative(obs, Model::PR, cfg, phi, DerivativeMethod::finite_difference);
        if (std::abs(ad) > 1e-8) worst = std::max(worst, rel_diff(ad, fd));
      }
    }
    rep.check("dual-number derivative vs finite difference", worst <= 1e-6,
              "max rel diff " + format_double(worst));
  }

  {  // Fock spot check of the conventional moments
    double worst = 0.0;
    int used = 0;
    std::uniform_real_distribution<double> ug(0.1, 0.9), ur(0.0, 0.3), ugam(0.2, 1.0);
    while (used < 5) {
      auto cfg = InterferometerConfig::balanced(ug(rng), ur(rng), ugam(rng), 0.0, 0.0);
      const double phi = uphase(rng) * 0.5;
      const auto fock = fock_oracle_conventional(cfg, phi, 40);
      if (!fock.trusted) continue;
      ++used;
      const auto sid = sid_moments(Model::CONVENTIONAL, cfg, phi);
      const auto hd = hd_moments(Model::CONVENTIONAL, cfg, phi);
      worst = std::max({worst, rel_diff(sid.mean, fock.number.mean),
                        rel_diff(sid.std_dev, fock.number.std_dev),
                        rel_diff(hd.mean, fock.quadrature.mean),
                        rel_diff(hd.std_dev, fock.quadrature.std_dev)});
    }
    rep.check("Fock oracle spot check", worst <= 1e-6,
              "max rel diff " + format_double(worst) + " over 5 trusted points");
  }

  {  // photon-number audit at T = 0 plus reporting paths
    double worst = 0.0, worst_published = 0.0;
    for (int i = 0; i < 100; ++i) {
      auto cfg = random_balanced(rng);
      cfg.T = 0.0;
      const double phi = uphase(rng);
      const double expected = 2.0 * cfg.gamma_mag * cfg.gamma_mag +
                              2.0 * std::pow(std::sinh(cfg.g1), 2) +
                              std::cosh(2.0 * cfg.g1) * std::pow(std::sinh(cfg.r), 2);
      worst = std::max(worst, rel_diff(total_photon_number(cfg, phi), expected));
      worst_published =
          std::max(worst_published,
                   rel_diff(total_photon_number_published(cfg, phi), expected));
    }
    rep.check("probe photon number, T=0 audit", worst <= 1e-10,
              "max rel diff " + format_double(worst));
    rep.note("published N_total formula deviation at T=0",
             "max rel diff " + format_double(worst_published) +
                 " (known spurious sinh^2(g)|Y|^2 term; moments path is the default)");
  }

  {  // findings: published SID variance and vacuum-model gap
    double worst_var = 0.0, worst_gap = 0.0;
    for (int i = 0; i < 200; ++i) {
      auto cfg = random_balanced(rng);
      const double phi = uphase(rng);
      if (!is_stable(cfg, phi)) continue;
      const auto def = sid_moments(Model::PR, cfg, phi);
      const auto pub = sid_moments(Model::PR, cfg, phi, VarianceForm::published);
      worst_var = std::max(worst_var, rel_diff(def.std_dev, pub.std_dev));
      const double nf =
          total_photon_number(cfg, phi, NTotalMethod::moments, RecyclingVacuum::fresh);
      const double ns =
          total_photon_number(cfg, phi, NTotalMethod::moments, RecyclingVacuum::shared);
      worst_gap = std::max(worst_gap, rel_diff(nf, ns));
    }
    rep.note("published SID variance deviation",
             "max rel gap to the Wick-consistent default " + format_double(worst_var));
    rep.note("shared-vs-fresh recycling vacuum gap in N_total",
             "max rel gap " + format_double(worst_gap));
  }

  return rep.all_ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon-recycled SU(1,1) interferometer toolkit"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);

  CommonOptions opt;
  std::vector<std::string> file_order;

  const auto add_common = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("--config", opt.config_file, "flat key = value config file");
    cmd->add_option("--g", opt.g, "OPA gain (or start:stop:count grid)");
    cmd->add_option("--r", opt.r, "input squeezing (or grid)");
    cmd->add_option("--gamma", opt.gamma, "displacement magnitude (or grid)");
    cmd->add_option("--T", opt.T, "recycling transmission (or grid)");
    cmd->add_option("--theta", opt.theta, "recycling phase (or grid; accepts pi forms)");
    cmd->add_option("--phi", opt.phi, "interferometer phase (or grid; accepts pi forms)");
    cmd->add_option("--scheme", opt.scheme, "sid | hd | both");
    cmd->add_option("--model", opt.model, "pr | conventional | both");
    cmd->add_option("--vacuum", opt.vacuum, "fresh | shared recycling vacuum model");
    cmd->add_option("--trials", opt.trials, "trial count for the Cramer-Rao bound");
    cmd->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
    if (with_out) {
      cmd->add_option("--out", opt.out, "output CSV path ('-' = stdout)");
      cmd->add_option("--verify", opt.verify_fraction,
                      "fraction of rows cross-checked against the iterative chain");
    }
  };

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a single parameter point");
  add_common(eval_cmd, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "Cartesian parameter sweep to CSV");
  add_common(sweep_cmd, true);

  auto* figure_cmd = app.add_subcommand("figure", "emit figure data (fig3..fig11)");
  std::string figure_name, figure_dir = "figures";
  figure_cmd->add_option("name", figure_name, "fig3..fig11")->required();
  figure_cmd->add_option("--out-dir", figure_dir, "output directory");
  figure_cmd->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
  figure_cmd->add_option("--vacuum", opt.vacuum, "fresh | shared recycling vacuum model");

  auto* verify_cmd = app.add_subcommand("verify", "oracle cross-check suite");
  int verify_samples = 300;
  unsigned verify_seed = 20240815u;
  verify_cmd->add_option("--samples", verify_samples, "sample count per check");
  verify_cmd->add_option("--seed", verify_seed, "RNG seed");

  auto* ident_cmd = app.add_subcommand("identities", "commutator residual scan");
  int ident_samples = 10000;
  unsigned ident_seed = 20240815u;
  ident_cmd->add_option("--samples", ident_samples, "sample count");
  ident_cmd->add_option("--seed", ident_seed, "RNG seed");

  try {
    // Config file values load first so command-line flags override them.
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") {
        load_config_file(argv[i + 1], opt, file_order);
      }
    }
    app.parse(argc, argv);

    if (*eval_cmd || *sweep_cmd) return run_point_or_sweep(opt, file_order);
    if (*figure_cmd) {
      const auto vacuum =
          opt.vacuum == "shared" ? RecyclingVacuum::shared : RecyclingVacuum::fresh;
      const auto files = write_figure(figure_name, figure_dir, opt.jobs, vacuum);
      for (const auto& f : files) std::cerr << "wrote " << f << "\n";
      return kExitOk;
    }
    if (*verify_cmd) return run_verify(verify_samples, verify_seed);
    if (*ident_cmd) return run_identities(ident_samples, ident_seed);
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const invalid_config& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
