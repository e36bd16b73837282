#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "su11/enhancement.hpp"

namespace su11 {

/// Inclusive linear grid; count == 1 pins the value at start.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double value(int i) const {
    return count == 1 ? start
                      : start + (stop - start) * static_cast<double>(i) /
                                    static_cast<double>(count - 1);
  }
};

enum class SchemeSelection { sid, hd, both };
enum class ModelSelection { pr, conventional, both };

/// Balanced-configuration point in the sweepable parameter space.
struct PointParams {
  double g = 1.0;
  double r = 0.5;
  double gamma = 1.0;
  double T = 0.8;
  double theta = 0.0;
  double phi = 0.0;
};

InterferometerConfig to_config(const PointParams& p);

/// Cartesian sweep: fixed values plus per-parameter grids in declared order
/// (row-major, last declared axis fastest). Output is deterministic and
/// independent of the worker count.
struct SweepSpec {
  PointParams fixed;
  std::vector<std::pair<std::string, GridSpec>> axes;  // keys: g r gamma T theta phi
  SchemeSelection schemes = SchemeSelection::both;
  ModelSelection models = ModelSelection::both;
  RecyclingVacuum vacuum = RecyclingVacuum::fresh;
  long trials = 1;
  double verify_fraction = 0.0;  ///< fraction of rows cross-checked by the chain
  int jobs = 0;                  ///< 0 = hardware concurrency

  void validate() const;
  std::size_t row_count() const;
  PointParams point_at(std::size_t row) const;
};

struct SweepOutput {
  std::string csv;
  std::string manifest_json;
  std::size_t rows = 0;
  std::size_t unstable = 0;
  double max_verify_residual = 0.0;  ///< NaN-free max over sampled rows
};

SweepOutput run_sweep(const SweepSpec& spec);

/// Shortest-round-trip decimal formatting (<= 17 significant digits),
/// locale-free; the one formatter every CSV/number output goes through.
std::string format_double(double x);

/// Deterministic worker pool: fn(i) for i in [0, n), any schedule.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// Row membership for `--verify` sampling, deterministic in the row index.
bool verify_selected(std::size_t row, double fraction);

// Figure-data reproduction. Each command writes one CSV per panel plus a
// JSON manifest into out_dir and returns the written file paths.
std::vector<std::string> write_figure(const std::string& name, const std::string& out_dir,
                                      int jobs = 0, RecyclingVacuum vacuum = RecyclingVacuum::fresh);
bool is_figure_name(const std::string& name);

/// Caption-locked fixed parameters for a figure command (regression surface).
struct FigureParams {
  PointParams fixed;
  std::vector<double> panel_values;  ///< per-panel parameter values
  std::string panel_key;             ///< which parameter the panels vary
  GridSpec sweep_grid;               ///< the x-axis grid (or theta/phi grid edge)
};
FigureParams figure_parameters(const std::string& name);

}  // namespace su11
