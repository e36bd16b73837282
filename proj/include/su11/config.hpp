#pragma once

#include <cmath>
#include <numbers>

#include "su11/errors.hpp"

namespace su11 {

/// All physical parameters of the displacement-assisted SU(1,1) interferometer
/// with a recycled "a" arm. Gains and magnitudes are dimensionless, phases in
/// radians, T is the recycling-arm intensity transmission.
struct InterferometerConfig {
  double g1 = 1.0;          ///< OPA1 gain
  double g2 = 1.0;          ///< OPA2 gain
  double eta1 = 0.0;        ///< OPA1 pump phase
  double eta2 = std::numbers::pi;  ///< OPA2 pump phase
  double r = 0.0;           ///< input squeezing magnitude (port b)
  double delta_xi = 0.0;    ///< squeezing phase
  double gamma_mag = 0.0;   ///< displacement magnitude applied to both arms
  double delta_gamma = 0.0; ///< displacement phase
  double T = 0.0;           ///< recycling transmission, in [0,1]
  double theta = 0.0;       ///< recycling phase shift

  /// Balanced configuration: eta2 - eta1 = pi (concretely eta1 = 0, eta2 = pi),
  /// equal gains, zero squeezing and displacement phases.
  static InterferometerConfig balanced(double g, double r, double gamma_mag,
                                       double T, double theta) {
    InterferometerConfig c;
    c.g1 = c.g2 = g;
    c.eta1 = 0.0;
    c.eta2 = std::numbers::pi;
    c.r = r;
    c.delta_xi = 0.0;
    c.gamma_mag = gamma_mag;
    c.delta_gamma = 0.0;
    c.T = T;
    c.theta = theta;
    c.validate();
    return c;
  }

  void validate() const {
    if (!(g1 >= 0.0) || !(g2 >= 0.0)) throw invalid_config("OPA gains must be >= 0");
    if (!(r >= 0.0)) throw invalid_config("squeezing magnitude must be >= 0");
    if (!(gamma_mag >= 0.0)) throw invalid_config("displacement magnitude must be >= 0");
    if (!(T >= 0.0 && T <= 1.0)) throw invalid_config("transmission T must lie in [0,1]");
    for (double p : {eta1, eta2, delta_xi, delta_gamma, theta}) {
      if (!std::isfinite(p)) throw invalid_config("phases must be finite");
    }
    if (!std::isfinite(g1) || !std::isfinite(g2) || !std::isfinite(r) ||
        !std::isfinite(gamma_mag) || !std::isfinite(T)) {
      throw invalid_config("parameters must be finite");
    }
  }

  bool is_valid() const noexcept {
    try {
      validate();
      return true;
    } catch (const invalid_config&) {
      return false;
    }
  }
};

/// Treat |A| >= 1 - kStabilityEpsilon as non-convergent: the geometric series
/// behind the steady state has no limit there and the closed forms, while
/// finite, are physically meaningless.
inline constexpr double kStabilityEpsilon = 1e-9;

/// How the recycling loop's vacuum noise is accounted for. `shared` follows
/// the steady-state algebra literally (one vacuum operator threads every
/// round); `fresh` gives each round an independent vacuum, the CPTP
/// loss-channel picture. Means agree; second moments differ, and the verify
/// tooling reports that gap.
enum class RecyclingVacuum { shared, fresh };

}  // namespace su11
