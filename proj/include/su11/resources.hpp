#pragma once

#include <cmath>

#include "su11/detection.hpp"
#include "su11/moments.hpp"

namespace su11 {

/// Backing formula for the total probe photon number. `moments` evaluates
/// <a1^dag a1 + b1^dag b1> from the internal mode decomposition; `published`
/// is the long explicit expression, kept as a diagnostic because its T -> 0
/// limit retains a spurious sinh^2(g)|Y|^2 term.
enum class NTotalMethod { moments, published };

/// Affine forms of the internal modes just after OPA1 + displacement, written
/// over the independent inputs {b_in (squeezed), v (vacuum)}. The residuals
/// record |[d, d^dag] - 1| for each form; the steady-state algebra only
/// guarantees a vanishing residual where T = 0 or Z = 0.
struct InternalModeDecomposition {
  AffineMode a1, b1;
  double residual_a1 = 0.0;
  double residual_b1 = 0.0;
};

namespace detail {

inline void require_stable(const InterferometerConfig& cfg, double phi) {
  if (!is_stable(cfg, phi)) {
    throw nonconvergent_regime("loop gain |A| >= 1: steady state does not exist");
  }
}

}  // namespace detail

inline InternalModeDecomposition internal_mode_decomposition(
    const InterferometerConfig& cfg, double phi,
    RecyclingVacuum vacuum = RecyclingVacuum::fresh) {
  cfg.validate();
  detail::require_stable(cfg, phi);
  const auto b = bogoliubov_coefficients(cfg, phi);
  const auto rc = recycling_constants(cfg, phi);
  const Complex rho = std::sqrt(cfg.T) * expi(cfg.theta);
  const Complex s_in = rho * rc.C1 * b.W1;   // mean of the recycled a-input
  const Complex p_in = -b.Z * rho * rc.C1;   // its b^dag coefficient
  // Aggregated vacuum amplitude of the recycled a-input.
  const Complex vin = vacuum == RecyclingVacuum::shared
                          ? std::sqrt(1.0 - cfg.T) * rc.C1
                          : Complex(std::sqrt((1.0 - cfg.T) / (1.0 - cfg.T * std::norm(b.Y))));
  const double ch = std::cosh(cfg.g1), sh = std::sinh(cfg.g1);
  const Complex e1 = expi(cfg.eta1);
  const Complex gamma = cfg.gamma_mag * expi(cfg.delta_gamma);

  InternalModeDecomposition d;
  d.a1.c = gamma + ch * s_in;
  d.a1.beta = ch * p_in - e1 * sh;
  d.a1.mu = ch * vin;
  d.b1.c = gamma - e1 * sh * std::conj(s_in);
  d.b1.alpha = ch - e1 * sh * std::conj(p_in);
  d.b1.nu = -e1 * sh * std::conj(vin);
  d.residual_a1 = commutator_residual(d.a1);
  d.residual_b1 = commutator_residual(d.b1);
  return d;
}

/// Explicit total-photon-number expression, the as-printed diagnostic path.
/// Negative results are returned as-is. Assumes the balanced configuration.
inline double total_photon_number_published(const InterferometerConfig& cfg, double phi) {
  cfg.validate();
  detail::require_stable(cfg, phi);
  const auto b = bogoliubov_coefficients(cfg, phi);
  const auto rc = recycling_constants(cfg, phi);
  const double g = cfg.g1, r = cfg.r, T = cfg.T, gm = cfg.gamma_mag;
  const double sh = std::sinh(g), ch = std::cosh(g);
  const Complex eth = expi(cfg.theta);
  return 2.0 * gm * gm +
         T * std::norm(rc.C1) *
             (std::cosh(2 * g) * (std::norm(b.W1) + std::norm(b.Z) * std::pow(std::cosh(r), 2)) -
              std::norm(b.Z) * sh * sh) +
         (sh * sh + std::cosh(2 * g) * std::pow(std::sinh(r), 2)) +
         sh * sh * (1.0 - T) *
             (1.0 + std::norm(b.Y) + 2.0 * std::sqrt(T) * (b.Y * eth).real()) +
         std::sqrt(T) * std::sinh(2 * g) * std::cosh(2 * r) * (b.Z * rc.C1 * eth).real() +
         2.0 * gm * std::sqrt(T) * (ch - sh) * (rc.C1 * b.W1 * eth).real();
}

inline double total_photon_number(const InterferometerConfig& cfg, double phi,
                                  NTotalMethod method = NTotalMethod::moments,
                                  RecyclingVacuum vacuum = RecyclingVacuum::fresh) {
  if (method == NTotalMethod::published) return total_photon_number_published(cfg, phi);
  const auto d = internal_mode_decomposition(cfg, phi, vacuum);
  const auto in = SqueezedInput::from(cfg);
  return stats_of(d.a1, in).number_mean() + stats_of(d.b1, in).number_mean();
}

/// Shot-noise limit 1/sqrt(N_total).
inline double snl(const InterferometerConfig& cfg, double phi,
                  RecyclingVacuum vacuum = RecyclingVacuum::fresh) {
  const double n = total_photon_number(cfg, phi, NTotalMethod::moments, vacuum);
  if (!(n > 0.0)) throw undefined_quantity("SNL undefined: zero total photon number");
  return 1.0 / std::sqrt(n);
}

/// Quantum Fisher information 4 Var(b1^dag b1) of the probe state, using the
/// pure-state formula on the phase-sensing mode.
inline double qfi(const InterferometerConfig& cfg, double phi,
                  RecyclingVacuum vacuum = RecyclingVacuum::fresh) {
  const auto d = internal_mode_decomposition(cfg, phi, vacuum);
  const double f = 4.0 * stats_of(d.b1, SqueezedInput::from(cfg)).number_var();
  if (f < -1e-9) throw computational_inconsistency("negative Fisher information");
  return f < 0.0 ? 0.0 : f;
}

inline double qcrb(const InterferometerConfig& cfg, double phi, long trials = 1,
                   RecyclingVacuum vacuum = RecyclingVacuum::fresh) {
  if (trials < 1) throw invalid_config("trials must be >= 1");
  const double f = qfi(cfg, phi, vacuum);
  if (!(f > 0.0)) throw undefined_quantity("QCRB unbounded: zero Fisher information");
  return 1.0 / std::sqrt(static_cast<double>(trials) * f);
}

struct ResourceReport {
  double n_total = 0.0;
  double snl = 0.0;
  double fisher = 0.0;
  double qcrb = 0.0;
  long trials = 1;
};

inline ResourceReport resource_report(const InterferometerConfig& cfg, double phi,
                                      long trials = 1,
                                      RecyclingVacuum vacuum = RecyclingVacuum::fresh) {
  ResourceReport rep;
  rep.trials = trials;
  rep.n_total = total_photon_number(cfg, phi, NTotalMethod::moments, vacuum);
  rep.snl = snl(cfg, phi, vacuum);
  rep.fisher = qfi(cfg, phi, vacuum);
  rep.qcrb = qcrb(cfg, phi, trials, vacuum);
  return rep;
}

/// The conventional (single-pass) instrument is the recycled one at T = 0.
inline InterferometerConfig conventional(InterferometerConfig cfg) {
  cfg.T = 0.0;
  return cfg;
}

}  // namespace su11
