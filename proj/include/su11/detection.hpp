#pragma once

#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "su11/moments.hpp"

namespace su11 {

enum class Scheme { SID, HD };
enum class Model { PR, CONVENTIONAL };

/// Which closed form backs the SID photon-number variance. `consistent` is the
/// Wick-expansion result that the iterative and Fock oracles reproduce;
/// `published` is the shorter variance that drops the
/// sinh^2(r)*|alpha|^2*|beta|^2 vacuum-squeezing cross term. The deviation
/// between the two is surfaced by the verify tooling rather than hidden.
enum class VarianceForm { consistent, published };

enum class Observable { sid_mean, hd_mean };
enum class DerivativeMethod { forward_ad, finite_difference };

struct SensitivityReport {
  double delta_phi = 0.0;  ///< std/|d mean/d phi|, +inf when the fringe is flat
  Scheme scheme = Scheme::SID;
  Model model = Model::PR;
  double derivative = 0.0;
  DerivativeMethod derivative_method = DerivativeMethod::forward_ad;
  bool stable = true;
};

namespace detail {

inline std::atomic<unsigned long long> clamp_events{0};

/// Variances may go negative by floating-point noise only. A radicand below
/// -1e-10 means the coefficients are wrong, not noisy.
inline double clamped_sqrt(double radicand) {
  if (radicand < 0.0) {
    if (radicand < -1e-10) {
      throw computational_inconsistency("negative variance radicand " +
                                        std::to_string(radicand));
    }
    clamp_events.fetch_add(1, std::memory_order_relaxed);
    radicand = 0.0;
  }
  return std::sqrt(radicand);
}

}  // namespace detail

inline unsigned long long clamp_event_count() { return detail::clamp_events.load(); }
inline void reset_clamp_event_count() { detail::clamp_events.store(0); }

/// Output-port mode b as an affine form over the inputs.
inline AffineMode output_mode_b(Model model, const InterferometerConfig& cfg, double phi) {
  AffineMode f;
  const Complex eip = expi(phi);
  if (model == Model::CONVENTIONAL) {
    const auto b = bogoliubov_coefficients(cfg, phi);
    f.c = b.W2;
    f.alpha = eip * b.Y;
    f.nu = -eip * b.Z;  // a-port vacuum enters through a^dag
  } else {
    const auto b = bogoliubov_coefficients(cfg, phi);
    const auto rc = recycling_constants(cfg, phi);
    f.c = std::conj(rc.C2);
    f.alpha = std::conj(rc.C3) * eip;
    f.nu = -std::conj(rc.C1) * b.Z * std::sqrt(1.0 - cfg.T) * eip;
  }
  return f;
}

namespace detail {

/// As-printed SID variance (assumes delta_xi = 0).
inline double published_sid_var(Model model, const InterferometerConfig& cfg, double phi) {
  const double r = cfg.r;
  const double ch2r = std::cosh(2.0 * r), sh2r = std::sinh(2.0 * r);
  const double shch2 = 2.0 * std::pow(std::cosh(r) * std::sinh(r), 2);
  if (model == Model::CONVENTIONAL) {
    const auto b = bogoliubov_coefficients(cfg, phi);
    const double w2 = std::norm(b.W2), y2 = std::norm(b.Y), z2 = std::norm(b.Z);
    return w2 * y2 * ch2r + z2 * (w2 + y2) -
           sh2r * (b.Y * b.Y * std::conj(b.W2) * std::conj(b.W2) * expi(2.0 * phi)).real() +
           shch2 * y2 * y2;
  }
  const auto b = bogoliubov_coefficients(cfg, phi);
  const auto rc = recycling_constants(cfg, phi);
  const double c2 = std::norm(rc.C2), c3 = std::norm(rc.C3);
  const double K = std::norm(rc.C1) * std::norm(b.Z) * (1.0 - cfg.T);
  return c2 * c3 * ch2r + K * (c2 + c3) -
         sh2r * (std::conj(rc.C3) * std::conj(rc.C3) * rc.C2 * rc.C2 * expi(2.0 * phi)).real() +
         shch2 * c3 * c3;
}

}  // namespace detail

inline MomentPair sid_moments(Model model, const InterferometerConfig& cfg, double phi,
                              VarianceForm form = VarianceForm::consistent) {
  cfg.validate();
  const auto st = stats_of(output_mode_b(model, cfg, phi), SqueezedInput::from(cfg));
  const double var = (form == VarianceForm::consistent)
                         ? st.number_var()
                         : detail::published_sid_var(model, cfg, phi);
  return {st.number_mean(), detail::clamped_sqrt(var)};
}

inline MomentPair hd_moments(Model model, const InterferometerConfig& cfg, double phi) {
  cfg.validate();
  const auto st = stats_of(output_mode_b(model, cfg, phi), SqueezedInput::from(cfg));
  return {st.quadrature_mean(), detail::clamped_sqrt(st.quadrature_var())};
}

inline MomentPair sid_moments_pr(const InterferometerConfig& cfg, double phi,
                                 VarianceForm form = VarianceForm::consistent) {
  return sid_moments(Model::PR, cfg, phi, form);
}
inline MomentPair sid_moments_conventional(const InterferometerConfig& cfg, double phi,
                                           VarianceForm form = VarianceForm::consistent) {
  return sid_moments(Model::CONVENTIONAL, cfg, phi, form);
}
inline MomentPair hd_moments_pr(const InterferometerConfig& cfg, double phi) {
  return hd_moments(Model::PR, cfg, phi);
}
inline MomentPair hd_moments_conventional(const InterferometerConfig& cfg, double phi) {
  return hd_moments(Model::CONVENTIONAL, cfg, phi);
}

/// Scheme observable means, templated so the dual-number path differentiates
/// the very same expressions the moment engine evaluates.
template <class R>
R observable_mean(Observable obs, Model model, const InterferometerConfig& cfg, R phi) {
  const double S = std::pow(std::sinh(cfg.r), 2);
  if (model == Model::CONVENTIONAL) {
    const auto b = bogoliubov_coefficients(cfg, phi);
    if (obs == Observable::sid_mean) return abs2(b.W2) + abs2(b.Y) * R(S) + abs2(b.Z);
    return R(std::numbers::sqrt2) * real_part(b.W2);
  }
  const auto b = bogoliubov_coefficients(cfg, phi);
  const auto rc = recycling_constants(cfg, phi);
  if (obs == Observable::sid_mean) {
    return abs2(rc.C2) + abs2(rc.C3) * R(S) + abs2(rc.C1) * abs2(b.Z) * R(1.0 - cfg.T);
  }
  return R(std::numbers::sqrt2) * real_part(rc.C2);
}

/// d<observable>/d phi. Forward-mode duals by default; the 4th-order central
/// stencil exists as an independent oracle for tests.
inline double dphi_derivative(Observable obs, Model model, const InterferometerConfig& cfg,
                              double phi,
                              DerivativeMethod method = DerivativeMethod::forward_ad) {
  if (method == DerivativeMethod::forward_ad) {
    return observable_mean(obs, model, cfg, Dual::seed(phi)).d;
  }
  const double h = 1e-5;
  const auto f = [&](double x) { return observable_mean(obs, model, cfg, x); };
  return (-f(phi + 2 * h) + 8 * f(phi + h) - 8 * f(phi - h) + f(phi - 2 * h)) / (12 * h);
}

inline SensitivityReport phase_sensitivity(Scheme scheme, Model model,
                                           const InterferometerConfig& cfg, double phi,
                                           DerivativeMethod method = DerivativeMethod::forward_ad,
                                           VarianceForm form = VarianceForm::consistent) {
  cfg.validate();
  const Observable obs =
      scheme == Scheme::SID ? Observable::sid_mean : Observable::hd_mean;
  const MomentPair mp = scheme == Scheme::SID ? sid_moments(model, cfg, phi, form)
                                              : hd_moments(model, cfg, phi);
  SensitivityReport rep;
  rep.scheme = scheme;
  rep.model = model;
  rep.derivative = dphi_derivative(obs, model, cfg, phi, method);
  rep.derivative_method = method;
  rep.stable = model == Model::CONVENTIONAL || is_stable(cfg, phi);
  rep.delta_phi = std::abs(rep.derivative) < 1e-300
                      ? std::numeric_limits<double>::infinity()
                      : mp.std_dev / std::abs(rep.derivative);
  return rep;
}

}  // namespace su11
