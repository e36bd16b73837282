#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "su11/config.hpp"
#include "su11/dual.hpp"

namespace su11 {

using Complex = std::complex<double>;

/// The complex scalars of the single-pass transform
///   a_out = W1 + Y a_in - Z b_in^dag
///   b_out = W2 + e^{i phi} (Y b_in - Z a_in^dag).
template <class C = Complex>
struct BogoliubovCoefficientsT {
  C Y, Z, W1, W2;
};
using BogoliubovCoefficients = BogoliubovCoefficientsT<Complex>;

/// Steady-state constants of the recycled interferometer
///   a_out = C1 (W1 - Z b^dag + Y sqrt(1-T) v)
///   b_out^dag = C2 + C3 e^{-i phi} b^dag - C1 Z* sqrt(1-T) e^{-i phi} v,
/// with loop gain A = Y sqrt(T) e^{i theta}. Values are produced even when
/// |A| >= 1; `stable` tells the caller whether the series converged.
template <class C = Complex>
struct RecyclingConstantsT {
  C C1, C2, C3;
  C A;
  bool stable = false;
};
using RecyclingConstants = RecyclingConstantsT<Complex>;

/// Single-pass coefficients, evaluated literally. Templated on the real scalar
/// so the same expressions serve both plain evaluation and the dual-number
/// derivative path (phi is the differentiation variable).
template <class R>
BogoliubovCoefficientsT<complex_of_t<R>> bogoliubov_coefficients(
    const InterferometerConfig& cfg, R phi) {
  using C = complex_of_t<R>;
  const double ch1 = std::cosh(cfg.g1), sh1 = std::sinh(cfg.g1);
  const double ch2 = std::cosh(cfg.g2), sh2 = std::sinh(cfg.g2);
  const Complex gamma = cfg.gamma_mag * expi(cfg.delta_gamma);

  const C e_m_phi = expi(-phi);                       // e^{-i phi}
  const C e21 = expi(R(cfg.eta2 - cfg.eta1)) * e_m_phi;  // e^{i(eta2-eta1-phi)}
  const C e2p = expi(R(cfg.eta2)) * e_m_phi;             // e^{i(eta2-phi)}

  BogoliubovCoefficientsT<C> b;
  b.Y = C(ch1 * ch2) + e21 * C(sh1 * sh2);
  b.Z = C(expi(cfg.eta1) * (sh1 * ch2)) + e2p * C(ch1 * sh2);
  b.W1 = C(gamma * ch2) - e2p * C(std::conj(gamma) * sh2);
  b.W2 = expi(phi) * C(gamma * ch2) - C(expi(cfg.eta2) * (std::conj(gamma) * sh2));
  return b;
}

/// Loop gain A = Y sqrt(T) e^{i theta}.
template <class C>
C loop_gain(const InterferometerConfig& cfg, const BogoliubovCoefficientsT<C>& b) {
  return b.Y * C(std::sqrt(cfg.T) * expi(cfg.theta));
}

/// Steady-state constants. C1 is computed from the single-fraction form
/// e^{-i theta} / (e^{-i theta} - Y sqrt(T)), which stays conditioned near
/// |A| -> 1 where the textbook 1 + A/(1-A) sum cancels catastrophically.
template <class R>
RecyclingConstantsT<complex_of_t<R>> recycling_constants(
    const InterferometerConfig& cfg, R phi) {
  using C = complex_of_t<R>;
  const auto b = bogoliubov_coefficients(cfg, phi);
  const double sqT = std::sqrt(cfg.T);
  const Complex e_m_th = expi(-cfg.theta);

  RecyclingConstantsT<C> rc;
  if (cfg.T == 0.0) {  // algebraic reduction: bit-exact conventional limit
    rc.C1 = C(1.0);
    rc.C2 = conj(b.W2);
    rc.C3 = conj(b.Y);
    rc.A = C(0.0);
    rc.stable = true;
    return rc;
  }
  const C denom = C(e_m_th) - b.Y * C(sqT);
  rc.C1 = C(e_m_th) / denom;
  rc.C2 = conj(b.W2) - conj(b.Z) * C(sqT) * b.W1 * expi(-phi) / denom;
  rc.C3 = conj(b.Y) + C(abs2(b.Z)) * C(sqT) / denom;
  rc.A = b.Y * C(sqT * expi(cfg.theta));
  rc.stable = std::sqrt(value_of(abs2(rc.A))) < 1.0 - kStabilityEpsilon;
  return rc;
}

/// 1 - |A|; positive means the recycling series converges.
inline double stability_margin(const InterferometerConfig& cfg, double phi) {
  const auto b = bogoliubov_coefficients(cfg, phi);
  return 1.0 - std::abs(loop_gain(cfg, b));
}

inline bool is_stable(const InterferometerConfig& cfg, double phi) {
  return stability_margin(cfg, phi) > kStabilityEpsilon;
}

/// Residuals of the two commutator-preservation identities:
///   | |Y|^2 - |Z|^2 - 1 |   and   | |C3|^2 - (1-T)|C1|^2|Z|^2 - 1 |.
/// Both vanish identically. The returned values monitor floating-point health,
/// so each is normalized by the scale of its leading term: near the stability
/// edge |C3|^2 grows like |C1|^2 and an absolute residual would report nothing
/// but benign cancellation noise.
inline std::pair<double, double> verify_commutator_identities(
    const InterferometerConfig& cfg, double phi) {
  const auto b = bogoliubov_coefficients(cfg, phi);
  const auto rc = recycling_constants(cfg, phi);
  const double r1 = std::abs(std::norm(b.Y) - std::norm(b.Z) - 1.0) /
                    std::max(1.0, std::norm(b.Y));
  const double r2 = std::abs(std::norm(rc.C3) -
                             (1.0 - cfg.T) * std::norm(rc.C1) * std::norm(b.Z) - 1.0) /
                    std::max(1.0, std::norm(rc.C3));
  return {r1, r2};
}

}  // namespace su11
