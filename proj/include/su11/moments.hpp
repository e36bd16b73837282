#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "su11/coeffs.hpp"

namespace su11 {

/// Mean / standard deviation pair for an observable.
struct MomentPair {
  double mean = 0.0;
  double std_dev = 0.0;
};

/// A bosonic mode written as an affine form over the two independent inputs:
///   d = c + alpha b + beta b^dag + mu v + nu v^dag,
/// where b carries squeezed vacuum and v is vacuum. One audited moment engine
/// serves the output-port observables, the internal photon-number accounting
/// and the Fisher information.
struct AffineMode {
  Complex c{};      ///< scalar part
  Complex alpha{};  ///< b coefficient
  Complex beta{};   ///< b^dag coefficient
  Complex mu{};     ///< v coefficient
  Complex nu{};     ///< v^dag coefficient
};

/// Second moments of the squeezed-vacuum input on port b:
/// nbar = sinh^2 r, m = <b^2> = -e^{i delta_xi} sinh r cosh r.
struct SqueezedInput {
  double nbar = 0.0;
  Complex m{};

  static SqueezedInput from(const InterferometerConfig& cfg) {
    const double sh = std::sinh(cfg.r), ch = std::cosh(cfg.r);
    return {sh * sh, -expi(cfg.delta_xi) * (sh * ch)};
  }
};

/// Displaced-Gaussian statistics of a single mode: mean c, normally ordered
/// occupation nbar = <delta d^dag delta d>, anomalous moment m = <delta d^2>,
/// and commutator kappa = [d, d^dag]. kappa = 1 for a canonical mode; the
/// steady-state algebra can produce kappa != 1 for internal modes, and the
/// Wick expressions below stay exact in that case.
struct GaussianModeStats {
  Complex c{};
  double nbar = 0.0;
  Complex m{};
  double kappa = 1.0;

  double number_mean() const { return std::norm(c) + nbar; }
  /// Var(d^dag d) by Wick/Isserlis pairing over the zero-mean Gaussian
  /// fluctuation, including the displacement cross terms.
  double number_var() const {
    return std::norm(c) * (2.0 * nbar + kappa) + 2.0 * (std::conj(c) * std::conj(c) * m).real() +
           nbar * (nbar + kappa) + std::norm(m);
  }
  /// X = (d + d^dag)/sqrt(2).
  double quadrature_mean() const { return std::numbers::sqrt2 * c.real(); }
  double quadrature_var() const { return nbar + 0.5 * kappa + m.real(); }
};

inline GaussianModeStats stats_of(const AffineMode& f, const SqueezedInput& in) {
  GaussianModeStats s;
  s.c = f.c;
  const double S = in.nbar;
  s.nbar = std::norm(f.alpha) * S + std::norm(f.beta) * (1.0 + S) +
           2.0 * (f.alpha * std::conj(f.beta) * in.m).real() + std::norm(f.nu);
  s.m = f.alpha * f.alpha * in.m + f.beta * f.beta * std::conj(in.m) +
        f.alpha * f.beta * (1.0 + 2.0 * S) + f.mu * f.nu;
  s.kappa = std::norm(f.alpha) - std::norm(f.beta) + std::norm(f.mu) - std::norm(f.nu);
  return s;
}

/// |[d, d^dag] - 1| for an affine mode form.
inline double commutator_residual(const AffineMode& f) {
  return std::abs(std::norm(f.alpha) - std::norm(f.beta) + std::norm(f.mu) -
                  std::norm(f.nu) - 1.0);
}

}  // namespace su11
