#pragma once

#include <vector>

#include "su11/gaussian.hpp"

namespace su11 {

/// Outcome of literally iterating the recycled interferometer: round count,
/// per-round state deltas, steady-state output-port statistics and the
/// internal (post-OPA1 + displacement) photon number.
struct ChainResult {
  int rounds_used = 0;
  bool converged = false;
  std::vector<double> deltas;       ///< max-norm state change per round
  double loop_gain_abs = 0.0;       ///< |A| extracted from the composed pass map
  double observed_rate = 0.0;       ///< asymptotic ratio of successive deltas
  GaussianModeStats a_out, b_out;
  MomentPair a_number, b_number, b_quadrature;
  double internal_photon_number = 0.0;  ///< <a1^dag a1 + b1^dag b1> at steady state
};

/// Simulates the recycling chain: each round runs OPA1, dual displacement,
/// the phase shift on arm b and OPA2, then feeds the a output through the
/// theta phase and the T loss into the next round's a input while the b input
/// operator stays that of round one (its growing correlations with the
/// recirculating mode are carried exactly). Convergence is declared when the
/// max-norm change of (mean, cov) between rounds drops below tol.
///
/// max_rounds = 0 selects 10 * ceil(log(tol)/log|A|), capped at 1e5
/// (200 when |A| >= 1, where divergence is the expected outcome).
ChainResult iterate_recycling(const InterferometerConfig& cfg, double phi,
                              int max_rounds = 0, double tol = 1e-12,
                              RecyclingVacuum vacuum = RecyclingVacuum::shared);

/// Single-pass coefficients recovered from the composed symplectic map, an
/// algebra-free cross-check of the closed forms.
struct PassMapCoefficients {
  Complex Y, Z, W1, W2;
};
PassMapCoefficients pass_map_coefficients(const InterferometerConfig& cfg, double phi);

}  // namespace su11
