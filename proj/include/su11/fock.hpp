#pragma once

#include "su11/moments.hpp"

namespace su11 {

/// Brute-force moments from a truncated two-mode number basis.
struct FockResult {
  MomentPair number;      ///< port-b photon number
  MomentPair quadrature;  ///< port-b X quadrature
  double tail_mass = 0.0; ///< probability in the outermost number shell
  double norm_drift = 0.0;
  bool trusted = false;   ///< tail_mass <= 1e-8
};

/// Simulates the single-pass interferometer in a truncated Fock space:
/// squeezed vacuum in, OPA1, displacements, phase, OPA2 applied as series
/// expansions of their generators. Parameter box g <= 1, r <= 0.7,
/// gamma_mag <= 1.5, cutoff <= 60 keeps the truncation certificate meaningful.
FockResult fock_oracle_conventional(const InterferometerConfig& cfg, double phi,
                                    int cutoff);

}  // namespace su11
