#pragma once

#include <stdexcept>
#include <string>

namespace su11 {

/// Invalid physical parameters (negative gain, T outside [0,1], ...).
class invalid_config : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested quantity requires |A| < 1 but the loop gain is at or above unity.
class nonconvergent_regime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerically impossible value surfaced (negative variance beyond the noise
/// window, negative Fisher information, ...). Signals a coefficient-level bug,
/// not a caller error.
class computational_inconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// SNL requested for a zero-photon configuration, or QCRB for zero Fisher info.
class undefined_quantity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace su11
