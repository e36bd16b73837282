#pragma once

#include <Eigen/Dense>
#include <complex>

#include "su11/moments.hpp"

namespace su11 {

/// Gaussian state over n modes: quadrature mean vector (x1,p1,x2,p2,...) and
/// real symmetric covariance, with [x,p] = i, hbar = 1 and vacuum variance
/// 1/2. Values are immutable; operations return new states.
class GaussianState {
 public:
  explicit GaussianState(int modes)
      : mean_(Eigen::VectorXd::Zero(2 * modes)),
        cov_(0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes)) {}
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
      : mean_(std::move(mean)), cov_(std::move(cov)) {}

  static GaussianState vacuum(int modes) { return GaussianState(modes); }

  int mode_count() const { return static_cast<int>(mean_.size()) / 2; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Affine map xi -> M xi + shift on the quadrature vector.
struct AffineMap {
  Eigen::MatrixXd M;
  Eigen::VectorXd shift;

  static AffineMap identity(int modes);
};

/// outer after inner.
AffineMap compose(const AffineMap& outer, const AffineMap& inner);
GaussianState apply(const AffineMap& map, const GaussianState& state);

// Symplectic builders. Complex coefficient c acting on an annihilation
// operator contributes the rotation-like block [[Re,-Im],[Im,Re]]; acting on a
// creation operator the reflection-like block [[Re,Im],[Im,-Re]].
Eigen::Matrix2d annihilation_block(Complex c);
Eigen::Matrix2d creation_block(Complex c);

AffineMap two_mode_squeeze_map(int modes, int i, int j, double g, double eta);
AffineMap squeeze_map(int modes, int mode, double r, double delta);
AffineMap displace_map(int modes, int mode, Complex gamma);
AffineMap phase_shift_map(int modes, int mode, double phi);

GaussianState two_mode_squeeze(const GaussianState& s, int i, int j, double g, double eta);
GaussianState squeeze(const GaussianState& s, int mode, double r, double delta = 0.0);
GaussianState displace(const GaussianState& s, int mode, Complex gamma);
GaussianState phase_shift(const GaussianState& s, int mode, double phi);
/// Beam-splitter mix with a fresh vacuum ancilla, ancilla traced out.
GaussianState loss_channel(const GaussianState& s, int mode, double T);

/// Reduced single-mode statistics, read assuming the mode is canonical.
GaussianModeStats mode_stats(const GaussianState& s, int mode);
MomentPair number_moments(const GaussianState& s, int mode);
MomentPair quadrature_moments(const GaussianState& s, int mode);

/// Smallest eigenvalue of cov + (i/2) Omega; >= -tol certifies the
/// uncertainty relation.
double min_uncertainty_eigenvalue(const GaussianState& s);
/// det(2 cov); 1 for pure states, > 1 for mixed.
double purity_determinant(const GaussianState& s);

}  // namespace su11
