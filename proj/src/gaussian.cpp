#include "su11/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include "su11/errors.hpp"

namespace su11 {

namespace {

void check_mode(const GaussianState& s, int mode) {
  if (mode < 0 || mode >= s.mode_count()) throw invalid_config("mode index out of range");
}

}  // namespace

AffineMap AffineMap::identity(int modes) {
  return {Eigen::MatrixXd::Identity(2 * modes, 2 * modes),
          Eigen::VectorXd::Zero(2 * modes)};
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  return {outer.M * inner.M, outer.M * inner.shift + outer.shift};
}

GaussianState apply(const AffineMap& map, const GaussianState& state) {
  return GaussianState(map.M * state.mean() + map.shift,
                       map.M * state.cov() * map.M.transpose());
}

Eigen::Matrix2d annihilation_block(Complex c) {
  Eigen::Matrix2d b;
  b << c.real(), -c.imag(), c.imag(), c.real();
  return b;
}

Eigen::Matrix2d creation_block(Complex c) {
  Eigen::Matrix2d b;
  b << c.real(), c.imag(), c.imag(), -c.real();
  return b;
}

AffineMap two_mode_squeeze_map(int modes, int i, int j, double g, double eta) {
  if (i == j) throw invalid_config("two-mode squeezer needs distinct modes");
  auto map = AffineMap::identity(modes);
  const double ch = std::cosh(g), sh = std::sinh(g);
  const Complex cross = -expi(eta) * sh;
  // a -> cosh(g) a - e^{i eta} sinh(g) b^dag and symmetrically for b.
  map.M.block<2, 2>(2 * i, 2 * i) = ch * Eigen::Matrix2d::Identity();
  map.M.block<2, 2>(2 * j, 2 * j) = ch * Eigen::Matrix2d::Identity();
  map.M.block<2, 2>(2 * i, 2 * j) = creation_block(cross);
  map.M.block<2, 2>(2 * j, 2 * i) = creation_block(cross);
  return map;
}

AffineMap squeeze_map(int modes, int mode, double r, double delta) {
  auto map = AffineMap::identity(modes);
  const double ch = std::cosh(r), sh = std::sinh(r);
  map.M.block<2, 2>(2 * mode, 2 * mode) =
      ch * Eigen::Matrix2d::Identity() + creation_block(-expi(delta) * sh);
  return map;
}

AffineMap displace_map(int modes, int mode, Complex gamma) {
  auto map = AffineMap::identity(modes);
  map.shift(2 * mode) = std::numbers::sqrt2 * gamma.real();
  map.shift(2 * mode + 1) = std::numbers::sqrt2 * gamma.imag();
  return map;
}

AffineMap phase_shift_map(int modes, int mode, double phi) {
  auto map = AffineMap::identity(modes);
  map.M.block<2, 2>(2 * mode, 2 * mode) = annihilation_block(expi(phi));
  return map;
}

GaussianState two_mode_squeeze(const GaussianState& s, int i, int j, double g, double eta) {
  check_mode(s, i);
  check_mode(s, j);
  return apply(two_mode_squeeze_map(s.mode_count(), i, j, g, eta), s);
}

GaussianState squeeze(const GaussianState& s, int mode, double r, double delta) {
  check_mode(s, mode);
  return apply(squeeze_map(s.mode_count(), mode, r, delta), s);
}

GaussianState displace(const GaussianState& s, int mode, Complex gamma) {
  check_mode(s, mode);
  return apply(displace_map(s.mode_count(), mode, gamma), s);
}

GaussianState phase_shift(const GaussianState& s, int mode, double phi) {
  check_mode(s, mode);
  return apply(phase_shift_map(s.mode_count(), mode, phi), s);
}

GaussianState loss_channel(const GaussianState& s, int mode, double T) {
  check_mode(s, mode);
  if (!(T >= 0.0 && T <= 1.0)) throw invalid_config("transmission must lie in [0,1]");
  const int n = s.mode_count();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  M.block<2, 2>(2 * mode, 2 * mode) = std::sqrt(T) * Eigen::Matrix2d::Identity();
  Eigen::MatrixXd cov = M * s.cov() * M.transpose();
  cov.block<2, 2>(2 * mode, 2 * mode) += 0.5 * (1.0 - T) * Eigen::Matrix2d::Identity();
  return GaussianState(M * s.mean(), cov);
}

GaussianModeStats mode_stats(const GaussianState& s, int mode) {
  check_mode(s, mode);
  const double mx = s.mean()(2 * mode), mp = s.mean()(2 * mode + 1);
  const double sxx = s.cov()(2 * mode, 2 * mode);
  const double spp = s.cov()(2 * mode + 1, 2 * mode + 1);
  const double sxp = s.cov()(2 * mode, 2 * mode + 1);
  GaussianModeStats st;
  st.c = Complex(mx, mp) / std::numbers::sqrt2;
  st.nbar = 0.5 * (sxx + spp) - 0.5;
  st.m = Complex(0.5 * (sxx - spp), sxp);
  st.kappa = 1.0;
  return st;
}

MomentPair number_moments(const GaussianState& s, int mode) {
  const auto st = mode_stats(s, mode);
  return {st.number_mean(), std::sqrt(std::max(0.0, st.number_var()))};
}

MomentPair quadrature_moments(const GaussianState& s, int mode) {
  const auto st = mode_stats(s, mode);
  return {st.quadrature_mean(), std::sqrt(std::max(0.0, st.quadrature_var()))};
}

double min_uncertainty_eigenvalue(const GaussianState& s) {
  const int d = static_cast<int>(s.mean().size());
  Eigen::MatrixXcd h = s.cov().cast<Complex>();
  const Complex half_i(0.0, 0.5);
  for (int m = 0; m < d / 2; ++m) {
    h(2 * m, 2 * m + 1) += half_i;
    h(2 * m + 1, 2 * m) -= half_i;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  return solver.eigenvalues().minCoeff();
}

double purity_determinant(const GaussianState& s) {
  return (2.0 * s.cov()).determinant();
}

}  // namespace su11
