#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "su11/gaussian.hpp"
#include "test_support.hpp"

using namespace su11;
using su11::testing::rel_diff;
using std::numbers::pi;

namespace {

// A mildly entangled, displaced, squeezed two-mode state.
GaussianState scrambled_state(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto s = GaussianState::vacuum(2);
  s = squeeze(s, 0, 0.4 * std::abs(u(rng)), u(rng));
  s = squeeze(s, 1, 0.5 * std::abs(u(rng)), u(rng));
  s = displace(s, 0, Complex(u(rng), u(rng)));
  s = displace(s, 1, Complex(u(rng), u(rng)));
  s = two_mode_squeeze(s, 0, 1, 0.3 * std::abs(u(rng)), u(rng));
  s = phase_shift(s, 0, pi * u(rng));
  return s;
}

double max_abs_diff(const GaussianState& a, const GaussianState& b) {
  return std::max((a.mean() - b.mean()).cwiseAbs().maxCoeff(),
                  (a.cov() - b.cov()).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("vacuum readouts") {
  const auto v = GaussianState::vacuum(2);
  CHECK(number_moments(v, 0).mean == 0.0);
  CHECK(number_moments(v, 0).std_dev == 0.0);
  CHECK(quadrature_moments(v, 1).mean == 0.0);
  CHECK(quadrature_moments(v, 1).std_dev == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("displacement adds coherent photons and leaves the covariance alone") {
  const auto v = GaussianState::vacuum(1);
  CHECK(number_moments(displace(v, 0, Complex(0.0)), 0).mean == 0.0);
  CHECK(number_moments(displace(v, 0, Complex(1.0)), 0).mean ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(number_moments(displace(v, 0, Complex(1.0, 1.0)), 0).mean ==
        doctest::Approx(2.0).epsilon(1e-14));
  const auto c = displace(v, 0, Complex(2.0));
  CHECK(number_moments(c, 0).mean == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(number_moments(c, 0).std_dev == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(max_abs_diff(GaussianState(v.mean(), c.cov()), v) == 0.0);
}

TEST_CASE("squeezed vacuum number and quadrature moments") {
  const double r = 0.5;
  const auto s = squeeze(GaussianState::vacuum(1), 0, r);
  const double sh2 = std::pow(std::sinh(r), 2);
  CHECK(number_moments(s, 0).mean == doctest::Approx(sh2).epsilon(1e-13));
  const double var = 2.0 * sh2 * std::pow(std::cosh(r), 2);
  CHECK(number_moments(s, 0).std_dev == doctest::Approx(std::sqrt(var)).epsilon(1e-13));
  // delta_xi = 0 squeezes the x quadrature
  CHECK(quadrature_moments(s, 0).std_dev ==
        doctest::Approx(std::exp(-r) / std::numbers::sqrt2).epsilon(1e-13));
}

TEST_CASE("two-mode squeezing populates both arms; the reversed pair undoes it") {
  const auto v = GaussianState::vacuum(2);
  CHECK(max_abs_diff(two_mode_squeeze(v, 0, 1, 0.0, 0.3), v) == 0.0);
  const auto s = two_mode_squeeze(v, 0, 1, 1.0, 0.0);
  const double n = std::pow(std::sinh(1.0), 2);
  CHECK(number_moments(s, 0).mean == doctest::Approx(n).epsilon(1e-12));
  CHECK(number_moments(s, 1).mean == doctest::Approx(n).epsilon(1e-12));
  const auto undone = two_mode_squeeze(s, 0, 1, 1.0, pi);
  CHECK(max_abs_diff(undone, v) < 1e-12);
  CHECK_THROWS_AS(two_mode_squeeze(v, 0, 0, 0.5, 0.0), invalid_config);
}

TEST_CASE("phase shift rotates quadratures and preserves photon number") {
  const auto s = scrambled_state(2);
  CHECK(max_abs_diff(phase_shift(s, 0, 0.0), s) == 0.0);
  CHECK(max_abs_diff(phase_shift(s, 0, 2 * pi), s) < 1e-12);
  const auto rotated = phase_shift(s, 1, 1.234);
  CHECK(rel_diff(number_moments(rotated, 1).mean, number_moments(s, 1).mean) < 1e-13);
}

TEST_CASE("loss channel") {
  const auto s = scrambled_state(3);
  CHECK(max_abs_diff(loss_channel(s, 0, 1.0), s) == 0.0);
  const auto dark = loss_channel(s, 0, 0.0);
  CHECK(number_moments(dark, 0).mean < 1e-14);
  CHECK(dark.cov().topLeftCorner(2, 2).isApprox(0.5 * Eigen::Matrix2d::Identity(), 1e-14));
  for (double T : {0.25, 0.6, 0.9}) {
    const auto lossy = loss_channel(s, 0, T);
    CHECK(rel_diff(number_moments(lossy, 0).mean, T * number_moments(s, 0).mean) < 1e-12);
  }
}

TEST_CASE("symplectic operations keep states physical and pure") {
  for (std::uint64_t seed : {4u, 5u, 6u}) {
    const auto s = scrambled_state(seed);
    CHECK(min_uncertainty_eigenvalue(s) >= -1e-9);
    CHECK(rel_diff(purity_determinant(s), 1.0) < 1e-10);
    const auto lossy = loss_channel(s, 1, 0.7);
    CHECK(min_uncertainty_eigenvalue(lossy) >= -1e-9);
    CHECK(purity_determinant(lossy) > 1.0 + 1e-6);
  }
  // loss on a vacuum mode changes nothing
  const auto v = GaussianState::vacuum(1);
  CHECK(rel_diff(purity_determinant(loss_channel(v, 0, 0.5)), 1.0) < 1e-14);
}

TEST_CASE("mode statistics agree with the affine-form engine") {
  const double r = 0.37, delta = 0.0;
  const auto s = displace(squeeze(GaussianState::vacuum(1), 0, r, delta), 0,
                          Complex(0.8, -0.3));
  const auto st = mode_stats(s, 0);
  AffineMode f;
  f.c = Complex(0.8, -0.3);
  f.alpha = 1.0;
  SqueezedInput in{std::pow(std::sinh(r), 2),
                   -expi(delta) * std::sinh(r) * std::cosh(r)};
  const auto expect = stats_of(f, in);
  CHECK(rel_diff(st.number_mean(), expect.number_mean()) < 1e-13);
  CHECK(rel_diff(st.number_var(), expect.number_var()) < 1e-13);
  CHECK(rel_diff(st.quadrature_var(), expect.quadrature_var()) < 1e-13);
}

TEST_CASE("mode index validation") {
  const auto v = GaussianState::vacuum(2);
  CHECK_THROWS_AS(displace(v, 2, Complex(1.0)), invalid_config);
  CHECK_THROWS_AS(phase_shift(v, -1, 0.1), invalid_config);
  CHECK_THROWS_AS(loss_channel(v, 0, 1.5), invalid_config);
}
