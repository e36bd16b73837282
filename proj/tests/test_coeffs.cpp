#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <limits>
#include <numbers>

#include "su11/coeffs.hpp"
#include "test_support.hpp"

using namespace su11;
using su11::testing::ConfigSampler;
using su11::testing::rel_diff;
using std::numbers::pi;

namespace {
InterferometerConfig balanced(double g, double r = 0.0, double gamma = 0.0,
                              double T = 0.0, double theta = 0.0) {
  return InterferometerConfig::balanced(g, r, gamma, T, theta);
}
}  // namespace

TEST_CASE("zero gain is the identity transform up to the displacement") {
  const auto cfg = balanced(0.0, 0.0, 1.0);
  for (double phi : {0.0, 0.4, -2.0, 3.0}) {
    const auto b = bogoliubov_coefficients(cfg, phi);
    CHECK(std::abs(b.Y - 1.0) < 1e-14);
    CHECK(std::abs(b.Z) < 1e-14);
    CHECK(std::abs(b.W1 - 1.0) < 1e-14);
    CHECK(std::abs(b.W2 - expi(phi)) < 1e-14);
  }
}

TEST_CASE("balanced dark fringe: Y = 1, Z = 0, W amplified to e^g") {
  const auto b = bogoliubov_coefficients(balanced(1.0, 0.0, 1.0), 0.0);
  CHECK(std::abs(b.Y - 1.0) < 1e-13);
  CHECK(std::abs(b.Z) < 1e-13);
  CHECK(std::abs(b.W1 - std::exp(1.0)) < 1e-13);
  CHECK(std::abs(b.W2 - std::exp(1.0)) < 1e-13);
  for (double g : {0.3, 0.9, 1.7, 2.0}) {
    const auto bd = bogoliubov_coefficients(balanced(g), 0.0);
    CHECK(std::abs(bd.Y - 1.0) < 1e-12);
    CHECK(std::abs(bd.Z) < 1e-12);
  }
}

TEST_CASE("frozen point g = 1.2, phi = pi/3") {
  const auto b = bogoliubov_coefficients(balanced(1.2, 0.0, 1.0), pi / 3);
  CHECK(std::abs(b.Y - Complex(2.139236791741376, 1.9732160051478278)) < 1e-12);
  CHECK(std::abs(b.Z - Complex(1.3665573034190228, 2.366946680976066)) < 1e-12);
  CHECK(std::abs(b.W1 - Complex(2.5653862450304614, -1.3072318798178326)) < 1e-12);
  CHECK(std::abs(b.W2 - Complex(2.41478913907436, 1.5680737188066332)) < 1e-12);
  CHECK(std::abs(std::norm(b.Y) - std::norm(b.Z) - 1.0) < 1e-12);
}

TEST_CASE("T = 0 reduces the steady-state constants exactly") {
  ConfigSampler s(11);
  for (int i = 0; i < 50; ++i) {
    auto cfg = s.unbalanced();
    cfg.T = 0.0;
    const double phi = s.phase();
    const auto b = bogoliubov_coefficients(cfg, phi);
    const auto rc = recycling_constants(cfg, phi);
    CHECK(rc.C1 == Complex(1.0));
    CHECK(rc.C2 == std::conj(b.W2));
    CHECK(rc.C3 == std::conj(b.Y));
    CHECK(rc.A == Complex(0.0));
    CHECK(rc.stable);
  }
}

TEST_CASE("loop gain magnitude at the dark fringe is sqrt(T)") {
  const auto rc = recycling_constants(balanced(1.0, 0.0, 0.0, 0.8, -pi / 8), 0.0);
  CHECK(std::abs(std::abs(rc.A) - std::sqrt(0.8)) < 1e-12);
  CHECK(rc.stable);
}

TEST_CASE("bright fringe blows past the stability bound") {
  const auto rc = recycling_constants(balanced(1.2, 0.0, 0.0, 0.8, 0.0), pi);
  CHECK(std::abs(rc.A) > 1.0);
  CHECK(!rc.stable);
  CHECK(std::abs(std::abs(rc.A) - std::sqrt(0.8) * std::cosh(2.4)) < 1e-10);
}

TEST_CASE("stability margin") {
  CHECK(stability_margin(balanced(1.3, 0.2, 1.0, 0.0, 0.7), 1.1) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stability_margin(balanced(0.9, 0.0, 0.0, 0.81, 0.0), 0.0) ==
        doctest::Approx(0.1).epsilon(1e-9));
  // |Y| at phi = pi/2 is |cosh^2 g + i sinh^2 g|.
  const double margin = stability_margin(balanced(1.0, 0.0, 0.0, 0.5, 0.0), pi / 2);
  CHECK(margin == doctest::Approx(-0.9464144225991702).epsilon(1e-10));
}

TEST_CASE("commutator identities hold at the pinned examples") {
  {
    const auto [r1, r2] = verify_commutator_identities(balanced(0.5, 0.0, 0.0, 0.6, 0.3), 0.7);
    CHECK(r1 <= 1e-12);
    CHECK(r2 <= 1e-12);
  }
  {
    const auto [r1, r2] = verify_commutator_identities(balanced(0.5, 0.0, 0.0, 0.0, 0.3), 0.7);
    CHECK(r1 <= 1e-12);
    CHECK(r2 <= 1e-12);
  }
  {
    InterferometerConfig cfg;
    cfg.g1 = 0.3;
    cfg.g2 = 0.9;
    cfg.eta1 = 0.0;
    cfg.eta2 = pi / 2;
    const auto [r1, r2] = verify_commutator_identities(cfg, 0.7);
    CHECK(r1 <= 1e-12);
  }
}

TEST_CASE("identities across random configurations") {
  ConfigSampler s(23);
  for (int i = 0; i < 500; ++i) {
    const auto cfg = s.unbalanced();
    const double phi = s.phase();
    const auto [r1, r2] = verify_commutator_identities(cfg, phi);
    CHECK(r1 <= 1e-12);
    if (is_stable(cfg, phi)) CHECK(r2 <= 1e-12);
  }
}

TEST_CASE("C1 matches the textbook sum form away from the conditioning edge") {
  ConfigSampler s(37);
  int used = 0;
  while (used < 100) {
    const auto cfg = s.unbalanced();
    const double phi = s.phase();
    if (cfg.T == 0.0 || stability_margin(cfg, phi) < 1e-3) continue;
    ++used;
    const auto b = bogoliubov_coefficients(cfg, phi);
    const auto rc = recycling_constants(cfg, phi);
    const Complex denom = expi(-cfg.theta) - b.Y * std::sqrt(cfg.T);
    const Complex sum_form = 1.0 + b.Y * std::sqrt(cfg.T) / denom;
    CHECK(std::abs(rc.C1 - sum_form) / std::abs(rc.C1) <= 1e-13);
  }
}

TEST_CASE("invalid parameters are rejected") {
  InterferometerConfig cfg;
  cfg.T = 1.5;
  CHECK_THROWS_AS(cfg.validate(), invalid_config);
  cfg = InterferometerConfig{};
  cfg.g1 = -0.1;
  CHECK_THROWS_AS(cfg.validate(), invalid_config);
  cfg = InterferometerConfig{};
  cfg.theta = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cfg.validate(), invalid_config);
}
