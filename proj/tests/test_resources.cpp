#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "su11/resources.hpp"
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
double conventional_probe_energy(const InterferometerConfig& cfg) {
  return 2.0 * cfg.gamma_mag * cfg.gamma_mag + 2.0 * std::pow(std::sinh(cfg.g1), 2) +
         std::cosh(2.0 * cfg.g1) * std::pow(std::sinh(cfg.r), 2);
}
}  // namespace

TEST_CASE("T = 0 decomposition is the plain squeezer relation") {
  const auto d = internal_mode_decomposition(balanced(1.0, 0.3, 0.7), 0.4);
  CHECK(std::abs(d.a1.c - 0.7) < 1e-14);
  CHECK(std::abs(d.a1.mu - std::cosh(1.0)) < 1e-14);
  CHECK(std::abs(d.a1.beta - (-std::sinh(1.0))) < 1e-14);
  CHECK(std::abs(d.a1.alpha) == 0.0);
  CHECK(d.residual_a1 < 1e-12);
  CHECK(d.residual_b1 < 1e-12);
}

TEST_CASE("zero gain passes the inputs through") {
  const auto d = internal_mode_decomposition(balanced(0.0, 0.3, 0.7, 0.5, 0.2), 0.4);
  CHECK(std::abs(d.b1.alpha - 1.0) < 1e-14);
  CHECK(std::abs(d.b1.c - 0.7) < 1e-14);
  CHECK(std::abs(d.b1.nu) < 1e-14);
  CHECK(std::abs(d.a1.beta) < 1e-14);
  CHECK(d.residual_a1 < 1e-12);
  CHECK(d.residual_b1 < 1e-12);
}

TEST_CASE("commutator residuals vanish at the pinned recycled point") {
  const auto d =
      internal_mode_decomposition(balanced(1.0, 0.5, 1.0, 0.8, -pi / 8), 0.0);
  CHECK(d.residual_a1 <= 1e-10);
  CHECK(d.residual_b1 <= 1e-10);
}

TEST_CASE("probe energy at zero gain follows the recycled coherent buildup") {
  // N = gamma^2 (1 + |C1|^2) + sinh^2 r; T-independent only at T = 0.
  const double S = std::pow(std::sinh(0.5), 2);
  {
    const auto cfg = balanced(0.0, 0.5, 1.0, 0.0, 0.4);
    CHECK(rel_diff(total_photon_number(cfg, 0.3), 2.0 + S) < 1e-12);
  }
  {
    const auto cfg = balanced(0.0, 0.5, 1.0, 0.6, 0.4);
    const auto rc = recycling_constants(cfg, 0.3);
    const double expected = 1.0 + std::norm(rc.C1) + S;
    for (auto vac : {RecyclingVacuum::fresh, RecyclingVacuum::shared}) {
      CHECK(rel_diff(total_photon_number(cfg, 0.3, NTotalMethod::moments, vac), expected) <
            1e-12);
    }
    CHECK(rel_diff(total_photon_number_published(cfg, 0.3), expected) < 1e-11);
  }
}

TEST_CASE("spontaneous pair production at T = 0") {
  const auto cfg = balanced(1.0);
  CHECK(rel_diff(total_photon_number(cfg, 0.0), 2.0 * std::pow(std::sinh(1.0), 2)) <
        1e-12);
}

TEST_CASE("T = 0 probe energy matches the direct expression; published form does not") {
  ConfigSampler s(3);
  for (int i = 0; i < 100; ++i) {
    auto cfg = s.balanced();
    cfg.T = 0.0;
    const double phi = s.phase();
    const double expected = conventional_probe_energy(cfg);
    for (auto vac : {RecyclingVacuum::fresh, RecyclingVacuum::shared}) {
      CHECK(rel_diff(total_photon_number(cfg, phi, NTotalMethod::moments, vac), expected) <
            1e-10);
    }
    // The published expression retains a spurious sinh^2(g) |Y|^2 term at T = 0.
    const auto b = bogoliubov_coefficients(cfg, phi);
    const double spurious = std::pow(std::sinh(cfg.g1), 2) * std::norm(b.Y);
    const double published = total_photon_number_published(cfg, phi);
    CHECK(rel_diff(published, expected + spurious) < 1e-10);
  }
}

TEST_CASE("frozen recycled probe energies on the log-scale figure parameter set") {
  const auto cfg = balanced(1.2, 0.5, 1.0, 0.8, -pi / 8);
  CHECK(rel_diff(total_photon_number(cfg, 0.0, NTotalMethod::moments,
                                     RecyclingVacuum::fresh),
                 341.07453303428485) < 1e-10);
  CHECK(rel_diff(total_photon_number(cfg, 0.0, NTotalMethod::moments,
                                     RecyclingVacuum::shared),
                 341.889414885881) < 1e-10);
  CHECK(rel_diff(total_photon_number_published(cfg, 0.0), 340.46056914004765) < 1e-10);
}

TEST_CASE("shot-noise limit") {
  CHECK(snl(balanced(0.0, 0.0, std::numbers::sqrt2), 0.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  const double n = 2.0 + std::pow(std::sinh(0.5), 2);
  CHECK(snl(balanced(0.0, 0.5, 1.0), 0.1) ==
        doctest::Approx(1.0 / std::sqrt(n)).epsilon(1e-12));
  CHECK_THROWS_AS(snl(balanced(0.0), 0.0), undefined_quantity);
}

TEST_CASE("SNL decreases monotonically in gain on the figure parameter line") {
  double prev = std::numeric_limits<double>::infinity();
  for (double g = 0.5; g <= 2.0 + 1e-9; g += 0.05) {
    const double v = snl(balanced(g, 0.5, 1.0, 0.8, -pi / 8), 0.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("Fisher information of elementary probes") {
  CHECK(qfi(balanced(0.0), 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  const double S = std::pow(std::sinh(0.5), 2);
  CHECK(rel_diff(qfi(balanced(0.0, 0.5, 0.0), 0.0), 8.0 * (S + S * S)) < 1e-12);
}

TEST_CASE("recycled Fisher information reduces to the conventional one at T = 0") {
  ConfigSampler s(7);
  for (int i = 0; i < 50; ++i) {
    auto cfg = s.balanced();
    cfg.T = 0.0;
    const double phi = s.phase();
    CHECK(qfi(cfg, phi) == qfi(conventional(cfg), phi));
  }
}

TEST_CASE("Cramer-Rao bound scaling in the trial count") {
  const auto cfg = balanced(1.0, 0.5, 1.0, 0.6, -pi / 8);
  const double one = qcrb(cfg, 0.1, 1);
  CHECK(qcrb(cfg, 0.1, 4) == doctest::Approx(one / 2.0).epsilon(1e-14));
  CHECK(qcrb(cfg, 0.1, 16) == doctest::Approx(one / 4.0).epsilon(1e-14));
  CHECK_THROWS_AS(qcrb(cfg, 0.1, 0), invalid_config);
  CHECK_THROWS_AS(qcrb(balanced(0.0), 0.0, 1), undefined_quantity);
}

TEST_CASE("instability raises the non-convergence error") {
  const auto cfg = balanced(1.2, 0.5, 1.0, 0.8, 0.0);
  CHECK_THROWS_AS(internal_mode_decomposition(cfg, pi), nonconvergent_regime);
  CHECK_THROWS_AS(total_photon_number(cfg, pi), nonconvergent_regime);
  CHECK_THROWS_AS(qfi(cfg, pi), nonconvergent_regime);
}

TEST_CASE("resource report ties its own invariants together") {
  const auto cfg = balanced(1.1, 0.4, 1.0, 0.7, -pi / 8);
  const auto rep = resource_report(cfg, 0.05, 3);
  CHECK(rep.snl == doctest::Approx(1.0 / std::sqrt(rep.n_total)).epsilon(1e-14));
  CHECK(rep.qcrb == doctest::Approx(1.0 / std::sqrt(3.0 * rep.fisher)).epsilon(1e-14));
  CHECK(rep.n_total > 0.0);
  CHECK(rep.fisher >= 0.0);
}
