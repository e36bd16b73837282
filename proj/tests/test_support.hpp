#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "su11/config.hpp"

namespace su11::testing {

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

struct ConfigSampler {
  std::mt19937_64 rng;
  explicit ConfigSampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  double phase() { return uniform(-std::numbers::pi, std::numbers::pi); }

  InterferometerConfig balanced(double gmax = 2.0, double rmax = 2.0,
                                double gamma_max = 3.0) {
    return InterferometerConfig::balanced(uniform(0.0, gmax), uniform(0.0, rmax),
                                          uniform(0.0, gamma_max), uniform(0.0, 1.0),
                                          phase());
  }

  InterferometerConfig unbalanced() {
    InterferometerConfig c;
    c.g1 = uniform(0.0, 2.0);
    c.g2 = uniform(0.0, 2.0);
    c.eta1 = phase();
    c.eta2 = phase();
    c.r = uniform(0.0, 2.0);
    c.delta_xi = phase();
    c.gamma_mag = uniform(0.0, 3.0);
    c.delta_gamma = phase();
    c.T = uniform(0.0, 1.0);
    c.theta = phase();
    return c;
  }
};

}  // namespace su11::testing
