#include "su11/fock.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "su11/errors.hpp"

namespace su11 {

namespace {

using Vec = Eigen::VectorXcd;
using Generator = std::function<void(const Vec&, Vec&)>;

/// psi <- exp(G) psi via scaled Taylor series. `scale` bounds ||G||; the
/// series is summed on G/steps and repeated.
void apply_exp(Vec& psi, const Generator& g, double scale) {
  const int steps = std::max(1, static_cast<int>(std::ceil(scale / 0.5)));
  Vec term(psi.size()), gterm(psi.size());
  for (int s = 0; s < steps; ++s) {
    term = psi;
    for (int k = 1; k <= 120; ++k) {
      g(term, gterm);
      term = gterm / (static_cast<double>(steps) * k);
      psi += term;
      if (term.norm() < 1e-18) break;
    }
  }
}

struct TwoModeBasis {
  int levels;  // states per mode
  int idx(int na, int nb) const { return na * levels + nb; }
};

}  // namespace

FockResult fock_oracle_conventional(const InterferometerConfig& cfg, double phi,
                                    int cutoff) {
  cfg.validate();
  if (cfg.g1 > 1.0 || cfg.g2 > 1.0 || cfg.r > 0.7 || cfg.gamma_mag > 1.5) {
    throw invalid_config("outside the truncation-certified parameter box");
  }
  if (cutoff < 4 || cutoff > 60) throw invalid_config("cutoff must lie in [4, 60]");

  const TwoModeBasis basis{cutoff + 1};
  const int n = basis.levels;
  Vec psi = Vec::Zero(n * n);
  psi(0) = 1.0;

  const auto opa = [&](double g, double eta) {
    if (g == 0.0) return;
    const Complex s = g * expi(eta);
    apply_exp(
        psi,
        [&, s](const Vec& in, Vec& out) {
          out.setZero();
          for (int na = 0; na < n; ++na) {
            for (int nb = 0; nb < n; ++nb) {
              Complex acc = 0.0;
              if (na > 0 && nb > 0) {
                acc -= s * std::sqrt(double(na) * nb) * in(basis.idx(na - 1, nb - 1));
              }
              if (na + 1 < n && nb + 1 < n) {
                acc += std::conj(s) * std::sqrt(double(na + 1) * (nb + 1)) *
                       in(basis.idx(na + 1, nb + 1));
              }
              out(basis.idx(na, nb)) = acc;
            }
          }
        },
        2.0 * g * n);
  };

  const auto displace_mode = [&](bool mode_a, Complex gamma) {
    if (gamma == Complex(0.0)) return;
    apply_exp(
        psi,
        [&, mode_a, gamma](const Vec& in, Vec& out) {
          out.setZero();
          for (int na = 0; na < n; ++na) {
            for (int nb = 0; nb < n; ++nb) {
              const int k = mode_a ? na : nb;
              Complex acc = 0.0;
              if (k > 0) {
                const int src = mode_a ? basis.idx(na - 1, nb) : basis.idx(na, nb - 1);
                acc += gamma * std::sqrt(double(k)) * in(src);
              }
              if (k + 1 < n) {
                const int src = mode_a ? basis.idx(na + 1, nb) : basis.idx(na, nb + 1);
                acc -= std::conj(gamma) * std::sqrt(double(k + 1)) * in(src);
              }
              out(basis.idx(na, nb)) = acc;
            }
          }
        },
        2.0 * std::abs(gamma) * std::sqrt(double(n)));
  };

  const auto squeeze_b = [&](double r, double delta) {
    if (r == 0.0) return;
    const Complex xi = r * expi(delta);
    apply_exp(
        psi,
        [&, xi](const Vec& in, Vec& out) {
          out.setZero();
          for (int na = 0; na < n; ++na) {
            for (int nb = 0; nb < n; ++nb) {
              Complex acc = 0.0;
              if (nb + 2 < n) {
                acc += 0.5 * std::conj(xi) * std::sqrt(double(nb + 1) * (nb + 2)) *
                       in(basis.idx(na, nb + 2));
              }
              if (nb >= 2) {
                acc -= 0.5 * xi * std::sqrt(double(nb) * (nb - 1)) *
                       in(basis.idx(na, nb - 2));
              }
              out(basis.idx(na, nb)) = acc;
            }
          }
        },
        r * n);
  };

  const Complex gamma = cfg.gamma_mag * expi(cfg.delta_gamma);
  squeeze_b(cfg.r, cfg.delta_xi);
  opa(cfg.g1, cfg.eta1);
  displace_mode(true, gamma);
  displace_mode(false, gamma);
  for (int na = 0; na < n; ++na) {
    for (int nb = 0; nb < n; ++nb) psi(basis.idx(na, nb)) *= expi(phi * nb);
  }
  opa(cfg.g2, cfg.eta2);

  const double nrm2 = psi.squaredNorm();
  FockResult res;
  res.norm_drift = std::abs(std::sqrt(nrm2) - 1.0);

  double mean_n = 0.0, mean_n2 = 0.0, tail = 0.0;
  Complex mean_b = 0.0, mean_b2 = 0.0;
  for (int na = 0; na < n; ++na) {
    for (int nb = 0; nb < n; ++nb) {
      const double p = std::norm(psi(basis.idx(na, nb))) / nrm2;
      mean_n += p * nb;
      mean_n2 += p * double(nb) * nb;
      if (na == n - 1 || nb == n - 1) tail += p;
      const Complex amp = std::conj(psi(basis.idx(na, nb)));
      if (nb + 1 < n) {
        mean_b += amp * std::sqrt(double(nb + 1)) * psi(basis.idx(na, nb + 1));
      }
      if (nb + 2 < n) {
        mean_b2 += amp * std::sqrt(double(nb + 1) * (nb + 2)) * psi(basis.idx(na, nb + 2));
      }
    }
  }
  mean_b /= nrm2;
  mean_b2 /= nrm2;

  res.number = {mean_n, std::sqrt(std::max(0.0, mean_n2 - mean_n * mean_n))};
  const double mean_x = std::numbers::sqrt2 * mean_b.real();
  const double mean_x2 = mean_b2.real() + mean_n + 0.5;
  res.quadrature = {mean_x, std::sqrt(std::max(0.0, mean_x2 - mean_x * mean_x))};
  res.tail_mass = tail;
  res.trusted = tail <= 1e-8;
  return res;
}

}  // namespace su11
