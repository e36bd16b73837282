#pragma once

#include <limits>

#include "su11/detection.hpp"
#include "su11/resources.hpp"

namespace su11 {

/// Ratios comparing the recycled instrument against the conventional one and
/// against the shot-noise limit:
///   sigma_*  = dphi_conv / dphi_pr   (per detection scheme)
///   xi       = qcrb_conv / qcrb_pr
///   gamma_*  = snl / dphi_pr         (per detection scheme)
///   lambda   = snl / qcrb_pr
/// IEEE semantics carry the sentinels: a flat fringe gives dphi = +inf, an
/// undefined ratio becomes NaN, and unstable configurations leave every
/// recycled quantity NaN with stable = false.
struct EnhancementRecord {
  double dphi_sid_pr, dphi_hd_pr, dphi_sid_conv, dphi_hd_conv;
  double n_total, snl, qfi_pr, qcrb_pr, qfi_conv, qcrb_conv;
  double sigma_sid, sigma_hd, xi, gamma_sid, gamma_hd, lambda;
  bool stable;
};

inline EnhancementRecord enhancement_factors(const InterferometerConfig& cfg, double phi,
                                             RecyclingVacuum vacuum = RecyclingVacuum::fresh,
                                             long trials = 1) {
  cfg.validate();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  EnhancementRecord e{};
  e.stable = is_stable(cfg, phi);

  e.dphi_sid_conv = phase_sensitivity(Scheme::SID, Model::CONVENTIONAL, cfg, phi).delta_phi;
  e.dphi_hd_conv = phase_sensitivity(Scheme::HD, Model::CONVENTIONAL, cfg, phi).delta_phi;
  const auto conv_cfg = conventional(cfg);
  try {
    e.qfi_conv = qfi(conv_cfg, phi, vacuum);
    e.qcrb_conv = qcrb(conv_cfg, phi, trials, vacuum);
  } catch (const undefined_quantity&) {
    e.qfi_conv = 0.0;
    e.qcrb_conv = nan;
  }

  if (e.stable) {
    e.dphi_sid_pr = phase_sensitivity(Scheme::SID, Model::PR, cfg, phi).delta_phi;
    e.dphi_hd_pr = phase_sensitivity(Scheme::HD, Model::PR, cfg, phi).delta_phi;
    try {
      e.n_total = total_photon_number(cfg, phi, NTotalMethod::moments, vacuum);
      e.snl = snl(cfg, phi, vacuum);
    } catch (const undefined_quantity&) {
      e.n_total = 0.0;
      e.snl = nan;
    }
    try {
      e.qfi_pr = qfi(cfg, phi, vacuum);
      e.qcrb_pr = qcrb(cfg, phi, trials, vacuum);
    } catch (const undefined_quantity&) {
      e.qfi_pr = 0.0;
      e.qcrb_pr = nan;
    }
  } else {
    e.dphi_sid_pr = e.dphi_hd_pr = nan;
    e.n_total = e.snl = e.qfi_pr = e.qcrb_pr = nan;
  }

  e.sigma_sid = e.dphi_sid_conv / e.dphi_sid_pr;
  e.sigma_hd = e.dphi_hd_conv / e.dphi_hd_pr;
  e.xi = e.qcrb_conv / e.qcrb_pr;
  e.gamma_sid = e.snl / e.dphi_sid_pr;
  e.gamma_hd = e.snl / e.dphi_hd_pr;
  e.lambda = e.snl / e.qcrb_pr;
  return e;
}

}  // namespace su11
