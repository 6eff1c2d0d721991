#pragma once

#include "spectral.hpp"
#include "states.hpp"

namespace eqlat {

// Gibbs state exp(-beta H)/Z together with ln Z. beta is in the rescaled
// units of the stored Hamiltonian (physical beta = stored beta / rescale
// factor when the family was rescaled).
struct ThermalState {
  DensityOperator rho;
  double beta = 0.0;
  double log_partition = 0.0;
};

// Eigenbasis populations exp(-beta(E - E_min)) / sum, overflow-safe.
// beta = +infinity yields the normalized ground-group projector.
inline RVec thermal_populations(const SpectralData& sd, double beta) {
  const int d = int(sd.eigenvalues.size());
  RVec p = RVec::Zero(d);
  if (std::isinf(beta)) {
    const auto& g0 = sd.groups.front();
    for (int i = g0.begin; i < g0.end; ++i) p(i) = 1.0 / double(g0.size());
    return p;
  }
  const double e_min = sd.eigenvalues(0);
  double z = 0.0;
  for (int i = 0; i < d; ++i) {
    p(i) = std::exp(-beta * (sd.eigenvalues(i) - e_min));
    z += p(i);
  }
  return p / z;
}

inline double log_partition_function(const SpectralData& sd, double beta) {
  const double e_min = sd.eigenvalues(0);
  double z = 0.0;
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i)
    z += std::exp(-beta * (sd.eigenvalues(i) - e_min));
  return -beta * e_min + std::log(z);
}

// Negative beta is rejected (negative temperatures are out of scope). The
// documented special case beta = +infinity returns the ground-space
// projector normalized; ln Z diverges there and is reported as NaN.
inline ThermalState thermal_state(const SpectralData& sd, double beta) {
  if (std::isnan(beta) || beta < 0.0)
    throw std::invalid_argument("thermal_state: beta must be nonnegative");
  const RVec p = thermal_populations(sd, beta);
  CMat m = sd.eigenvectors * p.asDiagonal() * sd.eigenvectors.adjoint();
  m = (m + CMat(m.adjoint())) / 2.0;
  const double lnz = std::isinf(beta) ? std::numeric_limits<double>::quiet_NaN()
                                      : log_partition_function(sd, beta);
  return ThermalState{DensityOperator(sd.spec, std::move(m)), beta, lnz};
}

// F(rho) = tr[H rho] - S(rho)/beta at inverse temperature beta > 0.
inline double free_energy(const DensityOperator& rho, const CMat& h, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("free_energy: beta must be positive");
  const double e = (rho.matrix() * h).trace().real();
  return e - entropy(rho) / beta;
}

inline double thermal_energy(const SpectralData& sd, double beta) {
  return thermal_populations(sd, beta).dot(sd.eigenvalues);
}

struct BetaMatch {
  double beta = 0.0;
  double energy = 0.0;  // tr[rho_beta H] actually achieved
  bool clamped = false;
};

// Solves tr[rho_beta H] = target by bisection; beta -> tr[rho_beta H] is
// nonincreasing. Targets above the beta=0 energy clamp to beta=0 (negative
// temperatures are out of scope); targets at or below the ground energy clamp
// to beta_max.
inline BetaMatch match_beta(const SpectralData& sd, double target_energy, double tol_rel = 1e-8,
                            double beta_max = 1e6) {
  BetaMatch out;
  const double scale = std::max(1.0, std::abs(target_energy));
  double lo = 0.0, hi = beta_max;
  double e_lo = thermal_energy(sd, lo);   // maximal energy (infinite temperature)
  double e_hi = thermal_energy(sd, hi);   // essentially the ground energy
  if (target_energy >= e_lo) {
    out.beta = 0.0;
    out.energy = e_lo;
    out.clamped = target_energy > e_lo + tol_rel * scale;
    return out;
  }
  if (target_energy <= e_hi) {
    out.beta = beta_max;
    out.energy = e_hi;
    out.clamped = true;
    return out;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double e = thermal_energy(sd, mid);
    if (e > target_energy)
      lo = mid;
    else
      hi = mid;
    if (std::abs(e - target_energy) <= tol_rel * scale) break;
  }
  out.beta = 0.5 * (lo + hi);
  out.energy = thermal_energy(sd, out.beta);
  return out;
}

}  // namespace eqlat
