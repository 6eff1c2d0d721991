#pragma once

#include <map>

#include "operators.hpp"
#include "states.hpp"

namespace eqlat {

struct LevelGroup {
  int begin = 0, end = 0;  // eigenvalue indices [begin, end)
  double energy = 0.0;     // group mean
  int size() const { return end - begin; }
};

// Eigendecomposition with degeneracy-grouped levels. groups partition the
// sorted spectrum by single-linkage clustering at threshold tol_deg.
struct SpectralData {
  LatticeSpec spec;
  RVec eigenvalues;   // ascending
  CMat eigenvectors;  // columns
  std::vector<LevelGroup> groups;
  double tol_deg = 0.0;
  double h_norm = 0.0;  // max |eigenvalue|

  int levels() const { return int(groups.size()); }
};

namespace detail {

inline std::vector<LevelGroup> cluster_levels(const RVec& ev, double tol) {
  std::vector<LevelGroup> groups;
  int start = 0;
  for (int i = 1; i <= int(ev.size()); ++i) {
    if (i == int(ev.size()) || ev(i) - ev(i - 1) > tol) {
      LevelGroup g;
      g.begin = start;
      g.end = i;
      g.energy = ev.segment(start, i - start).mean();
      groups.push_back(g);
      start = i;
    }
  }
  return groups;
}

}  // namespace detail

// tol_deg < 0 selects the default 1e-10 * max(1, ||H||).
inline SpectralData diagonalize_matrix(const LatticeSpec& spec, const CMat& h, double tol_deg = -1.0,
                                       std::int64_t dim_cap = std::int64_t(1) << 14) {
  if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: matrix is not square");
  if (h.rows() > dim_cap)
    throw std::invalid_argument("diagonalize: dimension " + std::to_string(h.rows()) +
                                " exceeds the cap " + std::to_string(dim_cap));
  if (!(hermiticity_error(h) <= 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())))
    throw std::invalid_argument("diagonalize: matrix is not Hermitian");

  SpectralData sd;
  sd.spec = spec;
  const std::int64_t dd = h.rows();
  CMat offdiag = h;
  offdiag.diagonal().setZero();
  if (offdiag.cwiseAbs().maxCoeff() == 0.0) {
    // exactly diagonal (classical families): sort the diagonal, eigenvectors
    // are a permutation
    std::vector<std::int64_t> order(static_cast<std::size_t>(dd));
    for (std::int64_t i = 0; i < dd; ++i) order[std::size_t(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
      return h(a, a).real() < h(b, b).real();
    });
    sd.eigenvalues.resize(dd);
    sd.eigenvectors = CMat::Zero(dd, dd);
    for (std::int64_t i = 0; i < dd; ++i) {
      sd.eigenvalues(i) = h(order[std::size_t(i)], order[std::size_t(i)]).real();
      sd.eigenvectors(order[std::size_t(i)], i) = 1.0;
    }
    sd.h_norm = std::max(std::abs(sd.eigenvalues(0)), std::abs(sd.eigenvalues(dd - 1)));
    sd.tol_deg = tol_deg >= 0.0 ? tol_deg : 1e-10 * std::max(1.0, sd.h_norm);
    sd.groups = detail::cluster_levels(sd.eigenvalues, sd.tol_deg);
    return sd;
  }

  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver did not converge");
  sd.eigenvalues = es.eigenvalues();
  sd.eigenvectors = es.eigenvectors();
  const int d = int(sd.eigenvalues.size());
  sd.h_norm = std::max(std::abs(sd.eigenvalues(0)), std::abs(sd.eigenvalues(d - 1)));
  sd.tol_deg = tol_deg >= 0.0 ? tol_deg : 1e-10 * std::max(1.0, sd.h_norm);
  sd.groups = detail::cluster_levels(sd.eigenvalues, sd.tol_deg);

  // residual check H V = V E; above 2048 a deterministic column sample keeps
  // the check from costing another full matrix product
  const double rtol = 1e-9 * std::max(1.0, sd.h_norm);
  if (d <= 2048) {
    double res = (h * sd.eigenvectors - sd.eigenvectors * sd.eigenvalues.asDiagonal())
                     .cwiseAbs()
                     .maxCoeff();
    if (!(res <= rtol)) throw std::runtime_error("diagonalize: residual " + std::to_string(res));
  } else {
    const int nsample = 128;
    for (int s = 0; s < nsample; ++s) {
      const int col = int((std::int64_t(s) * (d - 1)) / (nsample - 1));
      double res = (h * sd.eigenvectors.col(col) - sd.eigenvalues(col) * sd.eigenvectors.col(col))
                       .cwiseAbs()
                       .maxCoeff();
      if (!(res <= rtol)) throw std::runtime_error("diagonalize: residual " + std::to_string(res));
    }
  }
  return sd;
}

inline SpectralData diagonalize(const LocalHamiltonian& h, double tol_deg = -1.0,
                                std::int64_t dim_cap = std::int64_t(1) << 14) {
  if (h.spec().hilbert_dim() > dim_cap)
    throw std::invalid_argument("diagonalize: Hilbert dimension exceeds the cap");
  return diagonalize_matrix(h.spec(), h.dense(), tol_deg, dim_cap);
}

// Census of signed energy gaps E_a - E_b over ordered pairs of distinct level
// groups. most_degenerate_multiplicity counts each level pair once;
// rank_weighted weights a pair by the product of the two group dimensions
// (informational only).
struct GapCensus {
  int most_degenerate_multiplicity = 1;
  std::int64_t rank_weighted = 1;
  std::map<double, std::int64_t> gap_histogram;  // representative gap -> count
  bool histogram_complete = false;
  std::int64_t total_ordered_pairs = 0;
  bool vacuous = false;  // single level group: no nonzero gaps, bound has no dynamics
};

// tol_gap < 0 selects the default 1e-9 * max(1, ||H||); it is looser than
// tol_deg because gaps difference two rounded eigenvalues.
inline GapCensus gap_census(const SpectralData& sd, double tol_gap = -1.0) {
  GapCensus census;
  const int L = sd.levels();
  if (L < 2) {
    census.vacuous = true;
    census.histogram_complete = true;
    return census;
  }
  const double tol = tol_gap >= 0.0 ? tol_gap : 1e-9 * std::max(1.0, sd.h_norm);
  struct Gap {
    double value;
    double weight;
  };
  std::vector<Gap> gaps;
  gaps.reserve(static_cast<std::size_t>(L) * std::size_t(L - 1));
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b) {
      if (a == b) continue;
      gaps.push_back({sd.groups[std::size_t(a)].energy - sd.groups[std::size_t(b)].energy,
                      double(sd.groups[std::size_t(a)].size()) * double(sd.groups[std::size_t(b)].size())});
    }
  std::sort(gaps.begin(), gaps.end(), [](const Gap& x, const Gap& y) { return x.value < y.value; });
  census.total_ordered_pairs = std::int64_t(gaps.size());
  const bool keep_histogram = L <= 1024;

  std::int64_t count = 0;
  double wsum = 0.0, vsum = 0.0;
  std::int64_t best_count = 0, best_weight = 0;
  auto flush = [&]() {
    if (count == 0) return;
    best_count = std::max(best_count, count);
    best_weight = std::max(best_weight, std::int64_t(std::llround(wsum)));
    if (keep_histogram) census.gap_histogram[vsum / double(count)] = count;
  };
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (count > 0 && gaps[i].value - gaps[i - 1].value > tol) {
      flush();
      count = 0;
      wsum = vsum = 0.0;
    }
    ++count;
    wsum += gaps[i].weight;
    vsum += gaps[i].value;
  }
  flush();
  census.most_degenerate_multiplicity = int(best_count);
  census.rank_weighted = best_weight;
  census.histogram_complete = keep_histogram;
  return census;
}

// Diagonal spectral weights <nu|rho|nu> of a state in the energy eigenbasis.
inline RVec spectral_weights(const SpectralData& sd, const CVec& psi) {
  if (psi.size() != sd.eigenvectors.rows()) throw std::invalid_argument("spectral_weights: dimension mismatch");
  return (sd.eigenvectors.adjoint() * psi).cwiseAbs2();
}

inline RVec spectral_weights(const SpectralData& sd, const DensityOperator& rho) {
  if (rho.dim() != sd.eigenvectors.rows()) throw std::invalid_argument("spectral_weights: dimension mismatch");
  const CMat b = rho.matrix() * sd.eigenvectors;
  return sd.eigenvectors.conjugate().cwiseProduct(b).colwise().sum().real().transpose();
}

inline RVec group_weights(const SpectralData& sd, const RVec& w) {
  RVec g(sd.levels());
  for (int k = 0; k < sd.levels(); ++k)
    g(k) = w.segment(sd.groups[std::size_t(k)].begin, sd.groups[std::size_t(k)].size()).sum();
  return g;
}

struct EffectiveDimension {
  double d_eff = 1.0;
  double inverse = 1.0;  // sum_k tr^2[P_k rho]
};

inline EffectiveDimension effective_dimension(const SpectralData& sd, const RVec& weights) {
  const RVec g = group_weights(sd, weights);
  EffectiveDimension out;
  out.inverse = g.cwiseAbs2().sum();
  out.d_eff = 1.0 / out.inverse;
  if (!(out.d_eff <= double(sd.levels()) + 1e-6))
    throw std::logic_error("effective_dimension exceeds the number of energy levels (bug)");
  return out;
}

inline EffectiveDimension effective_dimension(const SpectralData& sd, const DensityOperator& rho) {
  return effective_dimension(sd, spectral_weights(sd, rho));
}

inline EffectiveDimension effective_dimension(const SpectralData& sd, const CVec& psi) {
  return effective_dimension(sd, spectral_weights(sd, psi));
}

// Pinching sum_k P_k M P_k: rotate to the eigenbasis, keep only the diagonal
// level-group blocks, rotate back.
inline CMat pinch(const SpectralData& sd, const CMat& m) {
  if (m.rows() != sd.eigenvectors.rows() || m.cols() != sd.eigenvectors.rows())
    throw std::invalid_argument("pinch: dimension mismatch");
  CMat r = sd.eigenvectors.adjoint() * m * sd.eigenvectors;
  CMat masked = CMat::Zero(r.rows(), r.cols());
  for (const auto& g : sd.groups)
    masked.block(g.begin, g.begin, g.size(), g.size()) = r.block(g.begin, g.begin, g.size(), g.size());
  CMat out = sd.eigenvectors * masked * sd.eigenvectors.adjoint();
  return (out + CMat(out.adjoint())) / 2.0;
}

// Infinite-time average state: the pinching of rho by the energy projectors.
inline DensityOperator dephase(const SpectralData& sd, const DensityOperator& rho) {
  return DensityOperator(rho.spec(), pinch(sd, rho.matrix()));
}

// Pure-state fast path: the energy-basis matrix is the outer product of the
// overlap vector, so the first basis rotation is free.
inline DensityOperator dephase(const SpectralData& sd, const CVec& psi) {
  if (psi.size() != sd.eigenvectors.rows()) throw std::invalid_argument("dephase: dimension mismatch");
  const CVec c = sd.eigenvectors.adjoint() * (psi / psi.norm());
  CMat masked = CMat::Zero(c.size(), c.size());
  for (const auto& g : sd.groups) {
    const auto seg = c.segment(g.begin, g.size());
    masked.block(g.begin, g.begin, g.size(), g.size()) = seg * seg.adjoint();
  }
  CMat out = sd.eigenvectors * masked * sd.eigenvectors.adjoint();
  out = (out + CMat(out.adjoint())) / 2.0;
  return DensityOperator(sd.spec, std::move(out));
}

// Infinite-time average of an observable in the Heisenberg picture.
inline CMat heisenberg_time_average(const SpectralData& sd, const CMat& a) {
  if (!(hermiticity_error(a) <= 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff())))
    throw std::invalid_argument("heisenberg_time_average: observable must be Hermitian");
  return pinch(sd, a);
}

inline CVec evolve(const SpectralData& sd, const CVec& psi, double t) {
  CVec c = sd.eigenvectors.adjoint() * psi;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    c(i) *= std::exp(cx(0.0, -sd.eigenvalues(i) * t));
  return sd.eigenvectors * c;
}

inline DensityOperator evolve(const SpectralData& sd, const DensityOperator& rho, double t) {
  CMat r = sd.eigenvectors.adjoint() * rho.matrix() * sd.eigenvectors;
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j)
      r(i, j) *= std::exp(cx(0.0, -(sd.eigenvalues(i) - sd.eigenvalues(j)) * t));
  CMat out = sd.eigenvectors * r * sd.eigenvectors.adjoint();
  out = (out + CMat(out.adjoint())) / 2.0;
  return DensityOperator(rho.spec(), std::move(out));
}

// Smallest spacing between adjacent level groups; 0 when there is a single
// group (no dynamics).
inline double min_nonzero_gap(const SpectralData& sd) {
  double best = 0.0;
  for (int k = 1; k < sd.levels(); ++k) {
    double g = sd.groups[std::size_t(k)].energy - sd.groups[std::size_t(k) - 1].energy;
    if (best == 0.0 || g < best) best = g;
  }
  return best;
}

// Monte-Carlo horizon: 200 periods of the slowest oscillation, capped at 1e7
// in rescaled units.
inline double default_time_horizon(const SpectralData& sd) {
  const double gap = min_nonzero_gap(sd);
  if (gap <= 0.0) return 1.0;
  return std::min(200.0 * 2.0 * kPi / gap, 1e7);
}

}  // namespace eqlat
