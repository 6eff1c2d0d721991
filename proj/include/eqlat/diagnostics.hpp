#pragma once

#include <optional>

#include "report.hpp"
#include "rng.hpp"
#include "spectral.hpp"
#include "thermal.hpp"

namespace eqlat {

//------------------------------------------------------------------------
// Energy variance
//------------------------------------------------------------------------

struct VarianceReport {
  double mean_energy = 0.0;
  double sigma_sq = 0.0;
  double s = 0.0;  // sigma / sqrt(N)
  double specific_heat = std::numeric_limits<double>::quiet_NaN();  // beta^2 s^2, thermal inputs only
};

namespace detail {

inline VarianceReport make_variance_report(double m1, double m2, int num_sites,
                                           std::optional<double> beta) {
  VarianceReport r;
  r.mean_energy = m1;
  r.sigma_sq = m2 - m1 * m1;
  if (r.sigma_sq < 0.0) {
    if (r.sigma_sq < -1e-9) throw std::logic_error("energy variance came out negative (bug)");
    r.sigma_sq = 0.0;
  }
  r.s = std::sqrt(r.sigma_sq / double(num_sites));
  if (beta) r.specific_heat = (*beta) * (*beta) * r.sigma_sq / double(num_sites);
  return r;
}

}  // namespace detail

inline VarianceReport energy_variance(const DensityOperator& rho, const CMat& h, int num_sites,
                                      std::optional<double> beta = {}) {
  const CMat a = h * rho.matrix();
  const double m1 = a.trace().real();
  // tr[rho H^2] = sum_ij (H rho)_ij H_ji without forming H^2
  const double m2 = a.cwiseProduct(h.transpose()).sum().real();
  return detail::make_variance_report(m1, m2, num_sites, beta);
}

inline VarianceReport energy_variance(const DensityOperator& rho, const LocalHamiltonian& h,
                                      std::optional<double> beta = {}) {
  return energy_variance(rho, h.dense(), h.spec().num_sites(), beta);
}

// Variance from the diagonal spectral weights; identical to the dense path
// because only diagonal matrix elements of H and H^2 enter.
inline VarianceReport variance_from_weights(const SpectralData& sd, const RVec& w,
                                            std::optional<double> beta = {}) {
  const double m1 = w.dot(sd.eigenvalues);
  const double m2 = w.dot(sd.eigenvalues.cwiseAbs2());
  return detail::make_variance_report(m1, m2, sd.spec.num_sites(), beta);
}

//------------------------------------------------------------------------
// Correlation decay
//------------------------------------------------------------------------

struct CorrelationSample {
  int distance = 0;
  double lower = 0.0;  // alternating maximization over unit-norm Hermitian P, Q
  double upper = 0.0;  // trace norm of the correlation operator
};

struct CorrelationFit {
  std::vector<CorrelationSample> samples;
  double xi_hat = std::numeric_limits<double>::quiet_NaN();
  double k_hat = std::numeric_limits<double>::quiet_NaN();
  double fit_quality = std::numeric_limits<double>::quiet_NaN();  // R^2 of the log-linear fit
  bool degenerate = false;
  std::string note;
};

namespace detail {

// max over unit-norm Hermitian P, Q of |tr[delta (P (x) Q)]| by alternating
// maximization: for fixed Q the optimum is the sign of the contraction of
// delta against Q, with value its trace norm (and symmetrically for P).
inline double alternating_correlation_max(const CMat& delta, const std::vector<std::int64_t>& xi,
                                          const std::vector<std::int64_t>& yi, std::int64_t dx,
                                          std::int64_t dy, int sweeps, int starts, Rng& rng) {
  const std::int64_t du = delta.rows();
  auto contract_x = [&](const CMat& q) {
    CMat t = CMat::Zero(dx, dx);
    for (std::int64_t a = 0; a < du; ++a)
      for (std::int64_t b = 0; b < du; ++b)
        t(xi[std::size_t(a)], xi[std::size_t(b)]) += delta(a, b) * q(yi[std::size_t(b)], yi[std::size_t(a)]);
    return t;
  };
  auto contract_y = [&](const CMat& p) {
    CMat s = CMat::Zero(dy, dy);
    for (std::int64_t a = 0; a < du; ++a)
      for (std::int64_t b = 0; b < du; ++b)
        s(yi[std::size_t(a)], yi[std::size_t(b)]) += delta(a, b) * p(xi[std::size_t(b)], xi[std::size_t(a)]);
    return s;
  };
  double best = 0.0;
  for (int start = 0; start < starts; ++start) {
    CMat q = rng.hermitian(int(dy), 1.0);
    double value = 0.0, prev = -1.0;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      const CMat t = contract_x(q);
      const CMat p = hermitian_sign(t);
      const CMat s = contract_y(p);
      q = hermitian_sign(s);
      value = trace_norm_hermitian(s);
      if (std::abs(value - prev) <= 1e-8 * std::max(1.0, value)) break;
      prev = value;
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace detail

// Certified bracket for the two-region correlator of Def-style exponential
// decay: lower from alternating maximization over Hermitian P, Q; upper from
// the trace norm of rho_XY - rho_X (x) rho_Y. Both normalized by |X||Y|.
// The log-linear fit of the lower curve yields (K_hat, xi_hat).
inline CorrelationFit correlation_fit(const DensityOperator& rho,
                                      const std::vector<std::pair<Region, Region>>& region_pairs,
                                      int iters = 50, int starts = 8,
                                      std::uint64_t seed = 20240901u) {
  if (iters < 1) throw std::invalid_argument("correlation_fit: iters must be at least 1");
  const LatticeSpec& spec = rho.spec();
  Rng rng(seed);
  CorrelationFit fit;
  fit.note = "max over unit-norm Hermitian P, Q (alternating maximization, certified bracket)";
  for (const auto& [x, y] : region_pairs) {
    if (regions_overlap(x, y)) throw std::invalid_argument("correlation_fit: region pair overlaps");
    const Region u = region_union(spec, x, y);
    const CMat rho_u = partial_trace(rho, u);
    const CMat rho_x = partial_trace(rho, x);
    const CMat rho_y = partial_trace(rho, y);
    const CMat delta = rho_u - tensor_in_union(spec, x, rho_x, y, rho_y);
    const double area = double(x.size()) * double(y.size());

    // per union configuration the sub-configurations on X and Y
    const std::int64_t du = u.local_dim(spec), dx = x.local_dim(spec), dy = y.local_dim(spec);
    std::vector<std::int64_t> xi(static_cast<std::size_t>(du)), yi(static_cast<std::size_t>(du));
    for (std::int64_t a = 0; a < du; ++a) {
      std::int64_t rem = a, ax = 0, ay = 0;
      std::vector<int> digits(static_cast<std::size_t>(u.size()));
      for (int p = u.size() - 1; p >= 0; --p) {
        digits[std::size_t(p)] = int(rem % spec.local_dim);
        rem /= spec.local_dim;
      }
      for (int p = 0; p < u.size(); ++p) {
        if (x.contains(u.sites()[std::size_t(p)]))
          ax = ax * spec.local_dim + digits[std::size_t(p)];
        else
          ay = ay * spec.local_dim + digits[std::size_t(p)];
      }
      xi[std::size_t(a)] = ax;
      yi[std::size_t(a)] = ay;
    }

    CorrelationSample sample;
    sample.distance = region_distance(spec, x, y);
    sample.upper = trace_norm_hermitian(delta) / area;
    sample.lower = detail::alternating_correlation_max(delta, xi, yi, dx, dy, iters, starts, rng) / area;
    if (sample.lower > sample.upper) sample.lower = sample.upper;  // round-off guard
    fit.samples.push_back(sample);
  }

  // fit ln(lower) against distance
  std::vector<double> xs, ys;
  for (const auto& s : fit.samples)
    if (s.lower > 1e-14) {
      xs.push_back(double(s.distance));
      ys.push_back(std::log(s.lower));
    }
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) {
    fit.degenerate = true;
    fit.note += "; fit undefined (fewer than 2 distinct distances with nonzero correlator)";
    return fit;
  }
  const LinearFit lf = linear_fit(xs, ys);
  if (!lf.ok || !(lf.slope < 0.0)) {
    fit.degenerate = true;
    fit.note += "; fit undefined (correlators do not decay)";
    fit.fit_quality = lf.r2;
    return fit;
  }
  fit.xi_hat = -1.0 / lf.slope;
  fit.k_hat = std::exp(lf.intercept);
  fit.fit_quality = lf.r2;
  return fit;
}

// Single-site pairs (anchor, anchor + r e_0) for r = 1..max_distance; the
// default probe set for correlation decay along the first axis.
inline std::vector<std::pair<Region, Region>> axis_pairs(const LatticeSpec& spec, int anchor = 0,
                                                         int max_distance = -1) {
  std::vector<std::pair<Region, Region>> pairs;
  auto c = spec.coords(anchor);
  const int limit = max_distance < 0 ? spec.side - 1 - c[0] : max_distance;
  for (int r = 1; r <= limit; ++r) {
    auto cj = c;
    cj[0] = c[0] + r;
    if (cj[0] >= spec.side) break;
    pairs.emplace_back(Region(spec, {anchor}), Region(spec, {spec.site_at(cj)}));
  }
  return pairs;
}

//------------------------------------------------------------------------
// Spectral cumulative distributions and the Berry-Esseen distance
//------------------------------------------------------------------------

struct SpectralCDFs {
  RVec jump_points;  // distinct (group) energies, ascending
  RVec f_values;     // right-continuous cumulative weights at the jumps
  double gauss_mean = 0.0;
  double gauss_sigma = 0.0;
  double delta = 0.0;  // sup_x |F - G|
};

// The sup of |step - continuous| is attained at a one-sided limit of some
// jump, so evaluating both sides of every jump is exact.
inline SpectralCDFs spectral_cdfs(const SpectralData& sd, const RVec& weights) {
  SpectralCDFs out;
  const VarianceReport var = variance_from_weights(sd, weights);
  if (!(var.sigma_sq > 0.0))
    throw std::domain_error("spectral_cdfs: Gaussian reference is degenerate (sigma = 0)");
  out.gauss_mean = var.mean_energy;
  out.gauss_sigma = std::sqrt(var.sigma_sq);
  const RVec g = group_weights(sd, weights);
  const int L = sd.levels();
  out.jump_points.resize(L);
  out.f_values.resize(L);
  double acc = 0.0, delta = 0.0;
  for (int k = 0; k < L; ++k) {
    const double x = sd.groups[std::size_t(k)].energy;
    const double gx = normal_cdf(x, out.gauss_mean, out.gauss_sigma);
    delta = std::max(delta, std::abs(acc - gx));  // left limit of F at the jump
    acc += g(k);
    delta = std::max(delta, std::abs(acc - gx));  // right-continuous value
    out.jump_points(k) = x;
    out.f_values(k) = acc;
  }
  out.delta = delta;
  return out;
}

inline SpectralCDFs spectral_cdfs(const SpectralData& sd, const DensityOperator& rho) {
  return spectral_cdfs(sd, spectral_weights(sd, rho));
}

// Constant-free check 1/d_eff <= 2 sup|F - G|. This is an exact inequality;
// a failure is an implementation bug, not a physics finding.
inline BoundReport effective_dimension_bound_check(const SpectralData& sd, const RVec& weights) {
  const EffectiveDimension ed = effective_dimension(sd, weights);
  const SpectralCDFs cdfs = spectral_cdfs(sd, weights);
  BoundReport r;
  r.name = "berry_esseen_effective_dimension";
  r.kind = "proved";
  r.lhs = ed.inverse;
  r.rhs = 2.0 * cdfs.delta;
  r.tolerance = 1e-9;
  r.set_verdict();
  r.premises.push_back({"sigma_sq_positive", cdfs.gauss_sigma > 0.0, cdfs.gauss_sigma * cdfs.gauss_sigma});
  r.premises.push_back({"berry_esseen_delta_in_range", cdfs.delta >= 0.0 && cdfs.delta <= 1.0, cdfs.delta});
  r.premises.push_back({"effective_dimension", true, ed.d_eff});
  r.convention_notes = standard_conventions();
  r.inputs_digest = Digest().add(cdfs.gauss_mean).add(cdfs.gauss_sigma).add(ed.d_eff).add(std::int64_t(sd.levels())).hex();
  return r;
}

inline BoundReport effective_dimension_bound_check(const SpectralData& sd, const DensityOperator& rho) {
  return effective_dimension_bound_check(sd, spectral_weights(sd, rho));
}

//------------------------------------------------------------------------
// Monte-Carlo time-averaged local distances
//------------------------------------------------------------------------

namespace detail {

// Streams the reduced state of each region at each sample time without ever
// forming the evolved full-lattice matrix.
//
// Low-rank path (rank R initial states, R <= 16): evolve the scaled
// eigenvectors of rho0 and contract pure-state reductions; cost ~ R D^2 per
// sample via batched products.
//
// Dense path: with rho' = V^dag rho0 V and G_ab = V_a^T conj(V_b) built from
// gathered eigenvector rows, each reduced entry is
//   rho_S(t)[a,b] = z(t)^T (rho' . G_ab) conj(z(t)),   z_mu = exp(-i E_mu t),
// so one D x D matrix per (a,b) pair turns a sample into a matrix-vector
// product. Pairs are processed in memory-capped chunks.
class ReducedStateSampler {
 public:
  ReducedStateSampler(const SpectralData& sd, const CVec& psi0, std::vector<Region> regions)
      : sd_(&sd), regions_(std::move(regions)) {
    if (psi0.size() != sd.eigenvectors.rows())
      throw std::invalid_argument("sampler: state dimension mismatch");
    low_rank_ = true;
    cols_ = sd.eigenvectors.adjoint() * psi0;
    cols_ /= psi0.norm();
    init_maps();
  }

  ReducedStateSampler(const SpectralData& sd, const DensityOperator& rho0, std::vector<Region> regions)
      : sd_(&sd), regions_(std::move(regions)) {
    if (rho0.dim() != sd.eigenvectors.rows())
      throw std::invalid_argument("sampler: state dimension mismatch");
    Eigen::SelfAdjointEigenSolver<CMat> es(rho0.matrix());
    if (es.info() != Eigen::Success) throw std::runtime_error("sampler: eigensolver did not converge");
    const RVec p = es.eigenvalues();
    std::vector<int> keep;
    for (Eigen::Index i = 0; i < p.size(); ++i)
      if (p(i) > 1e-12) keep.push_back(int(i));
    if (int(keep.size()) <= kMaxRank) {
      low_rank_ = true;
      cols_.resize(rho0.dim(), Eigen::Index(keep.size()));
      for (std::size_t r = 0; r < keep.size(); ++r)
        cols_.col(Eigen::Index(r)) =
            std::sqrt(p(keep[r])) * (sd.eigenvectors.adjoint() * es.eigenvectors().col(keep[r]));
    } else {
      low_rank_ = false;
      rho_energy_ = sd.eigenvectors.adjoint() * rho0.matrix() * sd.eigenvectors;
    }
    init_maps();
  }

  // fn(sample_index, region_index, rho_S); call order over (sample, region)
  // is unspecified, each pair is visited exactly once.
  template <class Fn>
  void sample(const std::vector<double>& times, Fn&& fn) const {
    if (low_rank_)
      sample_low_rank(times, fn);
    else
      sample_dense(times, fn);
  }

 private:
  static constexpr int kMaxRank = 16;
  static constexpr int kBatch = 64;
  static constexpr std::int64_t kMemCap = INT64_C(1'500'000'000);

  void init_maps() {
    const LatticeSpec& spec = sd_->spec;
    for (const auto& r : regions_) {
      RegionMaps m;
      m.off_s = region_basis_offsets(spec, r);
      m.off_b = region_basis_offsets(spec, region_complement(spec, r));
      maps_.push_back(std::move(m));
    }
  }

  CVec phases(double t) const {
    CVec z(sd_->eigenvalues.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = std::exp(cx(0.0, -sd_->eigenvalues(i) * t));
    return z;
  }

  template <class Fn>
  void sample_low_rank(const std::vector<double>& times, Fn& fn) const {
    const Eigen::Index d = sd_->eigenvectors.rows();
    const Eigen::Index rank = cols_.cols();
    const int nt = int(times.size());
    for (int j0 = 0; j0 < nt; j0 += kBatch) {
      const int nb = std::min(kBatch, nt - j0);
      CMat m(d, Eigen::Index(nb) * rank);
      for (int jj = 0; jj < nb; ++jj) {
        const CVec z = phases(times[std::size_t(j0 + jj)]);
        for (Eigen::Index r = 0; r < rank; ++r)
          m.col(Eigen::Index(jj) * rank + r) = z.cwiseProduct(cols_.col(r));
      }
      const CMat y = sd_->eigenvectors * m;
      for (int jj = 0; jj < nb; ++jj) {
        for (std::size_t ri = 0; ri < regions_.size(); ++ri) {
          const auto& mp = maps_[ri];
          const std::int64_t ds = std::int64_t(mp.off_s.size()), db = std::int64_t(mp.off_b.size());
          CMat acc = CMat::Zero(ds, ds);
          CMat slice(ds, db);  // slice(a, c) = psi[(a, c)], so rho_S = slice slice^dag
          for (Eigen::Index r = 0; r < rank; ++r) {
            const auto& col = y.col(Eigen::Index(jj) * rank + r);
            for (std::int64_t a = 0; a < ds; ++a)
              for (std::int64_t c = 0; c < db; ++c)
                slice(a, c) = col(mp.off_s[std::size_t(a)] + mp.off_b[std::size_t(c)]);
            acc.noalias() += slice * slice.adjoint();
          }
          fn(j0 + jj, int(ri), acc);
        }
      }
    }
  }

  template <class Fn>
  void sample_dense(const std::vector<double>& times, Fn& fn) const {
    const Eigen::Index d = sd_->eigenvectors.rows();
    const int nt = int(times.size());
    CMat z(d, nt < kBatch ? nt : kBatch);  // reused batch buffer
    for (std::size_t ri = 0; ri < regions_.size(); ++ri) {
      const auto& mp = maps_[ri];
      const std::int64_t ds = std::int64_t(mp.off_s.size()), db = std::int64_t(mp.off_b.size());
      std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
      for (std::int64_t a = 0; a < ds; ++a)
        for (std::int64_t b = a; b < ds; ++b) pairs.emplace_back(a, b);
      const std::int64_t bytes_per_pair = std::int64_t(d) * d * 16;
      const std::size_t chunk =
          std::size_t(std::max<std::int64_t>(1, kMemCap / std::max<std::int64_t>(1, bytes_per_pair)));
      // vals[pair][sample]
      std::vector<std::vector<cx>> vals(pairs.size(), std::vector<cx>(static_cast<std::size_t>(nt)));

      CMat va(db, d), vb(db, d);
      for (std::size_t p0 = 0; p0 < pairs.size(); p0 += chunk) {
        const std::size_t p1 = std::min(pairs.size(), p0 + chunk);
        std::vector<CMat> w(p1 - p0);
        for (std::size_t pi = p0; pi < p1; ++pi) {
          const auto [a, b] = pairs[pi];
          for (std::int64_t c = 0; c < db; ++c) {
            va.row(c) = sd_->eigenvectors.row(mp.off_s[std::size_t(a)] + mp.off_b[std::size_t(c)]);
            vb.row(c) = sd_->eigenvectors.row(mp.off_s[std::size_t(b)] + mp.off_b[std::size_t(c)]);
          }
          w[pi - p0].noalias() = va.transpose() * vb.conjugate();
          w[pi - p0].array() *= rho_energy_.array();
        }
        for (int j0 = 0; j0 < nt; j0 += kBatch) {
          const int nb = std::min(kBatch, nt - j0);
          for (int jj = 0; jj < nb; ++jj) z.col(jj) = phases(times[std::size_t(j0 + jj)]);
          for (std::size_t pi = p0; pi < p1; ++pi) {
            const CMat y = w[pi - p0] * z.leftCols(nb).conjugate();
            for (int jj = 0; jj < nb; ++jj)
              vals[pi][std::size_t(j0 + jj)] = (z.col(jj).transpose() * y.col(jj))(0);
          }
        }
      }
      for (int j = 0; j < nt; ++j) {
        CMat rs(ds, ds);
        for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
          const auto [a, b] = pairs[pi];
          rs(a, b) = vals[pi][std::size_t(j)];
          if (a != b) rs(b, a) = std::conj(vals[pi][std::size_t(j)]);
        }
        rs = (rs + CMat(rs.adjoint())) / 2.0;
        fn(j, int(ri), rs);
      }
    }
  }

  struct RegionMaps {
    std::vector<std::int64_t> off_s, off_b;
  };

  const SpectralData* sd_;
  std::vector<Region> regions_;
  std::vector<RegionMaps> maps_;
  bool low_rank_ = false;
  CMat cols_;        // D x R, scaled eigencolumns in the energy basis
  CMat rho_energy_;  // V^dag rho0 V for the dense path
};

}  // namespace detail

struct McSeries {
  std::vector<double> values;
  double estimate = 0.0;
  double std_error = 0.0;
};

struct McLocalDistances {
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<std::vector<McSeries>> series;  // [region][target]
};

namespace detail {

struct McInitial {
  const CVec* psi = nullptr;
  const DensityOperator* rho = nullptr;
};

inline McLocalDistances mc_local_distances_impl(const SpectralData& sd, const McInitial& init,
                                                const std::vector<Region>& regions,
                                                const std::vector<const DensityOperator*>& targets,
                                                int samples, double horizon, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("mc: at least 2 samples required");
  if (regions.empty() || targets.empty()) throw std::invalid_argument("mc: nothing to sample");
  McLocalDistances out;
  out.horizon = horizon > 0.0 ? horizon : default_time_horizon(sd);
  const double offset = Rng(seed).uniform01();
  const auto u = golden_sequence(samples, offset);
  out.times.resize(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) out.times[std::size_t(j)] = out.horizon * u[std::size_t(j)];

  // reduced targets per region
  std::vector<std::vector<CMat>> tgt(regions.size());
  for (std::size_t ri = 0; ri < regions.size(); ++ri)
    for (const auto* t : targets) tgt[ri].push_back(partial_trace(*t, regions[ri]));

  out.series.assign(regions.size(), std::vector<McSeries>(targets.size()));
  for (auto& row : out.series)
    for (auto& s : row) s.values.resize(static_cast<std::size_t>(samples));

  auto sink = [&](int j, int ri, const CMat& rs) {
    for (std::size_t ti = 0; ti < targets.size(); ++ti)
      out.series[std::size_t(ri)][ti].values[std::size_t(j)] =
          trace_distance(rs, tgt[std::size_t(ri)][ti]);
  };
  if (init.psi) {
    detail::ReducedStateSampler sampler(sd, *init.psi, regions);
    sampler.sample(out.times, sink);
  } else {
    detail::ReducedStateSampler sampler(sd, *init.rho, regions);
    sampler.sample(out.times, sink);
  }
  for (auto& row : out.series)
    for (auto& s : row) {
      s.estimate = mean_of(s.values);
      s.std_error = std_error_of(s.values);
    }
  return out;
}

}  // namespace detail

inline McLocalDistances mc_local_distances(const SpectralData& sd, const CVec& psi0,
                                           const std::vector<Region>& regions,
                                           const std::vector<const DensityOperator*>& targets,
                                           int samples, double horizon, std::uint64_t seed) {
  return detail::mc_local_distances_impl(sd, {&psi0, nullptr}, regions, targets, samples, horizon, seed);
}

inline McLocalDistances mc_local_distances(const SpectralData& sd, const DensityOperator& rho0,
                                           const std::vector<Region>& regions,
                                           const std::vector<const DensityOperator*>& targets,
                                           int samples, double horizon, std::uint64_t seed) {
  return detail::mc_local_distances_impl(sd, {nullptr, &rho0}, regions, targets, samples, horizon, seed);
}

struct McDistance {
  double estimate = 0.0;
  double std_error = 0.0;
  bool converged = true;    // [0,T] vs [0,2T] agreement within 3 standard errors
  double estimate_2t = 0.0;
  double horizon = 0.0;
  std::vector<double> times, values;
};

namespace detail {

inline McDistance mc_average_distance_impl(const SpectralData& sd, const McInitial& init,
                                           const DensityOperator& target, const Region& s,
                                           int samples, double horizon, std::uint64_t seed,
                                           bool check_convergence) {
  McDistance out;
  const double t1 = horizon > 0.0 ? horizon : default_time_horizon(sd);
  auto run = mc_local_distances_impl(sd, init, {s}, {&target}, samples, t1, seed);
  out.horizon = run.horizon;
  out.times = std::move(run.times);
  out.values = std::move(run.series[0][0].values);
  out.estimate = run.series[0][0].estimate;
  out.std_error = run.series[0][0].std_error;
  if (check_convergence) {
    auto run2 = mc_local_distances_impl(sd, init, {s}, {&target}, samples, 2.0 * t1,
                                        seed ^ 0x9e3779b97f4a7c15ull);
    out.estimate_2t = run2.series[0][0].estimate;
    const double tol = 3.0 * std::max(out.std_error, 1e-12);
    out.converged = std::abs(out.estimate - out.estimate_2t) <= tol;
  } else {
    out.estimate_2t = out.estimate;
  }
  return out;
}

}  // namespace detail

// Monte-Carlo estimate of the time-averaged local distance between the
// evolving state and a fixed target on region s, sampled at low-discrepancy
// times in [0, T].
inline McDistance mc_average_distance(const SpectralData& sd, const CVec& psi0,
                                      const DensityOperator& target, const Region& s, int samples,
                                      double horizon = 0.0, std::uint64_t seed = 1,
                                      bool check_convergence = true) {
  return detail::mc_average_distance_impl(sd, {&psi0, nullptr}, target, s, samples, horizon, seed,
                                          check_convergence);
}

inline McDistance mc_average_distance(const SpectralData& sd, const DensityOperator& rho0,
                                      const DensityOperator& target, const Region& s, int samples,
                                      double horizon = 0.0, std::uint64_t seed = 1,
                                      bool check_convergence = true) {
  return detail::mc_average_distance_impl(sd, {nullptr, &rho0}, target, s, samples, horizon, seed,
                                          check_convergence);
}

//------------------------------------------------------------------------
// Transport diagnostic
//------------------------------------------------------------------------

// Operator norm of the commutator between a local unitary and the
// time-averaged Heisenberg observable on the same region. Vanishing norm at
// growing N is the finite-size stand-in for transport.
inline double transport_diagnostic(const SpectralData& sd, const Region& s, const CMat& u_local,
                                   const CMat& a_local) {
  const LatticeSpec& spec = sd.spec;
  const std::int64_t d = s.local_dim(spec);
  if (u_local.rows() != d || u_local.cols() != d || a_local.rows() != d || a_local.cols() != d)
    throw std::invalid_argument("transport_diagnostic: operator dimension does not match region");
  if (!((u_local.adjoint() * u_local - CMat::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10))
    throw std::invalid_argument("transport_diagnostic: U is not unitary");
  const CMat a_avg = heisenberg_time_average(sd, embed(spec, s, a_local));
  const CMat u = embed(spec, s, u_local);
  const CMat comm = u * a_avg - a_avg * u;
  return operator_norm(comm);
}

}  // namespace eqlat
