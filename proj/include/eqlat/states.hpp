#pragma once

#include "lattice.hpp"
#include "linalg.hpp"

namespace eqlat {

// Basis convention: the computational-basis index of a product state is the
// radix-local_dim number whose most significant digit is site 0. A single-site
// operator on site 0 of a 2-site lattice therefore embeds as op (x) identity.

// offsets[x] = basis offset of configuration x of `slots`, where x runs over
// the slots' digits big-endian (first slot most significant) inside an
// nslots-digit register.
inline std::vector<std::int64_t> slot_offsets(int radix, int nslots, const std::vector<int>& slots) {
  std::vector<std::int64_t> stride(std::size_t(nslots), 1);
  for (int s = nslots - 2; s >= 0; --s) stride[std::size_t(s)] = stride[std::size_t(s) + 1] * radix;
  std::int64_t count = 1;
  for (std::size_t i = 0; i < slots.size(); ++i) count *= radix;
  std::vector<std::int64_t> off(std::size_t(count), 0);
  for (std::int64_t x = 0; x < count; ++x) {
    std::int64_t rem = x, acc = 0;
    for (std::size_t p = slots.size(); p-- > 0;) {
      acc += (rem % radix) * stride[std::size_t(slots[p])];
      rem /= radix;
    }
    off[std::size_t(x)] = acc;
  }
  return off;
}

inline std::vector<std::int64_t> region_basis_offsets(const LatticeSpec& spec, const Region& r) {
  return slot_offsets(spec.local_dim, spec.num_sites(), r.sites());
}

// Full-lattice mixed state. Construction checks trace and Hermiticity; the
// positivity invariant (min eigenvalue >= -1e-10) costs a full eigensolve and
// is asserted via check_positive() at the few places that can produce
// negativity, and in the test suite.
class DensityOperator {
 public:
  DensityOperator(const LatticeSpec& spec, CMat m) : spec_(spec), m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() != spec_.hilbert_dim())
      throw std::invalid_argument("density operator: matrix dimension does not match the lattice");
    cx tr = m_.trace();
    if (!(std::abs(tr.real() - 1.0) <= 1e-10) || !(std::abs(tr.imag()) <= 1e-10))
      throw std::invalid_argument("density operator: trace must be 1");
    if (!(hermiticity_error(m_) <= 1e-12))
      throw std::invalid_argument("density operator: matrix must be Hermitian");
  }

  static DensityOperator pure(const LatticeSpec& spec, const CVec& psi) {
    CVec v = psi / psi.norm();
    return DensityOperator(spec, v * v.adjoint());
  }

  const CMat& matrix() const { return m_; }
  const LatticeSpec& spec() const { return spec_; }
  std::int64_t dim() const { return m_.rows(); }

  void check_positive(double tol = 1e-10) const {
    RVec ev = hermitian_eigenvalues(m_);
    if (!(ev(0) >= -tol))
      throw std::runtime_error("density operator: negative eigenvalue " + std::to_string(ev(0)));
  }

 private:
  LatticeSpec spec_;
  CMat m_;
};

// tr_B[m] for an arbitrary operator matrix on the full lattice.
inline CMat partial_trace(const LatticeSpec& spec, const CMat& m, const Region& keep) {
  if (m.rows() != m.cols() || m.rows() != spec.hilbert_dim())
    throw std::invalid_argument("partial_trace: matrix dimension does not match the lattice");
  const Region bath = region_complement(spec, keep);
  const auto off_s = region_basis_offsets(spec, keep);
  const auto off_b = region_basis_offsets(spec, bath);
  const std::int64_t ds = std::int64_t(off_s.size()), db = std::int64_t(off_b.size());
  CMat out = CMat::Zero(ds, ds);
  for (std::int64_t a = 0; a < ds; ++a)
    for (std::int64_t b = 0; b < ds; ++b) {
      cx acc = 0.0;
      for (std::int64_t c = 0; c < db; ++c)
        acc += m(off_s[std::size_t(a)] + off_b[std::size_t(c)], off_s[std::size_t(b)] + off_b[std::size_t(c)]);
      out(a, b) = acc;
    }
  return out;
}

inline CMat partial_trace(const DensityOperator& rho, const Region& keep) {
  return partial_trace(rho.spec(), rho.matrix(), keep);
}

// Half the trace norm of a-b: orthogonal pure states are at distance 1.
inline double trace_distance(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  CMat d = a - b;
  d = (d + CMat(d.adjoint())) / 2.0;  // remove round-off drift
  return 0.5 * trace_norm_hermitian(d);
}

inline double local_distance(const DensityOperator& rho, const DensityOperator& tau, const Region& s) {
  return trace_distance(partial_trace(rho, s), partial_trace(tau, s));
}

// von Neumann entropy in nats; eigenvalues below 1e-14 are dropped.
inline double entropy(const CMat& rho) {
  RVec ev = hermitian_eigenvalues(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-14) h -= ev(i) * std::log(ev(i));
  return h;
}

inline double entropy(const DensityOperator& rho) { return entropy(rho.matrix()); }

// S(tau||sigma) = tr[tau ln tau] - tr[tau ln sigma] in nats. Eigenvalues of
// sigma below 1e-12 of its largest count as kernel; tau putting more than
// 1e-10 of mass there yields the +infinity sentinel (a legitimate value, not
// an error).
inline double relative_entropy(const CMat& tau, const CMat& sigma) {
  if (tau.rows() != sigma.rows() || tau.cols() != sigma.cols())
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  double tau_term = 0.0;
  {
    RVec tv = hermitian_eigenvalues(tau);
    for (Eigen::Index i = 0; i < tv.size(); ++i)
      if (tv(i) > 1e-14) tau_term += tv(i) * std::log(tv(i));
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(sigma);
  if (es.info() != Eigen::Success) throw std::runtime_error("relative_entropy: eigensolver did not converge");
  const RVec sv = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(0.0, sv(sv.size() - 1));
  const CMat b = tau * es.eigenvectors();
  double cross = 0.0, kernel_mass = 0.0;
  for (Eigen::Index j = 0; j < sv.size(); ++j) {
    double q = std::max(0.0, (es.eigenvectors().col(j).adjoint() * b.col(j))(0).real());
    if (sv(j) > cutoff)
      cross += q * std::log(sv(j));
    else
      kernel_mass += q;
  }
  if (kernel_mass > 1e-10) return std::numeric_limits<double>::infinity();
  return tau_term - cross;
}

inline double relative_entropy(const DensityOperator& tau, const DensityOperator& sigma) {
  return relative_entropy(tau.matrix(), sigma.matrix());
}

// m_x (x) m_y laid out in the sorted basis of x U y (the regions may
// interleave on the lattice).
inline CMat tensor_in_union(const LatticeSpec& spec, const Region& x, const CMat& mx,
                            const Region& y, const CMat& my) {
  if (regions_overlap(x, y)) throw std::invalid_argument("tensor_in_union: regions overlap");
  const Region u = region_union(spec, x, y);
  const int radix = spec.local_dim;
  const std::int64_t du = u.local_dim(spec);
  if (mx.rows() != x.local_dim(spec) || my.rows() != y.local_dim(spec))
    throw std::invalid_argument("tensor_in_union: block dimension mismatch");
  // per union configuration, the sub-configurations of x and y
  std::vector<std::int64_t> xi(static_cast<std::size_t>(du)), yi(static_cast<std::size_t>(du));
  for (std::int64_t a = 0; a < du; ++a) {
    std::int64_t rem = a, ax = 0, ay = 0;
    std::vector<int> digits(static_cast<std::size_t>(u.size()));
    for (int p = u.size() - 1; p >= 0; --p) {
      digits[std::size_t(p)] = int(rem % radix);
      rem /= radix;
    }
    for (int p = 0; p < u.size(); ++p) {
      const int site = u.sites()[std::size_t(p)];
      if (x.contains(site))
        ax = ax * radix + digits[std::size_t(p)];
      else
        ay = ay * radix + digits[std::size_t(p)];
    }
    xi[std::size_t(a)] = ax;
    yi[std::size_t(a)] = ay;
  }
  CMat out(du, du);
  for (std::int64_t a = 0; a < du; ++a)
    for (std::int64_t b = 0; b < du; ++b)
      out(a, b) = mx(xi[std::size_t(a)], xi[std::size_t(b)]) * my(yi[std::size_t(a)], yi[std::size_t(b)]);
  return out;
}

}  // namespace eqlat
