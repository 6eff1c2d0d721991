#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqlat {

using cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Max-entry deviation from Hermiticity.
inline double hermiticity_error(const CMat& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// NaN entries fail the comparison, so a NaN matrix is rejected here too.
inline bool is_hermitian(const CMat& m, double tol = 1e-12) {
  return m.rows() == m.cols() && hermiticity_error(m) <= tol;
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline RVec hermitian_eigenvalues(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
  return es.eigenvalues();
}

inline double operator_norm_hermitian(const CMat& m) {
  if (m.size() == 0) return 0.0;
  RVec ev = hermitian_eigenvalues(m);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// Sum of absolute eigenvalues (trace norm of a Hermitian matrix).
inline double trace_norm_hermitian(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

// V sgn(Lambda) V^dag with sgn(0) := 1, so the result is always a unitary
// Hermitian operator of norm one.
inline CMat hermitian_sign(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_sign: eigensolver did not converge");
  RVec s = es.eigenvalues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = s(i) < 0.0 ? -1.0 : 1.0;
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

// Largest singular value. Exact SVD for small matrices, power iteration on
// M^dag M above that (three deterministic restarts, best Rayleigh quotient).
inline double operator_norm(const CMat& m, double rel_tol = 1e-12, int max_iter = 20000) {
  if (m.size() == 0) return 0.0;
  if (m.rows() <= 128 && m.cols() <= 128) {
    Eigen::JacobiSVD<CMat> svd(m);
    return svd.singularValues()(0);
  }
  const Eigen::Index n = m.cols();
  double best = 0.0;
  for (int restart = 0; restart < 3; ++restart) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
      v(i) = cx(std::sin(0.7 * double(i) + 0.3 + restart), std::cos(1.3 * double(i) + 0.7 + 2 * restart));
    v.normalize();
    double lam = 0.0, prev = -1.0;
    int stable = 0;
    for (int it = 0; it < max_iter; ++it) {
      CVec w = m * v;
      lam = w.squaredNorm();  // v^dag M^dag M v
      CVec u = m.adjoint() * w;
      double nu = u.norm();
      if (nu == 0.0) { lam = 0.0; break; }
      v = u / nu;
      if (std::abs(lam - prev) <= rel_tol * std::max(1.0, lam)) {
        if (++stable >= 3) break;
      } else {
        stable = 0;
      }
      prev = lam;
    }
    best = std::max(best, lam);
  }
  return std::sqrt(best);
}

inline double normal_cdf(double x, double mean = 0.0, double sigma = 1.0) {
  return 0.5 * std::erfc(-(x - mean) / (sigma * std::sqrt(2.0)));
}

// Pairwise (tree) summation: fixed reduction order, independent of any
// threading in the producers.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return pairwise_sum(xs) / double(xs.size());
}

// Standard error of the mean.
inline double std_error_of(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mu = mean_of(xs);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (xs[i] - mu) * (xs[i] - mu);
  double var = pairwise_sum(sq) / double(n - 1);
  return std::sqrt(std::max(0.0, var) / double(n));
}

struct LinearFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  LinearFit f;
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) return f;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / double(n), my = sy / double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  f.ok = true;
  return f;
}

// FNV-1a over raw bytes; used for config digests and derived seeds.
class Digest {
 public:
  Digest& add_bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= b[i];
      h_ *= 0x100000001b3ull;
    }
    return *this;
  }
  Digest& add(double v) { return add_bytes(&v, sizeof v); }
  Digest& add(std::uint64_t v) { return add_bytes(&v, sizeof v); }
  Digest& add(std::int64_t v) { return add_bytes(&v, sizeof v); }
  Digest& add(int v) { return add(std::int64_t(v)); }
  Digest& add(const std::string& s) { return add_bytes(s.data(), s.size()); }
  std::uint64_t value() const { return h_; }
  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t v = h_;
    for (int i = 15; i >= 0; --i) {
      out[std::size_t(i)] = digits[v & 0xf];
      v >>= 4;
    }
    return out;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace eqlat
