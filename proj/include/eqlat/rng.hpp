#pragma once

#include <random>

#include "linalg.hpp"

namespace eqlat {

// Deterministic random source. mt19937_64 output is specified bit-for-bit by
// the standard; the mappings below avoid std::*_distribution, whose results
// are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return double(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  int uniform_int(int n) { return int(gen_() % std::uint64_t(n)); }
  std::uint64_t raw() { return gen_(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = std::max(uniform01(), 1e-300);
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1)), a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  cx cnormal() { return cx(normal(), normal()); }

  // GUE-style Hermitian matrix rescaled to the requested operator norm.
  CMat hermitian(int n, double norm = 1.0) {
    CMat a(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) a(i, j) = cnormal();
    CMat h = (a + a.adjoint()) / 2.0;
    double hn = operator_norm_hermitian(h);
    if (hn > 0.0) h *= norm / hn;
    return h;
  }

  CVec state_vector(int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = cnormal();
    double nn = v.norm();
    if (nn == 0.0) { v(0) = 1.0; nn = 1.0; }
    return v / nn;
  }

  // rank <= 0 means full rank.
  CMat density_matrix(int n, int rank = 0) {
    if (rank <= 0 || rank > n) rank = n;
    CMat g(n, rank);
    for (int j = 0; j < rank; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = cnormal();
    CMat r = g * g.adjoint();
    return r / r.trace().real();
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Golden-ratio Kronecker sequence on [0,1): frac(offset + i/phi). Fills an
// interval far more evenly than i.i.d. draws at the same sample count.
inline std::vector<double> golden_sequence(int count, double offset) {
  constexpr double inv_phi = 0.6180339887498948482;
  std::vector<double> u(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    double x = offset + double(i) * inv_phi;
    u[std::size_t(i)] = x - std::floor(x);
  }
  return u;
}

}  // namespace eqlat
