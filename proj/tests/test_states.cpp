#include <catch2/catch_amalgamated.hpp>

#include <eqlat/operators.hpp>
#include <eqlat/rng.hpp>
#include <eqlat/states.hpp>

using namespace eqlat;
using Catch::Approx;

namespace {

// Independent partial-trace oracle for qubit chains: explicit bit gymnastics,
// no shared stride machinery.
CMat naive_qubit_partial_trace(const CMat& m, int n_qubits, const std::vector<int>& keep) {
  const int nk = int(keep.size());
  const std::int64_t dk = std::int64_t(1) << nk;
  std::vector<int> rest;
  for (int q = 0; q < n_qubits; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);
  auto assemble = [&](std::int64_t a, std::int64_t c) {
    std::int64_t idx = 0;
    for (int p = 0; p < nk; ++p)
      if (a & (std::int64_t(1) << (nk - 1 - p))) idx |= std::int64_t(1) << (n_qubits - 1 - keep[std::size_t(p)]);
    for (std::size_t p = 0; p < rest.size(); ++p)
      if (c & (std::int64_t(1) << (int(rest.size()) - 1 - int(p)))) idx |= std::int64_t(1) << (n_qubits - 1 - rest[p]);
    return idx;
  };
  CMat out = CMat::Zero(dk, dk);
  const std::int64_t dc = std::int64_t(1) << rest.size();
  for (std::int64_t a = 0; a < dk; ++a)
    for (std::int64_t b = 0; b < dk; ++b)
      for (std::int64_t c = 0; c < dc; ++c) out(a, b) += m(assemble(a, c), assemble(b, c));
  return out;
}

}  // namespace

TEST_CASE("density operator validation", "[states]") {
  LatticeSpec spec(1, 2, 2);
  CMat ok = CMat::Identity(4, 4) / 4.0;
  CHECK_NOTHROW(DensityOperator(spec, ok));
  CHECK_THROWS_AS(DensityOperator(spec, CMat(CMat::Identity(4, 4))), std::invalid_argument);
  CMat nonherm = ok;
  nonherm(0, 1) = cx(0.1, 0.0);
  CHECK_THROWS_AS(DensityOperator(spec, nonherm), std::invalid_argument);
}

TEST_CASE("partial trace basics", "[states]") {
  LatticeSpec spec(1, 2, 2);
  Rng rng(3);
  const CMat r = rng.density_matrix(4);
  DensityOperator rho(spec, r);
  // keep everything: identity operation
  CHECK((partial_trace(rho, full_region(spec)) - r).cwiseAbs().maxCoeff() < 1e-14);

  // product state: reduce to each factor
  Rng rng2(4);
  CMat a = rng2.density_matrix(2), b = rng2.density_matrix(2);
  DensityOperator prod(spec, kron(a, b));
  CHECK((partial_trace(prod, Region(spec, {0})) - a).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((partial_trace(prod, Region(spec, {1})) - b).cwiseAbs().maxCoeff() < 1e-12);

  // Bell state reduces to the maximally mixed qubit
  CVec bell(4);
  bell << 1, 0, 0, 1;
  bell /= std::sqrt(2.0);
  DensityOperator rb = DensityOperator::pure(spec, bell);
  CHECK((partial_trace(rb, Region(spec, {0})) - CMat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace matches the naive contraction oracle", "[states][oracle]") {
  LatticeSpec spec(1, 3, 2);
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    DensityOperator rho(spec, rng.density_matrix(8));
    for (const std::vector<int>& keep : {std::vector<int>{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}) {
      const CMat mine = partial_trace(rho, Region(spec, keep));
      const CMat oracle = naive_qubit_partial_trace(rho.matrix(), 3, keep);
      CHECK((mine - oracle).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("trace distance values", "[states]") {
  CMat a = CMat::Zero(2, 2), b = CMat::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  CHECK(trace_distance(a, a) == 0.0);
  CHECK(trace_distance(a, b) == Approx(1.0));

  CMat p = CMat::Zero(2, 2), q = CMat::Zero(2, 2);
  p(0, 0) = 0.7;
  p(1, 1) = 0.3;
  q(0, 0) = 0.4;
  q(1, 1) = 0.6;
  CHECK(trace_distance(p, q) == Approx(0.3));

  CHECK_THROWS_AS(trace_distance(a, CMat::Identity(4, 4)), std::invalid_argument);
}

TEST_CASE("trace distance is a metric", "[states][property]") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    CMat a = rng.density_matrix(4), b = rng.density_matrix(4), c = rng.density_matrix(4);
    CHECK(trace_distance(a, b) == Approx(trace_distance(b, a)).margin(1e-12));
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-9);
    CHECK(trace_distance(a, b) >= -1e-12);
  }
}

TEST_CASE("local distance", "[states]") {
  LatticeSpec spec(1, 3, 2);
  Rng rng(31);
  DensityOperator rho(spec, rng.density_matrix(8));
  CHECK(local_distance(rho, rho, Region(spec, {0, 1})) == Approx(0.0).margin(1e-12));

  // states differing only outside S
  CMat a = rng.density_matrix(2), b1 = rng.density_matrix(4), b2 = rng.density_matrix(4);
  DensityOperator r1(spec, kron(a, b1)), r2(spec, kron(a, b2));
  CHECK(local_distance(r1, r2, Region(spec, {0})) == Approx(0.0).margin(1e-12));

  // monotonicity under restriction plus oracle cross-check
  for (int trial = 0; trial < 20; ++trial) {
    DensityOperator x(spec, rng.density_matrix(8)), y(spec, rng.density_matrix(8));
    Region s(spec, {0, 1});
    const double loc = local_distance(x, y, s);
    CHECK(loc <= trace_distance(x.matrix(), y.matrix()) + 1e-9);
    const double oracle = trace_distance(naive_qubit_partial_trace(x.matrix(), 3, {0, 1}),
                                         naive_qubit_partial_trace(y.matrix(), 3, {0, 1}));
    CHECK(loc == Approx(oracle).margin(1e-11));
  }
}

TEST_CASE("entropy", "[states]") {
  LatticeSpec spec(1, 3, 2);
  Rng rng(41);
  CHECK(entropy(DensityOperator::pure(spec, rng.state_vector(8))) == Approx(0.0).margin(1e-9));
  CHECK(entropy(CMat(CMat::Identity(8, 8) / 8.0)) == Approx(std::log(8.0)));
}

TEST_CASE("Araki-Lieb sandwich on random tripartitions", "[states][property]") {
  LatticeSpec spec(1, 3, 2);
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    DensityOperator rho(spec, rng.density_matrix(8, 1 + trial % 8));
    const Region a(spec, {0}), b(spec, {1, 2});
    const double s = entropy(rho);
    const double sa = entropy(partial_trace(rho, a));
    const double sb = entropy(partial_trace(rho, b));
    CHECK(std::abs(sa - sb) <= s + 1e-9);        // Araki-Lieb
    CHECK(s <= sa + sb + 1e-9);                  // subadditivity
  }
}

TEST_CASE("relative entropy", "[states]") {
  LatticeSpec spec(1, 3, 2);
  Rng rng(61);
  const CMat sigma = rng.density_matrix(8);
  CHECK(relative_entropy(sigma, sigma) == Approx(0.0).margin(1e-9));

  // pure state against maximally mixed: ln D
  const CMat pure = DensityOperator::pure(spec, rng.state_vector(8)).matrix();
  CHECK(relative_entropy(pure, CMat(CMat::Identity(8, 8) / 8.0)) == Approx(std::log(8.0)).margin(1e-9));

  // support violation: the sentinel, not an exception
  CMat proj = CMat::Zero(8, 8);
  proj(0, 0) = 1.0;
  CMat other = CMat::Zero(8, 8);
  other(1, 1) = 1.0;
  CHECK(std::isinf(relative_entropy(other, proj)));

  for (int trial = 0; trial < 30; ++trial) {
    CMat t = rng.density_matrix(8), s = rng.density_matrix(8);
    CHECK(relative_entropy(t, s) >= -1e-9);
  }
}

TEST_CASE("relative entropy contracts under partial trace", "[states][property]") {
  LatticeSpec spec(1, 3, 2);
  Rng rng(71);
  const Region s(spec, {0, 2});
  for (int trial = 0; trial < 30; ++trial) {
    DensityOperator tau(spec, rng.density_matrix(8)), sigma(spec, rng.density_matrix(8));
    const double full = relative_entropy(tau, sigma);
    const double reduced = relative_entropy(partial_trace(tau, s), partial_trace(sigma, s));
    CHECK(reduced <= full + 1e-9);
  }
}

TEST_CASE("tensor_in_union handles interleaved regions", "[states]") {
  LatticeSpec spec(1, 3, 2);
  Rng rng(81);
  const CMat mx = rng.density_matrix(2);   // on site 1
  const CMat my = rng.density_matrix(4);   // on sites 0 and 2
  const Region x(spec, {1}), y(spec, {0, 2});
  const CMat out = tensor_in_union(spec, x, mx, y, my);
  // oracle: embed both into the 3-qubit space and reduce to {0,1,2} = identity
  const CMat full = embed(spec, x, mx) * embed(spec, y, my);
  CHECK((out - full).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(tensor_in_union(spec, x, mx, Region(spec, {1, 2}), my), std::invalid_argument);
}
