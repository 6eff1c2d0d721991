#include <catch2/catch_amalgamated.hpp>

#include <eqlat/operators.hpp>
#include <eqlat/rng.hpp>

#include <algorithm>

using namespace eqlat;
using Catch::Approx;

namespace {

std::vector<double> sorted_eigs(const CMat& m) {
  RVec e = hermitian_eigenvalues(m);
  return std::vector<double>(e.data(), e.data() + e.size());
}

}  // namespace

TEST_CASE("embed single-site and identity", "[operators]") {
  LatticeSpec spec(1, 2, 2);
  // Z on site 0 of a 2-site chain: site 0 is the most significant digit
  const CMat z0 = embed(spec, Region(spec, {0}), pauli_z());
  CMat expect(4, 4);
  expect.setZero();
  expect.diagonal() << 1, 1, -1, -1;
  CHECK((z0 - expect).cwiseAbs().maxCoeff() < 1e-15);

  const CMat id = embed(spec, Region(spec, {1}), CMat(CMat::Identity(2, 2)));
  CHECK((id - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("embed matches the naive Kronecker oracle", "[operators][oracle]") {
  LatticeSpec spec(1, 3, 2);
  Rng rng(5);
  const CMat zz = kron(pauli_z(), pauli_z());
  const CMat mine = embed(spec, Region(spec, {0, 1}), zz);
  const CMat oracle = kron(kron(pauli_z(), pauli_z()), CMat(CMat::Identity(2, 2)));
  CHECK((mine - oracle).cwiseAbs().maxCoeff() < 1e-15);

  // middle placement
  const CMat x1 = embed(spec, Region(spec, {1}), pauli_x());
  const CMat oracle2 = kron(kron(CMat(CMat::Identity(2, 2)), pauli_x()), CMat(CMat::Identity(2, 2)));
  CHECK((x1 - oracle2).cwiseAbs().maxCoeff() < 1e-15);

  // random two-site term on {0,2}
  const CMat m = rng.hermitian(4, 1.0);
  const CMat mine3 = embed(spec, Region(spec, {0, 2}), m);
  // oracle: permute a kron to interleave the identity at site 1
  CMat oracle3 = CMat::Zero(8, 8);
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b2 = 0; b2 < 2; ++b2)
          for (int mid = 0; mid < 2; ++mid)
            oracle3(4 * a0 + 2 * mid + a2, 4 * b0 + 2 * mid + b2) = m(2 * a0 + a2, 2 * b0 + b2);
  CHECK((mine3 - oracle3).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("embed commutes with sums", "[operators][property]") {
  LatticeSpec spec(1, 3, 2);
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat a = rng.hermitian(4, 0.5), b = rng.hermitian(4, 0.5);
    const Region r(spec, {1, 2});
    CHECK((embed(spec, r, CMat(a + b)) - (embed(spec, r, a) + embed(spec, r, b))).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("local term validation", "[operators]") {
  LatticeSpec spec(1, 2, 2);
  CHECK_THROWS_AS(LocalTerm(spec, Region(spec, {0}), CMat(2.0 * pauli_z()), "too big"),
                  std::invalid_argument);
  CMat nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK_THROWS_AS(LocalTerm(spec, Region(spec, {0}), nh, "not hermitian"), std::invalid_argument);
  CHECK_NOTHROW(LocalTerm(spec, Region(spec, {0}), pauli_z(), "z"));
}

TEST_CASE("transverse field spectrum for two spins", "[operators]") {
  LatticeSpec spec(1, 2, 2);
  auto h = build_family("transverse_field", {{"b", 1.0}}, spec);
  auto eigs = sorted_eigs(h.dense());
  REQUIRE(eigs.size() == 4);
  CHECK(eigs[0] == Approx(-2.0));
  CHECK(eigs[1] == Approx(0.0).margin(1e-12));
  CHECK(eigs[2] == Approx(0.0).margin(1e-12));
  CHECK(eigs[3] == Approx(2.0));
}

TEST_CASE("classical Ising spectrum against configuration enumeration", "[operators][oracle]") {
  LatticeSpec spec(1, 3, 2);
  const double J = 1.0, h = 0.5;
  auto ham = build_family("classical_ising_field", {{"J", J}, {"h", h}}, spec);
  CHECK(ham.rescale_factor() == Approx(1.0));
  // diagonal in the z basis
  CMat dense = ham.dense();
  CMat off = dense;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-15);

  std::vector<double> expect;
  for (int cfg = 0; cfg < 8; ++cfg) {
    // bit b of cfg = spin at site b (most significant digit first), s = +1 for 0
    auto spin = [&](int site) { return (cfg >> (2 - site)) & 1 ? -1.0 : 1.0; };
    expect.push_back(-J * (spin(0) * spin(1) + spin(1) * spin(2)) - h * (spin(0) + spin(1) + spin(2)));
  }
  std::sort(expect.begin(), expect.end());
  auto eigs = sorted_eigs(dense);
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(eigs[i] == Approx(expect[i]).margin(1e-12));
}

TEST_CASE("tfim two-site spectrum against dense oracle", "[operators][oracle]") {
  LatticeSpec spec(1, 2, 2);
  auto ham = build_family("tfim", {{"J", 1.0}, {"h", 1.0}}, spec);
  // independent construction by explicit Kronecker products
  CMat oracle = -kron(pauli_z(), pauli_z()) - kron(pauli_x(), CMat(CMat::Identity(2, 2))) -
                kron(CMat(CMat::Identity(2, 2)), pauli_x());
  auto a = sorted_eigs(ham.dense() * ham.rescale_factor());
  auto b = sorted_eigs(oracle);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == Approx(b[i]).margin(1e-12));
}

TEST_CASE("families keep every term bounded by one", "[operators][property]") {
  LatticeSpec spec(1, 4, 2);
  for (const char* name : {"transverse_field", "classical_ising_field", "tfim", "xx_chain", "heisenberg"}) {
    auto ham = build_family(name, {{"J", 3.0}, {"h", 2.0}, {"b", 4.0}}, spec);
    CHECK(ham.rescale_factor() >= 1.0);
    for (const auto& t : ham.terms()) CHECK(operator_norm_hermitian(t.matrix) <= 1.0 + 1e-10);
    // the rescale factor restores the physical couplings
    CHECK(ham.locality() == 1);
  }
  CHECK_THROWS_AS(build_family("bogus", {}, spec), std::invalid_argument);
}

TEST_CASE("hamiltonian k-locality validation", "[operators]") {
  LatticeSpec spec(1, 5, 2);
  std::vector<LocalTerm> far;
  far.emplace_back(spec, Region(spec, {0, 4}), CMat(kron(pauli_z(), pauli_z()) / 1.0), "far");
  CHECK_THROWS_AS(LocalHamiltonian(spec, far, 1), std::invalid_argument);
  CHECK_NOTHROW(LocalHamiltonian(spec, far, 2));  // anchor at site 2 reaches both ends
}

TEST_CASE("identity channel is a no-op", "[operators]") {
  LatticeSpec spec(1, 2, 2);
  Rng rng(9);
  DensityOperator rho(spec, rng.density_matrix(4));
  auto ch = make_channel("identity", {}, spec, Region(spec, {0}));
  CHECK((apply_channel(ch, rho).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fully depolarizing channel mixes the site and leaves the rest", "[operators]") {
  LatticeSpec spec(1, 2, 2);
  Rng rng(10);
  DensityOperator rho(spec, rng.density_matrix(4));
  auto ch = make_channel("depolarizing", {{"p", 1.0}}, spec, Region(spec, {1}));
  DensityOperator out = apply_channel(ch, rho);
  CHECK((partial_trace(out, Region(spec, {1})) - CMat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((partial_trace(out, Region(spec, {0})) - partial_trace(rho, Region(spec, {0}))).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("amplitude damping matches the direct Kraus-sum oracle", "[operators][oracle]") {
  LatticeSpec spec(1, 2, 2);
  const double gamma = 0.3;
  // 2-qubit thermal-like state
  Rng rng(12);
  DensityOperator rho(spec, rng.density_matrix(4));
  auto ch = make_channel("amplitude_damping", {{"gamma", gamma}}, spec, Region(spec, {0}));
  DensityOperator out = apply_channel(ch, rho);

  CMat k0 = CMat::Zero(2, 2), k1 = CMat::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  const CMat K0 = kron(k0, CMat(CMat::Identity(2, 2))), K1 = kron(k1, CMat(CMat::Identity(2, 2)));
  const CMat oracle = K0 * rho.matrix() * K0.adjoint() + K1 * rho.matrix() * K1.adjoint();
  CHECK((out.matrix() - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("channel library is trace preserving and linear", "[operators][property]") {
  LatticeSpec spec(1, 2, 2);
  Rng rng(13);
  const Region site(spec, {0});
  for (const char* name : {"identity", "depolarizing", "amplitude_damping", "unitary_kick", "measure_forget"}) {
    auto ch = make_channel(name, {{"p", 0.5}, {"gamma", 0.4}, {"axis", 0.0}}, spec, site);
    DensityOperator a(spec, rng.density_matrix(4)), b(spec, rng.density_matrix(4));
    auto oa = apply_channel(ch, a), ob = apply_channel(ch, b);
    CHECK(oa.matrix().trace().real() == Approx(1.0).margin(1e-10));
    // linearity on the convex combination
    DensityOperator mix(spec, CMat(0.3 * a.matrix() + 0.7 * b.matrix()));
    auto om = apply_channel(ch, mix);
    CHECK((om.matrix() - (0.3 * oa.matrix() + 0.7 * ob.matrix())).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(make_channel("bogus", {}, spec, site), std::invalid_argument);
}

TEST_CASE("incomplete Kraus sets are rejected", "[operators]") {
  LatticeSpec spec(1, 1, 2);
  std::vector<CMat> bad{0.5 * CMat::Identity(2, 2)};
  CHECK_THROWS_AS(QuantumChannel(spec, Region(spec, {0}), bad), std::invalid_argument);
}

TEST_CASE("coarse expectation gap: equal states", "[operators]") {
  LatticeSpec spec(1, 2, 2);
  Rng rng(14);
  DensityOperator rho(spec, rng.density_matrix(4));
  auto m = magnetization_per_site(spec);
  auto g = coarse_expectation_gap(m, rho, rho);
  CHECK(g.gap == Approx(0.0).margin(1e-12));
  CHECK(g.bound == Approx(0.0).margin(1e-12));
}

TEST_CASE("coarse expectation gap: all-up against maximally mixed", "[operators]") {
  const int n = 3;
  LatticeSpec spec(1, n, 2);
  CVec up = CVec::Zero(8);
  up(0) = 1.0;
  DensityOperator rho = DensityOperator::pure(spec, up);
  DensityOperator tau(spec, CMat(CMat::Identity(8, 8) / 8.0));
  auto g = coarse_expectation_gap(magnetization_per_site(spec), rho, tau);
  // gap 1; each site contributes trace-norm distance 1 (twice the 1/2-convention distance 1/2)
  CHECK(g.gap == Approx(1.0).margin(1e-10));
  CHECK(g.bound == Approx(1.0).margin(1e-10));
}

TEST_CASE("coarse-graining inequality on random pairs", "[operators][property]") {
  LatticeSpec spec(1, 2, 2);
  Rng rng(15);
  auto m = magnetization_per_site(spec);
  for (int trial = 0; trial < 100; ++trial) {
    DensityOperator rho(spec, rng.density_matrix(4)), tau(spec, rng.density_matrix(4));
    auto g = coarse_expectation_gap(m, rho, tau);  // throws on violation
    CHECK(g.gap <= g.bound + 1e-9);
  }
}

TEST_CASE("overlapping coarse blocks are rejected", "[operators]") {
  LatticeSpec spec(1, 2, 2);
  std::vector<std::pair<Region, CMat>> blocks;
  blocks.emplace_back(Region(spec, {0}), pauli_z());
  blocks.emplace_back(Region(spec, {0, 1}), CMat(kron(pauli_z(), pauli_z())));
  CHECK_THROWS_AS(CoarseObservable(spec, blocks, 1.0), std::invalid_argument);
}
