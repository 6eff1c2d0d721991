#pragma once

#include <map>
#include <optional>
#include <utility>

#include "lattice.hpp"
#include "linalg.hpp"
#include "states.hpp"

namespace eqlat {

inline CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMat pauli_y() {
  CMat m(2, 2);
  m << 0, cx(0, -1), cx(0, 1), 0;
  return m;
}
inline CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// One bounded Hamiltonian term. Stored terms obey the unit-norm convention
// ||h|| <= 1; build_family rescales whole families to meet it and records the
// factor.
struct LocalTerm {
  Region support;
  CMat matrix;
  std::string label;

  LocalTerm(const LatticeSpec& spec, Region support_, CMat matrix_, std::string label_ = {})
      : support(std::move(support_)), matrix(std::move(matrix_)), label(std::move(label_)) {
    if (support.empty()) throw std::invalid_argument("local term: empty support");
    if (matrix.rows() != matrix.cols() || matrix.rows() != support.local_dim(spec))
      throw std::invalid_argument("local term: matrix dimension does not match support");
    if (!(hermiticity_error(matrix) <= 1e-12))
      throw std::invalid_argument("local term '" + label + "': matrix is not Hermitian");
    if (!(operator_norm_hermitian(matrix) <= 1.0 + 1e-10))
      throw std::invalid_argument("local term '" + label + "': operator norm exceeds 1");
  }
};

// Identity everywhere on `where` outside `support`; `support` must be a
// subset of `where`. Placement follows the row-major digit encoding.
inline CMat embed_in_region(const LatticeSpec& spec, const Region& where, const Region& support,
                            const CMat& m) {
  std::vector<int> sup_pos, rest_pos;
  for (int p = 0; p < where.size(); ++p) {
    if (support.contains(where.sites()[std::size_t(p)]))
      sup_pos.push_back(p);
    else
      rest_pos.push_back(p);
  }
  if (int(sup_pos.size()) != support.size())
    throw std::invalid_argument("embed_in_region: support is not contained in the target region");
  if (m.rows() != m.cols() || m.rows() != support.local_dim(spec))
    throw std::invalid_argument("embed_in_region: matrix dimension does not match support");
  const auto off_s = slot_offsets(spec.local_dim, where.size(), sup_pos);
  const auto off_b = slot_offsets(spec.local_dim, where.size(), rest_pos);
  const std::int64_t ds = std::int64_t(off_s.size()), db = std::int64_t(off_b.size());
  CMat out = CMat::Zero(where.local_dim(spec), where.local_dim(spec));
  for (std::int64_t a = 0; a < ds; ++a)
    for (std::int64_t b = 0; b < ds; ++b) {
      const cx v = m(a, b);
      if (v == cx(0.0)) continue;
      for (std::int64_t c = 0; c < db; ++c)
        out(off_s[std::size_t(a)] + off_b[std::size_t(c)], off_s[std::size_t(b)] + off_b[std::size_t(c)]) = v;
    }
  return out;
}

inline Region full_region(const LatticeSpec& spec) {
  std::vector<int> all(static_cast<std::size_t>(spec.num_sites()));
  for (int i = 0; i < spec.num_sites(); ++i) all[std::size_t(i)] = i;
  return Region(spec, std::move(all));
}

inline CMat embed(const LatticeSpec& spec, const Region& support, const CMat& m) {
  return embed_in_region(spec, full_region(spec), support, m);
}

inline CMat embed(const LatticeSpec& spec, const LocalTerm& t) {
  return embed(spec, t.support, t.matrix);
}

// k-local Hamiltonian as a term list plus a lazily assembled dense matrix.
class LocalHamiltonian {
 public:
  LocalHamiltonian(LatticeSpec spec, std::vector<LocalTerm> terms, int k,
                   bool translation_invariant = false, double rescale_factor = 1.0)
      : spec_(spec),
        terms_(std::move(terms)),
        k_(k),
        translation_invariant_(translation_invariant),
        rescale_factor_(rescale_factor) {
    if (k_ < 0) throw std::invalid_argument("hamiltonian: locality radius must be nonnegative");
    for (const auto& t : terms_) {
      // k-locality: some anchor site has the whole support within distance k
      bool anchored = false;
      for (int a = 0; a < spec_.num_sites() && !anchored; ++a) {
        int worst = 0;
        for (int j : t.support.sites()) worst = std::max(worst, spec_.distance(a, j));
        anchored = worst <= k_;
      }
      if (!anchored)
        throw std::invalid_argument("hamiltonian: term '" + t.label + "' is not " + std::to_string(k_) + "-local");
    }
  }

  const LatticeSpec& spec() const { return spec_; }
  const std::vector<LocalTerm>& terms() const { return terms_; }
  int locality() const { return k_; }
  bool translation_invariant() const { return translation_invariant_; }
  // physical H = rescale_factor * stored H; beta and time convert accordingly
  double rescale_factor() const { return rescale_factor_; }

  const CMat& dense() const {
    if (!built_) {
      const std::int64_t d = spec_.hilbert_dim();
      dense_ = CMat::Zero(d, d);
      for (const auto& t : terms_) dense_ += embed(spec_, t);
      dense_ = (dense_ + CMat(dense_.adjoint())) / 2.0;
      built_ = true;
    }
    return dense_;
  }

 private:
  LatticeSpec spec_;
  std::vector<LocalTerm> terms_;
  int k_ = 1;
  bool translation_invariant_ = false;
  double rescale_factor_ = 1.0;
  mutable CMat dense_;
  mutable bool built_ = false;
};

using ParamMap = std::map<std::string, double>;

namespace detail {

inline double param_or(const ParamMap& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

// Nearest-neighbour bonds along each axis; wrap bonds only for side > 2 so a
// periodic two-site chain is not doubly coupled.
inline std::vector<std::pair<int, int>> nn_bonds(const LatticeSpec& spec) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i < spec.num_sites(); ++i) {
    auto c = spec.coords(i);
    for (int k = 0; k < spec.dim; ++k) {
      if (c[std::size_t(k)] + 1 < spec.side) {
        auto cj = c;
        ++cj[std::size_t(k)];
        bonds.emplace_back(i, spec.site_at(cj));
      } else if (spec.periodic && spec.side > 2) {
        auto cj = c;
        cj[std::size_t(k)] = 0;
        bonds.emplace_back(i, spec.site_at(cj));
      }
    }
  }
  return bonds;
}

}  // namespace detail

// Built-in spin-1/2 families (couplings are physical; the whole term list is
// divided by the largest term norm when that exceeds 1):
//   transverse_field      -b sum_i X_i
//   classical_ising_field -J sum_<ij> Z_i Z_j - h sum_i Z_i
//   tfim                  -J sum_<ij> Z_i Z_j - h sum_i X_i
//   xx_chain              -J/2 sum_<ij> (X_i X_j + Y_i Y_j)
//   heisenberg             J/4 sum_<ij> (X_i X_j + Y_i Y_j + Z_i Z_j)
inline LocalHamiltonian build_family(const std::string& name, const ParamMap& params,
                                     const LatticeSpec& spec) {
  if (spec.local_dim != 2)
    throw std::invalid_argument("build_family: built-in families are spin-1/2 (local_dim 2)");
  struct RawTerm {
    std::vector<int> sites;
    CMat m;
    std::string label;
  };
  std::vector<RawTerm> raw;
  const auto bonds = detail::nn_bonds(spec);
  auto site_label = [](const char* op, int i) { return std::string(op) + "(" + std::to_string(i) + ")"; };
  auto bond_label = [](const char* op, std::pair<int, int> b) {
    return std::string(op) + "(" + std::to_string(b.first) + "," + std::to_string(b.second) + ")";
  };

  if (name == "transverse_field") {
    const double b = detail::param_or(params, "b", 1.0);
    for (int i = 0; i < spec.num_sites(); ++i) raw.push_back({{i}, -b * pauli_x(), site_label("x", i)});
  } else if (name == "classical_ising_field") {
    const double j = detail::param_or(params, "J", 1.0);
    const double h = detail::param_or(params, "h", 0.0);
    for (auto b : bonds) raw.push_back({{b.first, b.second}, -j * kron(pauli_z(), pauli_z()), bond_label("zz", b)});
    if (h != 0.0)
      for (int i = 0; i < spec.num_sites(); ++i) raw.push_back({{i}, -h * pauli_z(), site_label("z", i)});
  } else if (name == "tfim") {
    const double j = detail::param_or(params, "J", 1.0);
    const double h = detail::param_or(params, "h", 1.0);
    for (auto b : bonds) raw.push_back({{b.first, b.second}, -j * kron(pauli_z(), pauli_z()), bond_label("zz", b)});
    for (int i = 0; i < spec.num_sites(); ++i) raw.push_back({{i}, -h * pauli_x(), site_label("x", i)});
  } else if (name == "xx_chain") {
    const double j = detail::param_or(params, "J", 1.0);
    const CMat hop = -0.5 * j * (kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()));
    for (auto b : bonds) raw.push_back({{b.first, b.second}, hop, bond_label("xx+yy", b)});
  } else if (name == "heisenberg") {
    const double j = detail::param_or(params, "J", 1.0);
    const CMat ex = 0.25 * j *
                    (kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()) + kron(pauli_z(), pauli_z()));
    for (auto b : bonds) raw.push_back({{b.first, b.second}, ex, bond_label("heis", b)});
  } else {
    throw std::invalid_argument(
        "build_family: unknown family '" + name +
        "' (expected transverse_field, classical_ising_field, tfim, xx_chain or heisenberg)");
  }

  double max_norm = 0.0;
  for (const auto& t : raw) max_norm = std::max(max_norm, operator_norm_hermitian(t.m));
  const double factor = std::max(1.0, max_norm);
  std::vector<LocalTerm> terms;
  terms.reserve(raw.size());
  for (auto& t : raw)
    terms.emplace_back(spec, Region(spec, t.sites), CMat(t.m / factor), std::move(t.label));
  return LocalHamiltonian(spec, std::move(terms), /*k=*/1, /*translation_invariant=*/true, factor);
}

// Completely positive trace-preserving map given by Kraus operators on a
// region: rho -> sum_i K_i rho K_i^dag with sum_i K_i^dag K_i = 1.
struct QuantumChannel {
  Region support;
  std::vector<CMat> kraus;

  QuantumChannel(const LatticeSpec& spec, Region support_, std::vector<CMat> kraus_)
      : support(std::move(support_)), kraus(std::move(kraus_)) {
    const std::int64_t d = support.local_dim(spec);
    if (kraus.empty()) throw std::invalid_argument("channel: no Kraus operators");
    for (const auto& k : kraus)
      if (k.rows() != d || k.cols() != d)
        throw std::invalid_argument("channel: Kraus dimension does not match support");
    CMat acc = CMat::Zero(d, d);
    for (const auto& k : kraus) acc += k.adjoint() * k;
    if (!((acc - CMat::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10))
      throw std::invalid_argument("channel: Kraus operators are not complete (sum K^dag K != 1)");
  }
};

// identity | depolarizing(p) | amplitude_damping(gamma) | unitary_kick(axis,
// angle) | measure_forget. depolarizing, unitary_kick and measure_forget work
// for any support; amplitude damping is single-qubit.
inline QuantumChannel make_channel(const std::string& name, const ParamMap& params,
                                   const LatticeSpec& spec, const Region& support) {
  const std::int64_t d = support.local_dim(spec);
  std::vector<CMat> ks;
  if (name == "identity") {
    ks.push_back(CMat::Identity(d, d));
  } else if (name == "depolarizing") {
    const double p = detail::param_or(params, "p", 1.0);
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing: p must lie in [0,1]");
    // (1-p) rho + p tr[rho] 1/d
    ks.push_back(std::sqrt(1.0 - p) * CMat::Identity(d, d));
    for (std::int64_t i = 0; i < d; ++i)
      for (std::int64_t j = 0; j < d; ++j) {
        CMat k = CMat::Zero(d, d);
        k(i, j) = std::sqrt(p / double(d));
        ks.push_back(std::move(k));
      }
  } else if (name == "amplitude_damping") {
    if (d != 2) throw std::invalid_argument("amplitude_damping: single-qubit support required");
    const double g = detail::param_or(params, "gamma", 0.5);
    if (g < 0.0 || g > 1.0) throw std::invalid_argument("amplitude_damping: gamma must lie in [0,1]");
    CMat k0 = CMat::Zero(2, 2), k1 = CMat::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g);
    k1(0, 1) = std::sqrt(g);
    ks.push_back(std::move(k0));
    ks.push_back(std::move(k1));
  } else if (name == "unitary_kick") {
    if (spec.local_dim != 2) throw std::invalid_argument("unitary_kick: spin-1/2 support required");
    const int axis = int(detail::param_or(params, "axis", 0.0));
    const double angle = detail::param_or(params, "angle", kPi);
    CMat sigma = axis == 0 ? pauli_x() : axis == 1 ? pauli_y() : pauli_z();
    CMat u1 = std::cos(angle / 2.0) * CMat::Identity(2, 2) - cx(0, 1) * std::sin(angle / 2.0) * sigma;
    CMat u = CMat::Identity(1, 1);
    for (int i = 0; i < support.size(); ++i) u = kron(u, u1);
    ks.push_back(std::move(u));
  } else if (name == "measure_forget") {
    // projective measurement in the computational basis, outcome discarded
    for (std::int64_t i = 0; i < d; ++i) {
      CMat k = CMat::Zero(d, d);
      k(i, i) = 1.0;
      ks.push_back(std::move(k));
    }
  } else {
    throw std::invalid_argument("make_channel: unknown channel '" + name + "'");
  }
  return QuantumChannel(spec, support, std::move(ks));
}

// Applies the channel and verifies the CPTP postconditions: trace preserved
// to 1e-10 (via the DensityOperator constructor) and spectrum nonnegative to
// -1e-10.
inline DensityOperator apply_channel(const QuantumChannel& ch, const DensityOperator& rho) {
  const LatticeSpec& spec = rho.spec();
  const std::int64_t d = ch.support.local_dim(spec);
  CMat acc = CMat::Zero(d, d);
  for (const auto& k : ch.kraus) acc += k.adjoint() * k;
  if (!((acc - CMat::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10))
    throw std::invalid_argument("apply_channel: Kraus completeness violated");
  CMat out = CMat::Zero(rho.dim(), rho.dim());
  for (const auto& k : ch.kraus) {
    CMat kf = embed(spec, ch.support, k);
    out += kf * rho.matrix() * kf.adjoint();
  }
  out = (out + CMat(out.adjoint())) / 2.0;
  DensityOperator result(spec, std::move(out));
  result.check_positive(1e-10);
  return result;
}

// Average of block observables on pairwise disjoint regions, each block
// bounded in norm by norm_cap.
struct CoarseObservable {
  std::vector<std::pair<Region, CMat>> blocks;
  double norm_cap = 1.0;

  CoarseObservable(const LatticeSpec& spec, std::vector<std::pair<Region, CMat>> blocks_, double cap)
      : blocks(std::move(blocks_)), norm_cap(cap) {
    if (blocks.empty()) throw std::invalid_argument("coarse observable: no blocks");
    if (!(norm_cap > 0.0)) throw std::invalid_argument("coarse observable: norm cap must be positive");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& [r, m] = blocks[i];
      if (m.rows() != m.cols() || m.rows() != r.local_dim(spec))
        throw std::invalid_argument("coarse observable: block dimension mismatch");
      if (!(hermiticity_error(m) <= 1e-12))
        throw std::invalid_argument("coarse observable: block is not Hermitian");
      if (!(operator_norm_hermitian(m) <= norm_cap + 1e-10))
        throw std::invalid_argument("coarse observable: block norm exceeds the cap");
      for (std::size_t j = 0; j < i; ++j)
        if (regions_overlap(r, blocks[j].first))
          throw std::invalid_argument("coarse observable: blocks overlap");
    }
  }
};

// Magnetization per site, (1/N) sum_i Z_i.
inline CoarseObservable magnetization_per_site(const LatticeSpec& spec) {
  std::vector<std::pair<Region, CMat>> blocks;
  for (int i = 0; i < spec.num_sites(); ++i)
    blocks.emplace_back(Region(spec, {i}), pauli_z());
  return CoarseObservable(spec, std::move(blocks), 1.0);
}

struct CoarseGap {
  double gap = 0.0;    // |tr[rho M] - tr[tau M]|
  double bound = 0.0;  // norm_cap * average over blocks of tr-norm distance
};

// The gap is bounded by cap times the block-averaged trace-norm distance
// (twice the 1/2-convention distance). That inequality is exact, so any
// violation beyond round-off is an implementation bug and throws.
inline CoarseGap coarse_expectation_gap(const CoarseObservable& m, const DensityOperator& rho,
                                        const DensityOperator& tau) {
  const LatticeSpec& spec = rho.spec();
  const std::size_t nb = m.blocks.size();
  double expect_rho = 0.0, expect_tau = 0.0, avg = 0.0;
  for (const auto& [r, block] : m.blocks) {
    const CMat rs = partial_trace(rho, r), ts = partial_trace(tau, r);
    expect_rho += (rs * block).trace().real();
    expect_tau += (ts * block).trace().real();
    avg += 2.0 * trace_distance(rs, ts);
  }
  CoarseGap out;
  out.gap = std::abs(expect_rho - expect_tau) / double(nb);
  out.bound = m.norm_cap * avg / double(nb);
  if (!(out.gap <= out.bound + 1e-9))
    throw std::logic_error("coarse_expectation_gap: coarse-graining inequality violated (bug)");
  return out;
}

}  // namespace eqlat
