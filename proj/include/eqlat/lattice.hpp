#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqlat {

enum class Metric { manhattan, chebyshev };

inline const char* to_string(Metric m) {
  return m == Metric::manhattan ? "manhattan" : "chebyshev";
}

inline Metric metric_from_string(const std::string& s) {
  if (s == "manhattan") return Metric::manhattan;
  if (s == "chebyshev") return Metric::chebyshev;
  throw std::invalid_argument("unknown metric '" + s + "' (expected manhattan or chebyshev)");
}

// Finite hypercubic lattice with side^dim sites carrying local_dim-level
// systems. Site indices are row-major: coordinate 0 is the slowest axis.
// `periodic` controls both nearest-neighbour couplings in the Hamiltonian
// families and image-minimizing distances; subsystem cubes never wrap.
struct LatticeSpec {
  int dim = 1;
  int side = 1;
  int local_dim = 2;
  Metric metric = Metric::manhattan;
  bool periodic = false;

  LatticeSpec() = default;
  LatticeSpec(int d, int n, int dloc, Metric m = Metric::manhattan, bool wrap = false)
      : dim(d), side(n), local_dim(dloc), metric(m), periodic(wrap) {
    if (dim < 1) throw std::invalid_argument("lattice: dim must be positive");
    if (side < 1) throw std::invalid_argument("lattice: side must be positive");
    if (local_dim < 2) throw std::invalid_argument("lattice: local_dim must be at least 2");
    double bits = double(num_sites()) * std::log2(double(local_dim));
    if (bits > 30.0 + 1e-9)
      throw std::invalid_argument("lattice: Hilbert dimension exceeds the 2^30 basis-index guard");
  }

  int num_sites() const {
    long long n = 1;
    for (int k = 0; k < dim; ++k) {
      n *= side;
      if (n > (1LL << 31)) throw std::invalid_argument("lattice: too many sites");
    }
    return int(n);
  }

  std::int64_t hilbert_dim() const {
    std::int64_t d = 1;
    for (int i = 0, N = num_sites(); i < N; ++i) d *= local_dim;
    return d;
  }

  std::vector<int> coords(int site) const {
    std::vector<int> c(static_cast<std::size_t>(dim));
    for (int k = dim - 1; k >= 0; --k) {
      c[std::size_t(k)] = site % side;
      site /= side;
    }
    return c;
  }

  int site_at(const std::vector<int>& c) const {
    if (int(c.size()) != dim) throw std::invalid_argument("lattice: coordinate rank mismatch");
    int s = 0;
    for (int k = 0; k < dim; ++k) {
      if (c[std::size_t(k)] < 0 || c[std::size_t(k)] >= side)
        throw std::invalid_argument("lattice: coordinate out of range");
      s = s * side + c[std::size_t(k)];
    }
    return s;
  }

  int distance(int i, int j) const { return distance(i, j, metric); }

  int distance(int i, int j, Metric m) const {
    auto ci = coords(i), cj = coords(j);
    int acc = 0;
    for (int k = 0; k < dim; ++k) {
      int d = std::abs(ci[std::size_t(k)] - cj[std::size_t(k)]);
      if (periodic) d = std::min(d, side - d);
      acc = (m == Metric::manhattan) ? acc + d : std::max(acc, d);
    }
    return acc;
  }
};

// Sorted duplicate-free set of site indices.
class Region {
 public:
  Region() = default;
  Region(const LatticeSpec& spec, std::vector<int> sites) : sites_(std::move(sites)) {
    std::sort(sites_.begin(), sites_.end());
    for (std::size_t i = 0; i < sites_.size(); ++i) {
      if (sites_[i] < 0 || sites_[i] >= spec.num_sites())
        throw std::invalid_argument("region: site index out of range");
      if (i > 0 && sites_[i] == sites_[i - 1])
        throw std::invalid_argument("region: duplicate site index");
    }
  }

  const std::vector<int>& sites() const { return sites_; }
  int size() const { return int(sites_.size()); }
  bool empty() const { return sites_.empty(); }
  bool contains(int site) const {
    return std::binary_search(sites_.begin(), sites_.end(), site);
  }
  std::int64_t local_dim(const LatticeSpec& spec) const {
    std::int64_t d = 1;
    for (int i = 0; i < size(); ++i) d *= spec.local_dim;
    return d;
  }
  bool operator==(const Region& other) const { return sites_ == other.sites_; }

 private:
  std::vector<int> sites_;
};

inline int region_distance(const LatticeSpec& spec, const Region& x, const Region& y) {
  if (x.empty() || y.empty())
    throw std::invalid_argument("region_distance: regions must be nonempty");
  int best = std::numeric_limits<int>::max();
  for (int i : x.sites())
    for (int j : y.sites()) best = std::min(best, spec.distance(i, j));
  return best;
}

inline bool regions_overlap(const Region& a, const Region& b) {
  for (int s : a.sites())
    if (b.contains(s)) return true;
  return false;
}

// All axis-aligned hypercubes of side l. Cubes never wrap around the
// boundary, so there are (side-l+1)^dim of them.
inline std::vector<Region> cubic_subsystems(const LatticeSpec& spec, int l) {
  if (l < 1) throw std::invalid_argument("cubic_subsystems: side must be positive");
  if (l > spec.side) throw std::invalid_argument("cubic_subsystems: cube side exceeds lattice side");
  const int anchors_per_axis = spec.side - l + 1;
  std::vector<Region> cubes;
  std::vector<int> anchor(std::size_t(spec.dim), 0);
  while (true) {
    std::vector<int> sites;
    std::vector<int> off(std::size_t(spec.dim), 0);
    while (true) {
      std::vector<int> c(static_cast<std::size_t>(spec.dim));
      for (int k = 0; k < spec.dim; ++k) c[std::size_t(k)] = anchor[std::size_t(k)] + off[std::size_t(k)];
      sites.push_back(spec.site_at(c));
      int k = spec.dim - 1;
      while (k >= 0 && ++off[std::size_t(k)] == l) off[std::size_t(k--)] = 0;
      if (k < 0) break;
    }
    cubes.emplace_back(spec, std::move(sites));
    int k = spec.dim - 1;
    while (k >= 0 && ++anchor[std::size_t(k)] == anchors_per_axis) anchor[std::size_t(k--)] = 0;
    if (k < 0) break;
  }
  return cubes;
}

inline Region region_complement(const LatticeSpec& spec, const Region& s) {
  std::vector<int> rest;
  for (int i = 0, N = spec.num_sites(); i < N; ++i)
    if (!s.contains(i)) rest.push_back(i);
  return Region(spec, std::move(rest));
}

inline Region region_union(const LatticeSpec& spec, const Region& a, const Region& b) {
  std::vector<int> sites = a.sites();
  for (int s : b.sites())
    if (!a.contains(s)) sites.push_back(s);
  return Region(spec, std::move(sites));
}

inline int region_diameter(const LatticeSpec& spec, const Region& r, Metric m) {
  int best = 0;
  for (int i : r.sites())
    for (int j : r.sites()) best = std::max(best, spec.distance(i, j, m));
  return best;
}

}  // namespace eqlat
