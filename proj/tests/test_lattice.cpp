#include <catch2/catch_amalgamated.hpp>

#include <eqlat/lattice.hpp>
#include <eqlat/rng.hpp>

using namespace eqlat;

TEST_CASE("lattice basics", "[lattice]") {
  LatticeSpec chain(1, 8, 2);
  CHECK(chain.num_sites() == 8);
  CHECK(chain.hilbert_dim() == 256);

  LatticeSpec square(2, 4, 2);
  CHECK(square.num_sites() == 16);
  CHECK(square.coords(0) == std::vector<int>{0, 0});
  CHECK(square.coords(7) == std::vector<int>{1, 3});
  CHECK(square.site_at({1, 3}) == 7);

  CHECK_THROWS_AS(LatticeSpec(1, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(LatticeSpec(1, 4, 1), std::invalid_argument);
  // 31 qubits exceed the basis-index guard
  CHECK_THROWS_AS(LatticeSpec(1, 31, 2), std::invalid_argument);
  CHECK_NOTHROW(LatticeSpec(1, 30, 2));
}

TEST_CASE("region distance", "[lattice]") {
  LatticeSpec chain(1, 8, 2);
  CHECK(region_distance(chain, Region(chain, {0}), Region(chain, {0})) == 0);
  CHECK(region_distance(chain, Region(chain, {0}), Region(chain, {5})) == 5);

  LatticeSpec square(2, 4, 2, Metric::manhattan);
  // sites (0,0) and (2,3): |2-0| + |3-0| = 5
  CHECK(region_distance(square, Region(square, {square.site_at({0, 0})}),
                        Region(square, {square.site_at({2, 3})})) == 5);
  LatticeSpec cheb(2, 4, 2, Metric::chebyshev);
  CHECK(region_distance(cheb, Region(cheb, {cheb.site_at({0, 0})}),
                        Region(cheb, {cheb.site_at({2, 3})})) == 3);

  CHECK_THROWS_AS(region_distance(chain, Region(), Region(chain, {1})), std::invalid_argument);
}

TEST_CASE("periodic image distance", "[lattice]") {
  LatticeSpec ring(1, 8, 2, Metric::manhattan, true);
  CHECK(ring.distance(0, 7) == 1);
  CHECK(ring.distance(0, 4) == 4);
}

TEST_CASE("cubic subsystems", "[lattice]") {
  LatticeSpec chain(1, 8, 2);
  auto singles = cubic_subsystems(chain, 1);
  REQUIRE(singles.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(singles[std::size_t(i)].sites() == std::vector<int>{i});

  auto windows = cubic_subsystems(chain, 3);
  REQUIRE(windows.size() == 6);
  CHECK(windows.front().sites() == std::vector<int>{0, 1, 2});
  CHECK(windows.back().sites() == std::vector<int>{5, 6, 7});

  LatticeSpec square(2, 4, 2);
  CHECK(cubic_subsystems(square, 2).size() == 9);

  CHECK_THROWS_AS(cubic_subsystems(chain, 9), std::invalid_argument);
}

TEST_CASE("cubic subsystems have l^d sites and chebyshev diameter l-1", "[lattice]") {
  for (int dim = 1; dim <= 2; ++dim) {
    LatticeSpec spec(dim, 4, 2);
    for (int l = 1; l <= 4; ++l) {
      for (const auto& cube : cubic_subsystems(spec, l)) {
        int expected = 1;
        for (int k = 0; k < dim; ++k) expected *= l;
        CHECK(cube.size() == expected);
        CHECK(region_diameter(spec, cube, Metric::chebyshev) == l - 1);
      }
    }
  }
}

TEST_CASE("complement", "[lattice]") {
  LatticeSpec chain(1, 8, 2);
  CHECK(region_complement(chain, Region()).size() == 8);
  CHECK(region_complement(chain, region_complement(chain, Region())).empty());
  CHECK(region_complement(chain, Region(chain, {2, 3})).sites() ==
        std::vector<int>{0, 1, 4, 5, 6, 7});
}

TEST_CASE("complement is an involution and distance is symmetric", "[lattice][property]") {
  LatticeSpec spec(2, 3, 2);
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> xs, ys;
    for (int s = 0; s < spec.num_sites(); ++s) {
      if (rng.uniform01() < 0.3) xs.push_back(s);
      if (rng.uniform01() < 0.3) ys.push_back(s);
    }
    Region x(spec, xs), y(spec, ys);
    CHECK(region_complement(spec, region_complement(spec, x)) == x);
    if (!x.empty() && !y.empty())
      CHECK(region_distance(spec, x, y) == region_distance(spec, y, x));
    if (!x.empty()) CHECK(region_distance(spec, x, x) == 0);
  }
}

TEST_CASE("region validation", "[lattice]") {
  LatticeSpec chain(1, 4, 2);
  CHECK_THROWS_AS(Region(chain, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Region(chain, {4}), std::invalid_argument);
  CHECK(Region(chain, {3, 1}).sites() == std::vector<int>{1, 3});
  CHECK(Region(chain, {1, 3}).local_dim(chain) == 4);
}
