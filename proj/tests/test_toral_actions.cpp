#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "cartanlab/serialize.hpp"
#include "cartanlab/toral_actions.hpp"
#include "helpers.hpp"

using namespace cartanlab;

TEST_CASE("validation of the example action") {
  const ValidationReport r = validate_cartan({testing::example_a(), testing::example_b()});
  CHECK(r.det_one);
  CHECK(r.commuting);
  CHECK(r.distinct_real_spectra);
  CHECK(r.irreducible_char_polys);
  CHECK(r.genuine);
  CHECK(r.anosov_elements_exist);
  CHECK(r.pass());
  CHECK_FALSE(r.relation.has_value());
}

TEST_CASE("validation failures") {
  const IntMatrix a = testing::example_a();
  SUBCASE("repeated generator is a relation") {
    const ValidationReport r = validate_cartan({a, a});
    CHECK_FALSE(r.genuine);
    REQUIRE(r.relation.has_value());
    const std::vector<long> rel = *r.relation;
    CHECK(element({a, a}, rel) == IntMatrix::identity(3));
    CHECK(rel != std::vector<long>{0, 0});
  }
  SUBCASE("non-commuting") {
    const IntMatrix c = int_matrix({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK_FALSE(validate_cartan({a, c}).commuting);
  }
  SUBCASE("determinant two") {
    const IntMatrix d = int_matrix({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK_FALSE(validate_cartan({d}).det_one);
  }
  SUBCASE("reducible characteristic polynomial") {
    const IntMatrix r3 = direct_sum(int_matrix({{2, 1}, {1, 1}}), int_matrix({{1}}));
    CHECK_FALSE(validate_cartan({r3}).pass());
  }
  SUBCASE("rank-4 torus action from file") {
    const ActionFile f = load_action_file(testing::data_path("cartan_t4.json"));
    CHECK(validate_cartan(f.generators).pass());
  }
}

TEST_CASE("relations in powers of one matrix are found exactly") {
  const IntMatrix a = testing::example_a();
  const IntMatrix a2 = power(a, 2);
  const ValidationReport r = validate_cartan({a, a2});
  REQUIRE(r.relation.has_value());
  CHECK(element({a, a2}, *r.relation) == IntMatrix::identity(3));
}

TEST_CASE("elements and entropy") {
  const CartanActionSpec spec = make_cartan_spec({testing::example_a(), testing::example_b()});
  const IntMatrix ab = element(spec, {1, 1});
  CHECK(ab == testing::example_a() * testing::example_b());
  const IntMatrix inv = element(spec, {-1, 0});
  CHECK(inv * testing::example_a() == IntMatrix::identity(3));
  CHECK(lebesgue_entropy(spec, {1, 0}) == doctest::Approx(std::log(5.04891733952231)).epsilon(1e-12));
  // entropy of n equals entropy of -n for det-one actions
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 20; ++i) {
    const Vec n{u(rng), u(rng)};
    CHECK(lebesgue_entropy(spec, n) == doctest::Approx(lebesgue_entropy(spec, {-n[0], -n[1]})).epsilon(1e-12));
  }
  CHECK_THROWS_AS(make_cartan_spec({testing::example_a()}, {"A", "B"}), Error);
}

TEST_CASE("exact rational orbits agree with integer arithmetic mod q") {
  const IntMatrix cat = int_matrix({{2, 1}, {1, 1}});
  for (long q : {7L, 11L, 20L, 101L}) {
    const TorusPoint x = TorusPoint::rational({mpq_class(1, q), mpq_class(3, q)});
    const OrbitResult r = orbit(cat, x, 1000);
    // oracle: iterate the numerator vector mod q
    std::map<std::pair<long, long>, std::size_t> seen;
    std::pair<long, long> v{1 % q, 3 % q};
    std::size_t i = 0;
    while (!seen.count(v)) {
      seen[v] = i++;
      v = {(2 * v.first + v.second) % q, (v.first + v.second) % q};
    }
    REQUIRE(r.period.has_value());
    CHECK(*r.period == i - seen[v]);
    CHECK(*r.preperiod == seen[v]);
  }
  const TorusPoint half = TorusPoint::rational({mpq_class(3, 2), mpq_class(-1, 4)});
  CHECK(half.exact[0] == mpq_class(1, 2));
  CHECK(half.exact[1] == mpq_class(3, 4));
  CHECK_THROWS_AS(orbit(cat, TorusPoint::rational({mpq_class(1, 10000000), mpq_class(0)}), 10), Error);
}

TEST_CASE("float orbits") {
  const IntMatrix cat = int_matrix({{2, 1}, {1, 1}});
  const OrbitResult r = orbit(cat, TorusPoint::floating({0.1, 0.2}), 6);
  REQUIRE(r.points.size() == 6);
  CHECK(r.points[1].coords[0] == doctest::Approx(0.4));
  CHECK(r.points[1].coords[1] == doctest::Approx(0.3));
  CHECK_FALSE(r.period.has_value());
}

TEST_CASE("multiplicative independence") {
  CHECK(multiplicatively_independent(2, 3));
  CHECK(multiplicatively_independent(6, 10));
  CHECK_FALSE(multiplicatively_independent(4, 8));
  CHECK_FALSE(multiplicatively_independent(12, 144));
  CHECK_THROWS_AS(multiplicatively_independent(1, 5), Error);
}

TEST_CASE("semigroup enumeration") {
  const auto s = semigroup_elements(2, 3, 1000000);
  // oracle: count pairs (m, n) by nested loops
  std::size_t count = 0;
  for (std::uint64_t p = 1; p <= 1000000; p *= 2)
    for (std::uint64_t q = p; q <= 1000000; q *= 3) ++count;
  CHECK(s.size() == count);
  CHECK(s.size() == 142);
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  CHECK(s.front() == 1);
  const auto big = semigroup_elements(2, 3, ~std::uint64_t{0});
  CHECK(big.back() > (std::uint64_t{1} << 62));
}

TEST_CASE("gap ratio profile") {
  const FurstenbergProfile p = gap_ratio_profile(2, 3, 1000000);
  CHECK(p.trend_non_increasing);
  std::map<double, double> maxima;
  for (const auto& w : p.windows) maxima[w.lo] = w.max_ratio;
  CHECK(maxima[10] == doctest::Approx(4.0 / 3.0));
  CHECK(maxima[100] == doctest::Approx(32.0 / 27.0));
  CHECK(maxima[1000] == doctest::Approx(1.125));
  CHECK(maxima[100000] <= 1.1);
  CHECK(maxima[100000] < maxima[10]);
  CHECK(maxima[100000] < maxima[100]);
  // a dependent pair never fills in
  CHECK_THROWS_AS(gap_ratio_profile(2, 4, 1000), Error);
  CHECK_THROWS_AS(gap_ratio_profile(2, 3, 3), Error);
}

TEST_CASE("density of irrational orbits") {
  const double x = std::sqrt(2.0) - 1.0;
  const double g3 = density_profile(2, 3, x, 1000);
  const double g6 = density_profile(2, 3, x, 1000000);
  CHECK(g6 <= 0.1);
  CHECK(g6 < g3);
  // oracle: direct computation of the largest circular gap
  std::vector<double> pts;
  for (std::uint64_t s : semigroup_elements(2, 3, 1000)) pts.push_back(std::fmod(static_cast<double>(s) * x, 1.0));
  std::sort(pts.begin(), pts.end());
  double gap = pts.front() + 1.0 - pts.back();
  for (std::size_t i = 1; i < pts.size(); ++i) gap = std::max(gap, pts[i] - pts[i - 1]);
  CHECK(g3 == doctest::Approx(gap).epsilon(1e-9));
}

TEST_CASE("rational x2 x3 orbits") {
  const auto o7 = furstenberg_rational_orbit(2, 3, 7);
  CHECK(o7 == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6});
  const auto o5 = furstenberg_rational_orbit(4, 9, 5);
  // <4, 9> in (Z/5)^* is {1, 4}
  CHECK(o5 == std::vector<std::uint64_t>{1, 4});
  // oracle: closure by repeated multiplication
  for (std::uint64_t q : {9ULL, 12ULL, 35ULL, 97ULL}) {
    std::set<std::uint64_t> s{1 % q};
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto v : std::vector<std::uint64_t>(s.begin(), s.end()))
        for (std::uint64_t m : {2ULL, 3ULL}) grew |= s.insert(v * m % q).second;
    }
    CHECK(furstenberg_rational_orbit(2, 3, q) == std::vector<std::uint64_t>(s.begin(), s.end()));
  }
}
