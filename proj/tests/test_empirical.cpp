#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cartanlab/empirical.hpp"
#include "helpers.hpp"

using namespace cartanlab;

TEST_CASE("orbit generators are genuine orbits") {
  const OrbitSample d = digit_orbit(2, 5000, 1);
  CHECK(d.size() == 5000);
  CHECK(orbit_defect(d) < 1e-12);
  const OrbitSample s = surd_orbit(3, 2, 2000);
  CHECK(s.point(0)[0] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
  CHECK(orbit_defect(s) < 1e-12);
  const OrbitSample l = lattice_orbit(int_matrix({{2, 1}, {1, 1}}), 3000, 4);
  CHECK(l.dim == 2);
  CHECK(orbit_defect(l) < 1e-9);
  const OrbitSample p = periodic_orbit(int_matrix({{2, 1}, {1, 1}}), {mpq_class(1, 7), mpq_class(2, 7)}, 100);
  CHECK(p.size() == 100);
  CHECK(orbit_defect(p) < 1e-12);
  // same seed, same orbit
  CHECK(digit_orbit(2, 100, 9).data == digit_orbit(2, 100, 9).data);
  CHECK(digit_orbit(2, 100, 9).data != digit_orbit(2, 100, 10).data);
}

TEST_CASE("Birkhoff averages") {
  const OrbitSample s = surd_orbit(2, 2, 100000);
  const double mean = birkhoff_average(s, [](const double* x) { return x[0]; });
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  const OrbitSample p = periodic_orbit(int_matrix({{2, 1}, {1, 1}}), {mpq_class(0), mpq_class(0)}, 10);
  CHECK(birkhoff_average(p, [](const double* x) { return std::cos(2 * std::numbers::pi * x[0]); }) == doctest::Approx(1.0));
}

TEST_CASE("cocycle exponents") {
  const Eigen::MatrixXd a = to_eigen(testing::example_a());
  const CocycleSample c = constant_cocycle(a, 10000);
  const std::vector<double> ex = qr_oseledec(c);
  REQUIRE(ex.size() == 3);
  CHECK(ex[0] == doctest::Approx(1.61917383).epsilon(1e-3));
  CHECK(ex[1] == doctest::Approx(-0.44144862).epsilon(1e-3));
  CHECK(ex[2] == doctest::Approx(-1.17772521).epsilon(1e-3));
  CHECK(std::abs(ex[0] + ex[1] + ex[2]) < 1e-6);
  CHECK(std::abs(average_log_det(c)) < 1e-9);
  const TopLyapunov top = top_lyapunov_estimate(c);
  CHECK(top.estimate == doctest::Approx(ex[0]).epsilon(1e-3));
  CHECK(top.sequence.front().first == 1);

  const CocycleSample rot = random_rotation_cocycle(3, 2000, 5);
  for (double e : qr_oseledec(rot)) CHECK(std::abs(e) < 1e-9);
}

TEST_CASE("Brin-Katok entropy of the doubling map") {
  const EntropyReport r = brin_katok_entropy(digit_orbit(2, 50000, 3));
  CHECK(r.estimate == doctest::Approx(std::log(2.0)).epsilon(0.1));
  CHECK(r.method == "brin-katok");
  CHECK_FALSE(r.radii.empty());
}

TEST_CASE("partition entropy rates") {
  PartitionOptions o;
  o.samples = 1 << 18;
  const PartitionEntropy two = partition_entropy_rate(CircleMultiplier{2}, {2}, 12, o);
  CHECK(two.estimate == doctest::Approx(std::log(2.0)).epsilon(0.02));
  const PartitionEntropy id = partition_entropy_rate(IdentityMap{1}, {4}, 8, o);
  CHECK(std::abs(id.estimate) < 1e-9);
  // Bernoulli(0.9, 0.1) digits: H = -0.9 ln 0.9 - 0.1 ln 0.1
  PartitionOptions b = o;
  b.sampler = Sampler::Digits;
  b.digit_weights = {0.9, 0.1};
  const double h = -0.9 * std::log(0.9) - 0.1 * std::log(0.1);
  CHECK(partition_entropy_rate(CircleMultiplier{2}, {2}, 10, b).estimate == doctest::Approx(h).epsilon(0.02));
  // reliability cap: with few samples the returned depth is limited
  PartitionOptions few = o;
  few.samples = 4096;
  const PartitionEntropy capped = partition_entropy_rate(CircleMultiplier{2}, {2}, 20, few);
  CHECK(capped.reliable_depth < 20);
  CHECK((std::size_t{1} << capped.reliable_depth) <= 4096 / 16);
}

TEST_CASE("entropy inequality verdicts") {
  const FunctionalFamily cat = make_cartan_spec({int_matrix({{2, 1}, {1, 1}})}).family;
  const double h = 2 * std::log((1 + std::sqrt(5.0)) / 2);
  const EntropyReport eq = entropy_inequality_report(h * 1.01, cat, {1});
  CHECK(eq.sum_positive_exponents == doctest::Approx(h));
  CHECK(eq.margulis_ruelle_ok);
  CHECK(eq.pesin_equality);
  CHECK_FALSE(eq.strict_inequality);
  const EntropyReport zero = entropy_inequality_report(0.0, cat, {1});
  CHECK(zero.margulis_ruelle_ok);
  CHECK(zero.strict_inequality);
  CHECK_FALSE(zero.pesin_equality);
  const EntropyReport over = entropy_inequality_report(2 * h, cat, {1});
  CHECK_FALSE(over.margulis_ruelle_ok);
  CHECK(eq.slack == doctest::Approx(std::max(0.05 * h, 0.02)));
}

TEST_CASE("shear probe") {
  const ShearMeasureSpec atoms = exponential_atoms(-40, 40);
  const ShearResult i = shear_probe(atoms, 1.0, 10.0);
  CHECK(i.proportional);
  REQUIRE(i.constant.has_value());
  CHECK(*i.constant == doctest::Approx(std::exp(-1.0)));
  CHECK_FALSE(shear_probe(atoms, 0.5, 10.0).proportional);
  CHECK(shear_probe(atoms, -3.0, 10.0).constant.value() == doctest::Approx(std::exp(3.0)));
  CHECK_THROWS_AS(shear_probe(exponential_atoms(-5, 5), 1.0, 10.0), Error);

  ShearMeasureSpec dens;
  dens.kind = ShearMeasureSpec::Kind::ExpDensity;
  dens.rate = 0.7;
  CHECK(shear_probe(dens, 2.0, 5.0).constant.value() == doctest::Approx(std::exp(-1.4)));
  ShearMeasureSpec leb;
  CHECK(shear_probe(leb, 0.3, 1.0).constant.value() == doctest::Approx(1.0));

  // perturbing one weight breaks proportionality
  ShearMeasureSpec bad = atoms;
  bad.atoms[40].second *= 1.5;
  CHECK_FALSE(shear_probe(bad, 1.0, 10.0).proportional);
}

TEST_CASE("growth probe") {
  std::vector<double> poly, geo;
  for (int n = 1; n <= 200; ++n) {
    poly.push_back(std::pow(n, 3.0));
    geo.push_back(std::pow(1.1, n));
  }
  CHECK(subexp_growth_probe(poly, 0.05).subexponential);
  const GrowthResult g = subexp_growth_probe(geo, 0.05);
  CHECK_FALSE(g.subexponential);
  CHECK(g.rate == doctest::Approx(std::log(1.1)));
  CHECK_THROWS_AS(subexp_growth_probe({1, 2, 3}, 0.1), Error);
  const auto norms = power_norms(to_eigen(int_matrix({{1, 1}, {0, 1}})), 50);
  CHECK(subexp_growth_probe(norms, 0.05).subexponential);
}
