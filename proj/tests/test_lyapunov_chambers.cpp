#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cartanlab/lyapunov_chambers.hpp"
#include "cartanlab/serialize.hpp"
#include "cartanlab/toral_actions.hpp"
#include "helpers.hpp"

using namespace cartanlab;

namespace {

FunctionalFamily example_family() { return make_cartan_spec({testing::example_a(), testing::example_b()}).family; }

FunctionalFamily t4_product_family() {
  const FunctionalFamily a = make_cartan_spec({int_matrix({{2, 1}, {1, 1}})}).family;
  const FunctionalFamily b = make_cartan_spec({int_matrix({{2, 3}, {3, 5}})}).family;
  return product_family(a, b);
}

FunctionalFamily sl3_roots_in_plane() {
  // t3 = -t1 - t2; beta^{ij} in coordinates (t1, t2)
  auto f = [](double a, double b, const char* l) { return LinearFunctional{{a, b}, l}; };
  return make_family({f(1, -1, "U12"), f(2, 1, "U13"), f(1, 2, "U23"), f(-1, 1, "U21"), f(-2, -1, "U31"),
                      f(-1, -2, "U32")});
}

int sign(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace

TEST_CASE("functionals of the example action") {
  const FunctionalFamily fam = example_family();
  REQUIRE(fam.size() == 3);
  CHECK(fam.det_one);
  CHECK(fam.functionals[0].coeffs[0] == doctest::Approx(std::log(5.04891733952231)).epsilon(1e-12));
  CHECK(fam.functionals[0].coeffs[1] == doctest::Approx(std::log(3.24697960371747)).epsilon(1e-12));
  for (double s : fam.weighted_sum()) CHECK(std::abs(s) < 1e-10);
}

TEST_CASE("proportionality") {
  CHECK(proportionality({1, 2}, {2, 4}) == Proportionality::Positive);
  CHECK(proportionality({1, 2}, {-3, -6}) == Proportionality::Negative);
  CHECK(proportionality({1, 2}, {2, 1}) == Proportionality::None);
  CHECK(proportionality({0, 0}, {2, 1}) == Proportionality::None);
  const double l = std::log(2.0);
  CHECK(proportionality({l, 3 * l}, {std::log(4.0), std::log(64.0)}) == Proportionality::Positive);
}

TEST_CASE("kernel and separating elements") {
  const Vec s = kernel_element(LinearFunctional{{2, -3}, "l"});
  CHECK(s[0] == doctest::Approx(3 / std::sqrt(13.0)));
  CHECK(s[1] == doctest::Approx(2 / std::sqrt(13.0)));
  const FunctionalFamily fam = example_family();
  for (const auto& f : fam.functionals) {
    const Vec k = kernel_element(f);
    CHECK(std::abs(f(k)) < 1e-12 * f.norm());
  }
  const Vec k1 = kernel_element(fam.functionals[0]);
  CHECK(k1[0] * fam.functionals[0].coeffs[0] + k1[1] * fam.functionals[0].coeffs[1] == doctest::Approx(0.0));
  CHECK(k1[0] < 0);  // proportional to (-log chi_B, log chi_A)
  CHECK_THROWS_AS(kernel_element(LinearFunctional{{0, 0}, "z"}), Error);

  const Vec sep = separating_element(LinearFunctional{{1, 0}, "b"}, LinearFunctional{{1, 1}, "l"});
  CHECK(sep[0] == doctest::Approx(0.0));
  CHECK(sep[1] == doctest::Approx(1.0));
  try {
    separating_element(LinearFunctional{{1, 0}, "b"}, LinearFunctional{{-2, 0}, "l"});
    FAIL("expected NoSeparator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoSeparator);
  }
  // beta^{12} and beta^{23} on the SL(3) Cartan: t1 = t2 and t2 - t3 > 0
  const Vec t = separating_element(LinearFunctional{{1, -1}, "U12"}, LinearFunctional{{1, 2}, "U23"});
  CHECK(std::abs(t[0] - t[1]) < 1e-12);
  CHECK(t[1] - (-t[0] - t[1]) > 0);
}

TEST_CASE("sign perturbation on the example family") {
  const FunctionalFamily fam = example_family();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const PerturbationCertificate c = pipart_perturbation(fam, i);
    CHECK(fam.functionals[i](c.s1) < 0);
    CHECK(std::abs(fam.functionals[i](c.s0)) < 1e-12);
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (j == i) continue;
      CHECK(sign(fam.functionals[j](c.s1)) == sign(fam.functionals[j](c.s0)));
      CHECK(sign(fam.functionals[j](c.s0)) != 0);
    }
  }
}

TEST_CASE("sign perturbation obstructions") {
  const FunctionalFamily pm = make_family({LinearFunctional{{1, 2}, "l"}, LinearFunctional{{-1, -2}, "m"}});
  CHECK_THROWS_AS(pipart_perturbation(pm, 0), Error);

  const FunctionalFamily t4 = t4_product_family();
  try {
    pipart_perturbation(t4, 0);
    FAIL("expected an obstruction");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Obstruction);
    const std::string msg = e.what();
    CHECK(msg.find("lambda1(x)") != std::string::npos);
    CHECK(msg.find("lambda2(x)") != std::string::npos);
    CHECK(msg.find("lambda1(y)") != std::string::npos);
    CHECK(msg.find("lambda2(y)") != std::string::npos);
  }
}

TEST_CASE("positive partners are driven negative together") {
  const FunctionalFamily fam =
      make_family({LinearFunctional{{1, 2}, "a"}, LinearFunctional{{2, 4}, "b"}, LinearFunctional{{1, -1}, "c"}});
  const PerturbationCertificate c = pipart_perturbation(fam, 0);
  CHECK(c.coarse_partners == std::vector<std::size_t>{1});
  CHECK(fam.functionals[0](c.s1) < 0);
  CHECK(fam.functionals[1](c.s1) < 0);
  CHECK(sign(fam.functionals[2](c.s1)) == sign(fam.functionals[2](c.s0)));
}

TEST_CASE("chamber diagrams") {
  const FunctionalFamily fam = example_family();
  const ChamberDiagram d = chamber_diagram(fam);
  CHECK(d.chambers.size() == 6);
  std::set<std::vector<int>> seen;
  for (const auto& c : d.chambers) {
    CHECK(seen.insert(c.signs).second);
    CHECK(c.signs != std::vector<int>{1, 1, 1});
    CHECK(c.signs != std::vector<int>{-1, -1, -1});
    for (std::size_t j = 0; j < fam.size(); ++j) CHECK(sign(fam.functionals[j](c.representative)) == c.signs[j]);
  }
  CHECK(chamber_diagram(make_family({LinearFunctional{{1, 2}, "l"}})).chambers.size() == 2);
  CHECK(chamber_diagram(sl3_roots_in_plane()).chambers.size() == 6);
  CHECK_THROWS_AS(chamber_diagram(make_family({LinearFunctional{{0, 0}, "z"}, LinearFunctional{{1, 0}, "l"}})), Error);
}

TEST_CASE("rank-3 chamber enumeration matches brute-force sampling") {
  const ActionFile action = load_action_file(testing::data_path("cartan_t4.json"));
  const FunctionalFamily fam = make_cartan_spec(action.generators).family;
  const ChamberDiagram d = chamber_diagram(fam);
  CHECK(d.chambers.size() == 14);
  std::set<std::vector<int>> listed;
  for (const auto& c : d.chambers) {
    listed.insert(c.signs);
    for (std::size_t j = 0; j < fam.size(); ++j) CHECK(sign(fam.functionals[j](c.representative)) == c.signs[j]);
  }
  // Oracle: sign vectors of many random directions.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::set<std::vector<int>> sampled;
  for (int i = 0; i < 200000; ++i) {
    Vec v{g(rng), g(rng), g(rng)};
    std::vector<int> s;
    for (const auto& f : fam.functionals) s.push_back(sign(f(v)));
    sampled.insert(s);
  }
  CHECK(sampled == listed);
}

TEST_CASE("coarse classes") {
  const CoarseStructure roots = coarse_classes(sl3_roots_in_plane());
  CHECK(roots.classes.size() == 6);
  CHECK(roots.negative_pairs.size() == 3);
  const CoarseStructure two = coarse_classes(make_family({LinearFunctional{{1, 1}, "l"}, LinearFunctional{{2, 2}, "m"}}));
  CHECK(two.classes.size() == 1);
  const CoarseStructure t4 = coarse_classes(t4_product_family());
  CHECK(t4.classes.size() == 4);
  CHECK(t4.negative_pairs.size() == 2);

  // partition property, and invariance under positive rescaling
  FunctionalFamily scaled = example_family();
  const CoarseStructure before = coarse_classes(scaled);
  for (auto& c : scaled.functionals[1].coeffs) c *= 3.7;
  const CoarseStructure after = coarse_classes(scaled);
  REQUIRE(before.classes.size() == after.classes.size());
  std::set<std::size_t> all;
  for (std::size_t c = 0; c < before.classes.size(); ++c) {
    CHECK(before.classes[c].members == after.classes[c].members);
    for (std::size_t m : before.classes[c].members) CHECK(all.insert(m).second);
  }
  CHECK(all.size() == 3);
}

TEST_CASE("invariant splittings") {
  const FunctionalFamily fam = example_family();
  const Splitting a = invariant_splitting(fam, {1, 0});
  CHECK(a.unstable == std::vector<std::size_t>{0});
  CHECK(a.stable == std::vector<std::size_t>{1, 2});
  const Splitting b = invariant_splitting(fam, {0, 1});
  CHECK(b.unstable == std::vector<std::size_t>{0, 2});
  CHECK(b.stable == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(invariant_splitting(fam, {0, 0}), Error);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const Vec n{u(rng), u(rng)};
    const Splitting p = invariant_splitting(fam, n);
    const Splitting m = invariant_splitting(fam, {-n[0], -n[1]});
    CHECK(p.unstable == m.stable);
    CHECK(p.stable == m.unstable);
  }
}
