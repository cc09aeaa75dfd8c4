#include <doctest.h>

#include <cmath>
#include <random>

#include "cartanlab/sl_structure.hpp"

using namespace cartanlab;

namespace {

Eigen::MatrixXd exp_diag(const Vec& t) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::exp(t[i]);
  return s;
}

}  // namespace

TEST_CASE("root data") {
  const RootDatum d3 = make_root_datum(3);
  CHECK(d3.roots.size() == 6);
  CHECK(to_string(d3.roots.front()) == "U12");
  CHECK(to_string(Root{3, 1}) == "U31");
  CHECK(to_string(Root{10, 2}) == "U(10,2)");
  CHECK(make_root_datum(4).roots.size() == 12);
  const CartanElement a = make_cartan_element({0.5, 0.25, -0.75});
  CHECK(root_value(d3, Root{1, 3}, a) == doctest::Approx(1.25));
  CHECK(root_value(d3, Root{3, 1}, a) == doctest::Approx(-1.25));
  CHECK_THROWS_AS(make_cartan_element({1, 0, 0}), Error);
  const CartanElement b = cartan_from_diagonal({2, 2, 0.25});
  CHECK(b.t[0] == doctest::Approx(std::log(2.0)));
  CHECK(b.t[2] == doctest::Approx(-2 * std::log(2.0)));
}

TEST_CASE("conjugation scales root groups") {
  const RootDatum d = make_root_datum(3);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng), y = u(rng);
    const CartanElement a = make_cartan_element({x, y, -x - y});
    for (const Root& r : d.roots) {
      CHECK(conjugation_residual(d, a, r, u(rng)) < 1e-12);
      // independent oracle
      const double v = 0.7;
      const Eigen::MatrixXd s = exp_diag(a.t);
      const Eigen::MatrixXd lhs = s * unipotent(d, r, v) * s.inverse();
      const Eigen::MatrixXd rhs = unipotent(d, r, std::exp(root_value(d, r, a)) * v);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("commutator relations hold exactly") {
  const RootDatum d = make_root_datum(3);
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
  for (const Root& a : d.roots) {
    for (const Root& b : d.roots) {
      if (a == b) continue;
      const BracketResult br = root_bracket(d, a, b);
      for (int k = 0; k < 5; ++k) {
        const mpq_class s(num(rng), den(rng)), t(num(rng), den(rng));
        const RatMatrix c = group_commutator(d, a, s, b, t);
        if (br.kind == BracketKind::Commute) {
          CHECK(c == RatMatrix::identity(3));
        } else if (br.kind == BracketKind::Root) {
          CHECK(c == unipotent_exact(d, *br.root, mpq_class(br.coefficient) * s * t));
        }
      }
    }
  }
  CHECK(root_bracket(d, Root{1, 2}, Root{2, 3}).kind == BracketKind::Root);
  CHECK(*root_bracket(d, Root{1, 2}, Root{2, 3}).root == Root{1, 3});
  CHECK(root_bracket(d, Root{1, 2}, Root{2, 3}).coefficient == 1);
  CHECK(root_bracket(d, Root{2, 3}, Root{1, 2}).coefficient == -1);
  CHECK(root_bracket(d, Root{1, 2}, Root{1, 3}).kind == BracketKind::Commute);
  CHECK(root_bracket(d, Root{1, 2}, Root{2, 1}).kind == BracketKind::CartanDirection);
}

TEST_CASE("Lie closures") {
  const RootDatum d3 = make_root_datum(3);
  CHECK(lie_closure(d3, {Root{1, 2}, Root{2, 1}}).dim == 3);
  CHECK(lie_closure(d3, {Root{1, 2}, Root{2, 3}}).dim == 3);
  CHECK(lie_closure(d3, {Root{1, 2}, Root{2, 1}, Root{2, 3}, Root{3, 2}}).dim == 8);
  CHECK(lie_closure(d3, d3.roots).dim == 8);
  CHECK(lie_closure(d3, {Root{1, 2}}, true).dim == 3);
  CHECK(lie_closure(d3, {}, true).dim == 2);
  const RootDatum d4 = make_root_datum(4);
  CHECK(lie_closure(d4, d4.roots).dim == 15);
  // basis is orthonormal and traceless
  const LieSubalgebraBasis b = lie_closure(d3, {Root{1, 3}, Root{3, 1}});
  for (std::size_t i = 0; i < b.basis.size(); ++i) {
    CHECK(std::abs(b.basis[i].trace()) < 1e-12);
    for (std::size_t j = 0; j < b.basis.size(); ++j) {
      const double ip = (b.basis[i].transpose() * b.basis[j]).trace();
      CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("KAK decomposition") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    Eigen::MatrixXd m(3, 3);
    for (Eigen::Index r = 0; r < 3; ++r)
      for (Eigen::Index c = 0; c < 3; ++c) m(r, c) = g(rng);
    const double det = m.determinant();
    if (det < 0) m.col(0) *= -1;
    m /= std::cbrt(std::abs(det));
    const KakResult k = kak_decompose(m);
    CHECK(k.residual < 1e-10);
    CHECK((k.k1 * k.a.asDiagonal() * k.k2 - m).norm() < 1e-10);
    CHECK(k.k1.determinant() == doctest::Approx(1.0));
    CHECK(k.k2.determinant() == doctest::Approx(1.0));
    CHECK((k.k1.transpose() * k.k1 - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
    CHECK(k.a.prod() == doctest::Approx(1.0));
    CHECK(k.a(0) >= k.a(1));
    CHECK(k.a(1) >= k.a(2));
  }
}

TEST_CASE("resonance") {
  const RootDatum d = make_root_datum(3);
  // a fiberwise exponent proportional to t1 - t2 after trace-zero projection
  const std::vector<LinearFunctional> f{{{2, 0, 1}, "chi1"}, {{0, 0, 1}, "chi2"}};
  const auto entries = resonance_classify(d, f);
  REQUIRE(entries.size() == 6);
  for (const auto& e : entries) {
    if (e.root == Root{1, 2}) {
      CHECK(e.resonant_with == std::vector<std::size_t>{0});
    } else if (e.root == Root{3, 1} || e.root == Root{3, 2}) {
      // (0,0,1) projects to (-1,-1,2)/3, proportional to t3 - t1 + t3 - t2, not to a single root
      CHECK(e.nonresonant());
    }
  }
  const auto single = resonance_classify(d, {{{-1, -1, 2}, "chi"}});
  for (const auto& e : single) CHECK(e.nonresonant());
}

TEST_CASE("averaging schedule") {
  const LinearFunctional f{{1, 0, -1}, "lambdaF"};
  const AveragingSchedule s = averaging_schedule_sl3(f);
  CHECK(s.verdict == "Haar");
  CHECK(s.closure_dim == 8);
  CHECK_FALSE(s.permuted);
  CHECK(verify_schedule(s, f));
  CHECK(s.stages.size() == 4);
  CHECK(s.stages[0].averaged_over == "U23");

  // vanishes at the first test element: permuted branch
  const LinearFunctional g{{0, 1, -1}, "lambdaF"};
  const AveragingSchedule p = averaging_schedule_sl3(g);
  CHECK(p.permuted);
  CHECK(p.verdict == "Haar");
  CHECK(verify_schedule(p, g));

  CHECK_THROWS_AS(averaging_schedule_sl3(LinearFunctional{{1, 1, 1}, "lambdaF"}), Error);

  std::mt19937_64 rng(19);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    const LinearFunctional r{{n(rng), n(rng), n(rng)}, "lambdaF"};
    for (bool generic : {false, true}) {
      const AveragingSchedule a = averaging_schedule_sl3(r, generic);
      CHECK(a.verdict == "Haar");
      CHECK(verify_schedule(a, r));
      for (const auto& st : a.stages)
        for (const auto& c : st.conditions) CHECK(c.holds());
    }
  }

  // tampering with a recorded element breaks verification
  AveragingSchedule bad = s;
  for (double& x : bad.stages[0].conditions[0].element) x = -x;
  CHECK_FALSE(verify_schedule(bad, f));
}

TEST_CASE("root report") {
  const RootReport r = root_report(3);
  CHECK(r.roots == 6);
  CHECK(r.algebra_dim == 8);
  CHECK(r.cartan_dim == 2);
  CHECK(r.parabolic_dim == 6);
  CHECK(r.parabolic_codim == 2);
  CHECK(root_report(5).algebra_dim == 24);
}
