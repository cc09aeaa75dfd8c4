#include <doctest.h>

#include <cmath>
#include <random>

#include "cartanlab/suspension.hpp"
#include "helpers.hpp"

using namespace cartanlab;

namespace {

const SuspensionSpec& example_suspension() {
  static const SuspensionSpec spec =
      make_suspension(make_cartan_spec({testing::example_a(), testing::example_b()}));
  return spec;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("interpolation hits the generators") {
  const SuspensionSpec& s = example_suspension();
  for (double r : s.reconstruction_residuals) CHECK(r < 1e-10);
  const Eigen::MatrixXd a = to_eigen(testing::example_a());
  const Eigen::MatrixXd b = to_eigen(testing::example_b());
  CHECK((interpolation_matrix(s, vec({1, 0})) - a).norm() < 1e-10);
  CHECK((interpolation_matrix(s, vec({0, 1})) - b).norm() < 1e-10);
  CHECK((interpolation_matrix(s, vec({2, -1})) - a * a * b.inverse()).norm() < 1e-9);
  CHECK((interpolation_matrix(s, vec({0, 0})) - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("interpolation is a one-parameter group") {
  const SuspensionSpec& s = example_suspension();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd a = vec({u(rng), u(rng)});
    const Eigen::VectorXd b = vec({u(rng), u(rng)});
    const Eigen::MatrixXd lhs = interpolation_matrix(s, a + b);
    const Eigen::MatrixXd rhs = interpolation_matrix(s, a) * interpolation_matrix(s, b);
    CHECK((lhs - rhs).norm() / lhs.norm() < 1e-12);
    CHECK(std::abs(interpolation_matrix(s, a).determinant() - 1.0) < 1e-10);
  }
}

TEST_CASE("reduction is well defined on the base torus") {
  const SuspensionSpec& s = example_suspension();
  const Eigen::VectorXd x = vec({0.3, -1.7, 2.2});
  const TwistedPoint p = reduce(s, vec({0.25, 0.5}), x);
  const TwistedPoint q = reduce(s, vec({1.25, 1.5}), x);
  CHECK((p.t - q.t).norm() < 1e-15);
  CHECK((p.x - q.x).norm() < 1e-12);
  CHECK(p.t(0) == doctest::Approx(0.25));
  // adding a lattice vector of the fiber does not change the representative
  const Eigen::MatrixXd m = interpolation_matrix(s, vec({0.25, 0.5}));
  const TwistedPoint r = reduce(s, vec({0.25, 0.5}), x + m * vec({2, -1, 3}));
  CHECK((p.x - r.x).norm() < 1e-10);
  // representative lies in the fundamental parallelepiped
  const Eigen::VectorXd c = m.inverse() * p.x;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    CHECK(c(i) >= -1e-12);
    CHECK(c(i) < 1.0 + 1e-12);
  }
}

TEST_CASE("the flow is an action") {
  const SuspensionSpec& s = example_suspension();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 30; ++i) {
    const TwistedPoint p = reduce(s, vec({u(rng), u(rng)}), vec({u(rng), u(rng), u(rng)}));
    const Eigen::VectorXd a = vec({u(rng), u(rng)});
    const Eigen::VectorXd b = vec({u(rng), u(rng)});
    const TwistedPoint lhs = act(s, a + b, p);
    const TwistedPoint rhs = act(s, a, act(s, b, p));
    CHECK((lhs.t - rhs.t).norm() < 1e-12);
    CHECK(fiber_distance(s, lhs.t, lhs.x, rhs.x) < 1e-9);
  }
}

TEST_CASE("fiber distance respects the lattice") {
  const SuspensionSpec& s = example_suspension();
  const Eigen::VectorXd t = vec({0.4, 0.1});
  const Eigen::MatrixXd m = interpolation_matrix(s, t);
  const Eigen::VectorXd x = vec({0.2, 0.1, -0.3});
  CHECK(fiber_distance(s, t, x, x + m * vec({1, 0, -2})) < 1e-12);
  CHECK(fiber_distance(s, t, x, x + 0.01 * m.col(0)) > 0.0);
}

TEST_CASE("eigendirections are dilated by the exponents") {
  const SuspensionSpec& s = example_suspension();
  const TwistedPoint p = reduce(s, vec({0.3, 0.6}), vec({0.1, 0.2, 0.3}));
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(dilation_residual(s, vec({1.5, -0.5}), p, j, 0.1) < 1e-9);
    // on ker lambda^j the direction is isometric
    const Vec k = kernel_element(s.functionals[j]);
    CHECK(dilation_residual(s, vec({k[0], k[1]}), p, j, 0.5) < 1e-9);
  }
}

TEST_CASE("full suspension check") {
  const SuspensionCheck c = suspension_check(example_suspension(), 6, 1, 40);
  CHECK(c.pass());
  CHECK(c.cocycle_pairs == 40);
  CHECK(c.per_direction.size() == 3);
}

TEST_CASE("negative eigenvalues are rejected") {
  const IntMatrix neg = int_matrix({{-2, -1}, {-1, -1}});
  CHECK_THROWS_AS(make_suspension(make_cartan_spec({neg})), Error);
}
