#pragma once

// Algebraic suspension of a Z^k Cartan action: the R^k flow on the bundle of
// twisted tori T_t = R^d / M^t Z^d over the base torus R^k / Z^k.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cartanlab/toral_actions.hpp"

namespace cartanlab {

constexpr double kConditioningLimit = 1e6;

struct SuspensionSpec {
  CartanActionSpec base;
  Eigen::MatrixXd q;
  Eigen::MatrixXd qinv;
  std::vector<LinearFunctional> functionals;
  std::vector<double> reconstruction_residuals;  // per generator

  std::size_t rank() const { return base.rank(); }
  std::size_t dim() const { return base.dim(); }
};

/// Requires positive real spectra so that M^t is a real matrix logarithm
/// interpolation; throws Domain otherwise and Tolerance if Q diag Q^-1 misses a
/// generator by more than 1e-8.
SuspensionSpec make_suspension(const CartanActionSpec& base);

struct TwistedPoint {
  Eigen::VectorXd t;  // in [0,1)^k
  Eigen::VectorXd x;  // in the parallelepiped spanned by the columns of M^t
  std::optional<std::string> warning;
};

Eigen::MatrixXd interpolation_matrix(const SuspensionSpec& spec, const Eigen::VectorXd& t);

/// Canonical representative of (t, x + Lambda_t). Since Lambda_{t+m} = Lambda_t
/// for integer m, t is first reduced mod Z^k and x is reduced against M^{t mod 1}.
TwistedPoint reduce(const SuspensionSpec& spec, const Eigen::VectorXd& t, const Eigen::VectorXd& x);

/// s . (t, x + Lambda_t) = (s + t, M^s x + Lambda_{s+t}).
TwistedPoint act(const SuspensionSpec& spec, const Eigen::VectorXd& s, const TwistedPoint& p);

/// Shortest representative of x - y modulo Lambda_t (lattice coordinates
/// wrapped to (-1/2, 1/2]), measured in eigenframe coordinates.
double fiber_distance(const SuspensionSpec& spec, const Eigen::VectorXd& t, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y);

/// |act(s, p + v e^j) - act(s, p) - e^{lambda^j(s)} v e^j| in the fiber over t + s.
double dilation_residual(const SuspensionSpec& spec, const Eigen::VectorXd& s, const TwistedPoint& p,
                         std::size_t j, double v);

struct SuspensionCheck {
  std::size_t grid = 0;
  std::uint64_t seed = 0;
  double cocycle_residual = 0.0;     // max over random pairs, |s|,|t| <= 3
  std::size_t cocycle_pairs = 0;
  double det_deviation = 0.0;        // max |det M^t - 1| over the same samples
  double integer_residual = 0.0;     // max |M^n - element(n)| over small integer n
  double dilation_residual = 0.0;    // grid of s in [-2,2]^2, all j, v in {+-0.1, +-0.5}
  double kernel_dilation_residual = 0.0;  // s in ker lambda^j
  std::vector<double> per_direction;  // max dilation residual per j
  bool pass(double tolerance = 1e-9) const {
    return cocycle_residual < tolerance && det_deviation < tolerance && integer_residual < 1e-8 &&
           dilation_residual < tolerance && kernel_dilation_residual < tolerance;
  }
};

SuspensionCheck suspension_check(const SuspensionSpec& spec, std::size_t grid = 10, std::uint64_t seed = 0,
                                 std::size_t pairs = 100);

}  // namespace cartanlab
