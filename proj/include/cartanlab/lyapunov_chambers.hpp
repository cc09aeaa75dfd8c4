#pragma once

// Lyapunov exponent functionals on the acting group R^k, the sign chambers
// cut out by their kernels, coarse (positive-proportionality) classes and the
// sign-perturbation selection used to move one exponent to the stable side.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cartanlab/exact_algebra.hpp"

namespace cartanlab {

using Vec = std::vector<double>;

struct LinearFunctional {
  Vec coeffs;
  std::string label;

  std::size_t rank() const { return coeffs.size(); }
  double operator()(const Vec& n) const;
  double norm() const;
  bool is_zero() const;
};

struct FunctionalFamily {
  std::vector<LinearFunctional> functionals;
  std::vector<int> multiplicities;
  bool det_one = false;

  std::size_t size() const { return functionals.size(); }
  std::size_t rank() const { return functionals.empty() ? 0 : functionals.front().rank(); }
  /// Multiplicity-weighted sum of coefficient vectors.
  Vec weighted_sum() const;
};

enum class Proportionality { None, Positive, Negative };

/// Relative tolerance on normalized directions; exact 2x2-minor test first.
constexpr double kProportionalityTolerance = 1e-9;
constexpr double kNeutralTolerance = 1e-10;

Proportionality proportionality(const Vec& a, const Vec& b,
                                double tolerance = kProportionalityTolerance);

FunctionalFamily make_family(std::vector<LinearFunctional> functionals,
                             std::vector<int> multiplicities = {}, bool det_one = false);

/// lambda^j = (log chi^j_{g_1}, ..., log chi^j_{g_k}) for each joint eigendirection.
FunctionalFamily functionals_from_action(const SpectralData& data);

/// Family of a product action: functionals of each factor padded with zeros
/// on the other factor's coordinates.
FunctionalFamily product_family(const FunctionalFamily& first, const FunctionalFamily& second);

/// Unit vector in ker(lambda). Rank 2 uses (-l2, l1).
Vec kernel_element(const LinearFunctional& lambda);

/// Unit s0 with beta(s0) = 0 and lambda(s0) > 0.
Vec separating_element(const LinearFunctional& beta, const LinearFunctional& lambda);

struct PerturbationCertificate {
  Vec s0;
  Vec s1;
  double angle = 0.0;
  int steps = 0;
  Vec values_at_s0;
  Vec values_at_s1;
  /// indices positively proportional to lambda^i, driven negative together
  std::vector<std::size_t> coarse_partners;
};

/// Finds s1 near ker(lambda^i) with lambda^i(s1) < 0 and every other exponent
/// keeping its sign at s0. Throws Obstruction when a negatively proportional
/// exponent exists.
PerturbationCertificate pipart_perturbation(const FunctionalFamily& family, std::size_t i);

struct Chamber {
  std::vector<int> signs;  // +1 / -1 per functional
  Vec representative;
};

struct ChamberDiagram {
  std::size_t rank = 0;
  /// per functional: orthonormal spanning set of its kernel
  std::vector<std::vector<Vec>> kernel_directions;
  std::vector<Chamber> chambers;
};

/// Rank 2: angular sweep of kernel rays. Rank >= 3: sign-vector feasibility by
/// minimum-norm points of signed normal vectors.
ChamberDiagram chamber_diagram(const FunctionalFamily& family);
ChamberDiagram chamber_diagram_angular(const FunctionalFamily& family);
ChamberDiagram chamber_diagram_general(const FunctionalFamily& family);

struct CoarseClass {
  std::vector<std::size_t> members;
  LinearFunctional representative;
  bool zero = false;
};

struct CoarseStructure {
  std::vector<CoarseClass> classes;
  std::vector<std::pair<std::size_t, std::size_t>> negative_pairs;
};

CoarseStructure coarse_classes(const FunctionalFamily& family);

struct Splitting {
  std::vector<std::size_t> unstable;
  std::vector<std::size_t> stable;
  std::vector<std::size_t> neutral;
};

Splitting invariant_splitting(const FunctionalFamily& family, const Vec& n);

}  // namespace cartanlab
