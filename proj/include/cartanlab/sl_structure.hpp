#pragma once

// Root data of SL(n, R): roots t_i - t_j on the diagonal Cartan, unipotent root
// subgroups, commutator relations, Lie closure of root spans, KAK, resonance
// with fiberwise exponents, and the two-stage SL(3) averaging schedule.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cartanlab/lyapunov_chambers.hpp"
#include "cartanlab/matrix.hpp"

namespace cartanlab {

/// Root (i, j) with 1-based indices, i != j.
struct Root {
  int i = 1;
  int j = 2;
  Root opposite() const { return {j, i}; }
  friend bool operator==(const Root&, const Root&) = default;
  friend auto operator<=>(const Root&, const Root&) = default;
};

std::string to_string(const Root& r);  // "U12", or "U(10,2)" for large indices

struct CartanElement {
  Vec t;  // log-diagonal coordinates summing to zero
};

/// Throws Domain when |sum t| >= 1e-12.
CartanElement make_cartan_element(Vec t);
/// From positive diagonal entries with product 1.
CartanElement cartan_from_diagonal(const Vec& diagonal);

struct RootDatum {
  int n = 0;
  std::vector<Root> roots;  // (i, j) in lexicographic order
};

RootDatum make_root_datum(int n);

double root_value(const RootDatum& datum, const Root& r, const CartanElement& a);
/// t -> t_i - t_j as a functional on R^n.
LinearFunctional root_functional(const RootDatum& datum, const Root& r);

Eigen::MatrixXd unipotent(const RootDatum& datum, const Root& r, double v);
RatMatrix unipotent_exact(const RootDatum& datum, const Root& r, const mpq_class& v);

/// |s u(v) s^-1 - u(e^{beta(a)} v)|_max with s = diag(e^{t}).
double conjugation_residual(const RootDatum& datum, const CartanElement& a, const Root& r, double v);

enum class BracketKind { Commute, Root, CartanDirection };

struct BracketResult {
  BracketKind kind = BracketKind::Commute;
  std::optional<Root> root;
  int coefficient = 0;  // commutator is u^{root}(coefficient * s * t)
};

BracketResult root_bracket(const RootDatum& datum, const Root& a, const Root& b);

/// u^a(s) u^b(t) u^a(-s) u^b(-t), exactly.
RatMatrix group_commutator(const RootDatum& datum, const Root& a, const mpq_class& s, const Root& b,
                           const mpq_class& t);

struct LieSubalgebraBasis {
  std::vector<Eigen::MatrixXd> basis;  // Frobenius-orthonormal
  std::size_t dim = 0;
};

constexpr double kClosureTolerance = 1e-8;

LieSubalgebraBasis lie_closure(const RootDatum& datum, const std::vector<Root>& seed, bool include_cartan = false);

struct KakResult {
  Eigen::MatrixXd k1;
  Eigen::VectorXd a;  // positive, descending
  Eigen::MatrixXd k2;
  double residual = 0.0;
};

KakResult kak_decompose(const Eigen::MatrixXd& g);

struct ResonanceEntry {
  Root root;
  std::vector<std::size_t> resonant_with;
  bool nonresonant() const { return resonant_with.empty(); }
};

/// Fiberwise functionals live on R^n; they are projected onto the trace-zero
/// plane before the positive proportionality test.
std::vector<ResonanceEntry> resonance_classify(const RootDatum& datum,
                                               const std::vector<LinearFunctional>& fiberwise);

struct SignCondition {
  std::string functional;   // "lambdaF" or a root label
  std::optional<Root> root;  // set when functional is a root
  Vec element;
  int expected = 0;  // +1, -1, or 0 for vanishing
  double value = 0.0;
  bool holds() const;
};

struct ScheduleStage {
  std::string name;
  Vec element;
  std::string averaged_over;
  std::vector<std::string> invariance;
  std::vector<SignCondition> conditions;
};

struct AveragingSchedule {
  std::vector<ScheduleStage> stages;
  std::string verdict;
  std::size_t closure_dim = 0;
  bool permuted = false;  // stage 1 used diag(2,2,1/4); labels carry the swap 1 <-> 3
  std::vector<std::string> trace;
};

/// lambdaF is a functional on R^3 (projected to trace zero). With generic set,
/// the stage elements are kernel elements of the first suitable roots instead
/// of the fixed test elements. Throws ZeroFunctional when lambdaF vanishes on
/// the Cartan.
AveragingSchedule averaging_schedule_sl3(const LinearFunctional& lambda_f, bool generic = false);

/// Re-evaluates every recorded sign condition against lambdaF and the roots.
bool verify_schedule(const AveragingSchedule& schedule, const LinearFunctional& lambda_f);

struct RootReport {
  int n = 0;
  std::size_t roots = 0;
  std::size_t algebra_dim = 0;    // n^2 - 1
  std::size_t cartan_dim = 0;
  std::size_t parabolic_dim = 0;  // stabilizer of a line
  std::size_t parabolic_codim = 0;
};

RootReport root_report(int n);

}  // namespace cartanlab
