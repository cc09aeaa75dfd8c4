#include "cartanlab/sl_structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cartanlab {

namespace {

void check_root(const RootDatum& datum, const Root& r) {
  if (r.i < 1 || r.j < 1 || r.i > datum.n || r.j > datum.n) {
    throw Error(ErrorKind::Domain, "root " + to_string(r) + " out of range for n = " + std::to_string(datum.n));
  }
  if (r.i == r.j) throw Error(ErrorKind::Domain, "root needs i != j, got " + to_string(r));
}

Vec trace_free(const Vec& v) {
  if (v.empty()) return v;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  Vec out(v);
  for (double& x : out) x -= mean;
  return out;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Eigen::MatrixXd elementary(int n, int i, int j) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  e(i - 1, j - 1) = 1.0;
  return e;
}

bool add_to_basis(std::vector<Eigen::MatrixXd>& basis, const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.norm());
  Eigen::MatrixXd r = m;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) r -= (r.cwiseProduct(b).sum()) * b;
  }
  const double rn = r.norm();
  if (rn <= kClosureTolerance * scale) return false;
  basis.push_back(r / rn);
  return true;
}

double vanish_tolerance(const Vec& element) { return 1e-12 * std::max(1.0, norm(element)); }

}  // namespace

std::string to_string(const Root& r) {
  if (r.i >= 1 && r.i <= 9 && r.j >= 1 && r.j <= 9) return "U" + std::to_string(r.i) + std::to_string(r.j);
  return "U(" + std::to_string(r.i) + "," + std::to_string(r.j) + ")";
}

CartanElement make_cartan_element(Vec t) {
  const double sum = std::accumulate(t.begin(), t.end(), 0.0);
  if (std::abs(sum) >= 1e-12) {
    throw Error(ErrorKind::Domain, "Cartan element coordinates must sum to zero (sum = " + std::to_string(sum) + ")");
  }
  return CartanElement{std::move(t)};
}

CartanElement cartan_from_diagonal(const Vec& diagonal) {
  Vec t;
  for (double x : diagonal) {
    if (x <= 0.0) throw Error(ErrorKind::Domain, "Cartan diagonal entries must be positive");
    t.push_back(std::log(x));
  }
  return make_cartan_element(std::move(t));
}

RootDatum make_root_datum(int n) {
  if (n < 2) throw Error(ErrorKind::Domain, "SL(n) needs n >= 2");
  RootDatum d;
  d.n = n;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) d.roots.push_back({i, j});
  return d;
}

double root_value(const RootDatum& datum, const Root& r, const CartanElement& a) {
  check_root(datum, r);
  if (a.t.size() != static_cast<std::size_t>(datum.n)) {
    throw Error(ErrorKind::DimensionMismatch, "Cartan element has wrong length");
  }
  const double sum = std::accumulate(a.t.begin(), a.t.end(), 0.0);
  if (std::abs(sum) >= 1e-12) throw Error(ErrorKind::Domain, "Cartan element violates the trace condition");
  return a.t[static_cast<std::size_t>(r.i - 1)] - a.t[static_cast<std::size_t>(r.j - 1)];
}

LinearFunctional root_functional(const RootDatum& datum, const Root& r) {
  check_root(datum, r);
  LinearFunctional f;
  f.coeffs.assign(static_cast<std::size_t>(datum.n), 0.0);
  f.coeffs[static_cast<std::size_t>(r.i - 1)] = 1.0;
  f.coeffs[static_cast<std::size_t>(r.j - 1)] = -1.0;
  f.label = to_string(r);
  return f;
}

Eigen::MatrixXd unipotent(const RootDatum& datum, const Root& r, double v) {
  check_root(datum, r);
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(datum.n, datum.n);
  u(r.i - 1, r.j - 1) = v;
  return u;
}

RatMatrix unipotent_exact(const RootDatum& datum, const Root& r, const mpq_class& v) {
  check_root(datum, r);
  RatMatrix u = RatMatrix::identity(static_cast<std::size_t>(datum.n));
  u(static_cast<std::size_t>(r.i - 1), static_cast<std::size_t>(r.j - 1)) = v;
  return u;
}

double conjugation_residual(const RootDatum& datum, const CartanElement& a, const Root& r, double v) {
  const double beta = root_value(datum, r, a);
  Eigen::VectorXd e(datum.n);
  for (int k = 0; k < datum.n; ++k) e(k) = std::exp(a.t[static_cast<std::size_t>(k)]);
  const Eigen::MatrixXd s = e.asDiagonal();
  const Eigen::MatrixXd sinv = e.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd lhs = s * unipotent(datum, r, v) * sinv;
  return (lhs - unipotent(datum, r, std::exp(beta) * v)).cwiseAbs().maxCoeff();
}

BracketResult root_bracket(const RootDatum& datum, const Root& a, const Root& b) {
  check_root(datum, a);
  check_root(datum, b);
  BracketResult out;
  if (a.j == b.i && a.i == b.j) {
    out.kind = BracketKind::CartanDirection;
  } else if (a.j == b.i) {
    out.kind = BracketKind::Root;
    out.root = Root{a.i, b.j};
    out.coefficient = 1;
  } else if (b.j == a.i) {
    out.kind = BracketKind::Root;
    out.root = Root{b.i, a.j};
    out.coefficient = -1;
  }
  return out;
}

RatMatrix group_commutator(const RootDatum& datum, const Root& a, const mpq_class& s, const Root& b,
                           const mpq_class& t) {
  return unipotent_exact(datum, a, s) * unipotent_exact(datum, b, t) * unipotent_exact(datum, a, -s) *
         unipotent_exact(datum, b, -t);
}

LieSubalgebraBasis lie_closure(const RootDatum& datum, const std::vector<Root>& seed, bool include_cartan) {
  if (seed.empty() && !include_cartan) throw Error(ErrorKind::Domain, "lie_closure: empty seed");
  const int n = datum.n;
  std::vector<Eigen::MatrixXd> basis;
  for (const auto& r : seed) {
    check_root(datum, r);
    add_to_basis(basis, elementary(n, r.i, r.j));
  }
  if (include_cartan) {
    for (int i = 1; i < n; ++i) add_to_basis(basis, elementary(n, i, i) - elementary(n, i + 1, i + 1));
  }
  const std::size_t cap = static_cast<std::size_t>(n * n - 1);
  bool grew = true;
  while (grew && basis.size() < cap) {
    grew = false;
    const std::size_t m = basis.size();
    for (std::size_t p = 0; p < m && basis.size() < cap; ++p) {
      for (std::size_t q = p + 1; q < m && basis.size() < cap; ++q) {
        const Eigen::MatrixXd br = basis[p] * basis[q] - basis[q] * basis[p];
        if (add_to_basis(basis, br)) grew = true;
      }
    }
  }
  LieSubalgebraBasis out;
  out.dim = basis.size();
  out.basis = std::move(basis);
  return out;
}

KakResult kak_decompose(const Eigen::MatrixXd& g) {
  if (g.rows() != g.cols() || g.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "kak: square matrix required");
  const double det = g.determinant();
  if (std::abs(det - 1.0) > 1e-8) {
    throw Error(ErrorKind::Domain, "kak: determinant " + std::to_string(det) + " is not 1");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-12 * sv(0)) throw Error(ErrorKind::Singular, "kak: matrix is numerically singular");
  Eigen::MatrixXd u = svd.matrixU();
  Eigen::MatrixXd vt = svd.matrixV().transpose();
  if (u.determinant() < 0) {
    // det g > 0 forces det U = det V, so flipping the last column of U and the
    // last row of V^T keeps both in SO(n).
    u.col(u.cols() - 1) *= -1.0;
    vt.row(vt.rows() - 1) *= -1.0;
  }
  KakResult out;
  out.k1 = u;
  out.a = sv;
  out.k2 = vt;
  out.residual = (u * sv.asDiagonal() * vt - g).cwiseAbs().maxCoeff();
  return out;
}

std::vector<ResonanceEntry> resonance_classify(const RootDatum& datum,
                                               const std::vector<LinearFunctional>& fiberwise) {
  std::vector<Vec> projected;
  for (const auto& f : fiberwise) {
    if (f.coeffs.size() != static_cast<std::size_t>(datum.n)) {
      throw Error(ErrorKind::DimensionMismatch, "resonance: functional " + f.label + " has wrong length");
    }
    projected.push_back(trace_free(f.coeffs));
  }
  std::vector<ResonanceEntry> out;
  for (const auto& r : datum.roots) {
    ResonanceEntry e{r, {}};
    const Vec beta = root_functional(datum, r).coeffs;
    for (std::size_t k = 0; k < projected.size(); ++k) {
      if (proportionality(beta, projected[k]) == Proportionality::Positive) e.resonant_with.push_back(k);
    }
    out.push_back(std::move(e));
  }
  return out;
}

bool SignCondition::holds() const {
  if (expected == 0) return std::abs(value) <= vanish_tolerance(element);
  return expected > 0 ? value > 0.0 : value < 0.0;
}

namespace {

struct Candidate {
  Vec element;
  Root root;
};

SignCondition evaluate(const std::string& name, std::optional<Root> root, const Vec& coeffs, const Vec& element,
                       int expected) {
  return SignCondition{name, root, element, expected, dot(coeffs, element)};
}

Vec ln2(std::initializer_list<double> v) {
  Vec out;
  for (double x : v) out.push_back(x * std::numbers::ln2);
  return out;
}

Vec root_kernel_element(const Root& r) {
  Vec s(3, -2.0);
  s[static_cast<std::size_t>(r.i - 1)] = 1.0;
  s[static_cast<std::size_t>(r.j - 1)] = 1.0;
  return s;
}

}  // namespace

AveragingSchedule averaging_schedule_sl3(const LinearFunctional& lambda_f, bool generic) {
  const RootDatum datum = make_root_datum(3);
  if (lambda_f.coeffs.size() != 3) throw Error(ErrorKind::DimensionMismatch, "schedule: functional must live on R^3");
  const Vec lam = trace_free(lambda_f.coeffs);
  if (norm(lam) <= 1e-12) throw Error(ErrorKind::ZeroFunctional, "schedule: lambdaF vanishes on the Cartan");

  AveragingSchedule sched;
  auto nonzero = [&](const Vec& s) { return std::abs(dot(lam, s)) > 1e-10 * norm(lam) * norm(s); };

  std::vector<Candidate> first;
  std::vector<Candidate> second;
  if (generic) {
    for (const auto& r : datum.roots) first.push_back({root_kernel_element(r), r});
  } else {
    const Vec s = ln2({-2, 1, 1});     // diag(1/4, 2, 2)
    const Vec sbar = ln2({1, 1, -2});  // diag(2, 2, 1/4)
    if (nonzero(s)) {
      first.push_back({s, {2, 3}});
      second = {{ln2({1, 1, -2}), {1, 2}}, {ln2({1, -2, 1}), {1, 3}}};
    } else {
      // Same schedule after swapping coordinates 1 and 3.
      sched.permuted = true;
      first.push_back({sbar, {2, 1}});
      second = {{ln2({-2, 1, 1}), {3, 2}}, {ln2({1, -2, 1}), {3, 1}}};
    }
  }

  std::vector<Root> invariant;
  auto run_stage = [&](const std::vector<Candidate>& cands, const std::string& name) {
    for (std::size_t c = 0; c < cands.size(); ++c) {
      Vec s = cands[c].element;
      if (!nonzero(s)) {
        sched.trace.push_back(name + ": lambdaF vanishes at " + to_string(cands[c].root) + " test element, next case");
        continue;
      }
      const Root r = cands[c].root;
      const bool flipped = dot(lam, s) < 0;
      if (flipped) {
        for (double& x : s) x = -x;
      }
      ScheduleStage st;
      st.name = name + (generic || cands.size() == 1 ? "" : (c == 0 ? " (case 1)" : " (case 2)"));
      st.element = s;
      st.averaged_over = to_string(r);
      st.conditions.push_back(evaluate("lambdaF", std::nullopt, lam, s, +1));
      st.conditions.push_back(evaluate(to_string(r), r, root_functional(datum, r).coeffs, s, 0));
      std::vector<Root> kept{r};
      for (const auto& old : invariant) {
        if (old != r && root_bracket(datum, old, r).kind == BracketKind::Commute) kept.push_back(old);
      }
      invariant = kept;
      for (const auto& x : invariant) st.invariance.push_back(to_string(x));
      sched.trace.push_back(name + ": s" + (flipped ? "^-1" : "") + " expands lambdaF, " + to_string(r) +
                            " centralizes it; average over " + to_string(r));
      sched.stages.push_back(std::move(st));

      ScheduleStage a;
      a.name = name + ": Cartan averaging";
      a.averaged_over = "A";
      std::vector<Root> with_opp = invariant;
      for (const auto& x : invariant) {
        if (std::find(with_opp.begin(), with_opp.end(), x.opposite()) == with_opp.end()) {
          with_opp.push_back(x.opposite());
        }
      }
      invariant = with_opp;
      a.invariance.push_back("A");
      for (const auto& x : invariant) a.invariance.push_back(to_string(x));
      sched.trace.push_back(name + ": average over A, opposite root groups join the invariance set");
      sched.stages.push_back(std::move(a));
      return r;
    }
    throw Error(ErrorKind::ZeroFunctional, "schedule: lambdaF vanishes at every test element of " + name);
  };

  const Root r1 = run_stage(first, "first averaging");
  if (generic) {
    for (const auto& r : datum.roots) {
      if (r != r1 && r != r1.opposite()) second.push_back({root_kernel_element(r), r});
    }
  }
  run_stage(second, "second averaging");

  sched.closure_dim = lie_closure(datum, invariant, true).dim;
  sched.verdict = sched.closure_dim == 8 ? "Haar" : "invariant under a proper subgroup (dim " +
                                                       std::to_string(sched.closure_dim) + ")";
  sched.trace.push_back("closure of the invariance set has dimension " + std::to_string(sched.closure_dim) +
                        ": " + sched.verdict);
  return sched;
}

bool verify_schedule(const AveragingSchedule& schedule, const LinearFunctional& lambda_f) {
  const RootDatum datum = make_root_datum(3);
  const Vec lam = trace_free(lambda_f.coeffs);
  for (const auto& st : schedule.stages) {
    for (const auto& c : st.conditions) {
      const Vec coeffs = c.root ? root_functional(datum, *c.root).coeffs : lam;
      SignCondition again = c;
      again.value = dot(coeffs, c.element);
      if (!again.holds()) return false;
    }
  }
  return schedule.verdict != "Haar" || schedule.closure_dim == 8;
}

RootReport root_report(int n) {
  const RootDatum d = make_root_datum(n);
  RootReport r;
  r.n = n;
  r.roots = d.roots.size();
  r.algebra_dim = static_cast<std::size_t>(n * n - 1);
  r.cartan_dim = static_cast<std::size_t>(n - 1);
  std::size_t line_stabilizer_roots = 0;
  for (const auto& root : d.roots) {
    if (!(root.j == 1 && root.i > 1)) ++line_stabilizer_roots;
  }
  r.parabolic_dim = r.cartan_dim + line_stabilizer_roots;
  r.parabolic_codim = r.algebra_dim - r.parabolic_dim;
  return r;
}

}  // namespace cartanlab
