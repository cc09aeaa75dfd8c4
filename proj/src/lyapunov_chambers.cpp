#include "cartanlab/lyapunov_chambers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace cartanlab {

namespace {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec normalized(Vec a) {
  const double n = norm(a);
  for (double& x : a) x /= n;
  return a;
}

void check_rank(const LinearFunctional& f, std::size_t k) {
  if (f.rank() != k) {
    throw Error(ErrorKind::DimensionMismatch, "functional " + f.label + " has rank " +
                                                  std::to_string(f.rank()) + ", expected " +
                                                  std::to_string(k));
  }
}

// Orthonormal basis of the orthogonal complement of `normal` in R^k.
std::vector<Vec> kernel_basis(const Vec& normal) {
  const std::size_t k = normal.size();
  const Vec u = normalized(normal);
  std::vector<Vec> basis;
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t e = 0; e < k; ++e) order.emplace_back(std::abs(u[e]), e);
  // Project standard basis vectors least aligned with the normal first.
  std::stable_sort(order.begin(), order.end());
  for (const auto& [_, e] : order) {
    if (basis.size() + 1 == k) break;
    Vec v(k, 0.0);
    v[e] = 1.0;
    const double c = dot(v, u);
    for (std::size_t i = 0; i < k; ++i) v[i] -= c * u[i];
    for (const auto& b : basis) {
      const double cb = dot(v, b);
      for (std::size_t i = 0; i < k; ++i) v[i] -= cb * b[i];
    }
    const double nv = norm(v);
    if (nv < 1e-8) continue;
    for (double& x : v) x /= nv;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::string pair_label(const FunctionalFamily& fam, std::size_t a, std::size_t b) {
  return "(" + fam.functionals[a].label + ", " + fam.functionals[b].label + ")";
}

std::vector<int> sign_vector(const FunctionalFamily& fam, const Vec& p) {
  std::vector<int> s;
  for (const auto& f : fam.functionals) s.push_back(f(p) > 0 ? 1 : -1);
  return s;
}

void require_nonzero(const FunctionalFamily& fam) {
  for (const auto& f : fam.functionals) {
    if (f.is_zero()) throw Error(ErrorKind::ZeroFunctional, "functional " + f.label + " is zero");
  }
}

}  // namespace

double LinearFunctional::operator()(const Vec& n) const {
  if (n.size() != coeffs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "functional " + label + " evaluated on a vector of size " +
                                                  std::to_string(n.size()));
  }
  return dot(coeffs, n);
}

double LinearFunctional::norm() const { return cartanlab::norm(coeffs); }

bool LinearFunctional::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
}

Vec FunctionalFamily::weighted_sum() const {
  Vec sum(rank(), 0.0);
  for (std::size_t j = 0; j < functionals.size(); ++j) {
    const int m = multiplicities.empty() ? 1 : multiplicities[j];
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += m * functionals[j].coeffs[i];
  }
  return sum;
}

Proportionality proportionality(const Vec& a, const Vec& b, double tolerance) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "proportionality: rank mismatch");
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return Proportionality::None;
  bool exact = true;
  for (std::size_t i = 0; i < a.size() && exact; ++i)
    for (std::size_t j = i + 1; j < a.size() && exact; ++j)
      if (a[i] * b[j] - a[j] * b[i] != 0.0) exact = false;
  if (exact) return dot(a, b) > 0 ? Proportionality::Positive : Proportionality::Negative;
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += std::pow(a[i] / na - b[i] / nb, 2);
    sum += std::pow(a[i] / na + b[i] / nb, 2);
  }
  if (std::sqrt(diff) <= tolerance) return Proportionality::Positive;
  if (std::sqrt(sum) <= tolerance) return Proportionality::Negative;
  return Proportionality::None;
}

FunctionalFamily make_family(std::vector<LinearFunctional> functionals, std::vector<int> multiplicities,
                             bool det_one) {
  FunctionalFamily fam;
  if (multiplicities.empty()) multiplicities.assign(functionals.size(), 1);
  if (multiplicities.size() != functionals.size()) {
    throw Error(ErrorKind::DimensionMismatch, "multiplicities and functionals differ in length");
  }
  for (std::size_t j = 0; j < functionals.size(); ++j) {
    if (functionals[j].label.empty()) functionals[j].label = "lambda" + std::to_string(j + 1);
    if (j > 0) check_rank(functionals[j], functionals.front().rank());
    if (multiplicities[j] <= 0) throw Error(ErrorKind::Domain, "multiplicities must be positive");
  }
  fam.functionals = std::move(functionals);
  fam.multiplicities = std::move(multiplicities);
  fam.det_one = det_one;
  return fam;
}

FunctionalFamily functionals_from_action(const SpectralData& data) {
  const std::size_t k = data.spectra.size();
  const std::size_t d = static_cast<std::size_t>(data.frame.q.cols());
  std::vector<LinearFunctional> fs;
  for (std::size_t j = 0; j < d; ++j) {
    LinearFunctional f;
    f.label = "lambda" + std::to_string(j + 1);
    for (std::size_t g = 0; g < k; ++g) {
      const double chi = data.eigenvalue(g, j);
      if (!(chi > 0.0)) {
        std::ostringstream os;
        os << "eigenvalue " << chi << " of generator " << g << " is not positive; log undefined";
        throw Error(ErrorKind::Domain, os.str());
      }
      f.coeffs.push_back(std::log(chi));
    }
    fs.push_back(std::move(f));
  }
  const bool det_one = std::all_of(data.spectra.begin(), data.spectra.end(),
                                   [](const RealSpectrum& s) { return s.poly.determinant() == 1; });
  return make_family(std::move(fs), {}, det_one);
}

FunctionalFamily product_family(const FunctionalFamily& first, const FunctionalFamily& second) {
  const std::size_t k1 = first.rank();
  const std::size_t k2 = second.rank();
  std::vector<LinearFunctional> fs;
  std::vector<int> mult;
  for (std::size_t j = 0; j < first.size(); ++j) {
    LinearFunctional f{Vec(k1 + k2, 0.0), first.functionals[j].label + "(x)"};
    std::copy(first.functionals[j].coeffs.begin(), first.functionals[j].coeffs.end(), f.coeffs.begin());
    fs.push_back(std::move(f));
    mult.push_back(first.multiplicities[j]);
  }
  for (std::size_t j = 0; j < second.size(); ++j) {
    LinearFunctional f{Vec(k1 + k2, 0.0), second.functionals[j].label + "(y)"};
    std::copy(second.functionals[j].coeffs.begin(), second.functionals[j].coeffs.end(),
              f.coeffs.begin() + static_cast<std::ptrdiff_t>(k1));
    fs.push_back(std::move(f));
    mult.push_back(second.multiplicities[j]);
  }
  return make_family(std::move(fs), std::move(mult), first.det_one && second.det_one);
}

Vec kernel_element(const LinearFunctional& lambda) {
  if (lambda.is_zero()) throw Error(ErrorKind::ZeroFunctional, "kernel_element: zero functional");
  const std::size_t k = lambda.rank();
  if (k < 2) throw Error(ErrorKind::Domain, "kernel of a nonzero rank-1 functional is trivial");
  if (k == 2) return normalized({-lambda.coeffs[1], lambda.coeffs[0]});
  return kernel_basis(lambda.coeffs).front();
}

Vec separating_element(const LinearFunctional& beta, const LinearFunctional& lambda) {
  if (beta.is_zero() || lambda.is_zero()) {
    throw Error(ErrorKind::ZeroFunctional, "separating_element: zero functional");
  }
  check_rank(lambda, beta.rank());
  if (proportionality(beta.coeffs, lambda.coeffs) != Proportionality::None) {
    throw Error(ErrorKind::NoSeparator,
                beta.label + " and " + lambda.label + " are proportional; no separating element");
  }
  // Component of lambda orthogonal to beta: beta(s) = 0 and lambda(s) = |s|^2 > 0.
  const double c = dot(lambda.coeffs, beta.coeffs) / dot(beta.coeffs, beta.coeffs);
  Vec s = lambda.coeffs;
  for (std::size_t i = 0; i < s.size(); ++i) s[i] -= c * beta.coeffs[i];
  s = normalized(std::move(s));
  if (!(lambda(s) > 0.0)) throw Error(ErrorKind::NoSeparator, "separating_element: degenerate pair");
  return s;
}

PerturbationCertificate pipart_perturbation(const FunctionalFamily& family, std::size_t i) {
  if (i >= family.size()) throw Error(ErrorKind::Domain, "pipart_perturbation: index out of range");
  const LinearFunctional& li = family.functionals[i];
  if (li.is_zero()) throw Error(ErrorKind::ZeroFunctional, "pipart_perturbation: " + li.label + " is zero");
  const std::size_t k = family.rank();

  const CoarseStructure coarse = coarse_classes(family);
  bool blocked = false;
  for (const auto& [a, b] : coarse.negative_pairs) blocked = blocked || a == i || b == i;
  if (blocked) {
    std::ostringstream os;
    os << "negatively proportional (symplectic) pairs obstruct the perturbation of " << li.label << ":";
    for (const auto& [a, b] : coarse.negative_pairs) os << " " << pair_label(family, a, b);
    throw Error(ErrorKind::Obstruction, os.str());
  }

  PerturbationCertificate cert;
  std::vector<bool> partner(family.size(), false);
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (j != i && proportionality(family.functionals[j].coeffs, li.coeffs) == Proportionality::Positive) {
      partner[j] = true;
      cert.coarse_partners.push_back(j);
    }
  }

  auto generic_kernel_point = [&](int attempt) {
    if (k == 2) return kernel_element(li);
    const Vec u = normalized(li.coeffs);
    Vec g(k);
    for (std::size_t t = 0; t < k; ++t) g[t] = std::sqrt(2.0 + static_cast<double>(t + attempt * k)) - 1.0;
    const double c = dot(g, u);
    for (std::size_t t = 0; t < k; ++t) g[t] -= c * u[t];
    return normalized(std::move(g));
  };

  for (int attempt = 0; attempt < 8; ++attempt) {
    const Vec s0 = generic_kernel_point(attempt);
    bool generic = true;
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (j == i || partner[j]) continue;
      if (std::abs(family.functionals[j](s0)) <= kNeutralTolerance * family.functionals[j].norm()) {
        generic = false;
      }
    }
    if (!generic) {
      if (k == 2) break;
      continue;
    }
    cert.s0 = s0;
    cert.values_at_s0.clear();
    for (const auto& f : family.functionals) cert.values_at_s0.push_back(f(s0));

    const Vec d = normalized([&] {
      Vec v = li.coeffs;
      for (double& x : v) x = -x;
      return v;
    }());
    for (int step = 0; step < 64; ++step) {
      const double theta = (std::numbers::pi / 4.0) * std::ldexp(1.0, -step);
      Vec s1(k);
      for (std::size_t t = 0; t < k; ++t) s1[t] = std::cos(theta) * s0[t] + std::sin(theta) * d[t];
      bool ok = li(s1) < 0.0;
      for (std::size_t j = 0; j < family.size() && ok; ++j) {
        if (j == i) continue;
        const double v1 = family.functionals[j](s1);
        if (partner[j]) {
          ok = v1 < 0.0;
        } else {
          const double v0 = cert.values_at_s0[j];
          ok = v1 != 0.0 && (v1 > 0.0) == (v0 > 0.0);
        }
      }
      if (ok) {
        cert.s1 = s1;
        cert.angle = theta;
        cert.steps = step + 1;
        for (const auto& f : family.functionals) cert.values_at_s1.push_back(f(s1));
        return cert;
      }
    }
  }
  throw Error(ErrorKind::Obstruction,
              "pipart_perturbation: no admissible perturbation found for " + li.label);
}

ChamberDiagram chamber_diagram_angular(const FunctionalFamily& family) {
  require_nonzero(family);
  if (family.rank() != 2) {
    throw Error(ErrorKind::Unsupported, "angular chamber sweep requires rank 2");
  }
  ChamberDiagram diagram;
  diagram.rank = 2;
  std::vector<double> angles;
  std::vector<Vec> line_reps;
  for (const auto& f : family.functionals) {
    const Vec u = kernel_element(f);
    diagram.kernel_directions.push_back({u});
    bool seen = false;
    for (const auto& r : line_reps) seen = seen || proportionality(r, u) != Proportionality::None;
    if (seen) continue;
    line_reps.push_back(u);
    for (double sgn : {1.0, -1.0}) {
      double a = std::atan2(sgn * u[1], sgn * u[0]);
      if (a < 0) a += 2.0 * std::numbers::pi;
      angles.push_back(a);
    }
  }
  std::sort(angles.begin(), angles.end());
  for (std::size_t r = 0; r < angles.size(); ++r) {
    const double a0 = angles[r];
    const double a1 = r + 1 < angles.size() ? angles[r + 1] : angles.front() + 2.0 * std::numbers::pi;
    const double mid = 0.5 * (a0 + a1);
    Vec p{std::cos(mid), std::sin(mid)};
    diagram.chambers.push_back({sign_vector(family, p), p});
  }
  return diagram;
}

ChamberDiagram chamber_diagram_general(const FunctionalFamily& family) {
  require_nonzero(family);
  const std::size_t m = family.size();
  const std::size_t k = family.rank();
  if (m > 16) throw Error(ErrorKind::Unsupported, "chamber enumeration supports at most 16 functionals");
  ChamberDiagram diagram;
  diagram.rank = k;
  std::vector<Vec> normals;
  for (const auto& f : family.functionals) {
    normals.push_back(normalized(f.coeffs));
    diagram.kernel_directions.push_back(kernel_basis(f.coeffs));
  }

  // Subsets of size <= k, enumerated once.
  std::vector<std::vector<std::size_t>> subsets;
  for (unsigned mask = 1; mask < (1U << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > k) continue;
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < m; ++j)
      if (mask & (1U << j)) s.push_back(j);
    subsets.push_back(std::move(s));
  }

  for (unsigned signs = 0; signs < (1U << m); ++signs) {
    std::vector<Eigen::VectorXd> a(m, Eigen::VectorXd(static_cast<Eigen::Index>(k)));
    for (std::size_t j = 0; j < m; ++j) {
      const double s = (signs & (1U << j)) ? -1.0 : 1.0;
      for (std::size_t t = 0; t < k; ++t) a[j](static_cast<Eigen::Index>(t)) = s * normals[j][t];
    }
    double best_margin = 0.0;
    Eigen::VectorXd best;
    for (const auto& s : subsets) {
      const Eigen::Index r = static_cast<Eigen::Index>(s.size());
      // min |sum w_i a_i|^2 subject to sum w_i = 1
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(r + 1, r + 1);
      for (Eigen::Index x = 0; x < r; ++x) {
        for (Eigen::Index y = 0; y < r; ++y) kkt(x, y) = a[s[x]].dot(a[s[y]]);
        kkt(x, r) = 1.0;
        kkt(r, x) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r + 1);
      rhs(r) = 1.0;
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd w = lu.solve(rhs);
      if (w.head(r).minCoeff() < -1e-12) continue;
      Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
      for (Eigen::Index x = 0; x < r; ++x) z += w(x) * a[s[x]];
      const double nz = z.norm();
      if (nz < 1e-12) continue;
      z /= nz;
      double margin = std::numeric_limits<double>::infinity();
      for (const auto& aj : a) margin = std::min(margin, aj.dot(z));
      if (margin > 1e-12 && margin > best_margin) {
        best_margin = margin;
        best = z;
      }
    }
    if (best.size() == 0) continue;
    Vec p(best.data(), best.data() + best.size());
    diagram.chambers.push_back({sign_vector(family, p), p});
  }
  return diagram;
}

ChamberDiagram chamber_diagram(const FunctionalFamily& family) {
  if (family.rank() == 2) return chamber_diagram_angular(family);
  if (family.rank() < 2) throw Error(ErrorKind::Unsupported, "chamber diagrams need rank >= 2");
  return chamber_diagram_general(family);
}

CoarseStructure coarse_classes(const FunctionalFamily& family) {
  CoarseStructure out;
  std::ptrdiff_t zero_class = -1;
  for (std::size_t j = 0; j < family.size(); ++j) {
    const auto& f = family.functionals[j];
    if (f.is_zero()) {
      if (zero_class < 0) {
        zero_class = static_cast<std::ptrdiff_t>(out.classes.size());
        out.classes.push_back({{}, f, true});
      }
      out.classes[static_cast<std::size_t>(zero_class)].members.push_back(j);
      continue;
    }
    bool placed = false;
    for (auto& c : out.classes) {
      if (c.zero) continue;
      if (proportionality(c.representative.coeffs, f.coeffs) == Proportionality::Positive) {
        c.members.push_back(j);
        placed = true;
        break;
      }
    }
    if (!placed) out.classes.push_back({{j}, f, false});
  }
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b)
      if (proportionality(family.functionals[a].coeffs, family.functionals[b].coeffs) ==
          Proportionality::Negative)
        out.negative_pairs.emplace_back(a, b);
  return out;
}

Splitting invariant_splitting(const FunctionalFamily& family, const Vec& n) {
  if (n.size() != family.rank()) throw Error(ErrorKind::DimensionMismatch, "invariant_splitting: rank mismatch");
  const double nn = norm(n);
  if (nn == 0.0) throw Error(ErrorKind::Domain, "invariant_splitting: n must be nonzero");
  Splitting s;
  for (std::size_t j = 0; j < family.size(); ++j) {
    const auto& f = family.functionals[j];
    const double v = f(n);
    if (std::abs(v) <= kNeutralTolerance * f.norm() * nn) {
      s.neutral.push_back(j);
    } else if (v > 0) {
      s.unstable.push_back(j);
    } else {
      s.stable.push_back(j);
    }
  }
  return s;
}

}  // namespace cartanlab
