#include "cartanlab/toral_actions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace cartanlab {

namespace {

std::string default_label(std::size_t g) {
  static const char* names[] = {"A", "B", "C", "D", "E", "F"};
  return g < 6 ? names[g] : "G" + std::to_string(g + 1);
}

// Exponent vectors with max-norm r whose first nonzero entry is positive, in
// lexicographic order.
std::vector<std::vector<long>> canonical_shell(std::size_t k, long r) {
  std::vector<std::vector<long>> out;
  std::vector<long> v(k, -r);
  while (true) {
    long maxabs = 0;
    long first = 0;
    for (long x : v) {
      maxabs = std::max(maxabs, std::labs(x));
      if (first == 0) first = x;
    }
    if (maxabs == r && first > 0) out.push_back(v);
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (v[pos] < r) {
        ++v[pos];
        for (std::size_t t = pos + 1; t < k; ++t) v[t] = -r;
        break;
      }
      if (pos == 0) return out;
    }
    if (k == 0) return out;
  }
}

std::map<std::uint64_t, int> factorize(std::uint64_t n) {
  std::map<std::uint64_t, int> f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  }
  if (n > 1) ++f[n];
  return f;
}

mpq_class frac(const mpq_class& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - fl;
}

double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

}  // namespace

CartanActionSpec make_cartan_spec(std::vector<IntMatrix> generators, std::vector<std::string> labels,
                                  const FrameOptions& options) {
  CartanActionSpec spec;
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const mpz_class det = determinant(generators[g]);
    if (det != 1 && det != -1) {
      throw Error(ErrorKind::Domain, "generator " + std::to_string(g) + " is not unimodular (det = " +
                                         det.get_str() + ")");
    }
  }
  if (labels.empty()) {
    for (std::size_t g = 0; g < generators.size(); ++g) labels.push_back(default_label(g));
  }
  if (labels.size() != generators.size()) {
    throw Error(ErrorKind::Schema, "labels and generators differ in length");
  }
  spec.spectral = real_spectrum_and_frame(generators, options);
  spec.family = functionals_from_action(spec.spectral);
  spec.generators = std::move(generators);
  spec.labels = std::move(labels);
  return spec;
}

ValidationReport validate_cartan(const std::vector<IntMatrix>& generators, long bound) {
  ValidationReport report;
  report.bound = bound;
  if (generators.empty()) {
    report.diagnostics.push_back("no generators");
    return report;
  }
  const std::size_t k = generators.size();
  const std::size_t d = generators.front().dim();
  for (const auto& g : generators) {
    if (g.dim() != d) {
      report.diagnostics.push_back("generators have different dimensions");
      return report;
    }
  }

  bool unimodular = true;
  report.det_one = true;
  for (std::size_t g = 0; g < k; ++g) {
    const mpz_class det = determinant(generators[g]);
    if (det != 1) {
      report.det_one = false;
      report.diagnostics.push_back("det " + default_label(g) + " = " + det.get_str());
    }
    unimodular = unimodular && (det == 1 || det == -1);
  }

  report.commuting = true;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (!commute(generators[a], generators[b])) {
        report.commuting = false;
        report.diagnostics.push_back(default_label(a) + " and " + default_label(b) + " do not commute");
      }
    }
  }

  report.distinct_real_spectra = true;
  report.irreducible_char_polys = true;
  for (std::size_t g = 0; g < k; ++g) {
    const CharPoly p = char_poly(generators[g]);
    const RootCount rc = count_real_roots(p);
    if (!rc.squarefree || rc.distinct_real != p.degree()) {
      report.distinct_real_spectra = false;
      report.diagnostics.push_back("char poly of " + default_label(g) + " (" + p.to_string() + ") has " +
                                   std::to_string(rc.distinct_real) + " distinct real roots" +
                                   (rc.squarefree ? "" : ", repeated roots"));
    }
    try {
      if (!is_irreducible_over_q(p)) {
        report.irreducible_char_polys = false;
        report.diagnostics.push_back("char poly of " + default_label(g) + " (" + p.to_string() +
                                     ") factors over Q");
      }
    } catch (const Error& e) {
      report.irreducible_char_polys = false;
      report.diagnostics.push_back(std::string("irreducibility of ") + default_label(g) + ": " + e.what());
    }
  }

  // Exact relation search over 0 < max|n_i| <= bound.
  bool relation_free = unimodular;
  if (!unimodular) {
    report.diagnostics.push_back("relation search needs unimodular generators");
  } else {
    std::vector<std::vector<IntMatrix>> powers(k);
    for (std::size_t g = 0; g < k; ++g) {
      const IntMatrix inv = unimodular_inverse(generators[g]);
      std::vector<IntMatrix> row(static_cast<std::size_t>(2 * bound + 1));
      row[static_cast<std::size_t>(bound)] = IntMatrix::identity(d);
      for (long e = 1; e <= bound; ++e) {
        row[static_cast<std::size_t>(bound + e)] = row[static_cast<std::size_t>(bound + e - 1)] * generators[g];
        row[static_cast<std::size_t>(bound - e)] = row[static_cast<std::size_t>(bound - e + 1)] * inv;
      }
      powers[g] = std::move(row);
    }
    for (long r = 1; r <= bound && relation_free; ++r) {
      for (const auto& n : canonical_shell(k, r)) {
        IntMatrix prod = powers[0][static_cast<std::size_t>(bound + n[0])];
        for (std::size_t g = 1; g < k; ++g) prod = prod * powers[g][static_cast<std::size_t>(bound + n[g])];
        if (prod.is_identity()) {
          relation_free = false;
          report.relation = n;
          std::ostringstream os;
          os << "relation found: exponents (";
          for (std::size_t g = 0; g < k; ++g) os << (g ? ", " : "") << n[g];
          os << ") give the identity";
          report.diagnostics.push_back(os.str());
          break;
        }
      }
    }
  }

  // Log-eigenvalue independence and hyperbolic elements need the joint frame.
  bool log_independent = false;
  if (report.commuting && report.distinct_real_spectra) {
    try {
      const SpectralData data = real_spectrum_and_frame(generators);
      const FunctionalFamily fam = functionals_from_action(data);
      Eigen::MatrixXd logs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t g = 0; g < k; ++g)
          logs(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(j)) = fam.functionals[j].coeffs[g];
      Eigen::FullPivLU<Eigen::MatrixXd> lu(logs);
      lu.setThreshold(1e-9);
      log_independent = lu.rank() == static_cast<Eigen::Index>(k);
      if (!log_independent) report.diagnostics.push_back("log-eigenvalue vectors are linearly dependent");

      // Anosov: some small n with every lambda^j(n) != 0.
      for (long r = 1; r <= 2 && !report.anosov_elements_exist; ++r) {
        for (const auto& n : canonical_shell(k, r)) {
          Vec nv(n.begin(), n.end());
          if (invariant_splitting(fam, nv).neutral.empty()) {
            report.anosov_elements_exist = true;
            break;
          }
        }
      }
      if (!report.anosov_elements_exist) report.diagnostics.push_back("no hyperbolic element with |n| <= 2");
    } catch (const Error& e) {
      report.diagnostics.push_back(std::string("spectral analysis failed: ") + e.what());
    }
  } else {
    report.diagnostics.push_back("log-eigenvalue and hyperbolicity checks skipped");
  }
  report.genuine = relation_free && log_independent;
  return report;
}

IntMatrix element(const std::vector<IntMatrix>& generators, const std::vector<long>& n) {
  if (n.size() != generators.size()) {
    throw Error(ErrorKind::DimensionMismatch, "element: exponent vector has wrong length");
  }
  IntMatrix out = IntMatrix::identity(generators.empty() ? 0 : generators.front().dim());
  for (std::size_t g = 0; g < generators.size(); ++g) out = out * power(generators[g], n[g]);
  return out;
}

IntMatrix element(const CartanActionSpec& spec, const std::vector<long>& n) {
  return element(spec.generators, n);
}

double lebesgue_entropy(const FunctionalFamily& family, const Vec& n) {
  if (n.size() != family.rank()) throw Error(ErrorKind::DimensionMismatch, "lebesgue_entropy: rank mismatch");
  if (std::all_of(n.begin(), n.end(), [](double x) { return x == 0.0; })) {
    throw Error(ErrorKind::Domain, "lebesgue_entropy: n must be nonzero");
  }
  double h = 0.0;
  for (std::size_t j = 0; j < family.size(); ++j) {
    const double v = family.functionals[j](n);
    if (v > 0) h += family.multiplicities[j] * v;
  }
  return h;
}

double lebesgue_entropy(const CartanActionSpec& spec, const Vec& n) {
  return lebesgue_entropy(spec.family, n);
}

TorusPoint TorusPoint::rational(std::vector<mpq_class> coords) {
  TorusPoint p;
  p.mode = Mode::Rational;
  for (auto& c : coords) {
    c.canonicalize();
    p.exact.push_back(frac(c));
  }
  return p;
}

TorusPoint TorusPoint::floating(std::vector<double> coords) {
  TorusPoint p;
  p.mode = Mode::Float;
  for (double c : coords) p.coords.push_back(frac(c));
  return p;
}

std::vector<double> TorusPoint::as_double() const {
  if (mode == Mode::Float) return coords;
  std::vector<double> out;
  for (const auto& c : exact) out.push_back(c.get_d());
  return out;
}

bool operator==(const TorusPoint& a, const TorusPoint& b) {
  return a.mode == b.mode && a.exact == b.exact && a.coords == b.coords;
}

OrbitResult orbit(const IntMatrix& map, const TorusPoint& x, std::size_t steps,
                  std::uint64_t denominator_cap) {
  if (map.dim() != x.dim()) throw Error(ErrorKind::DimensionMismatch, "orbit: dimension mismatch");
  const std::size_t d = map.dim();
  OrbitResult out;
  if (steps == 0) return out;

  if (x.mode == TorusPoint::Mode::Float) {
    const Eigen::MatrixXd m = to_eigen(map);
    Eigen::VectorXd v(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i)) = x.coords[i];
    out.points.push_back(x);
    while (out.points.size() < steps) {
      Eigen::VectorXd w = m * v;
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = frac(w(i));
      v = w;
      out.points.push_back(TorusPoint::floating(std::vector<double>(v.data(), v.data() + v.size())));
    }
    return out;
  }

  auto check_cap = [&](const std::vector<mpq_class>& p) {
    mpz_class l = 1;
    for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    if (l > denominator_cap) {
      throw Error(ErrorKind::Overflow, "orbit: common denominator " + l.get_str() + " exceeds cap " +
                                           std::to_string(denominator_cap));
    }
  };
  check_cap(x.exact);

  std::map<std::vector<mpq_class>, std::size_t> seen;
  std::vector<mpq_class> cur = x.exact;
  while (out.points.size() < steps) {
    auto [it, inserted] = seen.emplace(cur, out.points.size());
    if (!inserted) {
      out.preperiod = it->second;
      out.period = out.points.size() - it->second;
      return out;
    }
    out.points.push_back(TorusPoint::rational(cur));
    std::vector<mpq_class> next(d);
    for (std::size_t i = 0; i < d; ++i) {
      mpq_class acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += mpq_class(map(i, j)) * cur[j];
      next[i] = frac(acc);
    }
    check_cap(next);
    cur = std::move(next);
  }
  if (seen.count(cur)) {
    out.preperiod = seen[cur];
    out.period = out.points.size() - seen[cur];
  }
  return out;
}

bool multiplicatively_independent(std::uint64_t a, std::uint64_t b) {
  if (a < 2 || b < 2) throw Error(ErrorKind::Domain, "multiplicatively_independent: inputs must be >= 2");
  const auto fa = factorize(a);
  const auto fb = factorize(b);
  if (fa.size() != fb.size()) return true;
  // a = c^p, b = c^q iff the exponent vectors are proportional on a common support.
  auto ia = fa.begin();
  auto ib = fb.begin();
  const long pa = ia->second;
  const long pb = ib->second;
  for (; ia != fa.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return true;
    if (static_cast<long>(ia->second) * pb != static_cast<long>(ib->second) * pa) return true;
  }
  return false;
}

std::vector<std::uint64_t> furstenberg_rational_orbit(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  if (q == 0) throw Error(ErrorKind::Domain, "furstenberg_rational_orbit: q must be >= 1");
  std::set<std::uint64_t> seen{1 % q};
  std::deque<std::uint64_t> queue{1 % q};
  while (!queue.empty()) {
    const std::uint64_t r = queue.front();
    queue.pop_front();
    for (std::uint64_t m : {a, b}) {
      const std::uint64_t next = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * m) % q);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::uint64_t> semigroup_elements(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
  if (a < 2 || b < 2) throw Error(ErrorKind::Domain, "semigroup_elements: bases must be >= 2");
  std::vector<std::uint64_t> s;
  for (std::uint64_t pa = 1;;) {
    for (std::uint64_t pb = pa;;) {
      s.push_back(pb);
      if (pb > limit / b) break;
      pb *= b;
    }
    if (pa > limit / a) break;
    pa *= a;
  }
  std::erase_if(s, [limit](std::uint64_t v) { return v > limit; });
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

RatioWindow ratio_window(const std::vector<std::uint64_t>& products, double lo, double hi) {
  RatioWindow w{lo, hi, 0.0, 0};
  for (std::size_t k = 0; k + 1 < products.size(); ++k) {
    const double s0 = static_cast<double>(products[k]);
    const double s1 = static_cast<double>(products[k + 1]);
    if (s0 >= lo && s1 <= hi) {
      w.max_ratio = std::max(w.max_ratio, s1 / s0);
      ++w.pairs;
    }
  }
  return w;
}

FurstenbergProfile gap_ratio_profile(std::uint64_t a, std::uint64_t b, std::uint64_t limit,
                                     std::optional<double> x) {
  if (!multiplicatively_independent(a, b)) {
    throw Error(ErrorKind::Dependent, "gap_ratio_profile: " + std::to_string(a) + " and " +
                                          std::to_string(b) + " are powers of a common integer");
  }
  if (limit < a * b) throw Error(ErrorKind::Domain, "gap_ratio_profile: limit must be >= a*b");
  FurstenbergProfile prof;
  prof.a = a;
  prof.b = b;
  prof.limit = limit;
  prof.products = semigroup_elements(a, b, limit);
  for (std::size_t k = 0; k + 1 < prof.products.size(); ++k) {
    prof.ratios.push_back(static_cast<double>(prof.products[k + 1]) / static_cast<double>(prof.products[k]));
  }
  for (double lo = 1.0; lo < static_cast<double>(limit); lo *= 10.0) {
    const double hi = std::min(lo * 10.0, static_cast<double>(limit));
    prof.windows.push_back(ratio_window(prof.products, lo, hi));
  }
  prof.trend_non_increasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& w : prof.windows) {
    if (w.lo < 1e3 || w.pairs == 0) continue;
    if (w.max_ratio > prev) prof.trend_non_increasing = false;
    prev = w.max_ratio;
  }
  if (x) {
    for (std::uint64_t n = 10; n <= limit; n *= 10) {
      if (n >= a) prof.orbit_gaps.emplace_back(n, density_profile(a, b, *x, n));
      if (n > limit / 10) break;
    }
  }
  return prof;
}

double density_profile(std::uint64_t a, std::uint64_t b, double x, std::uint64_t limit) {
  if (!multiplicatively_independent(a, b)) {
    throw Error(ErrorKind::Dependent, "density_profile: bases are multiplicatively dependent");
  }
  const auto s = semigroup_elements(a, b, limit);
  std::vector<double> pts;
  pts.reserve(s.size());
  for (std::uint64_t v : s) pts.push_back(frac(static_cast<double>(v) * x));
  std::sort(pts.begin(), pts.end());
  double gap = 1.0 - pts.back() + pts.front();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) gap = std::max(gap, pts[i + 1] - pts[i]);
  return gap;
}

}  // namespace cartanlab
