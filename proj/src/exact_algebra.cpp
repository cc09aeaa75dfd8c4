#include "cartanlab/exact_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace cartanlab {

namespace {

using QPoly = std::vector<mpq_class>;  // ascending coefficients

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly to_qpoly(const CharPoly& p) {
  QPoly q(p.coeffs.begin(), p.coeffs.end());
  trim(q);
  return q;
}

QPoly derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

QPoly remainder(QPoly a, const QPoly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    const mpq_class factor = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= factor * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

mpq_class eval(const QPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<QPoly> sturm_sequence(const QPoly& p) {
  std::vector<QPoly> seq{p, derivative(p)};
  while (seq.back().size() > 1) {
    QPoly r = remainder(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(std::move(r));
  }
  return seq;
}

int sign_variations(const std::vector<QPoly>& seq, const mpq_class& x) {
  int variations = 0;
  int last = 0;
  for (const auto& poly : seq) {
    const int s = sgn(eval(poly, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

mpq_class cauchy_bound(const QPoly& p) {
  mpq_class m = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    mpq_class a = abs(p[i] / p.back());
    if (a > m) m = a;
  }
  return m + 1;
}

// A split point strictly inside (lo, hi) that is not a root of p.
mpq_class split_point(const QPoly& p, const mpq_class& lo, const mpq_class& hi) {
  static const int fractions[][2] = {{1, 2}, {5, 11}, {6, 13}, {7, 15}, {8, 17}, {9, 19}};
  for (const auto& f : fractions) {
    mpq_class m = lo + (hi - lo) * mpq_class(f[0], f[1]);
    m.canonicalize();
    if (eval(p, m) != 0) return m;
  }
  throw Error(ErrorKind::Domain, "split_point: too many rational roots in interval");
}

double newton_midpoint(const CharPoly& p, const RootInterval& r) {
  const mpq_class mid_q = (r.lo + r.hi) / 2;
  double mid = mid_q.get_d();
  const double dp = p.derivative(mid);
  if (dp != 0.0 && std::isfinite(dp)) {
    const double next = mid - p.eval(mid) / dp;
    if (next >= r.lo.get_d() && next <= r.hi.get_d()) mid = next;
  }
  return mid;
}

Eigen::VectorXd inverse_iterate(const Eigen::MatrixXd& m, double mu, Eigen::VectorXd v, int steps) {
  const std::size_t n = static_cast<std::size_t>(m.rows());
  const double shift = mu + 1e-10 * std::max(1.0, std::abs(mu));
  const Eigen::MatrixXd shifted = m - shift * Eigen::MatrixXd::Identity(n, n);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd w = lu.solve(v);
    const double norm = w.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) break;
    v = w / norm;
  }
  return v;
}

void normalize_column_sign(Eigen::Ref<Eigen::VectorXd> v) {
  v.normalize();
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
}

double offdiag_max(const Eigen::MatrixXd& d) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if (i != j) m = std::max(m, std::abs(d(i, j)));
  return m;
}

std::vector<double> frame_residuals(const Eigen::MatrixXd& q, const Eigen::MatrixXd& qinv,
                                    const std::vector<Eigen::MatrixXd>& gens) {
  std::vector<double> out;
  for (const auto& m : gens) out.push_back(offdiag_max(qinv * m * q));
  return out;
}

std::vector<Eigen::MatrixXd> to_eigen_all(const std::vector<IntMatrix>& gens) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& g : gens) out.push_back(to_eigen(g));
  return out;
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& q) {
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(q);
  if (!lu.isInvertible()) throw Error(ErrorKind::Singular, "joint eigenframe is singular");
  return lu.inverse();
}

}  // namespace

mpq_class CharPoly::operator()(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double CharPoly::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

double CharPoly::derivative(double x) const {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * x + coeffs[i].get_d() * static_cast<double>(i);
  return acc;
}

mpz_class CharPoly::determinant() const {
  return degree() % 2 == 0 ? coeffs.front() : mpz_class(-coeffs.front());
}

std::string CharPoly::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const mpz_class mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1 || i == 0) os << mag.get_str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

CharPoly char_poly(const IntMatrix& m) {
  const std::size_t n = m.dim();
  CharPoly p;
  p.coeffs.assign(n + 1, mpz_class(0));
  p.coeffs[n] = 1;
  IntMatrix mk(n);  // M_0 = 0
  const IntMatrix id = IntMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix shifted = mk;
    const mpz_class& c = p.coeffs[n - k + 1];
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c;
    mk = m * shifted;
    mpz_class tr = -mk.trace();
    mpz_class q;
    mpz_divexact_ui(q.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
    p.coeffs[n - k] = q;
  }
  return p;
}

bool is_irreducible_over_q(const CharPoly& p) {
  const int deg = p.degree();
  if (deg > 4) {
    throw Error(ErrorKind::UnsupportedDegree,
                "irreducibility test supports degree <= 4, got " + std::to_string(deg));
  }
  if (deg <= 0) return false;
  if (deg == 1) return true;
  const mpz_class& c0 = p.coeffs[0];
  if (c0 == 0) return false;

  // Monic with integer coefficients: rational roots are integer divisors of c0.
  const mpz_class bound = abs(c0);
  std::vector<mpz_class> divisors;
  if (bound.fits_ulong_p() && bound.get_ui() <= 1000000UL) {
    for (unsigned long d = 1; d <= bound.get_ui(); ++d)
      if (bound.get_ui() % d == 0) divisors.emplace_back(d);
  } else {
    throw Error(ErrorKind::Unsupported, "constant term too large for divisor enumeration");
  }
  for (const auto& d : divisors) {
    if (p(mpq_class(d)) == 0 || p(mpq_class(-d)) == 0) return false;
  }
  if (deg <= 3) return true;

  // (x^2 + a x + b)(x^2 + c x + e) with b e = c0, a + c = c3, ac + b + e = c2, ae + bc = c1.
  const mpz_class& c1 = p.coeffs[1];
  const mpz_class& c2 = p.coeffs[2];
  const mpz_class& c3 = p.coeffs[3];
  for (const auto& d : divisors) {
    for (int sign : {1, -1}) {
      const mpz_class b = sign * d;
      const mpz_class e = c0 / b;
      std::vector<mpz_class> a_candidates;
      if (b != e) {
        // a (e - b) = c1 - b c3
        const mpz_class num = c1 - b * c3;
        const mpz_class den = e - b;
        if (num % den == 0) a_candidates.push_back(num / den);
      } else {
        if (c1 != b * c3) continue;
        // a^2 - c3 a + (c2 - 2b) = 0
        const mpz_class disc = c3 * c3 - 4 * (c2 - 2 * b);
        if (disc < 0) continue;
        const mpz_class r = sqrt(disc);
        if (r * r != disc) continue;
        for (const mpz_class& root : {mpz_class(c3 + r), mpz_class(c3 - r)})
          if (root % 2 == 0) a_candidates.push_back(root / 2);
      }
      for (const auto& a : a_candidates) {
        const mpz_class c = c3 - a;
        if (a * c + b + e == c2 && a * e + b * c == c1) return false;
      }
    }
  }
  return true;
}

std::vector<double> RealSpectrum::values() const {
  std::vector<double> v;
  for (const auto& r : roots) v.push_back(r.mid);
  return v;
}

RootCount count_real_roots(const CharPoly& p) {
  const QPoly q = to_qpoly(p);
  RootCount rc;
  if (q.size() <= 1) return rc;
  const auto seq = sturm_sequence(q);
  rc.squarefree = seq.back().size() == 1;
  const mpq_class b = cauchy_bound(q);
  rc.distinct_real = sign_variations(seq, -b) - sign_variations(seq, b);
  return rc;
}

RealSpectrum isolate_real_roots(const CharPoly& p, double width) {
  const QPoly q = to_qpoly(p);
  const int deg = p.degree();
  RealSpectrum spec;
  spec.poly = p;
  if (deg <= 0) return spec;

  const auto seq = sturm_sequence(q);
  const bool squarefree = seq.back().size() == 1;
  const mpq_class b = cauchy_bound(q);
  const int total = sign_variations(seq, -b) - sign_variations(seq, b);
  if (!squarefree || total != deg) {
    throw Error(ErrorKind::NotRealSplit,
                "characteristic polynomial " + p.to_string() + " has " + std::to_string(total) +
                    " distinct real roots, expected " + std::to_string(deg) +
                    (squarefree ? "" : " (repeated roots)"));
  }

  // Sturm bisection down to one root per interval.
  std::vector<std::pair<mpq_class, mpq_class>> pending{{-b, b}};
  std::vector<std::pair<mpq_class, mpq_class>> isolated;
  while (!pending.empty()) {
    auto [lo, hi] = pending.back();
    pending.pop_back();
    const int count = sign_variations(seq, lo) - sign_variations(seq, hi);
    if (count == 0) continue;
    if (count == 1) {
      isolated.emplace_back(lo, hi);
      continue;
    }
    const mpq_class mid = split_point(q, lo, hi);
    pending.emplace_back(lo, mid);
    pending.emplace_back(mid, hi);
  }

  mpq_class target(1);
  {
    // width as an exact rational 1/round(1/width)
    mpz_class inv(static_cast<long>(std::llround(1.0 / width)));
    target = mpq_class(1, 1) / mpq_class(inv);
  }

  for (auto& [lo, hi] : isolated) {
    int sign_lo = sgn(eval(q, lo));
    while (hi - lo > target) {
      mpq_class mid = (lo + hi) / 2;
      const int s = sgn(eval(q, mid));
      if (s == 0) {
        const mpq_class quarter = (hi - lo) / 4;
        lo = mid - quarter;
        hi = mid + quarter;
        sign_lo = sgn(eval(q, lo));
        continue;
      }
      if (s == sign_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    RootInterval r{lo, hi, 0.0};
    r.mid = newton_midpoint(p, r);
    spec.roots.push_back(std::move(r));
  }
  std::sort(spec.roots.begin(), spec.roots.end(),
            [](const RootInterval& x, const RootInterval& y) { return x.lo > y.lo; });
  spec.multiplicities.assign(spec.roots.size(), 1);
  return spec;
}

double JointEigenframe::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

double SpectralData::eigenvalue(std::size_t g, std::size_t j) const {
  return spectra.at(g).roots.at(frame.pairing.at(g).at(j)).mid;
}

JointEigenframe refine_frame(const JointEigenframe& frame, const std::vector<IntMatrix>& generators,
                             const std::vector<RealSpectrum>& spectra) {
  const auto gens = to_eigen_all(generators);
  const Eigen::Index d = frame.q.cols();
  Eigen::MatrixXd q = frame.q;
  for (Eigen::Index j = 0; j < d; ++j) {
    auto column_residual = [&](const Eigen::VectorXd& v) {
      double worst = 0.0;
      for (std::size_t g = 0; g < gens.size(); ++g) {
        const double chi = spectra[g].roots[frame.pairing[g][static_cast<std::size_t>(j)]].mid;
        worst = std::max(worst, (gens[g] * v - chi * v).norm());
      }
      return worst;
    };
    Eigen::VectorXd best = q.col(j);
    double best_res = column_residual(best);
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const double chi = spectra[g].roots[frame.pairing[g][static_cast<std::size_t>(j)]].mid;
      Eigen::VectorXd cand = inverse_iterate(gens[g], chi, q.col(j), 1);
      normalize_column_sign(cand);
      const double res = column_residual(cand);
      if (res < best_res) {
        best = cand;
        best_res = res;
      }
    }
    q.col(j) = best;
  }
  JointEigenframe out = frame;
  out.q = q;
  out.qinv = checked_inverse(q);
  out.residuals = frame_residuals(out.q, out.qinv, gens);
  if (out.max_residual() > frame.max_residual()) return frame;
  return out;
}

SpectralData real_spectrum_and_frame(const std::vector<IntMatrix>& generators,
                                     const FrameOptions& options) {
  if (generators.empty()) throw Error(ErrorKind::Domain, "no generators given");
  const std::size_t d = generators.front().dim();
  for (const auto& g : generators) {
    if (g.dim() != d) throw Error(ErrorKind::DimensionMismatch, "generators have different dimensions");
  }
  for (std::size_t a = 0; a < generators.size(); ++a) {
    for (std::size_t b = a + 1; b < generators.size(); ++b) {
      if (!commute(generators[a], generators[b])) {
        throw Error(ErrorKind::NotCommuting, "generators " + std::to_string(a) + " and " +
                                                 std::to_string(b) + " do not commute");
      }
    }
  }

  SpectralData out;
  for (const auto& g : generators) out.spectra.push_back(isolate_real_roots(char_poly(g)));

  // Seed the frame with the generator whose spectrum is best separated.
  std::size_t seed = 0;
  double best_sep = -1.0;
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto vals = out.spectra[g].values();
    double scale = 0.0;
    for (double v : vals) scale = std::max(scale, std::abs(v));
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) gap = std::min(gap, vals[i] - vals[i + 1]);
    const double sep = vals.size() < 2 ? 1.0 : gap / std::max(scale, 1.0);
    if (sep > best_sep) {
      best_sep = sep;
      seed = g;
    }
  }

  const auto gens = to_eigen_all(generators);
  const Eigen::Index n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd q(n, n);
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start(i) = 1.0 + 0.1 * static_cast<double>(i) + 0.01 * static_cast<double>(i * i);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mu = out.spectra[seed].roots[static_cast<std::size_t>(j)].mid;
    Eigen::VectorXd v = inverse_iterate(gens[seed], mu, start, 3);
    normalize_column_sign(v);
    q.col(j) = v;
  }

  JointEigenframe& frame = out.frame;
  frame.q = q;
  frame.qinv = checked_inverse(q);
  frame.pairing.resize(generators.size());
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const Eigen::MatrixXd diag = frame.qinv * gens[g] * frame.q;
    std::vector<bool> used(d, false);
    for (std::size_t j = 0; j < d; ++j) {
      const double rq = diag(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < d; ++r) {
        const double dist = std::abs(out.spectra[g].roots[r].mid - rq);
        if (dist < best_dist) {
          best_dist = dist;
          best = r;
        }
      }
      if (used[best]) {
        throw Error(ErrorKind::NotRealSplit,
                    "eigenvalue pairing for generator " + std::to_string(g) + " is ambiguous");
      }
      used[best] = true;
      frame.pairing[g].push_back(best);
    }
  }
  // Column j carries the j-th largest eigenvalue of the first generator.
  {
    std::vector<std::size_t> col_of(d);
    for (std::size_t j = 0; j < d; ++j) col_of[frame.pairing[0][j]] = j;
    Eigen::MatrixXd q2(n, n);
    std::vector<std::vector<std::size_t>> pairing2(generators.size(), std::vector<std::size_t>(d));
    for (std::size_t j = 0; j < d; ++j) {
      q2.col(static_cast<Eigen::Index>(j)) = frame.q.col(static_cast<Eigen::Index>(col_of[j]));
      for (std::size_t g = 0; g < generators.size(); ++g) pairing2[g][j] = frame.pairing[g][col_of[j]];
    }
    frame.q = q2;
    frame.qinv = checked_inverse(q2);
    frame.pairing = std::move(pairing2);
  }
  frame.residuals = frame_residuals(frame.q, frame.qinv, gens);
  for (int pass = 0; pass < options.refinement_passes; ++pass) {
    frame = refine_frame(frame, generators, out.spectra);
  }
  if (frame.max_residual() > options.tolerance) {
    std::ostringstream os;
    os << "joint eigenframe residual " << frame.max_residual() << " exceeds tolerance "
       << options.tolerance;
    throw Error(ErrorKind::Tolerance, os.str());
  }
  return out;
}

}  // namespace cartanlab
