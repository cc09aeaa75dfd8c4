#include "cartanlab/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cartanlab/parallel.hpp"
#include "cartanlab/random.hpp"

namespace cartanlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double wrap01(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

double torus_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

/// Digits needed so that the truncated base-b expansion is exact in a double.
std::size_t guard_digits(std::uint64_t base) {
  return static_cast<std::size_t>(std::ceil(53.0 / std::log2(static_cast<double>(base)))) + 2;
}

/// x_i = (d_i + x_{i+1}) / b, evaluated from the tail; keeps the first n.
std::vector<double> from_digits(const std::vector<std::uint32_t>& digits, std::uint64_t base, std::size_t n) {
  std::vector<double> xs(digits.size() + 1, 0.0);
  const double b = static_cast<double>(base);
  for (std::size_t i = digits.size(); i-- > 0;) {
    double x = (static_cast<double>(digits[i]) + xs[i + 1]) / b;
    if (x >= 1.0) x = std::nextafter(1.0, 0.0);
    xs[i] = x;
  }
  xs.resize(n);
  return xs;
}

std::vector<double> normalized_weights(std::uint64_t base, const std::vector<double>& weights) {
  if (weights.empty()) return std::vector<double>(base, 1.0 / static_cast<double>(base));
  if (weights.size() != base) throw Error(ErrorKind::DimensionMismatch, "digit weights must have one entry per digit");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorKind::Domain, "digit weights must be non-negative");
    total += w;
  }
  if (total <= 0.0) throw Error(ErrorKind::Domain, "digit weights sum to zero");
  std::vector<double> out(weights);
  for (double& w : out) w /= total;
  return out;
}

std::uint32_t draw_digit(Rng& rng, const std::vector<double>& cumulative) {
  const double u = unit_double(rng);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<std::uint32_t>(std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                                          cumulative.size() - 1));
}

std::vector<double> cumulative_of(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  std::partial_sum(w.begin(), w.end(), c.begin());
  return c;
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

std::uint64_t nth_prime(std::size_t k) {
  static const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (k >= std::size(primes)) throw Error(ErrorKind::Unsupported, "Halton sampling supports up to 12 dimensions");
  return primes[k];
}

double op_norm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx == 0.0 ? 0.0 : sxy / sxx;
}

}  // namespace

std::size_t map_dim(const MapDescriptor& map) {
  return std::visit(overloaded{[](const CircleMultiplier&) -> std::size_t { return 1; },
                               [](const ToralAutomorphism& t) -> std::size_t { return t.matrix.dim(); },
                               [](const IdentityMap& m) -> std::size_t { return m.dim; }},
                    map);
}

std::string map_name(const MapDescriptor& map) {
  return std::visit(overloaded{[](const CircleMultiplier& c) { return "x" + std::to_string(c.base); },
                               [](const ToralAutomorphism& t) { return "toral(" + std::to_string(t.matrix.dim()) + ")"; },
                               [](const IdentityMap& m) { return "identity(" + std::to_string(m.dim) + ")"; }},
                    map);
}

void apply_map(const MapDescriptor& map, const double* x, double* out) {
  std::visit(overloaded{[&](const CircleMultiplier& c) { out[0] = wrap01(static_cast<double>(c.base) * x[0]); },
                        [&](const ToralAutomorphism& t) {
                          const std::size_t d = t.matrix.dim();
                          for (std::size_t i = 0; i < d; ++i) {
                            double acc = 0.0;
                            for (std::size_t j = 0; j < d; ++j) acc += t.matrix(i, j).get_d() * x[j];
                            out[i] = wrap01(acc);
                          }
                        },
                        [&](const IdentityMap& m) { std::copy(x, x + m.dim, out); }},
             map);
}

double step_defect(const MapDescriptor& map, const double* x, const double* y) {
  const std::size_t d = map_dim(map);
  std::vector<double> fx(d);
  apply_map(map, x, fx.data());
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) worst = std::max(worst, torus_gap(fx[i], y[i]));
  return worst;
}

OrbitSample digit_orbit(std::uint64_t base, std::size_t n, std::uint64_t seed, const std::vector<double>& weights) {
  if (base < 2) throw Error(ErrorKind::Domain, "digit_orbit: base must be >= 2");
  const auto cum = cumulative_of(normalized_weights(base, weights));
  Rng rng(seed);
  std::vector<std::uint32_t> digits(n + guard_digits(base));
  for (auto& d : digits) d = draw_digit(rng, cum);
  OrbitSample s;
  s.dim = 1;
  s.data = from_digits(digits, base, n);
  s.map = CircleMultiplier{base};
  s.seed = seed;
  s.source = weights.empty() ? "digits(uniform)" : "digits(weighted)";
  return s;
}

OrbitSample surd_orbit(std::uint64_t base, std::uint64_t k, std::size_t n) {
  if (base < 2 || base > 36) throw Error(ErrorKind::Domain, "surd_orbit: base must be in [2, 36]");
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), mpz_class(static_cast<unsigned long>(k)).get_mpz_t());
  if (root * root == k) throw Error(ErrorKind::Domain, "surd_orbit: k is a perfect square");
  const std::size_t len = n + guard_digits(base);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(len));
  mpz_class big = mpz_class(static_cast<unsigned long>(k)) * scale * scale;
  mpz_class fl;
  mpz_sqrt(fl.get_mpz_t(), big.get_mpz_t());
  mpz_class frac_part = fl % scale;
  std::string str = frac_part.get_str(static_cast<int>(base));
  std::vector<std::uint32_t> digits(len, 0);
  const std::size_t offset = len - str.size();
  for (std::size_t i = 0; i < str.size(); ++i) {
    const char c = str[i];
    digits[offset + i] = static_cast<std::uint32_t>(c <= '9' ? c - '0' : c - 'a' + 10);
  }
  OrbitSample s;
  s.dim = 1;
  s.data = from_digits(digits, base, n);
  s.map = CircleMultiplier{base};
  s.source = "sqrt(" + std::to_string(k) + ") digits";
  return s;
}

OrbitSample lattice_orbit(const IntMatrix& matrix, std::size_t n, std::uint64_t seed) {
  constexpr std::int64_t p = 2147483647;
  const std::size_t d = matrix.dim();
  std::vector<std::int64_t> m(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), matrix(i, j).get_mpz_t(), static_cast<unsigned long>(p));
      m[i * d + j] = r.get_si();
    }
  }
  Rng rng(seed);
  std::vector<std::int64_t> x(d), y(d);
  for (auto& c : x) c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p));
  OrbitSample s;
  s.dim = d;
  s.data.reserve(n * d);
  for (std::size_t step = 0; step < n; ++step) {
    for (std::size_t i = 0; i < d; ++i) s.data.push_back(static_cast<double>(x[i]) / static_cast<double>(p));
    for (std::size_t i = 0; i < d; ++i) {
      __int128 acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += static_cast<__int128>(m[i * d + j]) * x[j];
      y[i] = static_cast<std::int64_t>(acc % p);
    }
    std::swap(x, y);
  }
  s.map = ToralAutomorphism{matrix};
  s.seed = seed;
  s.source = "lattice(1/2147483647)";
  return s;
}

OrbitSample periodic_orbit(const IntMatrix& matrix, const std::vector<mpq_class>& x0, std::size_t n) {
  const OrbitResult r = orbit(matrix, TorusPoint::rational(x0), n);
  OrbitSample s;
  s.dim = matrix.dim();
  s.map = ToralAutomorphism{matrix};
  s.source = "periodic";
  const std::size_t pre = r.preperiod.value_or(0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = i;
    if (r.period && i >= r.points.size()) idx = pre + (i - pre) % *r.period;
    const auto p = r.points[idx].as_double();
    s.data.insert(s.data.end(), p.begin(), p.end());
  }
  return s;
}

OrbitSample float_orbit(const MapDescriptor& map, const std::vector<double>& x0, std::size_t n) {
  const std::size_t d = map_dim(map);
  if (x0.size() != d) throw Error(ErrorKind::DimensionMismatch, "float_orbit: start point has wrong dimension");
  OrbitSample s;
  s.dim = d;
  s.map = map;
  s.source = "float";
  s.data.resize(n * d);
  if (n == 0) return s;
  for (std::size_t i = 0; i < d; ++i) s.data[i] = wrap01(x0[i]);
  for (std::size_t k = 1; k < n; ++k) apply_map(map, &s.data[(k - 1) * d], &s.data[k * d]);
  return s;
}

double orbit_defect(const OrbitSample& orbit) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
    worst = std::max(worst, step_defect(orbit.map, orbit.point(i), orbit.point(i + 1)));
  }
  return worst;
}

double birkhoff_average(const OrbitSample& orbit, const Observable& phi, std::size_t n) {
  if (n == 0) n = orbit.size();
  if (n == 0 || n > orbit.size()) throw Error(ErrorKind::Domain, "birkhoff_average: n must be in [1, orbit length]");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += phi(orbit.point(i));
  return sum / static_cast<double>(n);
}

CocycleSample constant_cocycle(const Eigen::MatrixXd& m, std::size_t length) {
  return CocycleSample{{m}, length};
}

CocycleSample random_rotation_cocycle(std::size_t dim, std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  CocycleSample c;
  c.length = length;
  const Eigen::Index d = static_cast<Eigen::Index>(dim);
  for (std::size_t k = 0; k < length; ++k) {
    Eigen::MatrixXd g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) g(i, j) = uniform(rng, -1.0, 1.0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    c.matrices.push_back(qr.householderQ() * Eigen::MatrixXd::Identity(d, d));
  }
  return c;
}

TopLyapunov top_lyapunov_estimate(const CocycleSample& cocycle) {
  if (cocycle.length < 2 || cocycle.matrices.empty()) {
    throw Error(ErrorKind::Domain, "top_lyapunov_estimate: cocycle length must be >= 2");
  }
  const Eigen::Index d = static_cast<Eigen::Index>(cocycle.dim());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d);
  double acc = 0.0;
  TopLyapunov out;
  std::size_t next = 1;
  for (std::size_t i = 0; i < cocycle.length; ++i) {
    p = cocycle.at(i) * p;
    const double s = p.norm();
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::Singular, "top_lyapunov_estimate: product degenerated");
    acc += std::log(s);
    p /= s;
    const std::size_t n = i + 1;
    if (n == next || n == cocycle.length) {
      const double on = op_norm(p);
      if (!(on > 0.0)) throw Error(ErrorKind::Singular, "top_lyapunov_estimate: singular product");
      out.sequence.emplace_back(n, (acc + std::log(on)) / static_cast<double>(n));
      if (n == next) next *= 2;
    }
  }
  out.estimate = out.sequence.back().second;
  return out;
}

std::vector<double> qr_oseledec(const CocycleSample& cocycle) {
  const std::size_t d = cocycle.dim();
  if (cocycle.matrices.empty() || cocycle.length < d) throw Error(ErrorKind::Domain, "qr_oseledec: need length >= dim");
  const Eigen::Index n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  std::vector<double> acc(d, 0.0);
  for (std::size_t k = 0; k < cocycle.length; ++k) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(cocycle.at(k) * q);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double rjj = r(j, j);
      if (rjj == 0.0 || !std::isfinite(rjj)) throw Error(ErrorKind::Singular, "qr_oseledec: QR breakdown");
      if (rjj < 0) q.col(j) *= -1.0;
      acc[static_cast<std::size_t>(j)] += std::log(std::abs(rjj));
    }
  }
  for (double& a : acc) a /= static_cast<double>(cocycle.length);
  std::sort(acc.begin(), acc.end(), std::greater<>());
  return acc;
}

double average_log_det(const CocycleSample& cocycle) {
  if (cocycle.length == 0) return 0.0;
  std::vector<double> logs;
  for (const auto& m : cocycle.matrices) logs.push_back(std::log(std::abs(m.determinant())));
  double sum = 0.0;
  if (cocycle.length >= cocycle.matrices.size()) {
    const std::size_t full = cocycle.length / cocycle.matrices.size();
    const std::size_t rest = cocycle.length % cocycle.matrices.size();
    for (std::size_t i = 0; i < logs.size(); ++i) sum += logs[i] * static_cast<double>(full + (i < rest ? 1 : 0));
  } else {
    for (std::size_t i = 0; i < cocycle.length; ++i) sum += logs[i];
  }
  return sum / static_cast<double>(cocycle.length);
}

EntropyReport brin_katok_entropy(const OrbitSample& orbit, const BrinKatokOptions& options) {
  const std::size_t n_points = orbit.size();
  if (n_points < 10000) throw Error(ErrorKind::Domain, "brin_katok_entropy: orbit length must be >= 10^4");
  if (options.radii.empty()) throw Error(ErrorKind::Domain, "brin_katok_entropy: empty radius schedule");
  const std::size_t steps = options.max_steps;
  const std::size_t usable = n_points - steps;
  const std::size_t refs = std::min(options.references, usable);
  std::vector<double> radii(options.radii);
  std::sort(radii.begin(), radii.end(), std::greater<>());
  const std::size_t nr = radii.size();
  const std::size_t d = orbit.dim;

  // hist[r][L]: number of (reference, t) pairs shadowing for exactly L steps.
  const std::size_t workers = worker_count();
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(nr * (steps + 1), 0));
  parallel_chunks(refs, workers, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    auto& hist = partial[chunk];
    std::vector<double> runmax(steps);
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t s = k * usable / refs;
      for (std::size_t t = 0; t < usable; ++t) {
        if (t == s) continue;
        std::size_t len = 0;
        double worst = 0.0;
        while (len < steps) {
          const double* a = orbit.point(s + len);
          const double* b = orbit.point(t + len);
          for (std::size_t c = 0; c < d; ++c) worst = std::max(worst, torus_gap(a[c], b[c]));
          if (worst >= radii[0]) break;
          runmax[len++] = worst;
        }
        std::size_t l = len;
        for (std::size_t ri = 0; ri < nr; ++ri) {
          while (l > 0 && runmax[l - 1] >= radii[ri]) --l;
          ++hist[ri * (steps + 1) + l];
        }
      }
    }
  });
  std::vector<std::uint64_t> hist(nr * (steps + 1), 0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += p[i];

  EntropyReport rep;
  rep.method = "brin-katok";
  rep.samples = n_points;
  for (std::size_t ri = 0; ri < nr; ++ri) {
    RadiusEstimate est;
    est.radius = radii[ri];
    // count(n) = pairs shadowing for at least n steps
    std::uint64_t tail = 0;
    std::vector<std::uint64_t> at_least(steps + 2, 0);
    for (std::size_t l = steps + 1; l-- > 0;) {
      tail += hist[ri * (steps + 1) + l];
      at_least[l] = tail;
    }
    std::vector<double> xs, ys;
    for (std::size_t n = 1; n <= steps; ++n) {
      const double mean = static_cast<double>(at_least[n]) / static_cast<double>(refs);
      est.mean_counts.push_back(mean);
      if (n >= options.first_fit_depth && mean >= static_cast<double>(options.min_count) &&
          xs.size() + options.first_fit_depth == n) {
        xs.push_back(static_cast<double>(n));
        ys.push_back(std::log(mean));
      }
    }
    est.fit_points = xs.size();
    est.valid = xs.size() >= options.min_fit_points;
    if (est.valid) est.slope = std::max(0.0, -slope_fit(xs, ys));
    rep.radii.push_back(est);
  }

  std::optional<std::size_t> chosen;
  for (std::size_t ri = nr; ri-- > 0;) {
    if (rep.radii[ri].valid) {
      chosen = ri;
      break;
    }
  }
  if (!chosen) {
    rep.warnings.push_back("no radius has enough depths with mean count >= " + std::to_string(options.min_count));
    rep.estimate = std::nan("");
    rep.r_trend = "undetermined";
    return rep;
  }
  if (*chosen + 1 < nr) {
    std::ostringstream os;
    os << "radius widened from " << radii.back() << " to " << radii[*chosen]
       << ": too few depths with mean count >= " << options.min_count;
    rep.warnings.push_back(os.str());
  }
  rep.radius = radii[*chosen];
  rep.estimate = rep.radii[*chosen].slope;

  std::vector<double> trend;
  for (const auto& e : rep.radii)
    if (e.valid) trend.push_back(e.slope);
  bool up = true;
  bool down = true;
  for (std::size_t i = 0; i + 1 < trend.size(); ++i) {
    const double tol = 0.01 * std::max(std::abs(trend[i]), 1e-3);
    if (trend[i + 1] < trend[i] - tol) up = false;
    if (trend[i + 1] > trend[i] + tol) down = false;
  }
  rep.r_trend = trend.size() < 2 ? "single radius" : (up && down ? "flat" : up ? "increasing as r shrinks"
                                                                    : down ? "decreasing as r shrinks"
                                                                           : "non-monotone");
  return rep;
}

PartitionEntropy partition_entropy_rate(const MapDescriptor& map, const std::vector<std::size_t>& cells,
                                        std::size_t depth, const PartitionOptions& options) {
  const std::size_t d = map_dim(map);
  if (depth < 2) throw Error(ErrorKind::Domain, "partition_entropy_rate: depth must be >= 2");
  if (cells.size() != d) throw Error(ErrorKind::DimensionMismatch, "partition_entropy_rate: one cell count per coordinate");
  std::uint64_t k = 1;
  for (std::size_t c : cells) {
    if (c == 0) throw Error(ErrorKind::Domain, "partition_entropy_rate: empty partition");
    k *= c;
  }
  if (std::log2(static_cast<double>(k)) * static_cast<double>(depth) >= 63.0) {
    throw Error(ErrorKind::Overflow, "partition_entropy_rate: K^depth does not fit in 63 bits");
  }
  const std::size_t n = options.samples;
  if (n < 2) throw Error(ErrorKind::Domain, "partition_entropy_rate: need at least 2 samples");

  Rng rng(options.seed);
  std::vector<double> shift(d);
  for (auto& s : shift) s = unit_double(rng);
  std::vector<double> cum;
  std::uint64_t base = 0;
  if (options.sampler == Sampler::Digits) {
    const auto* cm = std::get_if<CircleMultiplier>(&map);
    if (!cm) throw Error(ErrorKind::Unsupported, "digit sampling is defined for circle multipliers");
    base = cm->base;
    cum = cumulative_of(normalized_weights(base, options.digit_weights));
  }
  const std::size_t guard = base ? guard_digits(base) : 0;

  std::vector<std::uint64_t> words(n);
  std::vector<double> x(d), y(d);
  std::vector<std::uint32_t> digits(guard);
  for (std::size_t i = 0; i < n; ++i) {
    if (options.sampler == Sampler::Lebesgue) {
      for (std::size_t c = 0; c < d; ++c) x[c] = wrap01(radical_inverse(i + 1, nth_prime(c)) + shift[c]);
    } else {
      for (auto& g : digits) g = draw_digit(rng, cum);
      x[0] = from_digits(digits, base, 1)[0];
    }
    std::uint64_t w = 0;
    for (std::size_t step = 0; step < depth; ++step) {
      std::uint64_t cell = 0;
      for (std::size_t c = 0; c < d; ++c) {
        const auto idx = std::min<std::uint64_t>(static_cast<std::uint64_t>(x[c] * static_cast<double>(cells[c])),
                                                 cells[c] - 1);
        cell = cell * cells[c] + idx;
      }
      w = w * k + cell;
      apply_map(map, x.data(), y.data());
      std::swap(x, y);
    }
    words[i] = w;
  }
  std::sort(words.begin(), words.end());

  PartitionEntropy out;
  out.depth = depth;
  out.miller_madow = options.sampler == Sampler::Digits;
  const double total = static_cast<double>(n);
  std::uint64_t divisor = 1;
  for (std::size_t i = 1; i < depth; ++i) divisor *= k;
  for (std::size_t level = 1; level <= depth; ++level) {
    double h = 0.0;
    std::size_t occupied = 0;
    std::size_t i = 0;
    while (i < n) {
      const std::uint64_t prefix = words[i] / divisor;
      std::size_t j = i;
      while (j < n && words[j] / divisor == prefix) ++j;
      const double p = static_cast<double>(j - i) / total;
      h -= p * std::log(p);
      ++occupied;
      i = j;
    }
    if (out.miller_madow) h += static_cast<double>(occupied - 1) / (2.0 * total);
    out.block_entropies.push_back(h);
    out.occupied.push_back(occupied);
    out.differences.push_back(h - (level == 1 ? 0.0 : out.block_entropies[level - 2]));
    if (level < depth) divisor /= k;
  }
  out.reliable_depth = 1;
  for (std::size_t level = 1; level <= depth; ++level) {
    if (out.occupied[level - 1] * options.min_cell_occupancy <= n) out.reliable_depth = level;
  }
  out.estimate = out.differences[out.reliable_depth - 1];
  return out;
}

void apply_inequality(EntropyReport& report, double sum_positive_exponents) {
  report.sum_positive_exponents = sum_positive_exponents;
  report.slack = std::max(0.05 * std::abs(sum_positive_exponents), 0.02);
  report.margulis_ruelle_ok = report.estimate <= sum_positive_exponents + report.slack;
  report.pesin_equality = std::abs(report.estimate - sum_positive_exponents) <= report.slack;
  report.strict_inequality = report.estimate < sum_positive_exponents - report.slack;
}

EntropyReport entropy_inequality_report(double estimate, const FunctionalFamily& functionals, const Vec& n,
                                        std::string method) {
  EntropyReport rep;
  rep.estimate = estimate;
  rep.method = std::move(method);
  apply_inequality(rep, lebesgue_entropy(functionals, n));
  return rep;
}

ShearMeasureSpec exponential_atoms(long lo, long hi) {
  ShearMeasureSpec s;
  s.kind = ShearMeasureSpec::Kind::Atoms;
  for (long k = lo; k <= hi; ++k) s.atoms.emplace_back(static_cast<double>(k), std::exp(static_cast<double>(k)));
  return s;
}

ShearResult shear_probe(const ShearMeasureSpec& nu, double t, double window) {
  if (!(window > 0.0)) throw Error(ErrorKind::Domain, "shear_probe: empty window");
  ShearResult out;
  switch (nu.kind) {
    case ShearMeasureSpec::Kind::Lebesgue:
      out.proportional = true;
      out.constant = 1.0;
      out.reason = "translation invariant";
      return out;
    case ShearMeasureSpec::Kind::ExpDensity:
      out.proportional = true;
      out.constant = std::exp(-nu.rate * t);
      out.reason = "density e^{a(x-t)} = e^{-at} e^{ax}";
      return out;
    case ShearMeasureSpec::Kind::Atoms:
      break;
  }
  for (const auto& [loc, w] : nu.atoms) {
    if (!(w > 0.0)) throw Error(ErrorKind::Domain, "shear_probe: atom weights must be positive");
  }
  if (nu.atoms.empty() || nu.atoms.front().first > -window - std::abs(t) ||
      nu.atoms.back().first < window + std::abs(t)) {
    throw Error(ErrorKind::Domain, "shear_probe: atom list does not cover the window shifted by t");
  }
  std::vector<std::pair<double, double>> base, pushed;
  for (const auto& [loc, w] : nu.atoms) {
    if (std::abs(loc) <= window) base.emplace_back(loc, w);
    if (std::abs(loc + t) <= window) pushed.emplace_back(loc + t, w);
  }
  if (base.size() < 3) throw Error(ErrorKind::Domain, "shear_probe: window holds fewer than 3 atoms");
  if (base.size() != pushed.size()) {
    out.reason = "supports differ on the window";
    return out;
  }
  std::optional<double> c;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (std::abs(base[i].first - pushed[i].first) > 1e-12 * std::max(1.0, std::abs(base[i].first))) {
      out.reason = "supports differ on the window (mutually singular)";
      return out;
    }
    const double ratio = pushed[i].second / base[i].second;
    if (!c) {
      c = ratio;
    } else if (std::abs(ratio - *c) > kShearRatioTolerance * std::abs(*c)) {
      out.reason = "common support but weight ratios vary";
      return out;
    }
  }
  out.proportional = true;
  out.constant = c;
  out.reason = "supports match and weight ratios agree";
  return out;
}

GrowthResult subexp_growth_probe(const std::vector<double>& norms, double epsilon) {
  if (norms.size() < 10) throw Error(ErrorKind::Domain, "subexp_growth_probe: need at least 10 norms");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (!(norms[i] > 0.0)) throw Error(ErrorKind::Domain, "subexp_growth_probe: norms must be positive");
    if (i >= norms.size() / 2) {
      xs.push_back(static_cast<double>(i + 1));
      ys.push_back(std::log(norms[i]));
    }
  }
  GrowthResult g;
  g.epsilon = epsilon;
  g.rate = slope_fit(xs, ys);
  g.subexponential = g.rate <= epsilon;
  return g;
}

std::vector<double> power_norms(const Eigen::MatrixXd& m, std::size_t count) {
  std::vector<double> out;
  Eigen::MatrixXd p = m;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(op_norm(p));
    p = m * p;
  }
  return out;
}

}  // namespace cartanlab
