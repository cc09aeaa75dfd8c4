#include "cartanlab/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cartanlab/random.hpp"

namespace cartanlab {

namespace {

Eigen::VectorXd frac_vec(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double f = v(i) - std::floor(v(i));
    out(i) = f >= 1.0 ? 0.0 : f;
  }
  return out;
}

Eigen::VectorXd wrap_half(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i) - std::ceil(v(i) - 0.5);
  return out;
}

Vec to_vec(const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); }

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::optional<std::string> conditioning_warning(const SuspensionSpec& spec, const Eigen::VectorXd& t) {
  double worst = 0.0;
  for (const auto& f : spec.functionals) worst = std::max(worst, std::abs(f(to_vec(t))));
  if (std::exp(worst) > kConditioningLimit) {
    std::ostringstream os;
    os << "ill-conditioned: exp(max|lambda(t)|) = " << std::exp(worst) << " exceeds " << kConditioningLimit;
    return os.str();
  }
  return std::nullopt;
}

}  // namespace

SuspensionSpec make_suspension(const CartanActionSpec& base) {
  SuspensionSpec spec;
  spec.base = base;
  spec.q = base.spectral.frame.q;
  spec.qinv = base.spectral.frame.qinv;
  spec.functionals = base.family.functionals;
  const std::size_t d = base.dim();
  for (std::size_t g = 0; g < base.rank(); ++g) {
    Eigen::VectorXd chi(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
      chi(static_cast<Eigen::Index>(j)) = base.spectral.eigenvalue(g, j);
      if (chi(static_cast<Eigen::Index>(j)) <= 0.0) {
        throw Error(ErrorKind::Domain, "suspension needs positive eigenvalues; generator " + base.labels[g] +
                                           " has a negative one (use its square)");
      }
    }
    const Eigen::MatrixXd rebuilt = spec.q * chi.asDiagonal() * spec.qinv;
    const double r = max_abs(rebuilt - to_eigen(base.generators[g]));
    spec.reconstruction_residuals.push_back(r);
    if (r > 1e-8) {
      std::ostringstream os;
      os << "frame reconstructs generator " << base.labels[g] << " only to " << r;
      throw Error(ErrorKind::Tolerance, os.str());
    }
  }
  return spec;
}

Eigen::MatrixXd interpolation_matrix(const SuspensionSpec& spec, const Eigen::VectorXd& t) {
  if (static_cast<std::size_t>(t.size()) != spec.rank()) {
    throw Error(ErrorKind::DimensionMismatch, "interpolation_matrix: t has wrong length");
  }
  const Vec tv = to_vec(t);
  Eigen::VectorXd e(static_cast<Eigen::Index>(spec.dim()));
  for (std::size_t j = 0; j < spec.dim(); ++j) e(static_cast<Eigen::Index>(j)) = std::exp(spec.functionals[j](tv));
  return spec.q * e.asDiagonal() * spec.qinv;
}

TwistedPoint reduce(const SuspensionSpec& spec, const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != spec.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "reduce: x has wrong length");
  }
  TwistedPoint p;
  p.warning = conditioning_warning(spec, t);
  p.t = frac_vec(t);
  const Eigen::MatrixXd m = interpolation_matrix(spec, p.t);
  const Eigen::VectorXd c = m.partialPivLu().solve(x);
  p.x = m * frac_vec(c);
  return p;
}

TwistedPoint act(const SuspensionSpec& spec, const Eigen::VectorXd& s, const TwistedPoint& p) {
  const Eigen::MatrixXd ms = interpolation_matrix(spec, s);
  TwistedPoint out = reduce(spec, p.t + s, ms * p.x);
  if (!out.warning) out.warning = conditioning_warning(spec, s);
  if (!out.warning) out.warning = p.warning;
  return out;
}

double fiber_distance(const SuspensionSpec& spec, const Eigen::VectorXd& t, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y) {
  const Eigen::MatrixXd m = interpolation_matrix(spec, frac_vec(t));
  const Eigen::VectorXd c = wrap_half(m.partialPivLu().solve(x - y));
  return (spec.qinv * (m * c)).norm();
}

double dilation_residual(const SuspensionSpec& spec, const Eigen::VectorXd& s, const TwistedPoint& p,
                         std::size_t j, double v) {
  if (j >= spec.dim()) throw Error(ErrorKind::DimensionMismatch, "dilation_residual: direction out of range");
  if (std::abs(v) > 1.0) throw Error(ErrorKind::Domain, "dilation_residual: |v| must be <= 1");
  const Eigen::VectorXd ej = spec.q.col(static_cast<Eigen::Index>(j));
  const TwistedPoint moved = reduce(spec, p.t, p.x + v * ej);
  const TwistedPoint a = act(spec, s, moved);
  const TwistedPoint b = act(spec, s, p);
  const double factor = std::exp(spec.functionals[j](to_vec(s)));
  return fiber_distance(spec, b.t, a.x, b.x + factor * v * ej);
}

SuspensionCheck suspension_check(const SuspensionSpec& spec, std::size_t grid, std::uint64_t seed,
                                 std::size_t pairs) {
  const Eigen::Index k = static_cast<Eigen::Index>(spec.rank());
  const Eigen::Index d = static_cast<Eigen::Index>(spec.dim());
  SuspensionCheck out;
  out.grid = grid;
  out.seed = seed;
  out.cocycle_pairs = pairs;
  Rng rng(seed);

  auto random_ball = [&](double radius) {
    Eigen::VectorXd v(k);
    do {
      for (Eigen::Index i = 0; i < k; ++i) v(i) = uniform(rng, -radius, radius);
    } while (v.norm() > radius);
    return v;
  };
  auto random_point = [&] {
    Eigen::VectorXd t(k), x(d);
    for (Eigen::Index i = 0; i < k; ++i) t(i) = unit_double(rng);
    for (Eigen::Index i = 0; i < d; ++i) x(i) = unit_double(rng);
    return reduce(spec, t, x);
  };

  for (std::size_t i = 0; i < pairs; ++i) {
    const Eigen::VectorXd s = random_ball(3.0);
    const Eigen::VectorXd t = random_ball(3.0);
    const Eigen::MatrixXd ms = interpolation_matrix(spec, s);
    const Eigen::MatrixXd mt = interpolation_matrix(spec, t);
    const Eigen::MatrixXd mst = interpolation_matrix(spec, s + t);
    out.cocycle_residual = std::max(out.cocycle_residual, max_abs(mst - ms * mt));
    out.det_deviation = std::max(out.det_deviation, std::abs(ms.determinant() - 1.0));
  }

  std::vector<long> n(static_cast<std::size_t>(k), -2);
  while (true) {
    Eigen::VectorXd t(k);
    for (Eigen::Index i = 0; i < k; ++i) t(i) = static_cast<double>(n[static_cast<std::size_t>(i)]);
    const Eigen::MatrixXd exact = to_eigen(element(spec.base, n));
    out.integer_residual = std::max(out.integer_residual, max_abs(interpolation_matrix(spec, t) - exact));
    std::size_t pos = 0;
    while (pos < n.size() && n[pos] == 2) n[pos++] = -2;
    if (pos == n.size()) break;
    ++n[pos];
  }

  out.per_direction.assign(static_cast<std::size_t>(d), 0.0);
  const double vs[] = {0.1, -0.1, 0.5, -0.5};
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  const double step = grid > 1 ? 4.0 / static_cast<double>(grid - 1) : 0.0;
  while (grid > 0) {
    Eigen::VectorXd s(k);
    for (Eigen::Index i = 0; i < k; ++i) s(i) = grid > 1 ? -2.0 + step * static_cast<double>(idx[static_cast<std::size_t>(i)]) : 0.0;
    const TwistedPoint p = random_point();
    for (Eigen::Index j = 0; j < d; ++j) {
      for (double v : vs) {
        const double r = dilation_residual(spec, s, p, static_cast<std::size_t>(j), v);
        out.per_direction[static_cast<std::size_t>(j)] = std::max(out.per_direction[static_cast<std::size_t>(j)], r);
        out.dilation_residual = std::max(out.dilation_residual, r);
      }
    }
    std::size_t pos = 0;
    while (pos < idx.size() && idx[pos] + 1 == grid) idx[pos++] = 0;
    if (pos == idx.size()) break;
    ++idx[pos];
  }

  for (std::size_t j = 0; j < spec.dim(); ++j) {
    const Vec ker = kernel_element(spec.functionals[j]);
    for (double scale : {0.5, 1.5, -2.5}) {
      Eigen::VectorXd s(k);
      for (Eigen::Index i = 0; i < k; ++i) s(i) = scale * ker[static_cast<std::size_t>(i)];
      const TwistedPoint p = random_point();
      for (double v : vs) {
        out.kernel_dilation_residual =
            std::max(out.kernel_dilation_residual, dilation_residual(spec, s, p, j, v));
      }
    }
  }
  return out;
}

}  // namespace cartanlab
