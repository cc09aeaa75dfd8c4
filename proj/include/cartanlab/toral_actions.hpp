#pragma once

// Z^k actions on tori by commuting integer matrices, exact orbits of rational
// points, Lebesgue entropy of action elements, and the multiplicative
// semigroup {a^m b^n} behind the x2 x3 circle dynamics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cartanlab/exact_algebra.hpp"
#include "cartanlab/lyapunov_chambers.hpp"

namespace cartanlab {

struct CartanActionSpec {
  std::vector<IntMatrix> generators;
  std::vector<std::string> labels;
  SpectralData spectral;
  FunctionalFamily family;

  std::size_t rank() const { return generators.size(); }
  std::size_t dim() const { return generators.empty() ? 0 : generators.front().dim(); }
};

/// Builds spectra, joint frame and exponent functionals; throws on failure.
CartanActionSpec make_cartan_spec(std::vector<IntMatrix> generators,
                                  std::vector<std::string> labels = {},
                                  const FrameOptions& options = {});

struct ValidationReport {
  bool det_one = false;
  bool distinct_real_spectra = false;
  bool commuting = false;
  bool genuine = false;
  bool irreducible_char_polys = false;
  bool anosov_elements_exist = false;
  long bound = 0;
  std::optional<std::vector<long>> relation;  // first A^n = Id found, if any
  std::vector<std::string> diagnostics;

  bool pass() const {
    return det_one && distinct_real_spectra && commuting && genuine && irreducible_char_polys &&
           anosov_elements_exist;
  }
};

ValidationReport validate_cartan(const std::vector<IntMatrix>& generators, long bound = 20);

/// Exact product of generator powers; negative exponents via the adjugate.
IntMatrix element(const CartanActionSpec& spec, const std::vector<long>& n);
IntMatrix element(const std::vector<IntMatrix>& generators, const std::vector<long>& n);

/// Sum of m^j lambda^j(n) over lambda^j(n) > 0, in nats.
double lebesgue_entropy(const FunctionalFamily& family, const Vec& n);
double lebesgue_entropy(const CartanActionSpec& spec, const Vec& n);

/// A point of the torus, either exact rational or float, reduced mod 1.
struct TorusPoint {
  enum class Mode { Rational, Float };
  Mode mode = Mode::Float;
  std::vector<mpq_class> exact;
  std::vector<double> coords;

  static TorusPoint rational(std::vector<mpq_class> coords);
  static TorusPoint floating(std::vector<double> coords);
  std::size_t dim() const { return mode == Mode::Rational ? exact.size() : coords.size(); }
  std::vector<double> as_double() const;
  friend bool operator==(const TorusPoint& a, const TorusPoint& b);
};

struct OrbitResult {
  std::vector<TorusPoint> points;
  std::optional<std::size_t> period;
  std::optional<std::size_t> preperiod;
};

constexpr std::uint64_t kDenominatorCap = 1000000;

OrbitResult orbit(const IntMatrix& map, const TorusPoint& x, std::size_t steps,
                  std::uint64_t denominator_cap = kDenominatorCap);

bool multiplicatively_independent(std::uint64_t a, std::uint64_t b);

/// Closure of {1} under x -> a x and x -> b x in Z/qZ, sorted residues.
std::vector<std::uint64_t> furstenberg_rational_orbit(std::uint64_t a, std::uint64_t b, std::uint64_t q);

/// Sorted {a^m b^n <= limit}. Independence is not required here.
std::vector<std::uint64_t> semigroup_elements(std::uint64_t a, std::uint64_t b, std::uint64_t limit);

struct RatioWindow {
  double lo = 0.0;
  double hi = 0.0;
  double max_ratio = 0.0;
  std::size_t pairs = 0;
};

struct FurstenbergProfile {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> products;
  std::vector<double> ratios;          // s_{k+1} / s_k
  std::vector<RatioWindow> windows;    // decade windows [10^e, 10^{e+1}]
  std::vector<std::pair<std::uint64_t, double>> orbit_gaps;  // (N, max gap) when x given
  bool trend_non_increasing = false;   // windowed maxima from 10^3 on
};

/// Max of s_{k+1}/s_k over consecutive pairs with lo <= s_k and s_{k+1} <= hi.
RatioWindow ratio_window(const std::vector<std::uint64_t>& products, double lo, double hi);

FurstenbergProfile gap_ratio_profile(std::uint64_t a, std::uint64_t b, std::uint64_t limit,
                                     std::optional<double> x = std::nullopt);

/// Largest circular gap of {s x mod 1 : s in S, s <= limit}.
double density_profile(std::uint64_t a, std::uint64_t b, double x, std::uint64_t limit);

}  // namespace cartanlab
