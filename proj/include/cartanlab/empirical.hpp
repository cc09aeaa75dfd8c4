#pragma once

// Numerical estimators on orbits of circle multipliers and toral
// automorphisms: Birkhoff averages, top exponents and QR spectra of matrix
// cocycles, Brin-Katok and partition entropy, entropy-formula verdicts, shear
// groups of measures on R, and growth-rate probes.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cartanlab/lyapunov_chambers.hpp"
#include "cartanlab/matrix.hpp"
#include "cartanlab/toral_actions.hpp"

namespace cartanlab {

struct CircleMultiplier {
  std::uint64_t base = 2;  // x -> base * x mod 1
};
struct ToralAutomorphism {
  IntMatrix matrix;
};
struct IdentityMap {
  std::size_t dim = 1;
};
using MapDescriptor = std::variant<CircleMultiplier, ToralAutomorphism, IdentityMap>;

std::size_t map_dim(const MapDescriptor& map);
std::string map_name(const MapDescriptor& map);
/// One float step of the map, reduced mod 1.
void apply_map(const MapDescriptor& map, const double* x, double* out);
/// Largest per-coordinate torus distance between f(x) and y.
double step_defect(const MapDescriptor& map, const double* x, const double* y);

/// Points stored flat: point i occupies data[i*dim, (i+1)*dim).
struct OrbitSample {
  std::size_t dim = 1;
  std::vector<double> data;
  MapDescriptor map = IdentityMap{1};
  std::uint64_t seed = 0;
  std::string source;

  std::size_t size() const { return dim == 0 ? 0 : data.size() / dim; }
  const double* point(std::size_t i) const { return data.data() + i * dim; }
};

// Orbit generators. Floating-point iteration of an expanding map loses one
// base-b digit per step, so orbits of multipliers are built from their digit
// expansions and orbits of toral maps from exact integer arithmetic.

/// x_i = 0.d_i d_{i+1} ... in base b with iid digits: Lebesgue for uniform
/// weights, a Bernoulli measure otherwise.
OrbitSample digit_orbit(std::uint64_t base, std::size_t n, std::uint64_t seed,
                        const std::vector<double>& weights = {});
/// Orbit of frac(sqrt(k)) under x -> b x, from exact digits.
OrbitSample surd_orbit(std::uint64_t base, std::uint64_t k, std::size_t n);
/// Orbit of a random point with coordinates in (1/p)Z^d, p = 2^31 - 1, under an
/// integer matrix; exact, equidistributed at desk scale.
OrbitSample lattice_orbit(const IntMatrix& matrix, std::size_t n, std::uint64_t seed);
/// Orbit of a rational point (periodic), repeated to length n.
OrbitSample periodic_orbit(const IntMatrix& matrix, const std::vector<mpq_class>& x0, std::size_t n);
/// Plain float iteration; faithful only for non-expanding maps.
OrbitSample float_orbit(const MapDescriptor& map, const std::vector<double>& x0, std::size_t n);

/// Maximum step defect over consecutive pairs.
double orbit_defect(const OrbitSample& orbit);

using Observable = std::function<double(const double*)>;

double birkhoff_average(const OrbitSample& orbit, const Observable& phi, std::size_t n = 0);

struct CocycleSample {
  std::vector<Eigen::MatrixXd> matrices;  // cycled when length exceeds the count
  std::size_t length = 0;

  std::size_t dim() const { return matrices.empty() ? 0 : static_cast<std::size_t>(matrices.front().rows()); }
  const Eigen::MatrixXd& at(std::size_t i) const { return matrices[i % matrices.size()]; }
};

CocycleSample constant_cocycle(const Eigen::MatrixXd& m, std::size_t length);
CocycleSample random_rotation_cocycle(std::size_t dim, std::size_t length, std::uint64_t seed);

struct TopLyapunov {
  double estimate = 0.0;
  /// (n, (1/n) log |A_n ... A_1|) at n = 1, 2, 4, ..., length.
  std::vector<std::pair<std::size_t, double>> sequence;
};

TopLyapunov top_lyapunov_estimate(const CocycleSample& cocycle);

/// Exponents from the running QR factorization, descending.
std::vector<double> qr_oseledec(const CocycleSample& cocycle);
double average_log_det(const CocycleSample& cocycle);

struct RadiusEstimate {
  double radius = 0.0;
  double slope = 0.0;             // entropy estimate at this radius
  std::size_t fit_points = 0;
  bool valid = false;
  std::vector<double> mean_counts;  // index n = 1..max_steps
};

struct EntropyReport {
  double estimate = 0.0;
  std::string method;  // "brin-katok" or "partition-rate"
  double sum_positive_exponents = 0.0;
  double slack = 0.0;
  bool margulis_ruelle_ok = false;
  bool pesin_equality = false;
  bool strict_inequality = false;
  std::size_t samples = 0;
  double radius = 0.0;
  std::vector<RadiusEstimate> radii;
  std::string r_trend;
  std::vector<std::string> warnings;
};

struct BrinKatokOptions {
  std::vector<double> radii{0.1, 0.05, 0.02, 0.01};
  std::size_t min_count = 30;
  std::size_t references = 256;
  std::size_t max_steps = 40;
  std::size_t min_fit_points = 3;
  /// Depths before this one are left out of the fit: the first refinement of a
  /// round ball is not yet aligned with the expanding directions.
  std::size_t first_fit_depth = 2;
};

EntropyReport brin_katok_entropy(const OrbitSample& orbit, const BrinKatokOptions& options = {});

enum class Sampler { Lebesgue, Digits };

struct PartitionOptions {
  std::size_t samples = std::size_t{1} << 20;
  Sampler sampler = Sampler::Lebesgue;
  std::vector<double> digit_weights;  // for Sampler::Digits on a circle multiplier
  std::uint64_t seed = 0;
  std::size_t min_cell_occupancy = 16;  // depth n counts only if K_n <= N / this
};

struct PartitionEntropy {
  double estimate = 0.0;
  std::size_t depth = 0;            // requested
  std::size_t reliable_depth = 0;   // depth whose difference is returned
  std::vector<double> block_entropies;  // H(1..depth)
  std::vector<double> differences;      // H(n) - H(n-1), H(0) = 0
  std::vector<std::size_t> occupied;    // occupied cells at each depth
  bool miller_madow = false;
};

/// Coordinate-box partition with cells[c] equal intervals along coordinate c.
PartitionEntropy partition_entropy_rate(const MapDescriptor& map, const std::vector<std::size_t>& cells,
                                        std::size_t depth, const PartitionOptions& options = {});

/// Compares an estimate with sum of m^j lambda^j(n) over positive exponents;
/// slack = max(5% relative, 0.02 nats).
EntropyReport entropy_inequality_report(double estimate, const FunctionalFamily& functionals, const Vec& n,
                                        std::string method = "brin-katok");
void apply_inequality(EntropyReport& report, double sum_positive_exponents);

struct ShearMeasureSpec {
  enum class Kind { Atoms, ExpDensity, Lebesgue };
  Kind kind = Kind::Lebesgue;
  std::vector<std::pair<double, double>> atoms;  // (location, weight), sorted by location
  double rate = 0.0;                             // alpha for density e^{alpha x}
};

/// Atoms e^n at n in [lo, hi].
ShearMeasureSpec exponential_atoms(long lo, long hi);

struct ShearResult {
  bool proportional = false;
  std::optional<double> constant;  // (T_t)_* nu = c nu
  std::string reason;
};

constexpr double kShearRatioTolerance = 1e-10;

ShearResult shear_probe(const ShearMeasureSpec& nu, double t, double window);

struct GrowthResult {
  double rate = 0.0;
  double epsilon = 0.0;
  bool subexponential = false;
};

GrowthResult subexp_growth_probe(const std::vector<double>& norms, double epsilon);

/// Operator norms |M^n| for n = 1..count.
std::vector<double> power_norms(const Eigen::MatrixXd& m, std::size_t count);

}  // namespace cartanlab
