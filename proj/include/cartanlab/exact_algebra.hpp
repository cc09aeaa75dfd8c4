#pragma once

// Exact integer algebra for toral automorphisms: characteristic polynomials,
// irreducibility over Q for small degree, certified real root isolation and
// the shared eigenframe of a commuting family.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "cartanlab/matrix.hpp"

namespace cartanlab {

/// Monic integer polynomial. coeffs[i] multiplies x^i; coeffs.back() == 1.
struct CharPoly {
  std::vector<mpz_class> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  mpq_class operator()(const mpq_class& x) const;
  double eval(double x) const;
  double derivative(double x) const;
  /// det(M) recovered from the constant term: (-1)^d * c0.
  mpz_class determinant() const;
  std::string to_string() const;
};

/// det(xI - M), computed exactly by the Faddeev-LeVerrier recurrence.
CharPoly char_poly(const IntMatrix& m);

/// Exact irreducibility over Q for degree <= 4.
bool is_irreducible_over_q(const CharPoly& p);

/// Isolating interval (lo, hi) with p(lo) * p(hi) < 0, plus a float estimate.
struct RootInterval {
  mpq_class lo;
  mpq_class hi;
  double mid = 0.0;
};

struct RealSpectrum {
  CharPoly poly;
  std::vector<RootInterval> roots;  // descending
  std::vector<int> multiplicities;

  std::vector<double> values() const;
};

/// Number of distinct real roots (Sturm), and whether p is squarefree.
struct RootCount {
  int distinct_real = 0;
  bool squarefree = false;
};
RootCount count_real_roots(const CharPoly& p);

/// Certified isolation of all real roots of a squarefree polynomial with only
/// real roots; throws NotRealSplit otherwise.
RealSpectrum isolate_real_roots(const CharPoly& p, double width = 1e-12);

struct JointEigenframe {
  Eigen::MatrixXd q;     // columns are unit joint eigenvectors
  Eigen::MatrixXd qinv;
  std::vector<double> residuals;  // per generator: max |offdiag(Q^-1 M Q)|
  /// pairing[g][j]: index into spectra[g].roots of the eigenvalue of
  /// generator g on column j.
  std::vector<std::vector<std::size_t>> pairing;

  double max_residual() const;
};

struct FrameOptions {
  double tolerance = 1e-8;
  int refinement_passes = 2;
};

struct SpectralData {
  std::vector<RealSpectrum> spectra;
  JointEigenframe frame;

  /// Eigenvalue of generator g on joint eigendirection j.
  double eigenvalue(std::size_t g, std::size_t j) const;
};

SpectralData real_spectrum_and_frame(const std::vector<IntMatrix>& generators,
                                     const FrameOptions& options = {});

/// One joint refinement pass. Never increases the max residual.
JointEigenframe refine_frame(const JointEigenframe& frame,
                             const std::vector<IntMatrix>& generators,
                             const std::vector<RealSpectrum>& spectra);

}  // namespace cartanlab
