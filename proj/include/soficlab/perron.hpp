#ifndef SOFICLAB_PERRON_HPP
#define SOFICLAB_PERRON_HPP

#include <optional>

#include "soficlab/matrix.hpp"

namespace soficlab {

struct PerronOptions {
  double tolerance = 1e-12;  // relative gap of the Collatz-Wielandt bounds
  long max_iterations = 1'000'000;
};

/// Spectral radius and positive eigenvectors of a nonnegative irreducible
/// matrix. Eigenvectors are normalized to sum 1.
struct PerronData {
  double rho = 0;
  DVec right;
  DVec left;
  long iterations = 0;
};

/// Power iteration on I + M, which is primitive whenever M is irreducible, so
/// periodic matrices converge too. Stops once the Collatz-Wielandt lower and
/// upper bounds for rho agree to the tolerance. Throws Error for a reducible
/// or negative matrix.
PerronData perron(const DMatrix& m, const PerronOptions& opts = {});

/// Exact Perron data when the spectral radius is rational and has a rational
/// eigenvector: constant row sums, or a positive solution of (M - I) r = 0.
/// Returns nullopt when neither shortcut applies.
struct ExactPerron {
  Rational rho;
  RVec right;  // positive, not normalized
};
std::optional<ExactPerron> exact_perron(const RMatrix& m);

/// Reads the tolerance override from SOFICLAB_TOL when set.
PerronOptions default_perron_options();

}  // namespace soficlab

#endif
