#include "soficlab/perron.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "soficlab/error.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/linalg.hpp"

namespace soficlab {

namespace {

struct Iterate {
  DVec vec;
  double rho;
  long iterations;
};

Iterate power_iterate(const DMatrix& m, const PerronOptions& opts) {
  const std::size_t n = m.rows();
  DVec x(n, 1.0 / static_cast<double>(n));
  double lo = 0, hi = 0;
  for (long it = 1; it <= opts.max_iterations; ++it) {
    DVec mx = m * x;
    lo = std::numeric_limits<double>::infinity();
    hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double ratio = mx[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    if (hi - lo <= opts.tolerance * std::max(hi, 1e-300)) return {x, 0.5 * (lo + hi), it};
    // x <- (I + M) x, normalized
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += mx[i];
      s += x[i];
    }
    for (auto& v : x) v /= s;
  }
  throw Error("Perron iteration did not converge within " + std::to_string(opts.max_iterations) +
              " iterations (gap " + std::to_string(hi - lo) + ")");
}

}  // namespace

PerronData perron(const DMatrix& m, const PerronOptions& opts) {
  if (!m.square() || m.rows() == 0) throw Error("Perron data needs a nonempty square matrix");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) < 0 || !std::isfinite(m(i, j))) throw Error("Perron data needs a nonnegative finite matrix");
  if (!strongly_connected(support_graph(m))) throw Error("ambiguous Perron data: matrix is reducible");

  Iterate right = power_iterate(m, opts);
  Iterate left = power_iterate(m.transpose(), opts);
  return {right.rho, std::move(right.vec), std::move(left.vec), right.iterations + left.iterations};
}

std::optional<ExactPerron> exact_perron(const RMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || !m.square()) return std::nullopt;

  Rational first = 0;
  for (std::size_t j = 0; j < n; ++j) first += m(0, j);
  bool constant_rows = first > 0;
  for (std::size_t i = 1; i < n && constant_rows; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < n; ++j) s += m(i, j);
    constant_rows = s == first;
  }
  if (constant_rows) return ExactPerron{first, RVec(n, Rational(1))};

  RMatrix shifted = m - RMatrix::identity(n);
  auto kernel = right_kernel(shifted);
  if (kernel.size() != 1) return std::nullopt;
  RVec r = kernel.front();
  if (r[0] < 0)
    for (auto& x : r) x = -x;
  for (const auto& x : r)
    if (x <= 0) return std::nullopt;
  return ExactPerron{Rational(1), std::move(r)};
}

PerronOptions default_perron_options() {
  PerronOptions opts;
  if (const char* env = std::getenv("SOFICLAB_TOL")) {
    char* end = nullptr;
    double tol = std::strtod(env, &end);
    if (end != env && tol > 0 && std::isfinite(tol)) opts.tolerance = tol;
  }
  return opts;
}

}  // namespace soficlab
