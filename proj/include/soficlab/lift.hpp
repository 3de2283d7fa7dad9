#ifndef SOFICLAB_LIFT_HPP
#define SOFICLAB_LIFT_HPP

#include <optional>
#include <string>
#include <vector>

#include "soficlab/markov_decide.hpp"
#include "soficlab/markov_measure.hpp"
#include "soficlab/perron.hpp"

namespace soficlab {

/// A 1-block code X -> Y with Y a 1-step SFT over the code's codomain.
struct CodeStructure {
  BlockCode code;
  SftSpace X;
  SftSpace Y;
  Matrix<int> U;

  /// Without Y, infers it from the image 2-blocks and checks that the image
  /// really is that SFT. Throws Error("image not SFT; ...") otherwise.
  static CodeStructure make(const BlockCode& code, const std::optional<SftSpace>& y = std::nullopt);
};

struct ResolvingStatus {
  bool right_resolving = false;
  bool left_resolving = false;
  bool right_e_resolving = false;
  bool left_e_resolving = false;
};
/// Right: AU <= UB (resolving) and AU >= UB (e-resolving). Left: the same
/// with A and B transposed.
ResolvingStatus resolving_status(const CodeStructure& cs);

/// stoch(M) = (1/rho) D^-1 M D with D = diag(right Perron vector). Exact
/// when rho and the eigenvector are rational (see exact_perron); otherwise
/// numeric, with rows renormalized to sum 1.
struct Stochasticized {
  bool exact = false;
  RMatrix exact_matrix;  // set when exact
  Rational exact_rho;    // set when exact
  DMatrix matrix;        // always set
  double rho = 0;
  DVec right;            // normalized right Perron vector
  DVec left;             // normalized left Perron vector
};
Stochasticized stochasticize(const RMatrix& m, const PerronOptions& opts = default_perron_options());
Stochasticized stochasticize(const DMatrix& m, const PerronOptions& opts = default_perron_options());

/// 1-step chain with its numeric stationary vector.
NumericMarkov numeric_chain(const SftSpace& space, const DMatrix& p);
NumericMarkov numeric_chain(const SftSpace& space, const Stochasticized& s);

/// P'(i, j) from M(i, j) = Q'(π i, π j) P(i, j) / Q(π i, π j). Checks first
/// that the code carries μ_P to ν_Q and that Q' has the support of Q.
Stochasticized markovian_lift(const CodeStructure& cs, const StochasticMatrix& P, const StochasticMatrix& Q,
                              const StochasticMatrix& Qp);

/// P with the pattern of A and PU = UQ for a right e-resolving code (or the
/// time-reversed construction for a left e-resolving one). Each Q(π i, l) is
/// spread over the successors j of i with π j = l: uniformly, or in
/// proportion weights(i, j), which must sum to 1 over each such set.
StochasticMatrix e_resolving_lift(const CodeStructure& cs, const StochasticMatrix& Q,
                                  const std::optional<RMatrix>& weights = std::nullopt);

struct Wps {
  Rational product;  // product of transition probabilities around the cycle
  double value = 0;  // log(product) / n
};
/// Weight per symbol of the periodic point w^∞. For an order-k measure the
/// transitions are read between consecutive k-blocks of the periodic point.
Wps wps(const MarkovMeasure& mu, const Word& cycle);
double wps(const NumericMarkov& mu, const Word& cycle);

/// No two distinct equal-length paths with the same ends and the same label.
bool finite_to_one_check(const CodeStructure& cs);

/// Candidate k-step image chain computed in floating point by the same
/// formula as decide_kstep: Q(w, w[1..]j) = ν(wj)/ν(w).
struct NumericKChain {
  std::size_t k = 1;
  std::vector<Word> states;
  DVec q;
  DMatrix Q;
};
NumericKChain numeric_candidate(const BlockCode& code, const NumericMarkov& mu, std::size_t k);
/// log of the ν-product around an image cycle; -inf when it vanishes.
double log_cycle_weight(const NumericKChain& nu, const Word& cycle);

struct WpsCheck {
  bool holds = true;
  std::optional<Word> cycle;  // first failing X-cycle
  double mu_wps = 0;
  double nu_wps = 0;
};
/// Compares cycle weights of μ on every X-cycle of length <= n with those of
/// ν on the image cycle. Exact for rational measures; the numeric variant
/// compares weights per symbol with the given tolerance. Throws unless the
/// code is finite-to-one.
WpsCheck wps_lift_check(const CodeStructure& cs, const MarkovMeasure& mu, const MarkovMeasure& nu, std::size_t n);
WpsCheck wps_lift_check(const CodeStructure& cs, const NumericMarkov& mu, const NumericKChain& nu, std::size_t n,
                        double tolerance = 1e-9);

/// ν_Q from a verified k-step verdict, as an order-k measure on Y.
MarkovMeasure image_chain(const KStepVerdict& verdict, const SftSpace& y);

}  // namespace soficlab

#endif
