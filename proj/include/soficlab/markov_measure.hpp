#ifndef SOFICLAB_MARKOV_MEASURE_HPP
#define SOFICLAB_MARKOV_MEASURE_HPP

#include <optional>
#include <vector>

#include "soficlab/matrix.hpp"
#include "soficlab/shift_space.hpp"

namespace soficlab {

/// Square nonnegative rational matrix whose rows sum to exactly 1.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  explicit StochasticMatrix(RMatrix m);  // throws Error naming the first bad row

  const RMatrix& matrix() const { return m_; }
  std::size_t size() const { return m_.rows(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

 private:
  RMatrix m_;
};

/// Unique positive stochastic p with pP = p, solved exactly. Throws
/// Error("ambiguous stationary vector") when P is reducible.
RVec stationary_vector(const StochasticMatrix& p);

/// Stationary ergodic Markov measure of order k on a base SFT. An order-k
/// measure is held as a 1-step chain on the k-block presentation of the base;
/// for k = 1 the chain space and the base coincide.
class MarkovMeasure {
 public:
  MarkovMeasure() = default;

  /// 1-step measure on `space`. The support of P must equal the adjacency of
  /// the space and P must be irreducible. A supplied stationary vector is
  /// checked against the computed one.
  static MarkovMeasure make(const SftSpace& space, const StochasticMatrix& p,
                            const std::optional<RVec>& stationary = std::nullopt);

  /// 1-step measure on the SFT whose adjacency is the support of P.
  static MarkovMeasure from_matrix(const Alphabet& alphabet, const StochasticMatrix& p);

  /// Order-k measure: P is indexed by the allowed k-blocks of `base` in
  /// lexicographic order.
  static MarkovMeasure of_order(const SftSpace& base, std::size_t k, const StochasticMatrix& p,
                                const std::optional<RVec>& stationary = std::nullopt);

  std::size_t order() const { return order_; }
  const SftSpace& base() const { return base_; }
  /// Space of the 1-step chain (the k-block presentation when order > 1).
  const SftSpace& chain_space() const { return chain_space_; }
  const StochasticMatrix& transition() const { return transition_; }
  const RVec& stationary() const { return stationary_; }
  /// k-block behind each chain state; singletons when order() == 1.
  const std::vector<Word>& blocks() const { return blocks_; }

  /// The same measure as a 1-step measure on the chain space.
  MarkovMeasure as_one_step() const;

  friend bool operator==(const MarkovMeasure&, const MarkovMeasure&) = default;

 private:
  std::size_t order_ = 1;
  SftSpace base_;
  SftSpace chain_space_;
  StochasticMatrix transition_;
  RVec stationary_;
  std::vector<Word> blocks_;
};

/// A 1-step measure carried to the k-block presentation of its space (the
/// space of higher_block_presentation(mu.base(), k)). Pushing it through the
/// block-to-first-symbol code gives back mu.
MarkovMeasure higher_block_measure(const MarkovMeasure& mu, std::size_t k);

/// mu(C_0(w)) for a word over the base alphabet; ε has measure 1, forbidden
/// words 0.
Rational cylinder_measure(const MarkovMeasure& mu, const Word& w);

/// -sum_i p_i sum_j P_ij log P_ij (natural log).
double entropy(const MarkovMeasure& mu);

/// (code mu)(C_0(w)) for a 1-block code on the chain space of a 1-step
/// measure: p_{w_0} P_{w_1} ... P_{w_{n-1}} 1 with column-zeroed P_a.
Rational image_cylinder_measure(const BlockCode& code, const MarkovMeasure& mu, const Word& w);

/// Column-zeroed matrices P_a (columns of P whose index maps to a kept, the
/// rest zero), one per codomain symbol.
std::vector<RMatrix> column_split(const BlockCode& code, const RMatrix& p);

/// Outcome of the brute-force conditional-probability check.
struct EmpiricalCheck {
  bool consistent = true;
  /// First failing image word h·a (shortest, then lexicographic): the
  /// probability of a after h differs from that after the last k symbols of h.
  std::optional<Word> violation;
};

/// Compares next-symbol conditional probabilities given the full history
/// against those given the last k symbols, exactly, for all image words up
/// to length `horizon`. A violation is conclusive; consistency only holds up
/// to the horizon. Throws Error("horizon too short") if horizon < k + 1.
EmpiricalCheck empirical_k_markov_check(const BlockCode& code, const MarkovMeasure& mu, std::size_t k,
                                        std::size_t horizon);

/// Floating-point 1-step chain, for measures whose transition probabilities
/// are irrational (equilibrium states, stochasticizations).
struct NumericMarkov {
  SftSpace space;
  DMatrix transition;
  DVec stationary;
};

NumericMarkov to_numeric(const MarkovMeasure& mu);
double entropy(const NumericMarkov& mu);
double cylinder_measure(const NumericMarkov& mu, const Word& w);
double image_cylinder_measure(const BlockCode& code, const NumericMarkov& mu, const Word& w);

}  // namespace soficlab

#endif
