#ifndef SOFICLAB_LINEAR_REP_HPP
#define SOFICLAB_LINEAR_REP_HPP

#include <vector>

#include "soficlab/markov_measure.hpp"
#include "soficlab/matrix.hpp"
#include "soficlab/shift_space.hpp"

namespace soficlab {

/// Triple (x, phi, y) with nonnegative entries representing the series
/// F(w) = x phi(w_1) ... phi(w_n) y.
class LinearRepresentation {
 public:
  LinearRepresentation() = default;
  /// Checks dimensions and nonnegativity; throws Error otherwise.
  LinearRepresentation(Alphabet alphabet, RVec x, std::vector<RMatrix> phi, RVec y);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t dim() const { return x_.size(); }
  const RVec& x() const { return x_; }
  const std::vector<RMatrix>& phi() const { return phi_; }
  const RMatrix& phi(Symbol a) const { return phi_.at(a); }
  const RVec& y() const { return y_; }

  /// P = sum_a phi(a).
  RMatrix total() const;

  friend bool operator==(const LinearRepresentation&, const LinearRepresentation&) = default;

 private:
  Alphabet alphabet_;
  RVec x_;
  std::vector<RMatrix> phi_;
  RVec y_;
};

/// x = p, y = 1, phi(a_j) keeps column j of P. Each generator has rank <= 1.
LinearRepresentation from_markov(const MarkovMeasure& mu);

/// x = p, y = 1, phi(b) = P_b keeping the columns of states the code sends to b.
LinearRepresentation from_sofic_image(const BlockCode& code, const MarkovMeasure& mu);

Rational evaluate(const LinearRepresentation& rep, const Word& w);

/// Equivalent representation with P = sum phi stochastic and a direct sum of
/// irreducible stochastic blocks, x positive stochastic with xP = x, and y = 1.
///
/// Reduction moves, repeated until none applies: drop zero columns of P
/// (after x <- xP), drop zero rows (after y <- Py), drop initial components
/// where x vanishes and terminal components where y vanishes, and replace
/// (x, y) by their projections onto the fixed spaces of P. A final diagonal
/// rescaling by y makes y = 1.
///
/// Throws Error("not a stationary probability series ...") naming the failing
/// word when F(ε) != 1 or the series is not shift invariant.
LinearRepresentation canonicalize(const LinearRepresentation& rep);

/// True when rep already has the canonical shape produced by canonicalize.
bool is_canonical(const LinearRepresentation& rep);

/// Markov measure plus subscript-erasing 1-block code presenting one
/// irreducible part of a series.
struct SoficPresentation {
  SftSpace space;
  MarkovMeasure measure;
  BlockCode code;
};

/// weights[i] is the mass of parts[i]; the series is sum_i weights[i] *
/// (image of parts[i]). A single part with weight 1 when P is irreducible.
struct SoficDecomposition {
  std::vector<Rational> weights;
  std::vector<SoficPresentation> parts;
};

/// Builds the block matrix whose every block row is (phi(1) ... phi(k)),
/// keeps the largest principal submatrix with no zero row or column, and
/// returns its stationary Markov measure with the code sending block b to
/// symbol b. Requires a canonical representation; each part is checked to
/// reproduce its component series exactly.
SoficDecomposition to_sofic_presentation(const LinearRepresentation& rep);

}  // namespace soficlab

#endif
