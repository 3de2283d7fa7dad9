#ifndef SOFICLAB_STOCHASTIC_MODULE_HPP
#define SOFICLAB_STOCHASTIC_MODULE_HPP

#include <optional>
#include <vector>

#include "soficlab/linear_rep.hpp"
#include "soficlab/polynomial.hpp"

namespace soficlab {

/// Prob(w) = l M_{w_1} ... M_{w_t} r. Entries may be negative (a reduced
/// module is only defined up to change of basis); l is a row vector and r a
/// column vector.
struct StochasticModule {
  Alphabet alphabet;
  RVec l;
  std::vector<RMatrix> mats;
  RVec r;

  std::size_t dim() const { return l.size(); }
  friend bool operator==(const StochasticModule&, const StochasticModule&) = default;
};

/// Checks shapes and l r = 1; throws Error otherwise.
void validate(const StochasticModule& mod);

StochasticModule module_of(const LinearRepresentation& rep);
/// Module of the image measure: from_sofic_image(code, mu).
StochasticModule image_module(const BlockCode& code, const MarkovMeasure& mu);

Rational probability(const StochasticModule& mod, const Word& w);

/// Minimal module with the same Prob. Pass one keeps a basis L of the span of
/// l M_w (words in length-then-lex order) and solves L M_a = N_a L; pass two
/// does the same on the column side starting from r.
StochasticModule reduce(const StochasticModule& mod);

/// A word where the two modules differ (shortest found first), or nullopt.
std::optional<Word> distinguishing_word(const StochasticModule& m1, const StochasticModule& m2);
bool equivalent(const StochasticModule& m1, const StochasticModule& m2);

struct CoreInvariant {
  RMatrix core;                  // sum of the reduced generators
  Polynomial eventual_charpoly;  // charpoly(core) with every factor t removed
};

/// Reduces first, so any module is accepted.
CoreInvariant core_invariant(const StochasticModule& mod);

/// Whether the eventual polynomial of the image divides that of the domain.
/// False rules out any factor map carrying the domain measure to the image.
bool core_quotient_check(const CoreInvariant& image, const CoreInvariant& domain);

}  // namespace soficlab

#endif
