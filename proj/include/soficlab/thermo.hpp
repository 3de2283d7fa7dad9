#ifndef SOFICLAB_THERMO_HPP
#define SOFICLAB_THERMO_HPP

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "soficlab/lift.hpp"

namespace soficlab {

/// f(x) = values[x_0 ... x_{k-1}] on the allowed k-blocks of the space.
struct LocallyConstantPotential {
  SftSpace space;
  std::size_t span = 1;
  std::map<Word, double> values;

  /// Throws Error when some allowed block has no value or a key is not an
  /// allowed block.
  void validate() const;
  double operator()(const Word& block) const;

  friend bool operator==(const LocallyConstantPotential&, const LocallyConstantPotential&) = default;
};

LocallyConstantPotential constant_potential(const SftSpace& space, double c, std::size_t span = 1);

/// The potential as a function of edges of a 1-step SFT: the space itself for
/// span <= 2, the (k-1)-block presentation for span k > 2. Q(s, t) =
/// exp g(st) on allowed edges.
struct TransferData {
  SftSpace space;
  std::vector<Word> blocks;  // block behind each state
  DMatrix edge_values;       // g(st); meaningful on allowed edges only
  DMatrix Q;
};
TransferData transfer_data(const LocallyConstantPotential& f);

double pressure(const LocallyConstantPotential& f);

struct Equilibrium {
  NumericMarkov chain;       // on TransferData::space
  std::vector<Word> blocks;  // block behind each chain state
  double pressure = 0;
  double entropy = 0;
  double integral = 0;       // ∫ f dμ
};
Equilibrium equilibrium_markov(const LocallyConstantPotential& f);

/// S_ℓG(w): G summed over the span-windows that fit inside w.
double birkhoff_sum(const LocallyConstantPotential& g, const Word& w);

struct RatioRow {
  std::size_t length = 0;
  std::size_t words = 0;
  double min_ratio = 0;
  double max_ratio = 0;
  Word argmin, argmax;
};
struct CompensationReport {
  double min_ratio = 0;
  double max_ratio = 0;
  std::vector<RatioRow> rows;  // one per length 1..n
};
/// exp(S_ℓG(w)) |π^{-1}(w)| over the allowed Y-words of each length ℓ <= n.
/// Bounded ratios are evidence, not proof, that G∘π compensates.
CompensationReport compensation_ratio_report(const CodeStructure& cs, const LocallyConstantPotential& g,
                                             std::size_t n);

/// Entry ℓ - 1 is (1/ℓ) Σ_{|w| = ℓ} ν(w) log |π^{-1}(w)|.
std::vector<double> relative_entropy_estimate(const CodeStructure& cs, const std::function<double(const Word&)>& nu,
                                              std::size_t n);

/// min |π^{-1}{b}| over b in the support.
std::size_t fiber_bound(const CodeStructure& cs, const std::set<Symbol>& support);

}  // namespace soficlab

#endif
