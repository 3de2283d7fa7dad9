#include "soficlab/markov_measure.hpp"

#include <cmath>

#include "soficlab/error.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/linalg.hpp"

namespace soficlab {

StochasticMatrix::StochasticMatrix(RMatrix m) : m_(std::move(m)) {
  if (!m_.square() || m_.rows() == 0) throw Error("transition matrix must be square and nonempty");
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < m_.cols(); ++j) {
      if (m_(i, j) < 0)
        throw Error("entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative: " + to_string(m_(i, j)));
      s += m_(i, j);
    }
    if (s != 1) throw Error("row " + std::to_string(i) + " sums to " + to_string(s) + " ≠ 1");
  }
}

RVec stationary_vector(const StochasticMatrix& p) {
  const RMatrix& m = p.matrix();
  const std::size_t n = m.rows();
  if (!strongly_connected(support_graph(m))) throw Error("ambiguous stationary vector: transition matrix is reducible");
  // (P^T - I) p^T = 0 together with sum p = 1.
  RMatrix a(n + 1, n);
  RVec b(n + 1, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(j, i) - (i == j ? 1 : 0);
  for (std::size_t j = 0; j < n; ++j) a(n, j) = 1;
  b[n] = 1;
  auto sol = solve(a, b);
  if (!sol) throw InternalError("stationary system inconsistent for an irreducible stochastic matrix");
  for (const auto& x : *sol)
    if (x <= 0) throw InternalError("stationary vector of an irreducible chain is not positive");
  return *sol;
}

// ------------------------------------------------------------ MarkovMeasure

namespace {

void check_support(const SftSpace& space, const StochasticMatrix& p) {
  if (p.size() != space.size())
    throw Error("transition matrix is " + std::to_string(p.size()) + "x" + std::to_string(p.size()) +
                " but the space has " + std::to_string(space.size()) + " symbols");
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if ((p(i, j) > 0) != space.edge(i, j))
        throw Error("transition support differs from the adjacency at (" + space.alphabet().name(i) + "," +
                    space.alphabet().name(j) + ")");
}

RVec checked_stationary(const StochasticMatrix& p, const std::optional<RVec>& supplied) {
  RVec pi = stationary_vector(p);
  if (supplied && *supplied != pi) throw Error("supplied stationary vector does not satisfy pP = p");
  return pi;
}

}  // namespace

MarkovMeasure MarkovMeasure::make(const SftSpace& space, const StochasticMatrix& p,
                                  const std::optional<RVec>& stationary) {
  check_support(space, p);
  MarkovMeasure mu;
  mu.order_ = 1;
  mu.base_ = space;
  mu.chain_space_ = space;
  mu.transition_ = p;
  mu.stationary_ = checked_stationary(p, stationary);
  for (Symbol s = 0; s < space.size(); ++s) mu.blocks_.push_back(Word{s});
  return mu;
}

MarkovMeasure MarkovMeasure::from_matrix(const Alphabet& alphabet, const StochasticMatrix& p) {
  if (p.size() != alphabet.size()) throw Error("transition matrix size does not match the alphabet");
  Matrix<int> adj(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) adj(i, j) = p(i, j) > 0 ? 1 : 0;
  SftSpace space = build_sft(alphabet, adj);
  if (space.size() != alphabet.size()) throw Error("transition matrix support leaves a symbol with no in-edge");
  return make(space, p);
}

MarkovMeasure MarkovMeasure::of_order(const SftSpace& base, std::size_t k, const StochasticMatrix& p,
                                      const std::optional<RVec>& stationary) {
  if (k == 0) throw Error("Markov order must be positive");
  if (k == 1) return make(base, p, stationary);
  HigherBlock hb = higher_block_presentation(base, k);
  MarkovMeasure mu = make(hb.space, p, stationary);
  mu.order_ = k;
  mu.base_ = base;
  mu.blocks_ = hb.blocks;
  return mu;
}

MarkovMeasure MarkovMeasure::as_one_step() const {
  MarkovMeasure mu = *this;
  mu.order_ = 1;
  mu.base_ = chain_space_;
  mu.blocks_.clear();
  for (Symbol s = 0; s < chain_space_.size(); ++s) mu.blocks_.push_back(Word{s});
  return mu;
}

MarkovMeasure higher_block_measure(const MarkovMeasure& mu, std::size_t k) {
  if (mu.order() != 1) throw Error("higher_block_measure needs a 1-step measure");
  HigherBlock hb = higher_block_presentation(mu.base(), k);
  const std::size_t n = hb.space.size();
  RMatrix p(n, n);
  RVec stat(n);
  for (Symbol s = 0; s < n; ++s) {
    stat[s] = cylinder_measure(mu, hb.blocks[s]);
    for (Symbol t = 0; t < n; ++t)
      if (hb.space.edge(s, t)) p(s, t) = mu.transition()(hb.blocks[s].back(), hb.blocks[t].back());
  }
  return MarkovMeasure::make(hb.space, StochasticMatrix(std::move(p)), stat);
}

// --------------------------------------------------------------- cylinders

namespace {

// Chain states whose block starts with the given (short) word.
std::vector<Symbol> states_with_prefix(const MarkovMeasure& mu, const Word& w) {
  std::vector<Symbol> out;
  for (Symbol s = 0; s < mu.blocks().size(); ++s) {
    const Word& b = mu.blocks()[s];
    if (w.size() <= b.size() && std::equal(w.begin(), w.end(), b.begin())) out.push_back(s);
  }
  return out;
}

std::optional<Symbol> state_of_block(const MarkovMeasure& mu, const Word& w, std::size_t start) {
  for (Symbol s = 0; s < mu.blocks().size(); ++s)
    if (std::equal(mu.blocks()[s].begin(), mu.blocks()[s].end(), w.begin() + static_cast<std::ptrdiff_t>(start)))
      return s;
  return std::nullopt;
}

}  // namespace

Rational cylinder_measure(const MarkovMeasure& mu, const Word& w) {
  if (w.empty()) return 1;
  for (auto s : w)
    if (s >= mu.base().size()) throw Error("word uses a symbol outside the measure's alphabet");
  const std::size_t k = mu.order();
  const RVec& p = mu.stationary();
  if (w.size() < k) {
    Rational total = 0;
    for (auto s : states_with_prefix(mu, w)) total += p[s];
    return total;
  }
  auto first = state_of_block(mu, w, 0);
  if (!first) return 0;
  Rational value = p[*first];
  Symbol prev = *first;
  for (std::size_t start = 1; start + k <= w.size(); ++start) {
    auto next = state_of_block(mu, w, start);
    if (!next) return 0;
    value *= mu.transition()(prev, *next);
    if (value == 0) return 0;
    prev = *next;
  }
  return value;
}

double entropy(const MarkovMeasure& mu) { return entropy(to_numeric(mu)); }

std::vector<RMatrix> column_split(const BlockCode& code, const RMatrix& p) {
  const auto& map = code.symbol_map();
  if (map.size() != p.rows()) throw Error("code domain does not match the chain's state space");
  std::vector<RMatrix> out(code.codomain().size(), RMatrix(p.rows(), p.cols()));
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) out[map[j]](i, j) = p(i, j);
  return out;
}

Rational image_cylinder_measure(const BlockCode& code, const MarkovMeasure& mu, const Word& w) {
  if (mu.order() != 1) throw Error("image measures need a 1-step measure; recode to the block presentation first");
  const auto& map = code.symbol_map();
  const RMatrix& p = mu.transition().matrix();
  if (map.size() != p.rows()) throw Error("code domain does not match the measure's state space");
  if (w.empty()) return 1;
  for (auto s : w)
    if (s >= code.codomain().size()) throw Error("word uses a symbol outside the code's codomain");
  RVec v(p.rows(), Rational(0));
  for (std::size_t i = 0; i < p.rows(); ++i)
    if (map[i] == w[0]) v[i] = mu.stationary()[i];
  for (std::size_t t = 1; t < w.size(); ++t) {
    RVec next(p.rows(), Rational(0));
    for (std::size_t i = 0; i < p.rows(); ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < p.cols(); ++j)
        if (map[j] == w[t] && p(i, j) != 0) next[j] += v[i] * p(i, j);
    }
    v = std::move(next);
  }
  return sum(v);
}

EmpiricalCheck empirical_k_markov_check(const BlockCode& code, const MarkovMeasure& mu, std::size_t k,
                                        std::size_t horizon) {
  if (k == 0) throw Error("Markov order must be positive");
  if (horizon < k + 1) throw Error("horizon too short: need at least k + 1 = " + std::to_string(k + 1));
  const std::size_t m = code.codomain().size();

  // Level-by-level over image words of positive measure.
  struct Entry {
    Word word;
    Rational value;
  };
  std::vector<Entry> level{{Word{}, Rational(1)}};
  for (std::size_t len = 1; len <= horizon; ++len) {
    std::vector<Entry> next;
    for (const auto& h : level) {
      for (Symbol a = 0; a < m; ++a) {
        Word s = h.word;
        s.push_back(a);
        Rational vs = image_cylinder_measure(code, mu, s);
        if (len > k) {
          Word tail(h.word.end() - static_cast<std::ptrdiff_t>(k), h.word.end());
          Word tail_a = tail;
          tail_a.push_back(a);
          Rational vt = image_cylinder_measure(code, mu, tail);
          Rational vta = image_cylinder_measure(code, mu, tail_a);
          if (vs * vt != vta * h.value) return {false, s};
        }
        if (vs > 0) next.push_back({std::move(s), vs});
      }
    }
    level = std::move(next);
  }
  return {true, std::nullopt};
}

// ----------------------------------------------------------------- numeric

NumericMarkov to_numeric(const MarkovMeasure& mu) {
  return {mu.chain_space(), to_double(mu.transition().matrix()), to_double(mu.stationary())};
}

double entropy(const NumericMarkov& mu) {
  double h = 0;
  for (std::size_t i = 0; i < mu.transition.rows(); ++i)
    for (std::size_t j = 0; j < mu.transition.cols(); ++j) {
      double pij = mu.transition(i, j);
      if (pij > 0) h -= mu.stationary[i] * pij * std::log(pij);
    }
  return h;
}

double cylinder_measure(const NumericMarkov& mu, const Word& w) {
  if (w.empty()) return 1;
  if (!mu.space.allows(w)) return 0;
  double v = mu.stationary[w[0]];
  for (std::size_t i = 0; i + 1 < w.size(); ++i) v *= mu.transition(w[i], w[i + 1]);
  return v;
}

double image_cylinder_measure(const BlockCode& code, const NumericMarkov& mu, const Word& w) {
  const auto& map = code.symbol_map();
  const auto& p = mu.transition;
  if (w.empty()) return 1;
  DVec v(p.rows(), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i)
    if (map[i] == w[0]) v[i] = mu.stationary[i];
  for (std::size_t t = 1; t < w.size(); ++t) {
    DVec next(p.rows(), 0.0);
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j)
        if (map[j] == w[t]) next[j] += v[i] * p(i, j);
    v = std::move(next);
  }
  return sum(v);
}

}  // namespace soficlab
