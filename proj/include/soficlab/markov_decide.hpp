#ifndef SOFICLAB_MARKOV_DECIDE_HPP
#define SOFICLAB_MARKOV_DECIDE_HPP

#include <optional>
#include <string>
#include <vector>

#include "soficlab/markov_measure.hpp"
#include "soficlab/stochastic_module.hpp"

namespace soficlab {

/// Everything the decision procedures need about a 1-block code on a 1-step
/// chain: P_a keeps the columns of states sent to a, p_a the matching
/// entries of p, and U(i, a) = 1 iff state i is sent to a.
struct DecisionContext {
  BlockCode code;
  MarkovMeasure measure;
  std::vector<RMatrix> Pa;
  std::vector<RVec> pa;
  Matrix<int> U;

  /// Accepts any block code whose domain is the base of a 1-step measure;
  /// codes of larger span are recoded to 1-block codes on a higher block
  /// presentation first.
  static DecisionContext make(const BlockCode& code, const MarkovMeasure& mu);

  std::size_t states() const { return measure.transition().size(); }
  std::size_t symbols() const { return code.codomain().size(); }
  const Alphabet& image_alphabet() const { return code.codomain(); }
};

/// Basis of the span of all p_{j0} P_{j1} ... P_{jt}. words[i] generated
/// vectors[i]; index is the least t >= 0 with V_t = V_{t+1}.
struct StableSpace {
  std::vector<RVec> vectors;
  std::vector<Word> words;
  std::size_t index = 0;
};
StableSpace stable_space(const DecisionContext& ctx);

struct KStepVerdict {
  bool is_k_markov = false;
  std::size_t k = 0;
  /// Image k-words of positive measure, lexicographic; they index q and Q.
  std::vector<Word> states;
  RVec q;
  /// Candidate transition matrix over `states`; always built, meaningful as
  /// the image chain only when is_k_markov holds.
  RMatrix Q;
  /// On failure: history, k-word context and next symbol concatenated. The
  /// probability of the last symbol given everything before it differs from
  /// the probability given only the context.
  std::optional<Word> witness;
  std::optional<Word> witness_context;
};
KStepVerdict decide_kstep(const DecisionContext& ctx, std::size_t k);

/// The same question through ((V P_w) ∩ ker U) P ⊂ ker U.
bool decide_kstep_kernel(const DecisionContext& ctx, std::size_t k);

struct RankVerdict {
  bool is_k_markov = true;
  std::optional<Word> witness;  // first word (lexicographic) with rank >= 2
  std::size_t witness_rank = 0;
};
inline constexpr std::size_t kDefaultRankCap = std::size_t{1} << 20;
/// Every product of k generators of a reduced module has rank <= 1. Throws
/// Error("cap exceeded ...") when m^k exceeds the cap.
RankVerdict rank_criterion(const StochasticModule& reduced, std::size_t k, std::size_t cap = kDefaultRankCap);

/// N(k, m, n). Values whose binary size would exceed a budget are kept
/// unexpanded: the number is f applied `levels` times to `seed`, where
/// f(x) = (1 + m^x) x.
class OrderBound {
 public:
  OrderBound(unsigned long m, BigInt seed, std::size_t levels) : m_(m), seed_(std::move(seed)), levels_(levels) {}

  bool materialized() const { return levels_ == 0; }
  const BigInt& value() const;  // throws Error when not materialized
  unsigned long m() const { return m_; }
  const BigInt& seed() const { return seed_; }
  std::size_t levels() const { return levels_; }

  /// Whether the value is strictly greater than x.
  bool exceeds(const BigInt& x) const;
  /// Decimal digits, or the nested expression when unexpanded.
  std::string to_string() const;

 private:
  unsigned long m_;
  BigInt seed_;
  std::size_t levels_;
};

inline constexpr std::size_t kOrderBoundBitBudget = std::size_t{1} << 24;
OrderBound order_bound(unsigned long k, unsigned long m, unsigned long n,
                       std::size_t bit_budget = kOrderBoundBitBudget);

enum class MarkovStatus { markov, not_markov, undecided_at_cap };
std::string to_string(MarkovStatus s);

struct MarkovVerdict {
  MarkovStatus status = MarkovStatus::undecided_at_cap;
  std::size_t k = 0;                   // order, when markov
  std::optional<KStepVerdict> chain;   // the verified image chain, when markov
  std::size_t reduced_dim = 0;
  std::size_t alphabet_size = 0;
  std::optional<OrderBound> bound;     // N(2, m, n); absent when n = 1
  std::size_t searched_length = 0;     // longest product length examined
  std::optional<Word> witness;         // rank >= 2 product of that length
  std::string detail;
};

inline constexpr std::size_t kDefaultMarkovCap = 64;
inline constexpr std::size_t kDefaultFrontierLimit = 1 << 14;
MarkovVerdict decide_markov(const DecisionContext& ctx, std::size_t cap = kDefaultMarkovCap,
                            std::size_t frontier_limit = kDefaultFrontierLimit);

}  // namespace soficlab

#endif
