#include "soficlab/markov_decide.hpp"

#include <cmath>
#include <map>

#include "soficlab/error.hpp"
#include "soficlab/linalg.hpp"

namespace soficlab {

DecisionContext DecisionContext::make(const BlockCode& code, const MarkovMeasure& mu) {
  if (mu.order() != 1) throw Error("decision procedures need a 1-step measure; recode the measure first");
  if (!(code.domain() == mu.base())) throw Error("code domain differs from the measure's space");
  DecisionContext ctx;
  if (code.is_one_block()) {
    ctx.code = code;
    ctx.measure = mu;
  } else {
    OneBlockRecoding rec = recode_to_one_block(code);
    MarkovMeasure lifted = higher_block_measure(mu, code.span());
    ctx.code = rec.code;
    ctx.measure = MarkovMeasure::make(rec.space, lifted.transition(), lifted.stationary());
  }
  const RMatrix& p = ctx.measure.transition().matrix();
  ctx.Pa = column_split(ctx.code, p);
  ctx.U = incidence_matrix(ctx.code);
  const auto& map = ctx.code.symbol_map();
  for (Symbol a = 0; a < ctx.symbols(); ++a) {
    RVec v(ctx.states(), Rational(0));
    for (Symbol i = 0; i < ctx.states(); ++i)
      if (map[i] == a) v[i] = ctx.measure.stationary()[i];
    ctx.pa.push_back(std::move(v));
  }
  return ctx;
}

namespace {

// v U: sums the entries of v over the states sent to each image symbol.
RVec times_u(const DecisionContext& ctx, const RVec& v) {
  RVec out(ctx.symbols(), Rational(0));
  const auto& map = ctx.code.symbol_map();
  for (Symbol i = 0; i < v.size(); ++i) out[map[i]] += v[i];
  return out;
}

// Image k-words of positive measure with their vectors p_{w0} P_{w1} ... .
void positive_words(const DecisionContext& ctx, std::size_t k, Word& w, const RVec& v,
                    std::vector<std::pair<Word, RVec>>& out) {
  if (w.size() == k) {
    out.emplace_back(w, v);
    return;
  }
  for (Symbol a = 0; a < ctx.symbols(); ++a) {
    RVec next = w.empty() ? ctx.pa[a] : v * ctx.Pa[a];
    if (is_zero(next)) continue;
    w.push_back(a);
    positive_words(ctx, k, w, next, out);
    w.pop_back();
  }
}

std::vector<std::pair<Word, RVec>> positive_words(const DecisionContext& ctx, std::size_t k) {
  std::vector<std::pair<Word, RVec>> out;
  Word w;
  positive_words(ctx, k, w, RVec(), out);
  return out;
}

RVec times_word(const DecisionContext& ctx, RVec v, const Word& w) {
  for (auto a : w) v = v * ctx.Pa[a];
  return v;
}

}  // namespace

StableSpace stable_space(const DecisionContext& ctx) {
  const std::size_t n = ctx.states();
  SpanBasis span(n);
  StableSpace out;
  std::vector<std::size_t> frontier;
  for (Symbol a = 0; a < ctx.symbols(); ++a)
    if (span.add(ctx.pa[a])) {
      out.words.push_back(Word{a});
      frontier.push_back(out.words.size() - 1);
    }
  const std::size_t initial = span.size();
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (auto idx : frontier)
      for (Symbol a = 0; a < ctx.symbols(); ++a)
        if (span.add(span.vectors()[idx] * ctx.Pa[a])) {
          Word w = out.words[idx];
          w.push_back(a);
          out.words.push_back(std::move(w));
          next.push_back(out.words.size() - 1);
        }
    if (next.empty()) break;
    ++out.index;
    frontier = std::move(next);
  }
  out.vectors = span.vectors();
  if (out.index > n - initial)
    throw InternalError("stable space took " + std::to_string(out.index) + " steps, more than N - |image| = " +
                        std::to_string(n - initial));
  return out;
}

KStepVerdict decide_kstep(const DecisionContext& ctx, std::size_t k) {
  if (k == 0) throw Error("k must be positive");
  KStepVerdict out;
  out.k = k;
  auto words = positive_words(ctx, k);
  const RMatrix& p = ctx.measure.transition().matrix();
  std::map<Word, std::size_t> index;
  for (const auto& [w, v] : words) {
    index[w] = out.states.size();
    out.states.push_back(w);
    out.q.push_back(sum(v));
  }

  // Q^w(j) = q(wj) / q(w), and the rows of Q over k-word states.
  std::vector<RVec> qw;
  out.Q = RMatrix(words.size(), words.size());
  for (std::size_t s = 0; s < words.size(); ++s) {
    RVec next = times_u(ctx, words[s].second * p);
    for (auto& x : next) x /= out.q[s];
    for (Symbol j = 0; j < ctx.symbols(); ++j) {
      if (next[j] == 0) continue;
      Word t(words[s].first.begin() + 1, words[s].first.end());
      t.push_back(j);
      out.Q(s, index.at(t)) = next[j];
    }
    qw.push_back(std::move(next));
  }

  // v P_w (P U - 1 Q^w) = 0 for every basis vector v of the stable space.
  StableSpace vs = stable_space(ctx);
  out.is_k_markov = true;
  for (std::size_t s = 0; s < words.size() && out.is_k_markov; ++s) {
    const Word& w = words[s].first;
    for (std::size_t b = 0; b < vs.vectors.size(); ++b) {
      RVec u = times_word(ctx, vs.vectors[b], w);
      Rational mass = sum(u);
      RVec lhs = times_u(ctx, u * p);
      for (Symbol j = 0; j < ctx.symbols(); ++j) {
        if (lhs[j] == mass * qw[s][j]) continue;
        Word full = vs.words[b];
        full.insert(full.end(), w.begin(), w.end());
        full.push_back(j);
        out.is_k_markov = false;
        out.witness = std::move(full);
        out.witness_context = w;
        break;
      }
      if (!out.is_k_markov) break;
    }
  }
  return out;
}

bool decide_kstep_kernel(const DecisionContext& ctx, std::size_t k) {
  if (k == 0) throw Error("k must be positive");
  StableSpace vs = stable_space(ctx);
  const RMatrix& p = ctx.measure.transition().matrix();
  const std::size_t n = ctx.states();
  for (const Word& w : all_words(ctx.symbols(), k)) {
    SpanBasis moved(n);
    for (const auto& v : vs.vectors) moved.add(times_word(ctx, v, w));
    if (moved.size() == 0) continue;
    const auto& rows = moved.vectors();
    // z = c S lies in ker U iff c (S U) = 0.
    RMatrix su(rows.size(), ctx.symbols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      RVec r = times_u(ctx, rows[i]);
      for (Symbol j = 0; j < ctx.symbols(); ++j) su(i, j) = r[j];
    }
    for (const auto& c : left_kernel(su)) {
      RVec z(n, Rational(0));
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t t = 0; t < n; ++t) z[t] += c[i] * rows[i][t];
      if (!is_zero(times_u(ctx, z * p))) return false;
    }
  }
  return true;
}

// ----------------------------------------------------------- rank criterion

namespace {

bool rank_dfs(const StochasticModule& mod, std::size_t k, Word& w, const RMatrix& prod, RankVerdict& out) {
  for (Symbol a = 0; a < mod.mats.size(); ++a) {
    RMatrix next = w.empty() ? mod.mats[a] : prod * mod.mats[a];
    std::size_t r = rank(next);
    // rank(AB) <= rank(A): a prefix of rank <= 1 cannot lead to a witness.
    if (r < 2) continue;
    w.push_back(a);
    if (w.size() == k) {
      out.is_k_markov = false;
      out.witness = w;
      out.witness_rank = r;
      return true;
    }
    if (rank_dfs(mod, k, w, next, out)) return true;
    w.pop_back();
  }
  return false;
}

}  // namespace

RankVerdict rank_criterion(const StochasticModule& reduced, std::size_t k, std::size_t cap) {
  if (k == 0) throw Error("k must be positive");
  BigInt words = 1;
  for (std::size_t i = 0; i < k; ++i) words *= static_cast<unsigned long>(reduced.mats.size());
  if (words > BigInt(static_cast<unsigned long>(cap)))
    throw Error("cap exceeded: " + soficlab::to_string(words) + " words of length " + std::to_string(k) +
                " exceed the enumeration cap " + std::to_string(cap) + "; use decide_kstep instead");
  RankVerdict out;
  Word w;
  rank_dfs(reduced, k, w, RMatrix(), out);
  return out;
}

// -------------------------------------------------------------- order bound

const BigInt& OrderBound::value() const {
  if (!materialized()) throw Error("order bound is too large to expand: " + to_string());
  return seed_;
}

bool OrderBound::exceeds(const BigInt& x) const {
  // Every unexpanded level was too large for the bit budget, so it dwarfs
  // any count that fits in memory.
  if (!materialized()) return true;
  return seed_ > x;
}

std::string OrderBound::to_string() const {
  std::string s = soficlab::to_string(seed_);
  for (std::size_t i = 0; i < levels_; ++i) {
    const std::string inner = i == 0 ? s : "(" + s + ")";
    s = "(1 + " + std::to_string(m_) + "^" + inner + ") * " + inner;
  }
  return s;
}

OrderBound order_bound(unsigned long k, unsigned long m, unsigned long n, std::size_t bit_budget) {
  if (k < 1 || k > n || m < 1) throw Error("order bound needs 1 <= k <= n and m >= 1");
  BigInt value = 1;
  std::size_t levels = 0;
  const double bits_per_digit = std::log2(static_cast<double>(m));
  for (unsigned long level = n; level > k; --level) {
    if (levels == 0) {
      const double bits = value.get_d() * bits_per_digit;
      if (bits <= static_cast<double>(bit_budget) && value.fits_ulong_p()) {
        BigInt power;
        mpz_ui_pow_ui(power.get_mpz_t(), m, value.get_ui());
        value = (1 + power) * value;
        continue;
      }
    }
    ++levels;
  }
  return OrderBound(m, value, levels);
}

std::string to_string(MarkovStatus s) {
  switch (s) {
    case MarkovStatus::markov: return "markov";
    case MarkovStatus::not_markov: return "not_markov";
    case MarkovStatus::undecided_at_cap: return "undecided_at_cap";
  }
  return "";
}

// ------------------------------------------------------------- markov order

MarkovVerdict decide_markov(const DecisionContext& ctx, std::size_t cap, std::size_t frontier_limit) {
  if (cap == 0) throw Error("cap must be positive");
  StochasticModule red = reduce(image_module(ctx.code, ctx.measure));
  MarkovVerdict out;
  out.reduced_dim = red.dim();
  out.alphabet_size = red.mats.size();

  std::size_t limit = cap;
  bool bound_is_limit = false;
  if (red.dim() >= 2) {
    out.bound = order_bound(2, static_cast<unsigned long>(out.alphabet_size), static_cast<unsigned long>(red.dim()));
    if (!out.bound->exceeds(BigInt(static_cast<unsigned long>(cap)))) {
      limit = out.bound->value().get_ui();
      bound_is_limit = true;
    }
  }

  // Row spaces of rank >= 2 products of the current length, each with the
  // first word that reached it. rank(M_w M_a) only depends on the row space
  // of M_w, so equal row spaces are merged.
  struct Entry {
    RMatrix rows;
    Word word;
  };
  std::vector<Entry> frontier;
  auto canonical = [](RMatrix m) {
    auto piv = rref(m);
    RMatrix r(piv.size(), m.cols());
    for (std::size_t i = 0; i < piv.size(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
  };
  auto key_of = [](const RMatrix& m) {
    std::vector<Rational> key;
    key.reserve(m.rows() * m.cols() + 1);
    key.emplace_back(static_cast<unsigned long>(m.rows()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) key.push_back(m(i, j));
    return key;
  };

  for (std::size_t len = 1; len <= limit; ++len) {
    std::map<std::vector<Rational>, std::size_t> seen;
    std::vector<Entry> next;
    auto consider = [&](const RMatrix& m, Word w) {
      RMatrix c = canonical(m);
      if (c.rows() < 2) return;
      if (seen.emplace(key_of(c), next.size()).second) next.push_back({std::move(c), std::move(w)});
    };
    if (len == 1) {
      for (Symbol a = 0; a < red.mats.size(); ++a) consider(red.mats[a], Word{a});
    } else {
      for (const auto& e : frontier)
        for (Symbol a = 0; a < red.mats.size(); ++a) {
          Word w = e.word;
          w.push_back(a);
          consider(e.rows * red.mats[a], std::move(w));
        }
    }
    out.searched_length = len;
    if (next.empty()) {
      KStepVerdict v = decide_kstep(ctx, len);
      if (!v.is_k_markov)
        throw InternalError("rank criterion and k-step check disagree at k = " + std::to_string(len));
      out.status = MarkovStatus::markov;
      out.k = len;
      out.chain = std::move(v);
      out.witness.reset();
      out.detail = "all products of length " + std::to_string(len) + " have rank <= 1; verified by the k-step check";
      return out;
    }
    frontier = std::move(next);
    out.witness = frontier.front().word;
    if (frontier.size() > frontier_limit) {
      out.status = MarkovStatus::undecided_at_cap;
      out.detail = "distinct rank >= 2 row spaces exceeded " + std::to_string(frontier_limit) + " at length " +
                   std::to_string(len);
      return out;
    }
  }
  if (bound_is_limit) {
    out.status = MarkovStatus::not_markov;
    out.detail = "rank >= 2 products persist up to length N(2,m,n) = " + out.bound->to_string();
  } else {
    out.status = MarkovStatus::undecided_at_cap;
    out.detail = "rank >= 2 products persist up to the cap " + std::to_string(cap) + "; N(2,m,n) = " +
                 (out.bound ? out.bound->to_string() : std::string("1"));
  }
  return out;
}

}  // namespace soficlab
