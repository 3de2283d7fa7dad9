#include "soficlab/lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "soficlab/error.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/linalg.hpp"

namespace soficlab {

// ---------------------------------------------------------- code structure

namespace {

Matrix<int> image_two_blocks(const BlockCode& code) {
  const auto& map = code.symbol_map();
  const SftSpace& x = code.domain();
  const std::size_t m = code.codomain().size();
  Matrix<int> b(m, m);
  for (Symbol i = 0; i < x.size(); ++i)
    for (Symbol j : x.successors(i)) b(map[i], map[j]) = 1;
  return b;
}

// Every word allowed by B is the label of a path in X. Subset construction
// over the sets of X-states that can end a path with a given label.
bool image_fills_sft(const BlockCode& code, const Matrix<int>& b) {
  const auto& map = code.symbol_map();
  const SftSpace& x = code.domain();
  using Set = std::vector<bool>;
  std::set<std::pair<Symbol, Set>> seen;
  std::vector<std::pair<Symbol, Set>> stack;
  for (Symbol a = 0; a < b.rows(); ++a) {
    Set s(x.size(), false);
    bool any = false;
    for (Symbol i = 0; i < x.size(); ++i)
      if (map[i] == a) s[i] = any = true;
    if (!any) return false;
    if (seen.emplace(a, s).second) stack.emplace_back(a, s);
  }
  while (!stack.empty()) {
    auto [a, s] = stack.back();
    stack.pop_back();
    for (Symbol c = 0; c < b.cols(); ++c) {
      if (b(a, c) == 0) continue;
      Set t(x.size(), false);
      bool any = false;
      for (Symbol i = 0; i < x.size(); ++i)
        if (s[i])
          for (Symbol j : x.successors(i))
            if (map[j] == c) t[j] = any = true;
      if (!any) return false;
      if (seen.emplace(c, t).second) stack.emplace_back(c, std::move(t));
    }
  }
  return true;
}

}  // namespace

CodeStructure CodeStructure::make(const BlockCode& code, const std::optional<SftSpace>& y) {
  if (!code.is_one_block()) throw Error("code structure needs a 1-block code; recode it first");
  CodeStructure cs;
  cs.code = code;
  cs.X = code.domain();
  cs.U = incidence_matrix(code);
  Matrix<int> blocks = image_two_blocks(code);
  if (y) {
    if (!(y->alphabet() == code.codomain())) throw Error("Y alphabet differs from the code's codomain");
    for (std::size_t a = 0; a < blocks.rows(); ++a)
      for (std::size_t c = 0; c < blocks.cols(); ++c)
        if (blocks(a, c) && !y->edge(a, c))
          throw Error("image 2-block \"" + code.codomain().format(Word{a, c}) + "\" is not allowed in Y");
    cs.Y = *y;
  } else {
    if (!image_fills_sft(code, blocks))
      throw Error("image not SFT; supply Y explicitly or use e-resolving-free operations");
    cs.Y = build_sft(code.codomain(), blocks);
  }
  return cs;
}

ResolvingStatus resolving_status(const CodeStructure& cs) {
  const auto& map = cs.code.symbol_map();
  const std::size_t n = cs.X.size(), m = cs.Y.size();
  ResolvingStatus st{true, true, true, true};
  for (Symbol i = 0; i < n; ++i)
    for (Symbol c = 0; c < m; ++c) {
      int out = 0, in = 0;  // (AU)(i, c) and (A^T U)(i, c)
      for (Symbol j = 0; j < n; ++j)
        if (map[j] == c) {
          out += cs.X.edge(i, j);
          in += cs.X.edge(j, i);
        }
      const int ub = cs.Y.edge(map[i], c), ubt = cs.Y.edge(c, map[i]);
      if (out > ub) st.right_resolving = false;
      if (out < ub) st.right_e_resolving = false;
      if (in > ubt) st.left_resolving = false;
      if (in < ubt) st.left_e_resolving = false;
    }
  return st;
}

// ---------------------------------------------------------- stochasticize

Stochasticized stochasticize(const RMatrix& m, const PerronOptions& opts) {
  if (!m.square()) throw Error("stochasticize needs a square matrix");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) < 0) throw Error("stochasticize needs a nonnegative matrix");
  if (!strongly_connected(support_graph(m))) throw Error("ambiguous Perron data: matrix is reducible");
  auto ex = exact_perron(m);
  if (!ex) return stochasticize(to_double(m), opts);
  const std::size_t n = m.rows();
  Stochasticized out;
  out.exact = true;
  out.exact_rho = ex->rho;
  out.exact_matrix = RMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m(i, j) != 0) out.exact_matrix(i, j) = m(i, j) * ex->right[j] / (ex->rho * ex->right[i]);
  out.matrix = to_double(out.exact_matrix);
  out.rho = ex->rho.get_d();
  Rational total = sum(ex->right);
  out.right.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.right[i] = Rational(ex->right[i] / total).get_d();
  // Left vector of M: stationary vector of stoch(M) divided by r.
  RVec st = stationary_vector(StochasticMatrix(out.exact_matrix));
  RVec left(n);
  for (std::size_t i = 0; i < n; ++i) left[i] = st[i] / ex->right[i];
  Rational ltot = sum(left);
  out.left.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.left[i] = Rational(left[i] / ltot).get_d();
  return out;
}

Stochasticized stochasticize(const DMatrix& m, const PerronOptions& opts) {
  PerronData pd = perron(m, opts);
  const std::size_t n = m.rows();
  Stochasticized out;
  out.rho = pd.rho;
  out.right = pd.right;
  out.left = pd.left;
  out.matrix = DMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) == 0) continue;
      out.matrix(i, j) = m(i, j) * pd.right[j] / (pd.rho * pd.right[i]);
      s += out.matrix(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) out.matrix(i, j) /= s;
  }
  return out;
}

NumericMarkov numeric_chain(const SftSpace& space, const DMatrix& p) {
  if (p.rows() != space.size()) throw Error("chain size differs from the space");
  PerronData pd = perron(p);
  return {space, p, pd.left};
}

NumericMarkov numeric_chain(const SftSpace& space, const Stochasticized& s) {
  if (s.exact) {
    RVec st = stationary_vector(StochasticMatrix(s.exact_matrix));
    return {space, s.matrix, to_double(st)};
  }
  const std::size_t n = s.matrix.rows();
  DVec st(n);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) total += st[i] = s.left[i] * s.right[i];
  for (auto& v : st) v /= total;
  return {space, s.matrix, st};
}

// ----------------------------------------------------------------- lifts

Stochasticized markovian_lift(const CodeStructure& cs, const StochasticMatrix& P, const StochasticMatrix& Q,
                              const StochasticMatrix& Qp) {
  const std::size_t n = cs.X.size(), m = cs.Y.size();
  if (P.size() != n) throw Error("P must be " + std::to_string(n) + "x" + std::to_string(n));
  if (Q.size() != m || Qp.size() != m) throw Error("Q and Q' must be " + std::to_string(m) + "x" + std::to_string(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if ((Q(a, b) == 0) != (Qp(a, b) == 0)) throw Error("support mismatch: Q' and Q differ in their zero pattern");

  MarkovMeasure mu = MarkovMeasure::make(cs.X, P);
  KStepVerdict v = decide_kstep(DecisionContext::make(cs.code, mu), 1);
  bool carried = v.is_k_markov && v.states.size() == m;
  for (std::size_t a = 0; carried && a < m; ++a)
    for (std::size_t b = 0; b < m && carried; ++b) carried = v.Q(a, b) == Q(a, b);
  if (!carried) throw Error("code does not carry μ_P to ν_Q");

  const auto& map = cs.code.symbol_map();
  RMatrix M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (P(i, j) != 0) M(i, j) = Qp(map[i], map[j]) * P(i, j) / Q(map[i], map[j]);
  Stochasticized out = stochasticize(M);
  if (out.exact ? out.exact_rho != 1 : std::abs(out.rho - 1) > 1e-10)
    throw InternalError("Markovian lift matrix has spectral radius " + std::to_string(out.rho) + ", not 1");
  return out;
}

namespace {

RMatrix right_e_lift(const SftSpace& x, const std::vector<Symbol>& map, const SftSpace& y, const RMatrix& q,
                     const std::optional<RMatrix>& weights) {
  const std::size_t n = x.size();
  RMatrix p(n, n);
  for (Symbol i = 0; i < n; ++i)
    for (Symbol l = 0; l < y.size(); ++l) {
      std::vector<Symbol> J;
      for (Symbol j : x.successors(i))
        if (map[j] == l) J.push_back(j);
      if (J.empty()) {
        if (q(map[i], l) != 0) throw Error("lift construction requires e-resolving");
        continue;
      }
      if (weights) {
        Rational total = 0;
        for (Symbol j : J) {
          if ((*weights)(i, j) <= 0) throw Error("invalid split weights: weight on an edge must be positive");
          total += (*weights)(i, j);
        }
        if (total != 1) throw Error("invalid split weights: weights from state " + x.alphabet().name(i) +
                                    " to preimages of " + y.alphabet().name(l) + " sum to " + to_string(total));
        for (Symbol j : J) p(i, j) = q(map[i], l) * (*weights)(i, j);
      } else {
        for (Symbol j : J) p(i, j) = q(map[i], l) / static_cast<unsigned long>(J.size());
      }
    }
  return p;
}

SftSpace reversed(const SftSpace& s) { return build_sft(s.alphabet(), s.adjacency().transpose()); }

// Time reversal of a stationary chain: P~(j, i) = p_i P(i, j) / p_j.
RMatrix reverse_chain(const RMatrix& p) {
  RVec st = stationary_vector(StochasticMatrix(p));
  RMatrix r(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      if (p(i, j) != 0) r(j, i) = st[i] * p(i, j) / st[j];
  return r;
}

}  // namespace

StochasticMatrix e_resolving_lift(const CodeStructure& cs, const StochasticMatrix& Q,
                                  const std::optional<RMatrix>& weights) {
  const std::size_t n = cs.X.size(), m = cs.Y.size();
  if (Q.size() != m) throw Error("Q must be " + std::to_string(m) + "x" + std::to_string(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if ((Q(a, b) != 0) != cs.Y.edge(a, b)) throw Error("support mismatch: Q does not have the pattern of B");
  if (weights) {
    if (weights->rows() != n || weights->cols() != n)
      throw Error("invalid split weights: expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if ((*weights)(i, j) != 0 && !cs.X.edge(i, j))
          throw Error("invalid split weights: weight on a forbidden transition");
  }
  ResolvingStatus st = resolving_status(cs);
  const auto& map = cs.code.symbol_map();
  RMatrix p;
  if (st.right_e_resolving) {
    p = right_e_lift(cs.X, map, cs.Y, Q.matrix(), weights);
  } else if (st.left_e_resolving) {
    std::optional<RMatrix> wt;
    if (weights) wt = weights->transpose();
    RMatrix rev = right_e_lift(reversed(cs.X), map, reversed(cs.Y), reverse_chain(Q.matrix()), wt);
    p = reverse_chain(rev);
  } else {
    throw Error("lift construction requires e-resolving");
  }
  StochasticMatrix out(p);
  MarkovMeasure::make(cs.X, out);  // pattern of A and irreducibility
  return out;
}

// -------------------------------------------------------------------- wps

namespace {

// Chain states along the periodic point cycle^∞, one per position.
std::vector<Symbol> cycle_states(const MarkovMeasure& mu, const Word& cycle) {
  const std::size_t n = cycle.size(), k = mu.order();
  std::vector<Symbol> states;
  for (std::size_t i = 0; i < n; ++i) {
    Word block;
    for (std::size_t t = 0; t < k; ++t) block.push_back(cycle[(i + t) % n]);
    std::optional<Symbol> s;
    for (Symbol c = 0; c < mu.blocks().size() && !s; ++c)
      if (mu.blocks()[c] == block) s = c;
    if (!s) throw Error("not a periodic point");
    states.push_back(*s);
  }
  return states;
}

}  // namespace

Wps wps(const MarkovMeasure& mu, const Word& cycle) {
  if (cycle.empty()) throw Error("not a periodic point: empty cycle");
  for (auto a : cycle)
    if (a >= mu.base().size()) throw Error("cycle uses a symbol outside the alphabet");
  auto states = cycle_states(mu, cycle);
  const auto& p = mu.transition();
  Wps out{Rational(1), 0};
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Rational& f = p(states[i], states[(i + 1) % states.size()]);
    if (f == 0) throw Error("not a periodic point");
    out.product *= f;
  }
  out.value = std::log(out.product.get_d()) / static_cast<double>(cycle.size());
  if (!std::isfinite(out.value)) {
    // Products below double range: sum the logs instead.
    double s = 0;
    for (std::size_t i = 0; i < states.size(); ++i)
      s += std::log(p(states[i], states[(i + 1) % states.size()]).get_d());
    out.value = s / static_cast<double>(cycle.size());
  }
  return out;
}

double wps(const NumericMarkov& mu, const Word& cycle) {
  if (cycle.empty()) throw Error("not a periodic point: empty cycle");
  double s = 0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    Symbol a = cycle[i], b = cycle[(i + 1) % cycle.size()];
    if (a >= mu.space.size() || b >= mu.space.size() || mu.transition(a, b) <= 0)
      throw Error("not a periodic point");
    s += std::log(mu.transition(a, b));
  }
  return s / static_cast<double>(cycle.size());
}

bool finite_to_one_check(const CodeStructure& cs) {
  const auto& map = cs.code.symbol_map();
  const std::size_t n = cs.X.size();
  auto id = [n](Symbol u, Symbol v) { return u * n + v; };
  // Off-diagonal pairs entered from the diagonal.
  std::vector<bool> seen(n * n, false);
  std::vector<std::pair<Symbol, Symbol>> stack;
  for (Symbol s = 0; s < n; ++s) {
    auto succ = cs.X.successors(s);
    for (Symbol u : succ)
      for (Symbol v : succ)
        if (u != v && map[u] == map[v] && !seen[id(u, v)]) {
          seen[id(u, v)] = true;
          stack.emplace_back(u, v);
        }
  }
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    for (Symbol u2 : cs.X.successors(u))
      for (Symbol v2 : cs.X.successors(v)) {
        if (map[u2] != map[v2]) continue;
        if (u2 == v2) return false;  // the two paths meet again: a diamond
        if (!seen[id(u2, v2)]) {
          seen[id(u2, v2)] = true;
          stack.emplace_back(u2, v2);
        }
      }
  }
  return true;
}

// ----------------------------------------------------------- wps lift check

NumericKChain numeric_candidate(const BlockCode& code, const NumericMarkov& mu, std::size_t k) {
  if (k == 0) throw Error("k must be positive");
  const std::size_t m = code.codomain().size();
  NumericKChain out;
  out.k = k;
  // Image k-words of positive measure with p_{w0} P_{w1} ... .
  const auto& map = code.symbol_map();
  const std::size_t n = mu.space.size();
  std::vector<std::pair<Word, DVec>> level;
  for (Symbol a = 0; a < m; ++a) {
    DVec v(n, 0.0);
    bool any = false;
    for (Symbol i = 0; i < n; ++i)
      if (map[i] == a && mu.stationary[i] > 0) {
        v[i] = mu.stationary[i];
        any = true;
      }
    if (any) level.emplace_back(Word{a}, std::move(v));
  }
  for (std::size_t len = 1; len < k; ++len) {
    std::vector<std::pair<Word, DVec>> next;
    for (const auto& [w, v] : level)
      for (Symbol a = 0; a < m; ++a) {
        DVec u(n, 0.0);
        bool any = false;
        for (Symbol i = 0; i < n; ++i)
          for (Symbol j = 0; j < n; ++j)
            if (map[j] == a && mu.transition(i, j) > 0 && v[i] > 0) {
              u[j] += v[i] * mu.transition(i, j);
              any = true;
            }
        if (!any) continue;
        Word w2 = w;
        w2.push_back(a);
        next.emplace_back(std::move(w2), std::move(u));
      }
    level = std::move(next);
  }
  std::map<Word, std::size_t> index;
  for (const auto& [w, v] : level) {
    index[w] = out.states.size();
    out.states.push_back(w);
    double s = 0;
    for (double x : v) s += x;
    out.q.push_back(s);
  }
  out.Q = DMatrix(level.size(), level.size());
  for (std::size_t s = 0; s < level.size(); ++s) {
    DVec next(m, 0.0);
    for (Symbol i = 0; i < n; ++i)
      for (Symbol j = 0; j < n; ++j) next[map[j]] += level[s].second[i] * mu.transition(i, j);
    for (Symbol j = 0; j < m; ++j) {
      if (next[j] <= 0) continue;
      Word t(level[s].first.begin() + 1, level[s].first.end());
      t.push_back(j);
      auto it = index.find(t);
      if (it != index.end()) out.Q(s, it->second) = next[j] / out.q[s];
    }
  }
  return out;
}

double log_cycle_weight(const NumericKChain& nu, const Word& cycle) {
  const std::size_t n = cycle.size();
  std::vector<std::size_t> states;
  for (std::size_t i = 0; i < n; ++i) {
    Word block;
    for (std::size_t t = 0; t < nu.k; ++t) block.push_back(cycle[(i + t) % n]);
    auto it = std::find(nu.states.begin(), nu.states.end(), block);
    if (it == nu.states.end()) return -std::numeric_limits<double>::infinity();
    states.push_back(static_cast<std::size_t>(it - nu.states.begin()));
  }
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = nu.Q(states[i], states[(i + 1) % n]);
    if (f <= 0) return -std::numeric_limits<double>::infinity();
    s += std::log(f);
  }
  return s;
}

namespace {

// Closed walks of X of length 1..n, shortest first, lexicographic.
template <class Visit>
bool for_each_cycle(const SftSpace& x, std::size_t n, Visit visit) {
  for (std::size_t len = 1; len <= n; ++len)
    for (const Word& w : words_of_length(x, len))
      if (x.edge(w.back(), w.front()))
        if (!visit(w)) return false;
  return true;
}

void require_finite_to_one(const CodeStructure& cs) {
  if (!finite_to_one_check(cs))
    throw Error("wps_lift_check requires a finite-to-one code; no weight-per-symbol comparison is known otherwise");
}

}  // namespace

WpsCheck wps_lift_check(const CodeStructure& cs, const MarkovMeasure& mu, const MarkovMeasure& nu, std::size_t n) {
  require_finite_to_one(cs);
  if (!(mu.base() == cs.X) || !(nu.base() == cs.Y)) throw Error("measures must live on the code's X and Y");
  WpsCheck out;
  for_each_cycle(cs.X, n, [&](const Word& w) {
    Wps a = wps(mu, w);
    Word image = cs.code.apply(w);
    Rational b = 0;
    double bv = -std::numeric_limits<double>::infinity();
    try {
      Wps t = wps(nu, image);
      b = t.product;
      bv = t.value;
    } catch (const Error&) {
      // ν gives the image orbit measure zero.
    }
    if (a.product == b) return true;
    out.holds = false;
    out.cycle = w;
    out.mu_wps = a.value;
    out.nu_wps = bv;
    return false;
  });
  return out;
}

WpsCheck wps_lift_check(const CodeStructure& cs, const NumericMarkov& mu, const NumericKChain& nu, std::size_t n,
                        double tolerance) {
  require_finite_to_one(cs);
  WpsCheck out;
  for_each_cycle(cs.X, n, [&](const Word& w) {
    double a = wps(mu, w);
    double b = log_cycle_weight(nu, cs.code.apply(w)) / static_cast<double>(w.size());
    if (std::abs(a - b) <= tolerance) return true;
    out.holds = false;
    out.cycle = w;
    out.mu_wps = a;
    out.nu_wps = b;
    return false;
  });
  return out;
}

MarkovMeasure image_chain(const KStepVerdict& verdict, const SftSpace& y) {
  if (!verdict.is_k_markov) throw Error("image is not k-step Markov; no image chain");
  auto blocks = words_of_length(y, verdict.k);
  if (blocks != verdict.states)
    throw Error("image chain states differ from the allowed " + std::to_string(verdict.k) + "-blocks of Y");
  return MarkovMeasure::of_order(y, verdict.k, StochasticMatrix(verdict.Q), verdict.q);
}

}  // namespace soficlab
