#include "soficlab/thermo.hpp"

#include <cmath>
#include <limits>

#include "soficlab/error.hpp"

namespace soficlab {

void LocallyConstantPotential::validate() const {
  if (span == 0) throw Error("potential span must be positive");
  for (const auto& [w, v] : values) {
    if (w.size() != span || !space.allows(w))
      throw Error("potential names \"" + space.alphabet().format(w) + "\", not an allowed " + std::to_string(span) +
                  "-block");
    if (!std::isfinite(v)) throw Error("potential value on \"" + space.alphabet().format(w) + "\" is not finite");
  }
  for (const Word& w : words_of_length(space, span))
    if (!values.count(w)) throw Error("potential has no value on \"" + space.alphabet().format(w) + "\"");
}

double LocallyConstantPotential::operator()(const Word& block) const {
  auto it = values.find(block);
  if (it == values.end()) throw Error("potential has no value on \"" + space.alphabet().format(block) + "\"");
  return it->second;
}

LocallyConstantPotential constant_potential(const SftSpace& space, double c, std::size_t span) {
  LocallyConstantPotential f{space, span, {}};
  for (const Word& w : words_of_length(space, span)) f.values[w] = c;
  return f;
}

TransferData transfer_data(const LocallyConstantPotential& f) {
  f.validate();
  TransferData t;
  if (f.span <= 2) {
    t.space = f.space;
    for (Symbol s = 0; s < f.space.size(); ++s) t.blocks.push_back(Word{s});
  } else {
    HigherBlock hb = higher_block_presentation(f.space, f.span - 1);
    t.space = hb.space;
    t.blocks = hb.blocks;
  }
  const std::size_t n = t.space.size();
  t.edge_values = DMatrix(n, n);
  t.Q = DMatrix(n, n);
  for (Symbol s = 0; s < n; ++s)
    for (Symbol u : t.space.successors(s)) {
      Word w = t.blocks[s];
      if (f.span >= 2) w.push_back(t.blocks[u].back());
      t.edge_values(s, u) = f(w);
      t.Q(s, u) = std::exp(t.edge_values(s, u));
    }
  return t;
}

double pressure(const LocallyConstantPotential& f) {
  TransferData t = transfer_data(f);
  return std::log(perron(t.Q, default_perron_options()).rho);
}

Equilibrium equilibrium_markov(const LocallyConstantPotential& f) {
  TransferData t = transfer_data(f);
  Stochasticized s = stochasticize(t.Q);
  Equilibrium out;
  out.chain = numeric_chain(t.space, s);
  out.blocks = t.blocks;
  out.pressure = std::log(s.rho);
  out.entropy = entropy(out.chain);
  const std::size_t n = t.space.size();
  for (Symbol i = 0; i < n; ++i)
    for (Symbol j = 0; j < n; ++j)
      if (out.chain.transition(i, j) > 0)
        out.integral += out.chain.stationary[i] * out.chain.transition(i, j) * t.edge_values(i, j);
  return out;
}

double birkhoff_sum(const LocallyConstantPotential& g, const Word& w) {
  double s = 0;
  for (std::size_t i = 0; i + g.span <= w.size(); ++i)
    s += g(Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + g.span)));
  return s;
}

CompensationReport compensation_ratio_report(const CodeStructure& cs, const LocallyConstantPotential& g,
                                             std::size_t n) {
  if (n == 0) throw Error("horizon must be at least 1");
  if (!(g.space == cs.Y)) throw Error("G must be a potential on Y");
  g.validate();
  CompensationReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0;
  for (std::size_t len = 1; len <= n; ++len) {
    RatioRow row;
    row.length = len;
    row.min_ratio = std::numeric_limits<double>::infinity();
    for (const Word& w : words_of_length(cs.Y, len)) {
      BigInt count = preimage_count(cs.code, w);
      double r = std::exp(birkhoff_sum(g, w)) * count.get_d();
      ++row.words;
      if (r < row.min_ratio) {
        row.min_ratio = r;
        row.argmin = w;
      }
      if (r > row.max_ratio) {
        row.max_ratio = r;
        row.argmax = w;
      }
    }
    rep.min_ratio = std::min(rep.min_ratio, row.min_ratio);
    rep.max_ratio = std::max(rep.max_ratio, row.max_ratio);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

namespace {

// Σ ν(w) log count(w) over words of the given length, extending only
// prefixes of positive measure. counts[i] is the number of preimage paths of
// w ending at state i.
void entropy_sum(const CodeStructure& cs, const std::function<double(const Word&)>& nu, std::size_t len, Word& w,
                 const std::vector<BigInt>& counts, std::vector<double>& sums) {
  const auto& map = cs.code.symbol_map();
  const std::size_t n = cs.X.size();
  for (Symbol a = 0; a < cs.Y.size(); ++a) {
    w.push_back(a);
    double m = nu(w);
    if (m > 0) {
      std::vector<BigInt> next(n);
      BigInt total = 0;
      for (Symbol j = 0; j < n; ++j) {
        if (map[j] != a) continue;
        if (w.size() == 1) {
          next[j] = 1;
        } else {
          for (Symbol i = 0; i < n; ++i)
            if (counts[i] != 0 && cs.X.edge(i, j)) next[j] += counts[i];
        }
        total += next[j];
      }
      if (total > 0) sums[w.size() - 1] += m * std::log(total.get_d());
      if (w.size() < len) entropy_sum(cs, nu, len, w, next, sums);
    }
    w.pop_back();
  }
}

}  // namespace

std::vector<double> relative_entropy_estimate(const CodeStructure& cs, const std::function<double(const Word&)>& nu,
                                              std::size_t n) {
  if (n == 0) throw Error("horizon must be at least 1");
  std::vector<double> sums(n, 0.0);
  Word w;
  entropy_sum(cs, nu, n, w, std::vector<BigInt>(cs.X.size()), sums);
  for (std::size_t i = 0; i < n; ++i) sums[i] /= static_cast<double>(i + 1);
  return sums;
}

std::size_t fiber_bound(const CodeStructure& cs, const std::set<Symbol>& support) {
  if (support.empty()) throw Error("fiber bound needs a nonempty support");
  std::vector<std::size_t> counts(cs.Y.size(), 0);
  for (Symbol s : cs.code.symbol_map()) ++counts[s];
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (Symbol b : support) {
    if (b >= counts.size()) throw Error("support names a symbol outside Y");
    best = std::min(best, counts[b]);
  }
  return best;
}

}  // namespace soficlab
