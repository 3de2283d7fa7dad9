#include "soficlab/linear_rep.hpp"

#include <algorithm>

#include "soficlab/error.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/linalg.hpp"
#include "soficlab/word_orbit.hpp"

namespace soficlab {

LinearRepresentation::LinearRepresentation(Alphabet alphabet, RVec x, std::vector<RMatrix> phi, RVec y)
    : alphabet_(std::move(alphabet)), x_(std::move(x)), phi_(std::move(phi)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n == 0) throw Error("representation dimension must be positive");
  if (y_.size() != n) throw Error("x and y have different lengths");
  if (phi_.size() != alphabet_.size()) throw Error("representation needs one matrix per alphabet symbol");
  for (std::size_t a = 0; a < phi_.size(); ++a) {
    if (phi_[a].rows() != n || phi_[a].cols() != n)
      throw Error("matrix for symbol \"" + alphabet_.name(a) + "\" is not " + std::to_string(n) + "x" + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (phi_[a](i, j) < 0) throw Error("matrix for symbol \"" + alphabet_.name(a) + "\" has a negative entry");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (x_[i] < 0 || y_[i] < 0) throw Error("x and y must be nonnegative");
}

RMatrix LinearRepresentation::total() const {
  RMatrix p(dim(), dim());
  for (const auto& m : phi_) p = p + m;
  return p;
}

LinearRepresentation from_markov(const MarkovMeasure& mu) {
  const MarkovMeasure one = mu.order() == 1 ? mu : mu.as_one_step();
  const RMatrix& p = one.transition().matrix();
  const std::size_t n = p.rows();
  std::vector<RMatrix> phi;
  for (std::size_t j = 0; j < n; ++j) {
    RMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = p(i, j);
    phi.push_back(std::move(m));
  }
  return LinearRepresentation(one.chain_space().alphabet(), one.stationary(), std::move(phi), RVec(n, Rational(1)));
}

LinearRepresentation from_sofic_image(const BlockCode& code, const MarkovMeasure& mu) {
  if (mu.order() != 1) throw Error("from_sofic_image needs a 1-step measure");
  const std::size_t n = mu.transition().size();
  return LinearRepresentation(code.codomain(), mu.stationary(), column_split(code, mu.transition().matrix()),
                              RVec(n, Rational(1)));
}

Rational evaluate(const LinearRepresentation& rep, const Word& w) {
  return evaluate_series(rep.x(), rep.phi(), rep.y(), w);
}

// ------------------------------------------------------------ canonicalize

namespace {

struct Triple {
  RVec x;
  std::vector<RMatrix> phi;
  RVec y;

  std::size_t dim() const { return x.size(); }
  RMatrix total() const {
    RMatrix p(dim(), dim());
    for (const auto& m : phi) p = p + m;
    return p;
  }
};

Triple keep_indices(const Triple& t, const std::vector<std::size_t>& keep) {
  Triple out;
  for (auto i : keep) {
    out.x.push_back(t.x[i]);
    out.y.push_back(t.y[i]);
  }
  for (const auto& m : t.phi) {
    RMatrix r(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = 0; j < keep.size(); ++j) r(i, j) = m(keep[i], keep[j]);
    out.phi.push_back(std::move(r));
  }
  return out;
}

Triple delete_indices(const Triple& t, const std::vector<bool>& drop) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < t.dim(); ++i)
    if (!drop[i]) keep.push_back(i);
  if (keep.empty()) throw InternalError("reduction deleted every index of a probability series");
  return keep_indices(t, keep);
}

void validate_stationary(const LinearRepresentation& rep) {
  const Triple t{rep.x(), rep.phi(), rep.y()};
  const Alphabet& alpha = rep.alphabet();
  Rational total = dot(t.x, t.y);
  if (total != 1) throw Error("not a stationary probability series: F(ε) = " + to_string(total) + " ≠ 1");

  RMatrix p = t.total();
  // sum_a F(wa) = F(w) for all w  <=>  x phi(w) (Py - y) = 0 on the row orbit.
  RVec right_defect = p * t.y - t.y;
  WordOrbit rows = row_orbit(t.x, t.phi);
  for (std::size_t i = 0; i < rows.dim(); ++i)
    if (dot(rows.vectors()[i], right_defect) != 0)
      throw Error("not a stationary probability series: sum_a F(w a) ≠ F(w) at w = \"" + alpha.format(rows.words[i]) +
                  "\"");
  // sum_a F(aw) = F(w)  <=>  (xP - x) phi(w) y = 0 on the column orbit.
  RVec left_defect = t.x * p - t.x;
  WordOrbit cols = column_orbit(t.y, t.phi);
  for (std::size_t i = 0; i < cols.dim(); ++i)
    if (dot(left_defect, cols.vectors()[i]) != 0)
      throw Error("not a stationary probability series: sum_a F(a w) ≠ F(w) at w = \"" + alpha.format(cols.words[i]) +
                  "\"");
}

// Projection onto ker(P - I) along range(P - I): E = R (L R)^{-1} L.
RMatrix fixed_space_projector(const RMatrix& p) {
  const std::size_t n = p.rows();
  RMatrix shifted = p - RMatrix::identity(n);
  auto right = right_kernel(shifted);
  auto left = left_kernel(shifted);
  if (right.size() != left.size()) throw InternalError("left and right fixed spaces differ in dimension");
  const std::size_t d = right.size();
  if (d == 0) throw Error("not a stationary probability series: P has no fixed vector");
  RMatrix r(n, d), l(d, n);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      r(i, k) = right[k][i];
      l(k, i) = left[k][i];
    }
  RMatrix lr = l * r;
  // (L R)^{-1} via solving against the identity.
  RMatrix inv(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    RVec e(d, Rational(0));
    e[k] = 1;
    auto col = solve(lr, e);
    if (!col) throw Error("not a stationary probability series: eigenvalue 1 of P is not semisimple");
    for (std::size_t i = 0; i < d; ++i) inv(i, k) = (*col)[i];
  }
  return r * inv * l;
}

struct Components {
  std::vector<std::vector<std::size_t>> comps;
  std::vector<bool> initial;   // no edge enters from outside
  std::vector<bool> terminal;  // no edge leaves to outside
};

Components classify(const RMatrix& p) {
  Components c;
  c.comps = strong_components(support_graph(p));
  std::vector<std::size_t> owner(p.rows());
  for (std::size_t k = 0; k < c.comps.size(); ++k)
    for (auto i : c.comps[k]) owner[i] = k;
  c.initial.assign(c.comps.size(), true);
  c.terminal.assign(c.comps.size(), true);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      if (p(i, j) != 0 && owner[i] != owner[j]) {
        c.terminal[owner[i]] = false;
        c.initial[owner[j]] = false;
      }
  return c;
}

bool all_zero_on(const RVec& v, const std::vector<std::size_t>& idx) {
  return std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return v[i] == 0; });
}

// One reduction move; returns false when none applies.
bool reduce_once(Triple& t) {
  const std::size_t n = t.dim();
  RMatrix p = t.total();

  std::vector<bool> drop(n, false);
  bool any = false;
  for (std::size_t j = 0; j < n; ++j) {
    bool zero = true;
    for (std::size_t i = 0; i < n && zero; ++i) zero = p(i, j) == 0;
    if (zero) drop[j] = any = true;
  }
  if (any) {
    t.x = t.x * p;  // shift invariance; now x vanishes on the zero columns
    t = delete_indices(t, drop);
    return true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < n && zero; ++j) zero = p(i, j) == 0;
    if (zero) drop[i] = any = true;
  }
  if (any) {
    t.y = p * t.y;
    t = delete_indices(t, drop);
    return true;
  }

  Components c = classify(p);
  for (std::size_t k = 0; k < c.comps.size(); ++k) {
    if ((c.initial[k] && all_zero_on(t.x, c.comps[k])) || (c.terminal[k] && all_zero_on(t.y, c.comps[k]))) {
      for (auto i : c.comps[k]) drop[i] = true;
      any = true;
    }
  }
  if (any) {
    t = delete_indices(t, drop);
    return true;
  }

  if (t.x * p != t.x || p * t.y != t.y) {
    RMatrix e = fixed_space_projector(p);
    t.x = t.x * e;
    t.y = e * t.y;
    return true;
  }
  return false;
}

}  // namespace

LinearRepresentation canonicalize(const LinearRepresentation& rep) {
  validate_stationary(rep);
  Triple t{rep.x(), rep.phi(), rep.y()};

  // Every deletion shrinks the dimension and a projection is followed either
  // by a deletion or by termination, so 2n + 2 rounds always suffice.
  const std::size_t limit = 2 * rep.dim() + 2;
  std::size_t rounds = 0;
  while (reduce_once(t))
    if (++rounds > limit) throw InternalError("representation reduction did not terminate");

  const std::size_t n = t.dim();
  RMatrix p = t.total();
  for (std::size_t i = 0; i < n; ++i)
    if (t.x[i] <= 0 || t.y[i] <= 0) throw InternalError("reduced representation has a non-positive x or y entry");
  Components c = classify(p);
  for (std::size_t k = 0; k < c.comps.size(); ++k)
    if (!c.initial[k] || !c.terminal[k]) throw InternalError("reduced P is not a direct sum of irreducible blocks");

  // (xD, D^{-1} phi D, 1) with D = diag(y).
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = t.x[i] * t.y[i];
  std::vector<RMatrix> phi;
  for (const auto& m : t.phi) {
    RMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m(i, j) != 0) s(i, j) = m(i, j) * t.y[j] / t.y[i];
    phi.push_back(std::move(s));
  }
  LinearRepresentation out(rep.alphabet(), std::move(x), std::move(phi), RVec(n, Rational(1)));

  if (auto w = first_difference(rep.x(), rep.phi(), rep.y(), out.x(), out.phi(), out.y()))
    throw InternalError("canonical representation differs from the input at \"" + rep.alphabet().format(*w) + "\"");
  if (!is_canonical(out)) throw InternalError("canonicalize produced a non-canonical representation");
  return out;
}

bool is_canonical(const LinearRepresentation& rep) {
  const std::size_t n = rep.dim();
  RMatrix p = rep.total();
  for (std::size_t i = 0; i < n; ++i) {
    if (rep.y()[i] != 1 || rep.x()[i] <= 0) return false;
    Rational s = 0;
    for (std::size_t j = 0; j < n; ++j) s += p(i, j);
    if (s != 1) return false;
  }
  if (sum(rep.x()) != 1 || rep.x() * p != rep.x()) return false;
  Components c = classify(p);
  for (std::size_t k = 0; k < c.comps.size(); ++k)
    if (!c.initial[k] || !c.terminal[k]) return false;
  return true;
}

// ----------------------------------------------------- sofic presentation

namespace {

SoficPresentation present_irreducible(const Alphabet& alphabet, const Triple& t) {
  const std::size_t n = t.dim();
  const std::size_t k = t.phi.size();
  const std::size_t big = n * k;
  // M((b', i), (b, j)) = phi(b)(i, j) for every block row b'.
  RMatrix m(big, big);
  for (std::size_t row_block = 0; row_block < k; ++row_block)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(row_block * n + i, b * n + j) = t.phi[b](i, j);

  std::vector<bool> alive(big, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < big; ++v) {
      if (!alive[v]) continue;
      bool row = false, col = false;
      for (std::size_t u = 0; u < big; ++u) {
        if (!alive[u]) continue;
        row = row || m(v, u) != 0;
        col = col || m(u, v) != 0;
      }
      if (!row || !col) {
        alive[v] = false;
        changed = true;
      }
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < big; ++v)
    if (alive[v]) keep.push_back(v);

  std::vector<std::string> names;
  std::vector<Symbol> image;
  Matrix<int> adj(keep.size(), keep.size());
  RMatrix sub(keep.size(), keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    names.push_back(alphabet.name(keep[a] / n) + "_" + std::to_string(keep[a] % n + 1));
    image.push_back(keep[a] / n);
    for (std::size_t b = 0; b < keep.size(); ++b) {
      sub(a, b) = m(keep[a], keep[b]);
      adj(a, b) = sub(a, b) != 0 ? 1 : 0;
    }
  }
  SftSpace space = build_sft(Alphabet(std::move(names)), adj);
  if (space.size() != keep.size()) throw InternalError("sofic presentation pruned a symbol");
  MarkovMeasure mu = MarkovMeasure::make(space, StochasticMatrix(sub));
  BlockCode code = BlockCode::one_block(space, alphabet, std::move(image));
  return {std::move(space), std::move(mu), std::move(code)};
}

}  // namespace

SoficDecomposition to_sofic_presentation(const LinearRepresentation& rep) {
  if (!is_canonical(rep)) throw Error("to_sofic_presentation needs a canonical representation; run canonicalize first");
  Triple t{rep.x(), rep.phi(), rep.y()};
  Components c = classify(t.total());
  SoficDecomposition out;
  for (const auto& comp : c.comps) {
    Triple part = keep_indices(t, comp);
    Rational weight = sum(part.x);
    for (auto& v : part.x) v /= weight;
    SoficPresentation pres = present_irreducible(rep.alphabet(), part);
    LinearRepresentation image = from_sofic_image(pres.code, pres.measure);
    if (auto w = first_difference(part.x, part.phi, part.y, image.x(), image.phi(), image.y()))
      throw InternalError("sofic presentation disagrees with its series at \"" + rep.alphabet().format(*w) + "\"");
    out.weights.push_back(weight);
    out.parts.push_back(std::move(pres));
  }
  // Deterministic order: by the smallest index of each component.
  std::vector<std::size_t> order(c.comps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c.comps[a][0] < c.comps[b][0]; });
  SoficDecomposition sorted;
  for (auto i : order) {
    sorted.weights.push_back(out.weights[i]);
    sorted.parts.push_back(std::move(out.parts[i]));
  }
  return sorted;
}

}  // namespace soficlab
