#include "soficlab/word_orbit.hpp"

#include "soficlab/error.hpp"

namespace soficlab {

namespace {

template <class Step>
WordOrbit orbit(const RVec& start, std::size_t symbols, Step step, bool prepend) {
  WordOrbit out(start.size());
  if (!out.span.add(start)) return out;
  out.words.emplace_back();
  std::size_t frontier_begin = 0;
  std::size_t length = 0;
  while (frontier_begin < out.words.size()) {
    std::size_t frontier_end = out.words.size();
    ++length;
    out.depth = length;
    for (std::size_t idx = frontier_begin; idx < frontier_end; ++idx)
      for (Symbol a = 0; a < symbols; ++a) {
        RVec v = step(out.vectors()[idx], a);
        if (out.span.add(v)) {
          Word w = out.words[idx];
          if (prepend)
            w.insert(w.begin(), a);
          else
            w.push_back(a);
          out.words.push_back(std::move(w));
        }
      }
    frontier_begin = frontier_end;
  }
  return out;
}

}  // namespace

WordOrbit row_orbit(const RVec& start, const std::vector<RMatrix>& mats) {
  return orbit(start, mats.size(), [&](const RVec& v, Symbol a) { return v * mats[a]; }, false);
}

WordOrbit column_orbit(const RVec& start, const std::vector<RMatrix>& mats) {
  return orbit(start, mats.size(), [&](const RVec& v, Symbol a) { return mats[a] * v; }, true);
}

std::optional<Word> first_difference(const RVec& x1, const std::vector<RMatrix>& m1, const RVec& y1, const RVec& x2,
                                     const std::vector<RMatrix>& m2, const RVec& y2) {
  if (m1.size() != m2.size()) throw Error("series are over alphabets of different sizes");
  const std::size_t n1 = x1.size(), n2 = x2.size();
  std::vector<RMatrix> sum_mats;
  for (std::size_t a = 0; a < m1.size(); ++a) {
    RMatrix m(n1 + n2, n1 + n2);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n1; ++j) m(i, j) = m1[a](i, j);
    for (std::size_t i = 0; i < n2; ++i)
      for (std::size_t j = 0; j < n2; ++j) m(n1 + i, n1 + j) = m2[a](i, j);
    sum_mats.push_back(std::move(m));
  }
  RVec x(n1 + n2), y(n1 + n2);
  for (std::size_t i = 0; i < n1; ++i) {
    x[i] = x1[i];
    y[i] = y1[i];
  }
  for (std::size_t i = 0; i < n2; ++i) {
    x[n1 + i] = x2[i];
    y[n1 + i] = -y2[i];
  }
  // The difference series vanishes iff every orbit vector annihilates y.
  WordOrbit orb = row_orbit(x, sum_mats);
  for (std::size_t i = 0; i < orb.dim(); ++i)
    if (dot(orb.vectors()[i], y) != 0) return orb.words[i];
  return std::nullopt;
}

Rational evaluate_series(const RVec& x, const std::vector<RMatrix>& mats, const RVec& y, const Word& w) {
  RVec v = x;
  for (auto a : w) {
    if (a >= mats.size()) throw Error("word uses a symbol outside the representation's alphabet");
    v = v * mats[a];
  }
  return dot(v, y);
}

}  // namespace soficlab
