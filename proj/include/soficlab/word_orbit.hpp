#ifndef SOFICLAB_WORD_ORBIT_HPP
#define SOFICLAB_WORD_ORBIT_HPP

#include <optional>
#include <vector>

#include "soficlab/linalg.hpp"
#include "soficlab/shift_space.hpp"

namespace soficlab {

/// Basis of span{ start·M_w } (row orbit) or span{ M_w·start } (column
/// orbit), built breadth first: words of nondecreasing length, lexicographic
/// within a length, keeping a vector only when it enlarges the span.
/// words[i] is the word that produced vectors()[i]; depth is the length of
/// the longest word that was examined.
struct WordOrbit {
  SpanBasis span;
  std::vector<Word> words;
  std::size_t depth = 0;

  explicit WordOrbit(std::size_t dim) : span(dim) {}
  const std::vector<RVec>& vectors() const { return span.vectors(); }
  std::size_t dim() const { return span.size(); }
};

WordOrbit row_orbit(const RVec& start, const std::vector<RMatrix>& mats);
WordOrbit column_orbit(const RVec& start, const std::vector<RMatrix>& mats);

/// A word on which the series w -> x1 M1_w y1 and w -> x2 M2_w y2 differ, or
/// nullopt when they agree everywhere. Decided on the direct-sum row orbit,
/// which is exhausted by words of length < n1 + n2, so the answer is exact.
std::optional<Word> first_difference(const RVec& x1, const std::vector<RMatrix>& m1, const RVec& y1, const RVec& x2,
                                     const std::vector<RMatrix>& m2, const RVec& y2);

/// x M_{w_1} ... M_{w_n} y.
Rational evaluate_series(const RVec& x, const std::vector<RMatrix>& mats, const RVec& y, const Word& w);

}  // namespace soficlab

#endif
