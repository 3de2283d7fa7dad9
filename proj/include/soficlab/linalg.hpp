#ifndef SOFICLAB_LINALG_HPP
#define SOFICLAB_LINALG_HPP

#include <optional>
#include <vector>

#include "soficlab/matrix.hpp"

namespace soficlab {

// Exact linear algebra over the rationals. Row vectors are the default
// orientation: "left" means v·A, "right" means A·v.

/// Reduces m in place to reduced row echelon form and returns the pivot columns.
std::vector<std::size_t> rref(RMatrix& m);

std::size_t rank(RMatrix m);

/// Basis of {v : A v = 0}.
std::vector<RVec> right_kernel(const RMatrix& a);

/// Basis of {v : v A = 0}.
std::vector<RVec> left_kernel(const RMatrix& a);

/// Some x with A x = b, or nullopt if inconsistent.
std::optional<RVec> solve(const RMatrix& a, const RVec& b);

/// Stacks vectors as the rows of a matrix with the given column count.
RMatrix rows_to_matrix(const std::vector<RVec>& rows, std::size_t cols);

/// Incrementally built row space. Remembers the vectors that were accepted,
/// in insertion order, and can express any member of the span in terms of
/// them.
class SpanBasis {
 public:
  explicit SpanBasis(std::size_t dim) : dim_(dim) {}

  std::size_t ambient_dim() const { return dim_; }
  std::size_t size() const { return basis_.size(); }
  const std::vector<RVec>& vectors() const { return basis_; }

  /// Adds v if it is not already in the span; returns whether it was added.
  bool add(const RVec& v);
  bool contains(const RVec& v) const;

  /// Coefficients c with v = sum c_i vectors()[i], or nullopt if v is outside.
  std::optional<RVec> coordinates(const RVec& v) const;

 private:
  // Residual of v after elimination against the echelon rows, and the
  // combination of basis vectors that was subtracted.
  void reduce(RVec& v, RVec& combo) const;

  std::size_t dim_;
  std::vector<RVec> basis_;
  std::vector<RVec> echelon_;
  std::vector<std::size_t> pivot_;
  std::vector<RVec> transform_;  // echelon_[i] = sum transform_[i][k] basis_[k]
};

}  // namespace soficlab

#endif
