#include "soficlab/linalg.hpp"

#include "soficlab/error.hpp"

namespace soficlab {

std::vector<std::size_t> rref(RMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(RMatrix m) { return rref(m).size(); }

std::vector<RVec> right_kernel(const RMatrix& a) {
  RMatrix m = a;
  auto pivots = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<RVec> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    RVec v(a.cols(), Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<RVec> left_kernel(const RMatrix& a) { return right_kernel(a.transpose()); }

std::optional<RVec> solve(const RMatrix& a, const RVec& b) {
  if (b.size() != a.rows()) throw InternalError("solve: dimension mismatch");
  RMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto pivots = rref(aug);
  RVec x(a.cols(), Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == a.cols()) return std::nullopt;
    x[pivots[r]] = aug(r, a.cols());
  }
  return x;
}

RMatrix rows_to_matrix(const std::vector<RVec>& rows, std::size_t cols) {
  RMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InternalError("rows_to_matrix: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void SpanBasis::reduce(RVec& v, RVec& combo) const {
  combo.assign(basis_.size(), Rational(0));
  for (std::size_t i = 0; i < echelon_.size(); ++i) {
    const Rational& lead = v[pivot_[i]];
    if (lead == 0) continue;
    Rational f = lead;  // echelon rows have a unit pivot
    const RVec& e = echelon_[i];
    for (std::size_t j = 0; j < dim_; ++j)
      if (e[j] != 0) v[j] -= f * e[j];
    const RVec& t = transform_[i];
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t[k] != 0) combo[k] += f * t[k];
  }
}

bool SpanBasis::add(const RVec& v) {
  if (v.size() != dim_) throw InternalError("SpanBasis::add: dimension mismatch");
  RVec residual = v;
  RVec combo;
  reduce(residual, combo);
  std::size_t p = 0;
  while (p < dim_ && residual[p] == 0) ++p;
  if (p == dim_) return false;

  // residual = v - sum combo_k basis_k, and v becomes basis_[n].
  std::size_t n = basis_.size();
  basis_.push_back(v);
  for (auto& t : transform_) t.emplace_back(0);
  RVec t(n + 1, Rational(0));
  for (std::size_t k = 0; k < n; ++k) t[k] = -combo[k];
  t[n] = 1;
  Rational inv = 1 / residual[p];
  for (auto& x : residual) x *= inv;
  for (auto& x : t) x *= inv;
  echelon_.push_back(std::move(residual));
  pivot_.push_back(p);
  transform_.push_back(std::move(t));
  return true;
}

bool SpanBasis::contains(const RVec& v) const {
  RVec residual = v;
  RVec combo;
  reduce(residual, combo);
  return is_zero(residual);
}

std::optional<RVec> SpanBasis::coordinates(const RVec& v) const {
  if (v.size() != dim_) throw InternalError("SpanBasis::coordinates: dimension mismatch");
  RVec residual = v;
  RVec combo;
  reduce(residual, combo);
  if (!is_zero(residual)) return std::nullopt;
  return combo;
}

}  // namespace soficlab
