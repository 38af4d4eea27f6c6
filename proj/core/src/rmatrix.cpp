#include "sbc/rmatrix.hpp"

#include "sbc/error.hpp"

namespace sbc {

RMatrix RMatrix::identity(int n) {
  RMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RMatrix RMatrix::transpose() const {
  RMatrix t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RMatrix RMatrix::operator*(const RMatrix& o) const {
  if (cols != o.rows) throw InvariantError("RMatrix: shape mismatch in product");
  RMatrix r(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Rational& v = (*this)(i, k);
      if (v == 0) continue;
      for (int j = 0; j < o.cols; ++j)
        if (o(k, j) != 0) r(i, j) += v * o(k, j);
    }
  return r;
}

RMatrix RMatrix::operator-(const RMatrix& o) const {
  RMatrix r = *this;
  for (std::size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
  return r;
}

std::vector<Rational> RMatrix::apply(const std::vector<Rational>& v) const {
  std::vector<Rational> r(rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (v[j] != 0 && (*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
  return r;
}

bool RMatrix::is_zero() const {
  for (const auto& v : a)
    if (v != 0) return false;
  return true;
}

namespace {
// reduced row echelon form in place; returns pivot columns
std::vector<int> rref(RMatrix& m) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (m(i, c) != 0) { p = i; break; }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    const Rational inv = 1 / m(r, c);
    for (int j = 0; j < m.cols; ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (int j = 0; j < m.cols; ++j) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}
}  // namespace

std::vector<int> RMatrix::pivot_columns() const {
  RMatrix m = *this;
  return rref(m);
}

RMatrix RMatrix::inverse() const {
  if (rows != cols) throw InvariantError("RMatrix: inverse of non-square matrix");
  const int n = rows;
  RMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  const auto piv = rref(aug);
  if (int(piv.size()) < n || piv[n - 1] != n - 1) throw InvariantError("RMatrix: singular matrix");
  RMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

RMatrix RMatrix::nullspace() const {
  RMatrix m = *this;
  const auto piv = rref(m);
  std::vector<bool> is_piv(cols, false);
  for (int p : piv) is_piv[p] = true;
  std::vector<int> free;
  for (int j = 0; j < cols; ++j)
    if (!is_piv[j]) free.push_back(j);
  RMatrix ns(cols, int(free.size()));
  for (std::size_t f = 0; f < free.size(); ++f) {
    ns(free[f], int(f)) = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) ns(piv[r], int(f)) = -m(int(r), free[f]);
  }
  return ns;
}

RMatrix RMatrix::select_columns(const std::vector<int>& idx) const {
  RMatrix r(rows, int(idx.size()));
  for (int i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) r(i, int(j)) = (*this)(i, idx[j]);
  return r;
}

}  // namespace sbc
