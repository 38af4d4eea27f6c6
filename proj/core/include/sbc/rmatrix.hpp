#pragma once

#include <vector>

#include "sbc/poly.hpp"

namespace sbc {

// Small dense matrix over Q. Sizes here never exceed a few dozen.
struct RMatrix {
  int rows = 0, cols = 0;
  std::vector<Rational> a;

  RMatrix() = default;
  RMatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c) {}
  static RMatrix identity(int n);

  Rational& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  const Rational& operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  RMatrix transpose() const;
  RMatrix operator*(const RMatrix& o) const;
  RMatrix operator-(const RMatrix& o) const;
  std::vector<Rational> apply(const std::vector<Rational>& v) const;
  bool is_zero() const;

  // Column indices of a maximal independent set of columns (row echelon).
  std::vector<int> pivot_columns() const;
  int rank() const { return int(pivot_columns().size()); }
  RMatrix inverse() const;  // throws if singular
  // Basis of the null space, one column per vector.
  RMatrix nullspace() const;
  RMatrix select_columns(const std::vector<int>& idx) const;
};

}  // namespace sbc
