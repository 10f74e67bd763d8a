#pragma once

// Dense exact linear algebra over Q.  Sizes here are a few hundred at most
// (cell complexes of corpus surfaces), so plain Gaussian elimination on
// arbitrary-precision rationals is adequate.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <vector>

namespace teich::linalg {

using Rational = boost::multiprecision::cpp_rational;
using RVec = std::vector<Rational>;

class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RMatrix identity(std::size_t n);
  static RMatrix from_columns(const std::vector<RVec>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RVec column(std::size_t c) const;
  RMatrix transpose() const;

  friend RMatrix operator*(const RMatrix& a, const RMatrix& b);
  friend RVec operator*(const RMatrix& a, const RVec& x);
  friend bool operator==(const RMatrix& a, const RMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Basis of {x : A x = 0}, one vector per free column of the reduced row
/// echelon form, in increasing free-column order.
std::vector<RVec> nullspace(const RMatrix& a);

std::size_t rank(const RMatrix& a);

/// Throws std::domain_error when `a` is singular.
RMatrix inverse(const RMatrix& a);

/// Greedy independence filter: add() accepts a vector only if it is not in
/// the span of those already accepted.
class IncrementalBasis {
 public:
  explicit IncrementalBasis(std::size_t dim) : dim_(dim) {}

  bool add(const RVec& v);
  bool contains(const RVec& v) const;
  std::size_t size() const { return rows_.size(); }

 private:
  RVec reduce(RVec v) const;

  std::size_t dim_;
  std::vector<RVec> rows_;          // echelon rows, leading entry 1
  std::vector<std::size_t> pivots_;
};

Rational dot(const RVec& a, const RVec& b);
bool is_zero(const RVec& v);

}  // namespace teich::linalg
