#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "opf/rational.hpp"

namespace opf {

using Vec = std::vector<Rational>;

// Sorted by index, no zero entries.
using SparseVec = std::vector<std::pair<std::size_t, Rational>>;

SparseVec to_sparse(const Vec& v);
Vec to_dense(const SparseVec& v, std::size_t n);

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return row_data_.size(); }
  std::size_t cols() const { return cols_; }

  Rational get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Rational& v);
  void add(std::size_t r, std::size_t c, const Rational& v);

  const std::map<std::size_t, Rational>& row(std::size_t r) const { return row_data_[r]; }
  std::size_t nonzeros() const;
  bool is_zero() const;

  SparseVec column(std::size_t c) const;
  SparseMatrix transpose() const;
  SparseMatrix restrict(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

  static SparseMatrix from_dense(const std::vector<Vec>& rows, std::size_t cols);
  std::vector<Vec> to_dense() const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.cols_ == b.cols_ && a.row_data_ == b.row_data_;
  }

 private:
  void check(std::size_t r, std::size_t c) const;

  std::size_t cols_ = 0;
  std::vector<std::map<std::size_t, Rational>> row_data_;
};

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b);
SparseVec apply(const SparseMatrix& m, const SparseVec& x);

std::size_t rank(const SparseMatrix& m);
std::vector<Vec> kernel_basis(const SparseMatrix& m);
bool in_span(const std::vector<Vec>& vs, const Vec& target);
std::size_t quotient_dim(std::size_t ambient, const std::vector<Vec>& subspace);

// Row echelon form built one vector at a time.  The pivot of a row is its
// lowest index, or its highest one when built with PivotRule::Last.
class Echelon {
 public:
  enum class PivotRule { First, Last };

  explicit Echelon(std::size_t dim, PivotRule rule = PivotRule::First);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  // Returns false when v was already in the span.
  bool insert(const SparseVec& v);
  // Eliminates every pivot coordinate of v.
  SparseVec reduce(const SparseVec& v) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  bool is_pivot(std::size_t col) const;
  std::vector<std::size_t> pivots() const;
  // Stored rows in column coordinates, ordered by column of their pivot.
  std::vector<SparseVec> rows() const;

 private:
  std::size_t key(std::size_t col) const { return rule_ == PivotRule::First ? col : dim_ - 1 - col; }
  void reduce_keyed(std::map<std::size_t, Rational>& acc) const;

  std::size_t dim_;
  PivotRule rule_;
  // Keyed coordinates; each row is monic at its smallest key.
  std::map<std::size_t, SparseVec> rows_;
};

// Reduced row echelon form of the given rows, zero rows dropped.
std::vector<Vec> rref_rows(std::vector<Vec> rows, std::size_t cols);

}  // namespace opf
