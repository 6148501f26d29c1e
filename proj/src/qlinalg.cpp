#include "opf/qlinalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace opf {

namespace {

constexpr std::size_t kDenseLimit = 64;

std::size_t dense_rank(std::vector<Vec> a, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

std::vector<SparseVec> sparse_rref(const std::vector<SparseVec>& input, std::size_t cols) {
  Echelon ech(cols);
  for (const auto& v : input) ech.insert(v);
  // Back substitution from the highest pivot down.
  std::vector<SparseVec> rows = ech.rows();
  std::map<std::size_t, SparseVec> done;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    const std::size_t p = it->front().first;
    std::map<std::size_t, Rational> acc(it->begin(), it->end());
    for (auto a = acc.begin(); a != acc.end();) {
      auto d = a->first == p ? done.end() : done.find(a->first);
      if (d != done.end()) {
        Rational f = a->second;
        for (const auto& [c, v] : d->second) acc[c] -= f * v;
      }
      if (a->second == 0) a = acc.erase(a);
      else ++a;
    }
    done[p] = SparseVec(acc.begin(), acc.end());
  }
  std::vector<SparseVec> out;
  for (auto& [p, row] : done) out.push_back(std::move(row));
  return out;
}

void check_lengths(const std::vector<Vec>& vs, std::size_t n) {
  for (const auto& v : vs)
    if (v.size() != n)
      throw std::invalid_argument("vector length " + std::to_string(v.size()) + " differs from " + std::to_string(n));
}

}  // namespace

SparseVec to_sparse(const Vec& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.emplace_back(i, v[i]);
  return out;
}

Vec to_dense(const SparseVec& v, std::size_t n) {
  Vec out(n);
  for (const auto& [i, x] : v) {
    if (i >= n) throw std::out_of_range("sparse index out of range");
    out[i] = x;
  }
  return out;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), row_data_(rows) {}

void SparseMatrix::check(std::size_t r, std::size_t c) const {
  if (r >= rows() || c >= cols_)
    throw std::out_of_range("matrix index (" + std::to_string(r) + "," + std::to_string(c) + ") out of range");
}

Rational SparseMatrix::get(std::size_t r, std::size_t c) const {
  check(r, c);
  auto it = row_data_[r].find(c);
  return it == row_data_[r].end() ? Rational(0) : it->second;
}

void SparseMatrix::set(std::size_t r, std::size_t c, const Rational& v) {
  check(r, c);
  if (v == 0) row_data_[r].erase(c);
  else row_data_[r][c] = v;
}

void SparseMatrix::add(std::size_t r, std::size_t c, const Rational& v) {
  check(r, c);
  if (v == 0) return;
  auto [it, fresh] = row_data_[r].try_emplace(c, v);
  if (fresh) return;
  it->second += v;
  if (it->second == 0) row_data_[r].erase(it);
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : row_data_) n += r.size();
  return n;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(row_data_.begin(), row_data_.end(), [](const auto& r) { return r.empty(); });
}

SparseVec SparseMatrix::column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("column out of range");
  SparseVec out;
  for (std::size_t r = 0; r < rows(); ++r) {
    auto it = row_data_[r].find(c);
    if (it != row_data_[r].end()) out.emplace_back(r, it->second);
  }
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows());
  for (std::size_t r = 0; r < rows(); ++r)
    for (const auto& [c, v] : row_data_[r]) t.row_data_[c][r] = v;
  return t;
}

SparseMatrix SparseMatrix::restrict(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
  std::map<std::size_t, std::size_t> cmap;
  for (std::size_t j = 0; j < cs.size(); ++j) cmap[cs[j]] = j;
  SparseMatrix out(rs.size(), cs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] >= rows()) throw std::out_of_range("restrict row out of range");
    for (const auto& [c, v] : row_data_[rs[i]]) {
      auto it = cmap.find(c);
      if (it != cmap.end()) out.row_data_[i][it->second] = v;
    }
  }
  return out;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<Vec>& rows, std::size_t cols) {
  check_lengths(rows, cols);
  SparseMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rows[r][c] != 0) m.row_data_[r][c] = rows[r][c];
  return m;
}

std::vector<Vec> SparseMatrix::to_dense() const {
  std::vector<Vec> out(rows(), Vec(cols_));
  for (std::size_t r = 0; r < rows(); ++r)
    for (const auto& [c, v] : row_data_[r]) out[r][c] = v;
  return out;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
  SparseMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (const auto& [k, v] : a.row(r))
      for (const auto& [c, w] : b.row(k)) out.add(r, c, v * w);
  return out;
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("add: shapes differ");
  SparseMatrix out = a;
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (const auto& [c, v] : b.row(r)) out.add(r, c, v);
  return out;
}

SparseVec apply(const SparseMatrix& m, const SparseVec& x) {
  std::map<std::size_t, Rational> acc;
  std::vector<Rational> dense_x(m.cols());
  for (const auto& [i, v] : x) {
    if (i >= m.cols()) throw std::out_of_range("apply: index out of range");
    dense_x[i] = v;
  }
  SparseVec out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Rational s = 0;
    for (const auto& [c, v] : m.row(r))
      if (dense_x[c] != 0) s += v * dense_x[c];
    if (s != 0) out.emplace_back(r, s);
  }
  return out;
}

std::size_t rank(const SparseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (m.rows() < kDenseLimit && m.cols() < kDenseLimit) return dense_rank(m.to_dense(), m.cols());
  // Eliminate along the shorter side.
  const SparseMatrix* src = &m;
  SparseMatrix t;
  if (m.rows() > m.cols()) {
    t = m.transpose();
    src = &t;
  }
  Echelon ech(src->cols());
  for (std::size_t r = 0; r < src->rows(); ++r) {
    const auto& row = src->row(r);
    ech.insert(SparseVec(row.begin(), row.end()));
  }
  return ech.rank();
}

std::vector<Vec> kernel_basis(const SparseMatrix& m) {
  const std::size_t n = m.cols();
  std::vector<SparseVec> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
  std::vector<SparseVec> red = sparse_rref(rows, n);
  std::vector<bool> pivot(n, false);
  for (const auto& row : red) pivot[row.front().first] = true;
  std::vector<SparseVec> kern;
  for (std::size_t f = 0; f < n; ++f) {
    if (pivot[f]) continue;
    std::map<std::size_t, Rational> v;
    v[f] = 1;
    for (const auto& row : red) {
      for (const auto& [c, x] : row)
        if (c == f) v[row.front().first] = -x;
    }
    kern.emplace_back(v.begin(), v.end());
  }
  std::vector<Vec> out;
  for (const auto& row : sparse_rref(kern, n)) out.push_back(to_dense(row, n));
  return out;
}

bool in_span(const std::vector<Vec>& vs, const Vec& target) {
  check_lengths(vs, target.size());
  Echelon ech(target.size());
  for (const auto& v : vs) ech.insert(to_sparse(v));
  return ech.contains(to_sparse(target));
}

std::size_t quotient_dim(std::size_t ambient, const std::vector<Vec>& subspace) {
  check_lengths(subspace, ambient);
  return ambient - rank(SparseMatrix::from_dense(subspace, ambient));
}

Echelon::Echelon(std::size_t dim, PivotRule rule) : dim_(dim), rule_(rule) {}

void Echelon::reduce_keyed(std::map<std::size_t, Rational>& acc) const {
  auto it = acc.begin();
  while (it != acc.end()) {
    auto row = rows_.find(it->first);
    if (row == rows_.end()) {
      ++it;
      continue;
    }
    const std::size_t k = it->first;
    Rational f = it->second;
    for (const auto& [c, v] : row->second) {
      auto [slot, fresh] = acc.try_emplace(c, -f * v);
      if (!fresh) {
        slot->second -= f * v;
        if (slot->second == 0 && c != k) acc.erase(slot);
      }
    }
    acc.erase(k);
    it = acc.upper_bound(k);
  }
}

bool Echelon::insert(const SparseVec& v) {
  std::map<std::size_t, Rational> acc;
  for (const auto& [c, x] : v) {
    if (c >= dim_) throw std::out_of_range("echelon: index out of range");
    if (x != 0) acc[key(c)] += x;
  }
  std::erase_if(acc, [](const auto& e) { return e.second == 0; });
  reduce_keyed(acc);
  if (acc.empty()) return false;
  Rational lead = acc.begin()->second;
  SparseVec row;
  row.reserve(acc.size());
  for (const auto& [c, x] : acc) row.emplace_back(c, x / lead);
  rows_.emplace(acc.begin()->first, std::move(row));
  return true;
}

SparseVec Echelon::reduce(const SparseVec& v) const {
  std::map<std::size_t, Rational> acc;
  for (const auto& [c, x] : v) {
    if (c >= dim_) throw std::out_of_range("echelon: index out of range");
    if (x != 0) acc[key(c)] += x;
  }
  std::erase_if(acc, [](const auto& e) { return e.second == 0; });
  reduce_keyed(acc);
  SparseVec out;
  for (const auto& [k, x] : acc) out.emplace_back(key(k), x);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

bool Echelon::is_pivot(std::size_t col) const { return rows_.count(key(col)) > 0; }

std::vector<SparseVec> Echelon::rows() const {
  std::vector<SparseVec> out;
  for (const auto& [k, row] : rows_) {
    SparseVec r;
    for (const auto& [c, x] : row) r.emplace_back(key(c), x);
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front().first < b.front().first; });
  return out;
}

std::vector<std::size_t> Echelon::pivots() const {
  std::vector<std::size_t> out;
  for (const auto& [k, row] : rows_) out.push_back(key(k));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vec> rref_rows(std::vector<Vec> rows, std::size_t cols) {
  check_lengths(rows, cols);
  std::vector<SparseVec> sp;
  for (const auto& r : rows) sp.push_back(to_sparse(r));
  std::vector<Vec> out;
  for (const auto& r : sparse_rref(sp, cols)) out.push_back(to_dense(r, cols));
  return out;
}

}  // namespace opf
