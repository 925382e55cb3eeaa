#include "edshor/bit_matrix.hpp"

#include "edshor/errors.hpp"

namespace edshor {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows, BitVec(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitVec BitMatrix::column(std::size_t c) const {
  BitVec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.set(r, get(r, c));
  return v;
}

void BitMatrix::set_column(std::size_t c, const BitVec& v) {
  if (v.size() != rows_) throw SpecMismatch("column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) set(r, c, v.get(r));
}

std::size_t BitMatrix::column_weight(std::size_t c) const {
  std::size_t w = 0;
  for (std::size_t r = 0; r < rows_; ++r) w += get(r, c) ? 1 : 0;
  return w;
}

BitVec BitMatrix::apply(const BitVec& v) const {
  if (v.size() != cols_) throw SpecMismatch("matrix-vector dimension mismatch");
  BitVec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.set(r, data_[r].dot(v));
  return out;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw SpecMismatch("matrix product dimension mismatch");
  BitMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      if (get(r, k)) out.data_[r] ^= rhs.data_[k];
    }
  }
  return out;
}

BitMatrix BitMatrix::operator+(const BitMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw SpecMismatch("matrix sum dimension mismatch");
  BitMatrix out = *this;
  for (std::size_t r = 0; r < rows_; ++r) out.data_[r] ^= rhs.data_[r];
  return out;
}

std::optional<BitMatrix::Solution> BitMatrix::solve(const BitVec& b) const {
  if (b.size() != rows_) throw SpecMismatch("right-hand side length mismatch");
  // Augmented rows: [A | b] with b in column cols_.
  std::vector<BitVec> aug;
  aug.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    BitVec row = data_[r];
    row.resize(cols_ + 1);
    row.set(cols_, b.get(r));
    aug.push_back(std::move(row));
  }

  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows_ && !aug[pivot].get(c)) ++pivot;
    if (pivot == rows_) continue;
    std::swap(aug[pivot], aug[rank]);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r != rank && aug[r].get(c)) aug[r] ^= aug[rank];
    }
    pivot_cols.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows_; ++r) {
    if (aug[r].get(cols_)) return std::nullopt;
  }

  Solution sol{BitVec(cols_), {}};
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t i = 0; i < rank; ++i) {
    is_pivot[pivot_cols[i]] = true;
    sol.particular.set(pivot_cols[i], aug[i].get(cols_));
  }
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    BitVec k(cols_);
    k.set(free);
    for (std::size_t i = 0; i < rank; ++i) {
      if (aug[i].get(free)) k.set(pivot_cols[i]);
    }
    sol.kernel.push_back(std::move(k));
  }
  return sol;
}

}  // namespace edshor
