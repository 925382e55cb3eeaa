#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "edshor/bitvec.hpp"

namespace edshor {

/// Dense matrix over F2, stored row-major as one BitVec per row.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return data_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool value = true) { data_[r].set(c, value); }

  const BitVec& row(std::size_t r) const { return data_[r]; }
  BitVec& row(std::size_t r) { return data_[r]; }
  BitVec column(std::size_t c) const;
  void set_column(std::size_t c, const BitVec& v);

  std::size_t row_weight(std::size_t r) const { return data_[r].popcount(); }
  std::size_t column_weight(std::size_t c) const;

  /// Matrix-vector product; v.size() must equal cols().
  BitVec apply(const BitVec& v) const;
  BitMatrix operator*(const BitMatrix& rhs) const;
  BitMatrix operator+(const BitMatrix& rhs) const;

  bool operator==(const BitMatrix& other) const = default;

  /// Solution set of this * x = b: a particular solution plus a basis of
  /// the kernel, or nullopt when the system is inconsistent.
  struct Solution {
    BitVec particular;
    std::vector<BitVec> kernel;
  };
  std::optional<Solution> solve(const BitVec& b) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BitVec> data_;
};

}  // namespace edshor
