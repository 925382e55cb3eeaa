#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edshor {

/// Fixed-length vector over F2. Bit 0 is the least significant bit and, for
/// polynomials, the constant-term coefficient.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t size);

  /// Low bits of `value`; bits at or above `size` must be zero.
  static BitVec from_uint(std::size_t size, std::uint64_t value);
  /// Accepts "0x"-prefixed or bare hex, most significant digit first.
  static BitVec from_hex(std::size_t size, std::string_view hex);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVec& operator^=(const BitVec& other);
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  /// this ^= (src << shift); bits shifted past size() are dropped.
  void xor_shifted(const BitVec& src, std::size_t shift);

  /// Parity of the bitwise AND.
  bool dot(const BitVec& other) const;
  std::size_t popcount() const;
  bool none() const;
  std::optional<std::size_t> highest_set() const;

  /// Changes the length, truncating or zero-extending.
  void resize(std::size_t size);

  /// Low 64 bits.
  std::uint64_t to_uint() const;
  /// "0x" followed by the minimal hex digits of sum(bit_i 2^i).
  std::string to_hex() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool operator==(const BitVec& other) const = default;
  /// Orders by integer value, then by length.
  std::strong_ordering operator<=>(const BitVec& other) const;

 private:
  void clear_tail();

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace edshor
