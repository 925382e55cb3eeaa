#include "edshor/bitvec.hpp"

#include <algorithm>
#include <bit>

#include "edshor/errors.hpp"

namespace edshor {

namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitVec::BitVec(std::size_t size) : size_(size), words_(word_count(size), 0) {}

BitVec BitVec::from_uint(std::size_t size, std::uint64_t value) {
  BitVec v(size);
  if (size < 64 && (value >> size) != 0) {
    throw InvalidArgument("value 0x" + std::to_string(value) + " does not fit in " +
                          std::to_string(size) + " bits");
  }
  if (!v.words_.empty()) v.words_[0] = value;
  return v;
}

BitVec BitVec::from_hex(std::size_t size, std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty()) throw InvalidArgument("empty hex literal");
  BitVec v(size);
  std::size_t bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
    const int digit = hex_value(*it);
    if (digit < 0) throw InvalidArgument("bad hex digit '" + std::string(1, *it) + "'");
    for (int j = 0; j < 4; ++j) {
      if (((digit >> j) & 1) == 0) continue;
      if (bit + j >= size) {
        throw InvalidArgument("hex literal 0x" + std::string(hex) + " exceeds " +
                              std::to_string(size) + " bits");
      }
      v.set(bit + j);
    }
  }
  return v;
}

BitVec& BitVec::operator^=(const BitVec& other) {
  if (other.size_ != size_) throw SpecMismatch("bit vector length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

void BitVec::xor_shifted(const BitVec& src, std::size_t shift) {
  const std::size_t word_shift = shift / 64;
  const unsigned bit_shift = shift % 64;
  for (std::size_t i = 0; i < src.words_.size(); ++i) {
    const std::uint64_t w = src.words_[i];
    if (w == 0) continue;
    const std::size_t dst = i + word_shift;
    if (dst < words_.size()) words_[dst] ^= w << bit_shift;
    if (bit_shift != 0 && dst + 1 < words_.size()) words_[dst + 1] ^= w >> (64 - bit_shift);
  }
  clear_tail();
}

bool BitVec::dot(const BitVec& other) const {
  if (other.size_ != size_) throw SpecMismatch("bit vector length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
  return std::popcount(acc) & 1;
}

std::size_t BitVec::popcount() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVec::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::optional<std::size_t> BitVec::highest_set() const {
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i] != 0) return i * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[i]));
  }
  return std::nullopt;
}

void BitVec::resize(std::size_t size) {
  size_ = size;
  words_.resize(word_count(size), 0);
  clear_tail();
}

std::uint64_t BitVec::to_uint() const { return words_.empty() ? 0 : words_[0]; }

std::string BitVec::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const auto top = highest_set();
  if (!top) return "0x0";
  std::string out = "0x";
  for (std::size_t nibble = *top / 4 + 1; nibble-- > 0;) {
    int digit = 0;
    for (int j = 0; j < 4; ++j) {
      const std::size_t bit = nibble * 4 + j;
      if (bit < size_ && get(bit)) digit |= 1 << j;
    }
    out.push_back(kDigits[digit]);
  }
  return out;
}

std::strong_ordering BitVec::operator<=>(const BitVec& other) const {
  const std::size_t n = std::max(words_.size(), other.words_.size());
  for (std::size_t i = n; i-- > 0;) {
    const std::uint64_t a = i < words_.size() ? words_[i] : 0;
    const std::uint64_t b = i < other.words_.size() ? other.words_[i] : 0;
    if (a != b) return a <=> b;
  }
  return size_ <=> other.size_;
}

void BitVec::clear_tail() {
  if (size_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }
}

}  // namespace edshor
