#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "edshor/bit_matrix.hpp"
#include "edshor/bitvec.hpp"

namespace edshor {

/// GF(2^n) in polynomial basis: the extension degree and the defining
/// irreducible modulus (n+1 bits, constant term at bit 0).
struct FieldSpec {
  std::size_t n = 0;
  BitVec modulus;
};

class FieldElement;

/// Shared handle to an immutable, validated FieldSpec.
class Field {
 public:
  /// The default modulus for degree n: the built-in table for
  /// n in {2,3,4,5,8,163,233}, otherwise the first irreducible trinomial,
  /// otherwise the first irreducible pentanomial. Results are cached.
  static Field standard(std::size_t n);
  /// Validates degree, constant term and irreducibility.
  static Field from_modulus(const BitVec& modulus);
  /// Parses "gf2n n=<n> poly=0x<hex>".
  static Field parse(std::string_view text);

  std::size_t degree() const { return spec_->n; }
  const BitVec& modulus() const { return spec_->modulus; }
  const FieldSpec& spec() const { return *spec_; }

  /// "gf2n n=<n> poly=0x<hex>".
  std::string to_text() const;

  FieldElement zero() const;
  FieldElement one() const;
  /// The element whose coefficient vector is the binary expansion of `bits`.
  FieldElement element(std::uint64_t bits) const;
  FieldElement element(const BitVec& coeffs) const;
  FieldElement element_from_hex(std::string_view hex) const;
  /// x as a field element.
  FieldElement generator() const;

  /// Structural equality (same degree and modulus).
  bool operator==(const Field& other) const;

 private:
  explicit Field(std::shared_ptr<const FieldSpec> spec) : spec_(std::move(spec)) {}
  std::shared_ptr<const FieldSpec> spec_;
};

class FieldElement {
 public:
  FieldElement(Field field, BitVec coeffs);

  const Field& field() const { return field_; }
  const BitVec& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.none(); }
  bool is_one() const;
  std::uint64_t to_uint() const { return coeffs_.to_uint(); }
  std::string to_hex() const { return coeffs_.to_hex(); }

  bool operator==(const FieldElement& other) const;
  /// Integer order on coefficient vectors; used for deterministic sweeps.
  bool operator<(const FieldElement& other) const { return coeffs_ < other.coeffs_; }

 private:
  Field field_;
  BitVec coeffs_;
};

FieldElement add(const FieldElement& a, const FieldElement& b);
/// Polynomial product reduced modulo p; the reference multiplication.
FieldElement mul_schoolbook(const FieldElement& a, const FieldElement& b);
FieldElement square(const FieldElement& a);
/// a^(2^n - 2) by square-and-multiply; maps 0 to 0.
FieldElement inv_fermat(const FieldElement& a);
/// a^(2^e).
FieldElement frobenius(const FieldElement& a, std::size_t e);
/// sum_{i<n} a^(2^i), which lies in F2.
bool trace(const FieldElement& a);

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return add(a, b); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  return mul_schoolbook(a, b);
}

/// One step of the Itoh-Tsuji addition chain on n-1, tracking
/// beta_k = a^(2^k - 1).
struct ItohTsujiStep {
  enum class Kind {
    kDouble,     // beta_{2k} = beta_k^(2^k) * beta_k
    kIncrement,  // beta_{k+1} = beta_k^2 * a
  };
  Kind kind;
  std::size_t k;  // exponent index before the step
};

/// Binary-method chain from beta_1 = a to beta_{n-1}, scanning n-1 from
/// its most significant bit.
std::vector<ItohTsujiStep> itoh_tsuji_chain(std::size_t n);

struct ItohTsujiResult {
  FieldElement value;
  int mult_count;
};

/// Inverse via beta_{n-1}^2 = a^(2^n - 2); maps 0 to 0.
ItohTsujiResult itoh_tsuji_inverse(const FieldElement& a);

/// Lower-triangular Toeplitz L (n x n) with L[i][j] = a_{i-j}; L*b gives
/// product coefficients c_0..c_{n-1}.
BitMatrix build_toeplitz_L(const FieldElement& a);
/// Upper shift matrix U ((n-1) x n) with U[i][j] = a_{n+i-j} for j > i;
/// U*b gives product coefficients c_n..c_{2n-2}.
BitMatrix build_toeplitz_U(const FieldElement& a);
/// n x (n-1) matrix whose column j holds x^(n+j) mod p.
BitMatrix build_reduction_matrix(const Field& field);
/// Matrix of a -> a^(2^e).
BitMatrix frobenius_matrix(const Field& field, std::size_t e);
inline BitMatrix squaring_matrix(const Field& field) { return frobenius_matrix(field, 1); }
/// Matrix of a -> c*a for a fixed constant c.
BitMatrix multiplication_matrix(const FieldElement& c);

/// Polynomial arithmetic in F2[x] on coefficient vectors.
namespace poly {

std::size_t degree(const BitVec& p);
BitVec multiply(const BitVec& a, const BitVec& b);
/// Remainder of a modulo m, returned with length deg(m).
BitVec reduce(const BitVec& a, const BitVec& m);
BitVec gcd(BitVec a, BitVec b);
/// Rabin's test.
bool is_irreducible(const BitVec& p);

}  // namespace poly

}  // namespace edshor
