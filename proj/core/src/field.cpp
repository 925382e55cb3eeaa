#include "edshor/field.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "edshor/errors.hpp"

namespace edshor {

namespace poly {

std::size_t degree(const BitVec& p) { return p.highest_set().value_or(0); }

BitVec multiply(const BitVec& a, const BitVec& b) {
  const std::size_t size = a.size() + b.size() > 0 ? a.size() + b.size() - 1 : 0;
  BitVec out(size);
  BitVec wide = b;
  wide.resize(size);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.get(i)) out.xor_shifted(wide, i);
  }
  return out;
}

BitVec reduce(const BitVec& a, const BitVec& m) {
  const auto top_m = m.highest_set();
  if (!top_m) throw InvalidArgument("reduction by the zero polynomial");
  const std::size_t dm = *top_m;
  BitVec r = a;
  if (r.size() < dm) r.resize(dm);
  if (const auto top = r.highest_set()) {
    for (std::size_t i = *top + 1; i-- > dm;) {
      if (r.get(i)) r.xor_shifted(m, i - dm);
    }
  }
  r.resize(dm);
  return r;
}

BitVec gcd(BitVec a, BitVec b) {
  while (!b.none()) {
    BitVec r = reduce(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

namespace {

BitVec square_mod(const BitVec& a, const BitVec& m) {
  BitVec s(a.size() > 0 ? 2 * a.size() - 1 : 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.get(i)) s.set(2 * i);
  }
  return reduce(s, m);
}

std::vector<std::size_t> prime_divisors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_irreducible(const BitVec& p) {
  const auto top = p.highest_set();
  if (!top || *top == 0) return false;
  const std::size_t n = *top;
  if (n == 1) return true;
  if (!p.get(0)) return false;

  BitVec x(n);
  x.set(1);
  // x^(2^k) mod p for every k up to n.
  std::vector<BitVec> powers{x};
  for (std::size_t k = 1; k <= n; ++k) powers.push_back(square_mod(powers.back(), p));
  if (powers[n] != x) return false;
  for (std::size_t q : prime_divisors(n)) {
    BitVec h = powers[n / q] ^ x;
    if (h.none()) return false;
    const BitVec g = gcd(p, h);
    if (degree(g) != 0) return false;
  }
  return true;
}

}  // namespace poly

namespace {

BitVec polynomial_from_exponents(std::size_t n, std::initializer_list<std::size_t> exps) {
  BitVec p(n + 1);
  p.set(n);
  p.set(0);
  for (auto e : exps) p.set(e);
  return p;
}

std::optional<BitVec> builtin_modulus(std::size_t n) {
  switch (n) {
    case 2: return polynomial_from_exponents(2, {1});
    case 3: return polynomial_from_exponents(3, {1});
    case 4: return polynomial_from_exponents(4, {1});
    case 5: return polynomial_from_exponents(5, {2});
    case 8: return polynomial_from_exponents(8, {4, 3, 1});
    case 163: return polynomial_from_exponents(163, {7, 6, 3});
    case 233: return polynomial_from_exponents(233, {74});
    default: return std::nullopt;
  }
}

BitVec search_modulus(std::size_t n) {
  for (std::size_t k = 1; k < n; ++k) {
    BitVec p = polynomial_from_exponents(n, {k});
    if (poly::is_irreducible(p)) return p;
  }
  for (std::size_t a = 3; a < n; ++a) {
    for (std::size_t b = 2; b < a; ++b) {
      for (std::size_t c = 1; c < b; ++c) {
        BitVec p = polynomial_from_exponents(n, {a, b, c});
        if (poly::is_irreducible(p)) return p;
      }
    }
  }
  throw NotFound("no irreducible trinomial or pentanomial of degree " + std::to_string(n));
}

void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (!(a.field() == b.field())) {
    throw SpecMismatch("operands belong to different fields (" + a.field().to_text() + " vs " +
                       b.field().to_text() + ")");
  }
}

}  // namespace

Field Field::standard(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, Field> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  if (n < 2) throw InvalidArgument("field degree must be at least 2, got " + std::to_string(n));
  const auto builtin = builtin_modulus(n);
  Field f = from_modulus(builtin ? *builtin : search_modulus(n));
  std::lock_guard lock(mutex);
  return cache.emplace(n, f).first->second;
}

Field Field::from_modulus(const BitVec& modulus) {
  const auto top = modulus.highest_set();
  if (!top || *top < 2) throw InvalidArgument("modulus must have degree at least 2");
  if (!modulus.get(0)) throw InvalidArgument("modulus must have constant term 1");
  if (!poly::is_irreducible(modulus)) {
    throw InvalidArgument("modulus " + modulus.to_hex() + " is reducible");
  }
  BitVec m = modulus;
  m.resize(*top + 1);
  return Field(std::make_shared<const FieldSpec>(FieldSpec{*top, std::move(m)}));
}

Field Field::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag, n_tok, poly_tok;
  in >> tag >> n_tok >> poly_tok;
  if (tag != "gf2n" || !n_tok.starts_with("n=") || !poly_tok.starts_with("poly=")) {
    throw InvalidArgument("expected 'gf2n n=<n> poly=0x<hex>', got '" + std::string(text) + "'");
  }
  const std::size_t n = std::stoul(n_tok.substr(2));
  Field f = from_modulus(BitVec::from_hex(n + 1, poly_tok.substr(5)));
  if (f.degree() != n) throw InvalidArgument("modulus degree does not match n=" + n_tok.substr(2));
  return f;
}

std::string Field::to_text() const {
  return "gf2n n=" + std::to_string(degree()) + " poly=" + modulus().to_hex();
}

FieldElement Field::zero() const { return FieldElement(*this, BitVec(degree())); }

FieldElement Field::one() const { return element(1); }

FieldElement Field::element(std::uint64_t bits) const {
  return FieldElement(*this, BitVec::from_uint(degree(), bits));
}

FieldElement Field::element(const BitVec& coeffs) const { return FieldElement(*this, coeffs); }

FieldElement Field::element_from_hex(std::string_view hex) const {
  return FieldElement(*this, BitVec::from_hex(degree(), hex));
}

FieldElement Field::generator() const { return element(2); }

bool Field::operator==(const Field& other) const {
  return spec_ == other.spec_ || (spec_->n == other.spec_->n && spec_->modulus == other.spec_->modulus);
}

FieldElement::FieldElement(Field field, BitVec coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != field_.degree()) {
    throw SpecMismatch("element has " + std::to_string(coeffs_.size()) + " coefficients, field has n=" +
                       std::to_string(field_.degree()));
  }
}

bool FieldElement::is_one() const { return coeffs_.get(0) && coeffs_.popcount() == 1; }

bool FieldElement::operator==(const FieldElement& other) const {
  return coeffs_ == other.coeffs_ && field_ == other.field_;
}

FieldElement add(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return FieldElement(a.field(), a.coeffs() ^ b.coeffs());
}

FieldElement mul_schoolbook(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return FieldElement(a.field(), poly::reduce(poly::multiply(a.coeffs(), b.coeffs()), a.field().modulus()));
}

FieldElement square(const FieldElement& a) { return mul_schoolbook(a, a); }

FieldElement frobenius(const FieldElement& a, std::size_t e) {
  FieldElement r = a;
  for (std::size_t i = 0; i < e % a.field().degree(); ++i) r = square(r);
  return r;
}

FieldElement inv_fermat(const FieldElement& a) {
  // 2^n - 2 in binary is n-1 ones followed by a zero.
  FieldElement r = a.field().one();
  for (std::size_t i = 0; i + 1 < a.field().degree(); ++i) r = square(r) * a;
  return square(r);
}

bool trace(const FieldElement& a) {
  FieldElement term = a;
  FieldElement sum = a;
  for (std::size_t i = 1; i < a.field().degree(); ++i) {
    term = square(term);
    sum = sum + term;
  }
  if (!sum.is_zero() && !sum.is_one()) throw Error("trace left F2: " + sum.to_hex());
  return sum.is_one();
}

std::vector<ItohTsujiStep> itoh_tsuji_chain(std::size_t n) {
  if (n < 2) throw InvalidArgument("Itoh-Tsuji chain needs n >= 2");
  const std::size_t e = n - 1;
  std::size_t top = 0;
  while ((e >> (top + 1)) != 0) ++top;
  std::vector<ItohTsujiStep> steps;
  std::size_t k = 1;
  for (std::size_t bit = top; bit-- > 0;) {
    steps.push_back({ItohTsujiStep::Kind::kDouble, k});
    k *= 2;
    if ((e >> bit) & 1) {
      steps.push_back({ItohTsujiStep::Kind::kIncrement, k});
      k += 1;
    }
  }
  return steps;
}

ItohTsujiResult itoh_tsuji_inverse(const FieldElement& a) {
  FieldElement beta = a;
  int mults = 0;
  for (const auto& step : itoh_tsuji_chain(a.field().degree())) {
    if (step.kind == ItohTsujiStep::Kind::kDouble) {
      beta = frobenius(beta, step.k) * beta;
    } else {
      beta = square(beta) * a;
    }
    ++mults;
  }
  return {square(beta), mults};
}

BitMatrix build_toeplitz_L(const FieldElement& a) {
  const std::size_t n = a.field().degree();
  BitMatrix L(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) L.set(i, j, a.coeffs().get(i - j));
  }
  return L;
}

BitMatrix build_toeplitz_U(const FieldElement& a) {
  const std::size_t n = a.field().degree();
  BitMatrix U(n - 1, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) U.set(i, j, a.coeffs().get(n + i - j));
  }
  return U;
}

BitMatrix build_reduction_matrix(const Field& field) {
  const std::size_t n = field.degree();
  BitMatrix M(n, n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    BitVec monomial(n + j + 1);
    monomial.set(n + j);
    M.set_column(j, poly::reduce(monomial, field.modulus()));
  }
  return M;
}

BitMatrix frobenius_matrix(const Field& field, std::size_t e) {
  const std::size_t n = field.degree();
  BitMatrix A(n, n);
  // Column j is (x^j)^(2^e) = g^j with g = x^(2^e).
  const FieldElement g = frobenius(field.generator(), e);
  FieldElement column = field.one();
  for (std::size_t j = 0; j < n; ++j) {
    A.set_column(j, column.coeffs());
    column = column * g;
  }
  return A;
}

BitMatrix multiplication_matrix(const FieldElement& c) {
  const Field& field = c.field();
  const std::size_t n = field.degree();
  BitMatrix A(n, n);
  FieldElement column = c;
  for (std::size_t j = 0; j < n; ++j) {
    A.set_column(j, column.coeffs());
    column = column * field.generator();
  }
  return A;
}

}  // namespace edshor
