#include "edshor/edwards.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "edshor/errors.hpp"

namespace edshor {

CurveSpec::CurveSpec(FieldElement d1, FieldElement d2) : d1_(std::move(d1)), d2_(std::move(d2)) {
  if (!(d1_.field() == d2_.field())) throw SpecMismatch("d1 and d2 belong to different fields");
  if (d1_.is_zero()) throw InvalidArgument("d1 must be nonzero");
  if (!trace(d2_)) throw InvalidArgument("d2 = " + d2_.to_hex() + " has trace 0");
}

CurveSpec CurveSpec::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag, n_tok, poly_tok, d1_tok, d2_tok;
  in >> tag >> n_tok >> poly_tok >> d1_tok >> d2_tok;
  if (tag != "edwards" || !d1_tok.starts_with("d1=") || !d2_tok.starts_with("d2=")) {
    throw InvalidArgument("expected 'edwards n=<n> poly=0x<hex> d1=0x<hex> d2=0x<hex>', got '" +
                          std::string(text) + "'");
  }
  const Field f = Field::parse("gf2n " + n_tok + " " + poly_tok);
  return CurveSpec(f.element_from_hex(d1_tok.substr(3)), f.element_from_hex(d2_tok.substr(3)));
}

std::string CurveSpec::to_text() const {
  return "edwards n=" + std::to_string(field().degree()) + " poly=" + field().modulus().to_hex() +
         " d1=" + d1_.to_hex() + " d2=" + d2_.to_hex();
}

AffinePoint identity_point(const CurveSpec& c) { return {c.field().zero(), c.field().zero()}; }

ProjectivePoint projective_identity(const CurveSpec& c) {
  return {c.field().zero(), c.field().zero(), c.field().one()};
}

ProjectivePoint to_projective(const AffinePoint& p) { return {p.x, p.y, p.x.field().one()}; }

AffinePoint normalize(const ProjectivePoint& p) {
  if (p.Z.is_zero()) throw InvalidArgument("projective point has Z = 0");
  const FieldElement z_inv = inv_fermat(p.Z);
  return {p.X * z_inv, p.Y * z_inv};
}

bool projectively_equal(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.Z.is_zero() || b.Z.is_zero()) return false;
  return a.X * b.Z == b.X * a.Z && a.Y * b.Z == b.Y * a.Z;
}

bool on_curve(const CurveSpec& c, const AffinePoint& p) {
  const FieldElement& x = p.x;
  const FieldElement& y = p.y;
  const FieldElement xy = x * y;
  const FieldElement lhs = c.d1() * (x + y) + c.d2() * (square(x) + square(y));
  const FieldElement rhs = xy + xy * (x + y) + square(xy);
  return lhs == rhs;
}

AffinePoint affine_add(const CurveSpec& c, const AffinePoint& p1, const AffinePoint& p2) {
  const FieldElement one = c.field().one();
  const auto& [x1, y1] = p1;
  const auto& [x2, y2] = p2;
  const FieldElement shared = c.d2() * (x1 + y1) * (x2 + y2);
  const FieldElement gx = x1 + square(x1);
  const FieldElement gy = y1 + square(y1);

  const FieldElement den_x = c.d1() + gx * (x2 + y2);
  const FieldElement den_y = c.d1() + gy * (x2 + y2);
  if (den_x.is_zero() || den_y.is_zero()) {
    throw CompletenessViolation("addition law denominator vanished for " + p1.to_text() + " + " +
                                p2.to_text() + " on " + c.to_text());
  }
  const FieldElement num_x = c.d1() * (x1 + x2) + shared + gx * (x2 * (y1 + y2 + one) + y1 * y2);
  const FieldElement num_y = c.d1() * (y1 + y2) + shared + gy * (y2 * (x1 + x2 + one) + x1 * x2);
  return {num_x * inv_fermat(den_x), num_y * inv_fermat(den_y)};
}

ProjectivePoint projective_add(const CurveSpec& c, const ProjectivePoint& p1, const ProjectivePoint& p2,
                               FieldOpCount* count) {
  FieldOpCount local;
  auto mul = [&](const FieldElement& a, const FieldElement& b) {
    ++local.mul;
    return a * b;
  };
  auto cmul = [&](const FieldElement& d, const FieldElement& a) {
    ++local.const_mul;
    return d * a;
  };
  auto sq = [&](const FieldElement& a) {
    ++local.square;
    return square(a);
  };
  auto add = [&](const FieldElement& a, const FieldElement& b) {
    ++local.add;
    return a + b;
  };

  const auto& [X1, Y1, Z1] = p1;
  const auto& [X2, Y2, Z2] = p2;

  const FieldElement W1 = add(X1, Y1);
  const FieldElement W2 = add(X2, Y2);
  const FieldElement A = mul(X1, add(X1, Z1));
  const FieldElement B = mul(Y1, add(Y1, Z1));
  const FieldElement C = mul(Z1, Z2);
  const FieldElement D = mul(W2, Z2);
  const FieldElement E = cmul(c.d1(), sq(C));
  const FieldElement H = mul(mul(add(cmul(c.d1(), Z2), cmul(c.d2(), W2)), W1), C);
  const FieldElement I = mul(cmul(c.d1(), Z1), C);
  const FieldElement U = add(E, mul(A, D));
  const FieldElement V = add(E, mul(B, D));
  const FieldElement S = mul(U, V);

  const FieldElement X3 =
      add(mul(S, Y1), mul(mul(add(H, mul(X2, add(I, mul(A, add(Y2, Z2))))), V), Z1));
  const FieldElement Y3 =
      add(mul(S, X1), mul(mul(add(H, mul(Y2, add(I, mul(B, add(X2, Z2))))), U), Z1));
  const FieldElement Z3 = mul(S, Z1);

  if (Z3.is_zero()) {
    throw CompletenessViolation("projective sum has Z = 0 for " + p1.to_text() + " + " + p2.to_text());
  }
  if (count != nullptr) {
    count->mul += local.mul;
    count->const_mul += local.const_mul;
    count->square += local.square;
    count->add += local.add;
  }
  return {X3, Y3, Z3};
}

AffinePoint scalar_mul(const CurveSpec& c, std::uint64_t k, const AffinePoint& p) {
  AffinePoint acc = identity_point(c);
  for (int bit = 63; bit >= 0; --bit) {
    acc = affine_add(c, acc, acc);
    if ((k >> bit) & 1u) acc = affine_add(c, acc, p);
  }
  return acc;
}

AffinePoint double_scalar(const CurveSpec& c, std::uint64_t k, std::uint64_t l, const AffinePoint& p,
                          const AffinePoint& q) {
  return affine_add(c, scalar_mul(c, k, p), scalar_mul(c, l, q));
}

std::vector<AffinePoint> points_with_x(const CurveSpec& c, const FieldElement& x) {
  const Field& f = c.field();
  // a y^2 + b y = k is F2-linear in y.
  const FieldElement x2 = square(x);
  const FieldElement a = c.d2() + x + x2;
  const FieldElement b = c.d1() + x + x2;
  const FieldElement k = c.d1() * x + c.d2() * x2;
  const BitMatrix map = multiplication_matrix(a) * squaring_matrix(f) + multiplication_matrix(b);
  std::vector<AffinePoint> out;
  const auto sol = map.solve(k.coeffs());
  if (!sol) return out;
  if (sol->kernel.size() > 8) throw ResourceLimit("solution space too large");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sol->kernel.size()); ++mask) {
    BitVec y = sol->particular;
    for (std::size_t i = 0; i < sol->kernel.size(); ++i) {
      if ((mask >> i) & 1u) y ^= sol->kernel[i];
    }
    out.push_back({x, f.element(y)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<AffinePoint> enumerate_points(const CurveSpec& c) {
  const std::size_t n = c.field().degree();
  if (n > 16) throw ResourceLimit("point enumeration refused for n = " + std::to_string(n) + " > 16");
  std::vector<AffinePoint> out;
  for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) {
    for (auto& p : points_with_x(c, c.field().element(xv))) out.push_back(std::move(p));
  }
  return out;
}

std::uint64_t order_of(const CurveSpec& c, const AffinePoint& p, std::uint64_t limit) {
  const AffinePoint id = identity_point(c);
  AffinePoint acc = p;
  for (std::uint64_t m = 1; m <= limit; ++m) {
    if (acc == id) return m;
    acc = affine_add(c, acc, p);
  }
  throw NotFound("point order exceeds " + std::to_string(limit));
}

double hasse_upper_bound(std::size_t n) {
  return std::ldexp(1.0, static_cast<int>(n)) + std::pow(2.0, 1.0 + static_cast<double>(n) / 2.0) + 1.0;
}

ToyCurve find_toy_curve(const Field& field) {
  const std::size_t n = field.degree();
  if (n > 8) throw ResourceLimit("toy curve search refused for n = " + std::to_string(n) + " > 8");
  const std::uint64_t size = std::uint64_t{1} << n;
  for (std::uint64_t d1 = 1; d1 < size; ++d1) {
    for (std::uint64_t d2 = 0; d2 < size; ++d2) {
      if (!trace(field.element(d2))) continue;
      const CurveSpec curve(field.element(d1), field.element(d2));
      std::uint64_t best_order = 0;
      const AffinePoint* best = nullptr;
      const auto points = enumerate_points(curve);
      for (const auto& p : points) {
        const std::uint64_t ord = order_of(curve, p);
        if (ord > best_order) {
          best_order = ord;
          best = &p;
        }
      }
      if (best != nullptr && best_order >= 4) return {curve, *best, best_order};
    }
  }
  throw NotFound("no toy curve with a point of order >= 4 over " + field.to_text());
}

StructuralCurve structural_curve(const Field& field) {
  std::uint64_t d2 = 1;
  while (!trace(field.element(d2))) ++d2;
  const CurveSpec curve(field.one(), field.element(d2));
  std::vector<AffinePoint> found;
  for (std::uint64_t xv = 1; found.size() < 2; ++xv) {
    if (field.degree() < 64 && (xv >> field.degree()) != 0) break;
    for (const auto& p : points_with_x(curve, field.element(xv))) {
      if (p != identity_point(curve)) {
        found.push_back(p);
        break;
      }
    }
  }
  if (found.size() < 2) throw NotFound("could not find two curve points over " + field.to_text());
  return {curve, found[0], found[1]};
}

}  // namespace edshor
