#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "edshor/field.hpp"

namespace edshor {

/// Complete binary Edwards curve
///   d1(x+y) + d2(x^2+y^2) = xy + xy(x+y) + x^2 y^2
/// with d1 != 0 and Tr(d2) = 1.
class CurveSpec {
 public:
  /// Throws InvalidArgument unless d1 != 0 and Tr(d2) = 1.
  CurveSpec(FieldElement d1, FieldElement d2);

  /// Parses "edwards n=<n> poly=0x<hex> d1=0x<hex> d2=0x<hex>".
  static CurveSpec parse(std::string_view text);

  const Field& field() const { return d1_.field(); }
  const FieldElement& d1() const { return d1_; }
  const FieldElement& d2() const { return d2_; }

  std::string to_text() const;

  bool operator==(const CurveSpec& other) const = default;

 private:
  FieldElement d1_;
  FieldElement d2_;
};

struct AffinePoint {
  FieldElement x;
  FieldElement y;

  bool operator==(const AffinePoint& other) const = default;
  bool operator<(const AffinePoint& other) const {
    return x < other.x || (x == other.x && y < other.y);
  }
  std::string to_text() const { return "(" + x.to_hex() + "," + y.to_hex() + ")"; }
};

struct ProjectivePoint {
  FieldElement X;
  FieldElement Y;
  FieldElement Z;

  bool operator==(const ProjectivePoint& other) const = default;
  std::string to_text() const {
    return "(" + X.to_hex() + "," + Y.to_hex() + "," + Z.to_hex() + ")";
  }
};

/// Field-operation tally for the projective addition formula.
struct FieldOpCount {
  int mul = 0;
  int const_mul = 0;
  int square = 0;
  int add = 0;

  bool operator==(const FieldOpCount& other) const = default;
};

AffinePoint identity_point(const CurveSpec& c);
ProjectivePoint projective_identity(const CurveSpec& c);
ProjectivePoint to_projective(const AffinePoint& p);
/// (X/Z, Y/Z); throws InvalidArgument when Z = 0.
AffinePoint normalize(const ProjectivePoint& p);
/// X1 Z2 = X2 Z1 and Y1 Z2 = Y2 Z1 with both Z nonzero.
bool projectively_equal(const ProjectivePoint& a, const ProjectivePoint& b);

bool on_curve(const CurveSpec& c, const AffinePoint& p);

/// The unified affine addition law. Throws CompletenessViolation if a
/// denominator vanishes.
AffinePoint affine_add(const CurveSpec& c, const AffinePoint& p1, const AffinePoint& p2);

/// Projective addition with 21 general multiplications, 4 multiplications
/// by d1 or d2, 1 squaring and 15 additions. When `count` is given the
/// operations performed are added to it.
ProjectivePoint projective_add(const CurveSpec& c, const ProjectivePoint& p1,
                               const ProjectivePoint& p2, FieldOpCount* count = nullptr);

AffinePoint scalar_mul(const CurveSpec& c, std::uint64_t k, const AffinePoint& p);
/// k P + l Q.
AffinePoint double_scalar(const CurveSpec& c, std::uint64_t k, std::uint64_t l, const AffinePoint& p,
                          const AffinePoint& q);

/// All affine points, sorted by (x, y). Refuses n > 16.
std::vector<AffinePoint> enumerate_points(const CurveSpec& c);
/// Points with the given x coordinate, found by solving the F2-linear
/// equation in y.
std::vector<AffinePoint> points_with_x(const CurveSpec& c, const FieldElement& x);

/// Smallest m >= 1 with m P = identity. Throws NotFound past `limit`.
std::uint64_t order_of(const CurveSpec& c, const AffinePoint& p, std::uint64_t limit = 1u << 20);

/// Upper end of the Hasse interval as stated for these curves:
/// 2^n + 2^(1+n/2) + 1.
double hasse_upper_bound(std::size_t n);

struct ToyCurve {
  CurveSpec curve;
  AffinePoint generator;
  std::uint64_t order;
};

/// First (d1, d2) in lexicographic bit-pattern order whose curve has a
/// point of order >= 4; returns the first point of maximal order.
/// Requires n <= 8.
ToyCurve find_toy_curve(const Field& field);

struct StructuralCurve {
  CurveSpec curve;
  AffinePoint p;
  AffinePoint q;
};

/// Curve and two non-identity points for any n, without enumerating the
/// group: d1 = 1, d2 the smallest trace-one element, P and Q the first
/// non-identity points found by increasing x. Used for resource builds where
/// no point order is needed.
StructuralCurve structural_curve(const Field& field);

}  // namespace edshor
