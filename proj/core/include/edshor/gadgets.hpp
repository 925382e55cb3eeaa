#pragma once

#include <cstddef>
#include <span>

#include "edshor/bit_matrix.hpp"
#include "edshor/circuit.hpp"
#include "edshor/edwards.hpp"
#include "edshor/field.hpp"

/// Builder-level circuit fragments. Every fragment emits gates into a
/// CircuitBuilder and allocates its own ancillae, which start in |0>.
namespace edshor::gadgets {

enum class Uncompute {
  kClean,    // compute, copy the result out, run the compute block backwards
  kGarbage,  // leave intermediate values in the ancillae
};

/// Bennett pattern: `compute`, then `copy_out`, then the inverse of
/// `compute`. Gates emitted by `copy_out` are not reversed.
template <class Compute, class CopyOut>
void with_uncompute(CircuitBuilder& b, Compute&& compute, CopyOut&& copy_out) {
  const std::size_t mark = b.tape_open();
  compute();
  const auto segment = b.tape_segment(mark);
  copy_out();
  b.emit_inverse(segment);
  b.tape_close(mark);
}

/// Matrices that depend only on the field, computed once per synthesis.
struct FieldTables {
  explicit FieldTables(Field f);

  Field field;
  BitMatrix reduction;
  BitMatrix squaring;

  std::size_t n() const { return field.degree(); }
};

struct CurveTables {
  explicit CurveTables(const CurveSpec& c);

  CurveSpec curve;
  FieldTables field;
  BitMatrix mul_d1;
  BitMatrix mul_d2;
};

struct PointWires {
  Wires x;
  Wires y;
  Wires z;
};

PointWires alloc_point(CircuitBuilder& b, std::size_t n);

/// Copies the |0>-initialized `targets` from `source` with a CNOT doubling
/// tree: depth ceil(log2(m+1)) for m targets.
void fan_out(CircuitBuilder& b, Qubit source, std::span<const Qubit> targets);

/// Folds the XOR of all leaves into leaves[0] in place with a balanced
/// CNOT tree of depth ceil(log2 m). Returns leaves[0].
Qubit fold_parity(CircuitBuilder& b, std::span<const Qubit> leaves);

/// target ^= XOR(sources); sources are restored.
void parity_into(CircuitBuilder& b, std::span<const Qubit> sources, Qubit target);

/// out ^= A * in using fan-out copies per column and one parity tree per
/// row. `in` and the ancillae are restored; only CNOTs are emitted.
void matrix_mul(CircuitBuilder& b, const BitMatrix& A, std::span<const Qubit> in, std::span<const Qubit> out);

/// out ^= in.
void xor_into(CircuitBuilder& b, std::span<const Qubit> in, std::span<const Qubit> out);

/// out ^= a * b in GF(2^n) (Mastrovito: n^2 Toffolis in one layer between
/// logarithmic-depth fan-out and parity trees).
void field_mul(CircuitBuilder& b, const FieldTables& t, std::span<const Qubit> a, std::span<const Qubit> bb,
               std::span<const Qubit> out, Uncompute mode);

/// out ^= a^(2^n - 2) with the Itoh-Tsuji chain. Returns the number of
/// general multiplications instantiated.
int itoh_tsuji(CircuitBuilder& b, const FieldTables& t, std::span<const Qubit> in, std::span<const Qubit> out,
               Uncompute mode);

/// out ^= P1 + P2 in projective coordinates. `out` should start at zero.
/// Adds the instantiated field subcircuits (compute pass only) to `count`.
void point_add(CircuitBuilder& b, const CurveTables& t, const PointWires& p1, const PointWires& p2,
               const PointWires& out, Uncompute mode, FieldOpCount* count = nullptr);

/// Writes (x, y) of `p` into `dst` where `control` is set, and sets Z = 1
/// unconditionally; `dst` must start at zero, so an unset control leaves
/// the identity (0, 0, 1).
void load_point_controlled(CircuitBuilder& b, Qubit control, const AffinePoint& p, const PointWires& dst);

/// (ax, ay) ^= (X/Z, Y/Z). Z must be nonzero; Z = 0 yields (0, 0).
void proj_to_affine(CircuitBuilder& b, const FieldTables& t, const PointWires& in, std::span<const Qubit> ax,
                    std::span<const Qubit> ay, Uncompute mode);

/// Quantum Fourier transform on `q` (q[0] least significant) keeping only
/// controlled phases 2 pi / 2^k with k <= band, followed by the bit
/// reversal as CNOT swaps.
void qft(CircuitBuilder& b, std::span<const Qubit> q, unsigned band);

}  // namespace edshor::gadgets
