#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edshor/circuit.hpp"
#include "edshor/edwards.hpp"
#include "edshor/field.hpp"
#include "edshor/gadgets.hpp"

namespace edshor {

using gadgets::Uncompute;

struct SynthConfig {
  Field field;
  std::optional<CurveSpec> curve;
  Uncompute uncompute = Uncompute::kClean;
  /// Overrides the default AQFT band.
  std::optional<unsigned> qft_band;
  BuildMode mode = BuildMode::kRecord;
};

struct SynthStats {
  /// Field subcircuits instantiated by point adders (compute pass only).
  FieldOpCount field_ops;
  /// General multiplications inside inverters.
  int inverter_mults = 0;
  int point_adders = 0;
  /// Adder layers in the tree scalar multiplier.
  int adder_layers = 0;
  /// Named stage reports, in emission order.
  std::vector<std::pair<std::string, ResourceReport>> stages;
};

struct Synthesis {
  Circuit circuit;
  ResourceReport report;
  SynthStats stats;
};

/// Register "src" (1) copied into "copies" (m).
Synthesis synth_fanout(std::size_t m);
/// Register "target" (1) ^= parity of "src" (m).
Synthesis synth_parity(std::size_t m);
/// "out" ^= A * "in".
Synthesis synth_matrix_mul(const BitMatrix& A, BuildMode mode = BuildMode::kRecord);

/// "out" ^= "a" * "b".
Synthesis synth_mul(const SynthConfig& cfg);
/// "out" ^= c * "in".
Synthesis synth_const_mul(const SynthConfig& cfg, const FieldElement& c);
/// "out" ^= "in"^(2^e).
Synthesis synth_frobenius(const SynthConfig& cfg, std::size_t e);
/// "out" ^= "in"^-1 (0 maps to 0).
Synthesis synth_inverse(const SynthConfig& cfg);

/// Projective point addition on registers x1 y1 z1, x2 y2 z2 into x3 y3 z3.
/// Requires cfg.curve.
Synthesis synth_point_add(const SynthConfig& cfg);

enum class ScalarMethod { kTree, kRightToLeft, kLeftToRight };

/// Registers "k", "l" (n+1 each) and "x", "y", "z" (n each) receiving the
/// projective k P + l Q.
Synthesis synth_double_scalar(const SynthConfig& cfg, const AffinePoint& p, const AffinePoint& q,
                              ScalarMethod method);

/// Registers "x", "y", "z" into "ax", "ay".
Synthesis synth_proj_to_affine(const SynthConfig& cfg);

/// Default AQFT band for m qubits and target error epsilon:
/// ceil(log2 m) + ceil(log2(1/epsilon)), at least 1.
unsigned aqft_band(std::size_t m, double epsilon);
/// Register "q" (m).
Synthesis synth_aqft(std::size_t m, unsigned band);

/// Full discrete-log circuit: Hadamards on "k" and "l", tree double-scalar
/// multiplication into "x" "y" "z", conversion to "ax" "ay", and an AQFT
/// on each control register. Stage reports: hadamard, double_scalar,
/// proj_to_affine, qft.
Synthesis synth_shor(const SynthConfig& cfg, const AffinePoint& p, const AffinePoint& q);

struct CurvePoints {
  CurveSpec curve;
  AffinePoint p;
  AffinePoint q;
  /// Order of P, known for toy curves only.
  std::optional<std::uint64_t> order;
};

/// The curve used when none is given: for n <= 8 the toy curve with P its
/// generator and Q = 3P; beyond that the structural curve and its points.
CurvePoints default_curve(const Field& f);

/// Metadata helpers shared by the synthesizers and the file verifier.
std::string points_metadata(const AffinePoint& p, const AffinePoint& q);
std::optional<std::pair<AffinePoint, AffinePoint>> parse_points_metadata(const Field& f, std::string_view text);

}  // namespace edshor
