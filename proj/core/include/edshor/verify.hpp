#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "edshor/circuit.hpp"
#include "edshor/edwards.hpp"
#include "edshor/field.hpp"
#include "edshor/gadgets.hpp"

namespace edshor {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::uint64_t cases = 0;
  std::string detail;  // first failure, if any

  /// "PASS <name> (<cases> cases)" or "FAIL <name>: <detail>".
  std::string to_line() const;
};

FieldElement random_element(const Field& f, std::mt19937_64& rng);
FieldElement random_nonzero(const Field& f, std::mt19937_64& rng);
/// A uniformly chosen x with points, then one of its points.
AffinePoint random_point(const CurveSpec& c, std::mt19937_64& rng);

/// Replaces the middle Toffoli (in gate order) by a CNOT from its first control. Returns
/// false when the circuit has no Toffoli.
bool inject_fault(Circuit& c);

/// Checks a synthesized classical circuit against reference arithmetic on
/// `samples` random inputs (rounded up to a multiple of 64). The kind,
/// field, curve, points and uncompute mode come from the metadata lines.
/// Input registers must be restored; in clean mode every qubit outside the
/// named registers must return to zero. Discrete-log circuits are checked
/// on their classical part (Hadamard and phase gates removed).
CheckResult verify_circuit(const Circuit& c, std::size_t samples, std::uint64_t seed);

struct VerifyOptions {
  std::size_t n_max = 5;
  std::uint64_t seed = 1;
  gadgets::Uncompute uncompute = gadgets::Uncompute::kClean;
  bool inject_fault = false;
  std::size_t samples = 256;
};

/// Field arithmetic: reduction identity, Itoh-Tsuji against Fermat, chain
/// cost, for n = 2..n_max.
std::vector<CheckResult> verify_field_suite(const VerifyOptions& o);
/// Curve arithmetic on the toy curves for n = 2..min(n_max, 8).
std::vector<CheckResult> verify_curve_suite(const VerifyOptions& o);
/// Synthesized circuits of every classical kind for n = 2..n_max.
std::vector<CheckResult> verify_circuit_suite(const VerifyOptions& o);

}  // namespace edshor
