#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "edshor/bitvec.hpp"
#include "edshor/circuit.hpp"
#include "edshor/edwards.hpp"

namespace edshor {

/// Runs a classical (X/CNOT/Toffoli) circuit on one basis state. Throws
/// UnsupportedGate on H or CPHASE.
BitVec basis_sim(const Circuit& c, BitVec state);

void write_register(BitVec& state, const Register& r, const BitVec& value);
BitVec read_register(const BitVec& state, const Register& r);

/// 64 basis states simulated at once, one lane per bit of a machine word.
class LaneBatch {
 public:
  static constexpr std::size_t kLanes = 64;

  explicit LaneBatch(std::size_t width) : bits_(width, 0) {}

  std::size_t width() const { return bits_.size(); }
  bool get(Qubit q, std::size_t lane) const { return (bits_[q] >> lane) & 1u; }
  void set(Qubit q, std::size_t lane, bool value);

  void write(const Register& r, std::size_t lane, const BitVec& value);
  BitVec read(const Register& r, std::size_t lane) const;
  /// Lanes in which the qubit is set.
  std::uint64_t word(Qubit q) const { return bits_[q]; }

  /// Throws UnsupportedGate on H or CPHASE.
  void run(std::span<const Gate> gates);
  void run(const Circuit& c) { run(c.gates()); }

 private:
  std::vector<std::uint64_t> bits_;
};

using Amplitudes = std::vector<std::complex<double>>;

/// Largest width accepted by the dense simulator.
inline constexpr std::size_t kMaxStatevectorQubits = 20;

/// Applies the circuit to a dense state of 2^width amplitudes; basis index
/// bit i is qubit i. Throws ResourceLimit when the width exceeds max_qubits.
void statevector_apply(const Circuit& c, Amplitudes& state, std::size_t max_qubits = kMaxStatevectorQubits);
Amplitudes statevector_sim(const Circuit& c, const Amplitudes& input,
                           std::size_t max_qubits = kMaxStatevectorQubits);

/// Outcome distribution of the discrete-log circuit with an exact QFT on
/// each (n+1)-qubit control register, computed classically from the
/// level sets of (k, l) -> kP + lQ. Entry u * M + v is Pr[(u, v)] with
/// M = 2^(n+1). Requires n <= 8.
std::vector<double> shor_distribution(const CurveSpec& c, const AffinePoint& p, const AffinePoint& q);

/// Candidate r with Q = rP from one measured pair: s = round(u q / M),
/// t = round(v q / M), r = t s^-1 mod q. Returns r in [1, q] only when
/// s is invertible mod q and rP = Q holds.
std::optional<std::uint64_t> postprocess(const CurveSpec& c, const AffinePoint& p, const AffinePoint& q,
                                         std::uint64_t u, std::uint64_t v, std::uint64_t M, std::uint64_t order);

/// Total probability of outcomes from which postprocess recovers r.
double success_probability(const CurveSpec& c, const AffinePoint& p, const AffinePoint& q,
                           std::span<const double> distribution, std::uint64_t order);

}  // namespace edshor
