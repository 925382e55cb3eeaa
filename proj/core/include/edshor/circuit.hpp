#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edshor {

using Qubit = std::uint32_t;
using Wires = std::vector<Qubit>;

enum class GateKind : std::uint8_t { kX, kCnot, kToffoli, kH, kCPhase };

/// A primitive gate. CPHASE(k) applies exp(2 pi i / 2^k) to |11>; with
/// `inverse` set the phase is negated ("cpinv").
struct Gate {
  GateKind kind = GateKind::kX;
  bool inverse = false;
  std::uint8_t phase_k = 0;
  std::array<Qubit, 3> qubits{};

  static Gate x(Qubit q) { return {GateKind::kX, false, 0, {q, 0, 0}}; }
  static Gate cx(Qubit control, Qubit target) { return {GateKind::kCnot, false, 0, {control, target, 0}}; }
  static Gate ccx(Qubit c1, Qubit c2, Qubit target) { return {GateKind::kToffoli, false, 0, {c1, c2, target}}; }
  static Gate h(Qubit q) { return {GateKind::kH, false, 0, {q, 0, 0}}; }
  static Gate cp(Qubit control, Qubit target, unsigned k, bool inverse = false) {
    return {GateKind::kCPhase, inverse, static_cast<std::uint8_t>(k), {control, target, 0}};
  }

  std::size_t arity() const;
  std::span<const Qubit> operands() const { return {qubits.data(), arity()}; }
  bool is_classical() const { return kind == GateKind::kX || kind == GateKind::kCnot || kind == GateKind::kToffoli; }
  Gate inverted() const;
  /// The mnemonic used in the text format.
  std::string_view mnemonic() const;
  std::string to_text() const;

  bool operator==(const Gate& other) const;
};

/// A named, contiguous range of qubit indices.
struct Register {
  std::string name;
  Qubit start = 0;
  std::uint32_t length = 0;

  Qubit operator[](std::size_t i) const { return start + static_cast<Qubit>(i); }
  Wires wires() const;
  bool operator==(const Register& other) const = default;
};

struct ResourceReport {
  std::uint64_t depth = 0;
  std::uint64_t width = 0;
  std::uint64_t x = 0;
  std::uint64_t cnot = 0;
  std::uint64_t ccx = 0;
  std::uint64_t h = 0;
  std::uint64_t cp = 0;
  std::uint64_t toffoli_depth = 0;

  std::uint64_t gate_count() const { return x + cnot + ccx + h + cp; }

  static std::string csv_header();
  /// "name,n,depth,width,x,cnot,ccx,h,cp,toffoli_depth".
  std::string csv_row(std::string_view name, std::size_t n) const;

  bool operator==(const ResourceReport& other) const = default;
};

/// Ordered gate list over `width` qubits with named registers and
/// free-form metadata lines (serialized as "# <line>").
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }
  void set_width(std::size_t width) { width_ = width; }

  const std::vector<Gate>& gates() const { return gates_; }
  std::vector<Gate>& mutable_gates() { return gates_; }
  void append(const Gate& g) { gates_.push_back(g); }

  const std::vector<Register>& registers() const { return registers_; }
  /// Throws InvalidArgument on a duplicate name or overlap.
  void add_register(Register r);
  const Register* find_register(std::string_view name) const;
  /// Throws NotFound when absent.
  const Register& reg(std::string_view name) const;

  const std::vector<std::string>& metadata() const { return metadata_; }
  void add_metadata(std::string line) { metadata_.push_back(std::move(line)); }
  /// Value of the first metadata line starting with "<key> ", if any.
  std::optional<std::string> metadata_value(std::string_view key) const;

  /// Throws InvalidArgument on operands out of range or repeated.
  void validate() const;

  bool operator==(const Circuit& other) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<Register> registers_;
  std::vector<std::string> metadata_;
  std::vector<Gate> gates_;
};

/// Online ASAP layering: each gate lands one layer after the latest layer
/// of any of its qubits.
class DepthTracker {
 public:
  void add(const Gate& g);
  void ensure_width(std::size_t width);
  const ResourceReport& report() const { return report_; }
  /// Qubits that have been touched so far.
  std::uint64_t touched() const { return touched_; }

 private:
  std::vector<std::uint32_t> layer_;
  std::vector<std::uint32_t> toffoli_layer_;
  std::vector<bool> seen_;
  std::uint64_t touched_ = 0;
  ResourceReport report_;
};

ResourceReport analyze(const Circuit& c);

/// Concatenation; widths must agree and shared register names must name
/// the same ranges.
Circuit compose(const Circuit& a, const Circuit& b);
/// Reversed gate order with every gate inverted.
Circuit inverse(const Circuit& c);

/// Line-oriented text form:
///   qubits <N>
///   register <name> <start> <len>
///   # <metadata>
///   x q | cx c t | ccx c1 c2 t | h q | cp c t k | cpinv c t k
std::string serialize(const Circuit& c);
/// Throws ParseError with the offending line number.
Circuit parse_circuit(std::string_view text);

enum class BuildMode {
  kRecord,  // keep every gate
  kMeter,   // keep only the running resource report
};

/// Single-owner circuit construction. Gates are depth-tracked as they are
/// emitted. An uncompute tape records gates between tape_open() and
/// tape_close() so a block can be replayed in reverse; in meter mode only
/// taped gates are held in memory.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(BuildMode mode = BuildMode::kRecord) : mode_(mode) {}

  BuildMode mode() const { return mode_; }

  /// Named contiguous register of fresh |0> qubits.
  Register add_register(std::string name, std::size_t length);
  /// Anonymous fresh |0> qubits.
  Wires alloc(std::size_t count);
  void add_metadata(std::string line) { circuit_.add_metadata(std::move(line)); }
  std::size_t width() const { return circuit_.width(); }

  void emit(const Gate& g);
  void x(Qubit q) { emit(Gate::x(q)); }
  void cx(Qubit c, Qubit t) { emit(Gate::cx(c, t)); }
  void ccx(Qubit a, Qubit b, Qubit t) { emit(Gate::ccx(a, b, t)); }
  void h(Qubit q) { emit(Gate::h(q)); }
  void cp(Qubit c, Qubit t, unsigned k) { emit(Gate::cp(c, t, k)); }

  struct Segment {
    std::size_t begin;
    std::size_t end;
  };
  std::size_t tape_open();
  Segment tape_segment(std::size_t mark) const { return {mark, tape_.size()}; }
  void tape_close(std::size_t mark);
  /// Emits the inverse of a recorded segment.
  void emit_inverse(Segment s);

  /// Starts a fresh secondary report; stage_end() returns it.
  void stage_begin();
  ResourceReport stage_end();

  const ResourceReport& report() const { return tracker_.report(); }
  /// The finished circuit; gateless in meter mode.
  Circuit finish() &&;

 private:
  BuildMode mode_;
  Circuit circuit_;
  DepthTracker tracker_;
  std::optional<DepthTracker> stage_;
  std::vector<Gate> tape_;
  int tape_depth_ = 0;
};

}  // namespace edshor
