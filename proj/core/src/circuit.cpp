#include "edshor/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "edshor/errors.hpp"

namespace edshor {

std::size_t Gate::arity() const {
  switch (kind) {
    case GateKind::kX:
    case GateKind::kH:
      return 1;
    case GateKind::kCnot:
    case GateKind::kCPhase:
      return 2;
    case GateKind::kToffoli:
      return 3;
  }
  return 0;
}

Gate Gate::inverted() const {
  Gate g = *this;
  if (kind == GateKind::kCPhase) g.inverse = !inverse;
  return g;
}

std::string_view Gate::mnemonic() const {
  switch (kind) {
    case GateKind::kX: return "x";
    case GateKind::kCnot: return "cx";
    case GateKind::kToffoli: return "ccx";
    case GateKind::kH: return "h";
    case GateKind::kCPhase: return inverse ? "cpinv" : "cp";
  }
  return "?";
}

std::string Gate::to_text() const {
  std::string out(mnemonic());
  for (Qubit q : operands()) out += " " + std::to_string(q);
  if (kind == GateKind::kCPhase) out += " " + std::to_string(phase_k);
  return out;
}

bool Gate::operator==(const Gate& other) const {
  if (kind != other.kind || arity() != other.arity()) return false;
  if (kind == GateKind::kCPhase && (inverse != other.inverse || phase_k != other.phase_k)) return false;
  return std::ranges::equal(operands(), other.operands());
}

Wires Register::wires() const {
  Wires w(length);
  for (std::uint32_t i = 0; i < length; ++i) w[i] = start + i;
  return w;
}

std::string ResourceReport::csv_header() { return "name,n,depth,width,x,cnot,ccx,h,cp,toffoli_depth"; }

std::string ResourceReport::csv_row(std::string_view name, std::size_t n) const {
  std::ostringstream os;
  os << name << ',' << n << ',' << depth << ',' << width << ',' << x << ',' << cnot << ',' << ccx << ','
     << h << ',' << cp << ',' << toffoli_depth;
  return os.str();
}

void Circuit::add_register(Register r) {
  if (r.name.empty() || r.name.find_first_of(" \t\n#") != std::string::npos) {
    throw InvalidArgument("invalid register name '" + r.name + "'");
  }
  for (const auto& other : registers_) {
    if (other.name == r.name) throw InvalidArgument("duplicate register '" + r.name + "'");
    const bool disjoint = r.start + r.length <= other.start || other.start + other.length <= r.start;
    if (!disjoint && r.length > 0 && other.length > 0) {
      throw InvalidArgument("register '" + r.name + "' overlaps '" + other.name + "'");
    }
  }
  registers_.push_back(std::move(r));
}

const Register* Circuit::find_register(std::string_view name) const {
  for (const auto& r : registers_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const Register& Circuit::reg(std::string_view name) const {
  if (const Register* r = find_register(name)) return *r;
  throw NotFound("circuit has no register '" + std::string(name) + "'");
}

std::optional<std::string> Circuit::metadata_value(std::string_view key) const {
  for (const auto& line : metadata_) {
    if (line.size() > key.size() && line.starts_with(key) && line[key.size()] == ' ') {
      return line.substr(key.size() + 1);
    }
  }
  return std::nullopt;
}

void Circuit::validate() const {
  for (const auto& r : registers_) {
    if (static_cast<std::size_t>(r.start) + r.length > width_) {
      throw InvalidArgument("register '" + r.name + "' exceeds width " + std::to_string(width_));
    }
  }
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    const auto ops = g.operands();
    for (std::size_t a = 0; a < ops.size(); ++a) {
      if (ops[a] >= width_) {
        throw InvalidArgument("gate " + std::to_string(i) + " (" + g.to_text() + ") exceeds width " +
                              std::to_string(width_));
      }
      for (std::size_t b = a + 1; b < ops.size(); ++b) {
        if (ops[a] == ops[b]) {
          throw InvalidArgument("gate " + std::to_string(i) + " (" + g.to_text() + ") repeats an operand");
        }
      }
    }
    if (g.kind == GateKind::kCPhase && g.phase_k == 0) {
      throw InvalidArgument("gate " + std::to_string(i) + " has phase exponent 0");
    }
  }
}

void DepthTracker::ensure_width(std::size_t width) {
  if (layer_.size() < width) {
    layer_.resize(width, 0);
    toffoli_layer_.resize(width, 0);
    seen_.resize(width, false);
  }
  report_.width = std::max<std::uint64_t>(report_.width, width);
}

void DepthTracker::add(const Gate& g) {
  const auto ops = g.operands();
  Qubit top = 0;
  for (Qubit q : ops) top = std::max(top, q);
  if (top >= layer_.size()) ensure_width(static_cast<std::size_t>(top) + 1);

  std::uint32_t layer = 0;
  std::uint32_t toffoli_layer = 0;
  for (Qubit q : ops) {
    layer = std::max(layer, layer_[q]);
    toffoli_layer = std::max(toffoli_layer, toffoli_layer_[q]);
    if (!seen_[q]) {
      seen_[q] = true;
      ++touched_;
    }
  }
  ++layer;
  if (g.kind == GateKind::kToffoli) ++toffoli_layer;
  for (Qubit q : ops) {
    layer_[q] = layer;
    toffoli_layer_[q] = toffoli_layer;
  }
  report_.depth = std::max<std::uint64_t>(report_.depth, layer);
  report_.toffoli_depth = std::max<std::uint64_t>(report_.toffoli_depth, toffoli_layer);
  switch (g.kind) {
    case GateKind::kX: ++report_.x; break;
    case GateKind::kCnot: ++report_.cnot; break;
    case GateKind::kToffoli: ++report_.ccx; break;
    case GateKind::kH: ++report_.h; break;
    case GateKind::kCPhase: ++report_.cp; break;
  }
}

ResourceReport analyze(const Circuit& c) {
  DepthTracker tracker;
  tracker.ensure_width(c.width());
  for (const Gate& g : c.gates()) tracker.add(g);
  ResourceReport r = tracker.report();
  r.width = c.width();
  return r;
}

Circuit compose(const Circuit& a, const Circuit& b) {
  if (a.width() != b.width()) {
    throw SpecMismatch("cannot compose circuits of width " + std::to_string(a.width()) + " and " +
                       std::to_string(b.width()));
  }
  Circuit out = a;
  for (const auto& r : b.registers()) {
    if (const Register* existing = out.find_register(r.name)) {
      if (!(*existing == r)) throw SpecMismatch("register '" + r.name + "' differs between circuits");
      continue;
    }
    out.add_register(r);
  }
  for (const auto& m : b.metadata()) {
    if (std::ranges::find(out.metadata(), m) == out.metadata().end()) out.add_metadata(m);
  }
  out.mutable_gates().insert(out.mutable_gates().end(), b.gates().begin(), b.gates().end());
  return out;
}

Circuit inverse(const Circuit& c) {
  Circuit out(c.width());
  for (const auto& r : c.registers()) out.add_register(r);
  for (const auto& m : c.metadata()) out.add_metadata(m);
  auto& gates = out.mutable_gates();
  gates.reserve(c.gates().size());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) gates.push_back(it->inverted());
  return out;
}

std::string serialize(const Circuit& c) {
  std::string out = "qubits " + std::to_string(c.width()) + "\n";
  for (const auto& r : c.registers()) {
    out += "register " + r.name + " " + std::to_string(r.start) + " " + std::to_string(r.length) + "\n";
  }
  for (const auto& m : c.metadata()) out += "# " + m + "\n";
  for (const auto& g : c.gates()) {
    out += g.to_text();
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

std::uint64_t parse_index(std::string_view word, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size()) {
    throw ParseError(line_no, "expected a non-negative integer, got '" + std::string(word) + "'");
  }
  return value;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  bool have_width = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.starts_with("#")) {
      std::string_view meta = line.substr(1);
      if (meta.starts_with(" ")) meta.remove_prefix(1);
      c.add_metadata(std::string(meta));
      continue;
    }
    const auto words = split_words(line);
    if (words.empty()) continue;
    const std::string_view op = words[0];
    auto expect_args = [&](std::size_t count) {
      if (words.size() != count + 1) {
        throw ParseError(line_no, "'" + std::string(op) + "' takes " + std::to_string(count) + " arguments");
      }
    };
    auto qubit = [&](std::size_t i) {
      const std::uint64_t q = parse_index(words[i], line_no);
      if (q >= c.width()) {
        throw ParseError(line_no, "qubit " + std::to_string(q) + " out of range for width " +
                                      std::to_string(c.width()));
      }
      return static_cast<Qubit>(q);
    };

    if (op == "qubits") {
      expect_args(1);
      if (have_width) throw ParseError(line_no, "duplicate 'qubits' header");
      c.set_width(parse_index(words[1], line_no));
      have_width = true;
      continue;
    }
    if (!have_width) throw ParseError(line_no, "expected 'qubits <N>' header first");
    if (op == "register") {
      expect_args(3);
      Register r{std::string(words[1]), static_cast<Qubit>(parse_index(words[2], line_no)),
                 static_cast<std::uint32_t>(parse_index(words[3], line_no))};
      if (static_cast<std::uint64_t>(r.start) + r.length > c.width()) {
        throw ParseError(line_no, "register '" + r.name + "' exceeds width");
      }
      try {
        c.add_register(std::move(r));
      } catch (const InvalidArgument& e) {
        throw ParseError(line_no, e.what());
      }
      continue;
    }

    Gate g;
    if (op == "x") {
      expect_args(1);
      g = Gate::x(qubit(1));
    } else if (op == "cx") {
      expect_args(2);
      g = Gate::cx(qubit(1), qubit(2));
    } else if (op == "ccx") {
      expect_args(3);
      g = Gate::ccx(qubit(1), qubit(2), qubit(3));
    } else if (op == "h") {
      expect_args(1);
      g = Gate::h(qubit(1));
    } else if (op == "cp" || op == "cpinv") {
      expect_args(3);
      const std::uint64_t k = parse_index(words[3], line_no);
      if (k == 0 || k > 255) throw ParseError(line_no, "phase exponent must be in [1, 255]");
      g = Gate::cp(qubit(1), qubit(2), static_cast<unsigned>(k), op == "cpinv");
    } else {
      throw ParseError(line_no, "unknown mnemonic '" + std::string(op) + "'");
    }
    const auto ops = g.operands();
    for (std::size_t a = 0; a < ops.size(); ++a) {
      for (std::size_t b = a + 1; b < ops.size(); ++b) {
        if (ops[a] == ops[b]) throw ParseError(line_no, "repeated operand " + std::to_string(ops[a]));
      }
    }
    c.append(g);
  }
  if (!have_width) throw ParseError(line_no, "missing 'qubits <N>' header");
  return c;
}

Register CircuitBuilder::add_register(std::string name, std::size_t length) {
  Register r{std::move(name), static_cast<Qubit>(circuit_.width()), static_cast<std::uint32_t>(length)};
  circuit_.set_width(circuit_.width() + length);
  circuit_.add_register(r);
  tracker_.ensure_width(circuit_.width());
  return r;
}

Wires CircuitBuilder::alloc(std::size_t count) {
  const auto start = static_cast<Qubit>(circuit_.width());
  Wires w(count);
  for (std::size_t i = 0; i < count; ++i) w[i] = start + static_cast<Qubit>(i);
  circuit_.set_width(circuit_.width() + count);
  tracker_.ensure_width(circuit_.width());
  return w;
}

void CircuitBuilder::emit(const Gate& g) {
  tracker_.add(g);
  if (stage_) stage_->add(g);
  if (mode_ == BuildMode::kRecord) circuit_.append(g);
  if (tape_depth_ > 0) tape_.push_back(g);
}

std::size_t CircuitBuilder::tape_open() {
  ++tape_depth_;
  return tape_.size();
}

void CircuitBuilder::tape_close(std::size_t mark) {
  if (tape_depth_ <= 0 || mark > tape_.size()) throw Error("tape_close without matching tape_open");
  // Inner gates stay on the tape so that an enclosing block can replay them.
  if (--tape_depth_ == 0) tape_.clear();
}

void CircuitBuilder::emit_inverse(Segment s) {
  for (std::size_t i = s.end; i-- > s.begin;) emit(tape_[i].inverted());
}

void CircuitBuilder::stage_begin() { stage_.emplace(); }

ResourceReport CircuitBuilder::stage_end() {
  if (!stage_) throw Error("stage_end without stage_begin");
  ResourceReport r = stage_->report();
  r.width = stage_->touched();
  stage_.reset();
  return r;
}

Circuit CircuitBuilder::finish() && { return std::move(circuit_); }

}  // namespace edshor
