#include "edshor/synth.hpp"

#include <bit>
#include <cmath>
#include <regex>

#include "edshor/errors.hpp"

namespace edshor {

using gadgets::CurveTables;
using gadgets::FieldTables;
using gadgets::PointWires;

namespace {

std::string uncompute_name(Uncompute u) { return u == Uncompute::kClean ? "clean" : "garbage"; }

Synthesis finish(CircuitBuilder&& b, SynthStats stats = {}) {
  ResourceReport report = b.report();
  report.width = b.width();
  Circuit c = std::move(b).finish();
  return {std::move(c), report, std::move(stats)};
}

void field_header(CircuitBuilder& b, const SynthConfig& cfg, std::string_view kind) {
  b.add_metadata("kind " + std::string(kind));
  b.add_metadata("field " + cfg.field.to_text());
  b.add_metadata("uncompute " + uncompute_name(cfg.uncompute));
}

const CurveSpec& require_curve(const SynthConfig& cfg) {
  if (!cfg.curve) throw InvalidArgument("a curve is required");
  if (!(cfg.curve->field() == cfg.field)) throw SpecMismatch("curve and field disagree");
  return *cfg.curve;
}

PointWires point_registers(CircuitBuilder& b, std::size_t n, const std::string& suffix) {
  return {b.add_register("x" + suffix, n).wires(), b.add_register("y" + suffix, n).wires(),
          b.add_register("z" + suffix, n).wires()};
}

void copy_point(CircuitBuilder& b, const PointWires& from, const PointWires& to) {
  gadgets::xor_into(b, from.x, to.x);
  gadgets::xor_into(b, from.y, to.y);
  gadgets::xor_into(b, from.z, to.z);
}

/// 2^i P for i < count.
std::vector<AffinePoint> doublings(const CurveSpec& c, const AffinePoint& p, std::size_t count) {
  std::vector<AffinePoint> out;
  out.reserve(count);
  AffinePoint cur = p;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(cur);
    cur = affine_add(c, cur, cur);
  }
  return out;
}

void check_point(const CurveSpec& c, const AffinePoint& p) {
  if (!(p.x.field() == c.field()) || !(p.y.field() == c.field())) throw SpecMismatch("point over another field");
  if (!on_curve(c, p)) throw InvalidArgument("point " + p.to_text() + " is not on the curve");
}

/// Tree double-scalar multiplication writing into `out`. Leaves beyond the
/// n+1 scalar bits would hold the constant identity, so they are left out
/// and an unpaired register passes to the next level unchanged.
void tree_compute(CircuitBuilder& b, const CurveTables& t, const Wires& k, const Wires& l, const AffinePoint& p,
                  const AffinePoint& q, const PointWires& out, SynthStats& stats) {
  const std::size_t n = t.field.n();
  const std::size_t bits = n + 1;

  auto load_leaves = [&](const Wires& scalar, const AffinePoint& base) {
    const auto pts = doublings(t.curve, base, bits);
    std::vector<PointWires> level;
    for (std::size_t i = 0; i < bits; ++i) {
      PointWires leaf = gadgets::alloc_point(b, n);
      gadgets::load_point_controlled(b, scalar[i], pts[i], leaf);
      level.push_back(std::move(leaf));
    }
    return level;
  };
  std::vector<PointWires> R = load_leaves(k, p);
  std::vector<PointWires> S = load_leaves(l, q);

  auto reduce_level = [&](const std::vector<PointWires>& level) {
    std::vector<PointWires> next;
    for (std::size_t i = 0; i < level.size(); i += 2) {
      if (i + 1 == level.size()) {
        next.push_back(level[i]);
        continue;
      }
      PointWires sum = gadgets::alloc_point(b, n);
      gadgets::point_add(b, t, level[i], level[i + 1], sum, Uncompute::kGarbage, &stats.field_ops);
      ++stats.point_adders;
      next.push_back(std::move(sum));
    }
    return next;
  };
  while (R.size() > 1) {
    R = reduce_level(R);
    S = reduce_level(S);
    ++stats.adder_layers;
  }
  gadgets::point_add(b, t, R[0], S[0], out, Uncompute::kGarbage, &stats.field_ops);
  ++stats.point_adders;
  ++stats.adder_layers;
}

/// Sequential double-scalar multiplication writing into `out`, with a single
/// reused scratch register for the controlled constants.
void sequential_compute(CircuitBuilder& b, const CurveTables& t, const Wires& k, const Wires& l,
                        const AffinePoint& p, const AffinePoint& q, const PointWires& out, bool left_to_right,
                        SynthStats& stats) {
  const std::size_t n = t.field.n();
  const std::size_t bits = n + 1;
  const PointWires scratch = gadgets::alloc_point(b, n);

  struct Step {
    bool doubling;
    Qubit control;
    AffinePoint point;
  };
  std::vector<Step> steps;
  if (left_to_right) {
    for (std::size_t i = bits; i-- > 0;) {
      if (i + 1 < bits) steps.push_back({true, 0, p});
      steps.push_back({false, k[i], p});
      steps.push_back({false, l[i], q});
    }
  } else {
    const auto ps = doublings(t.curve, p, bits);
    const auto qs = doublings(t.curve, q, bits);
    for (std::size_t i = 0; i < bits; ++i) {
      steps.push_back({false, k[i], ps[i]});
      steps.push_back({false, l[i], qs[i]});
    }
  }

  PointWires acc = gadgets::alloc_point(b, n);
  b.x(acc.z[0]);
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const bool last = s + 1 == steps.size();
    const PointWires next = last ? out : gadgets::alloc_point(b, n);
    if (steps[s].doubling) {
      gadgets::point_add(b, t, acc, acc, next, Uncompute::kGarbage, &stats.field_ops);
    } else {
      const std::size_t mark = b.tape_open();
      gadgets::load_point_controlled(b, steps[s].control, steps[s].point, scratch);
      const auto load = b.tape_segment(mark);
      gadgets::point_add(b, t, acc, scratch, next, Uncompute::kGarbage, &stats.field_ops);
      b.emit_inverse(load);
      b.tape_close(mark);
    }
    ++stats.point_adders;
    acc = next;
  }
}

}  // namespace

Synthesis synth_fanout(std::size_t m) {
  if (m == 0) throw InvalidArgument("fan-out needs at least one target");
  CircuitBuilder b;
  b.add_metadata("kind fanout");
  const Register src = b.add_register("src", 1);
  const Register copies = b.add_register("copies", m);
  gadgets::fan_out(b, src[0], copies.wires());
  return finish(std::move(b));
}

Synthesis synth_parity(std::size_t m) {
  if (m == 0) throw InvalidArgument("parity needs at least one source");
  CircuitBuilder b;
  b.add_metadata("kind parity");
  const Register src = b.add_register("src", m);
  const Register target = b.add_register("target", 1);
  gadgets::parity_into(b, src.wires(), target[0]);
  return finish(std::move(b));
}

Synthesis synth_matrix_mul(const BitMatrix& A, BuildMode mode) {
  CircuitBuilder b(mode);
  const Register in = b.add_register("in", A.cols());
  const Register out = b.add_register("out", A.rows());
  gadgets::matrix_mul(b, A, in.wires(), out.wires());
  return finish(std::move(b));
}

Synthesis synth_mul(const SynthConfig& cfg) {
  const FieldTables t(cfg.field);
  const std::size_t n = t.n();
  CircuitBuilder b(cfg.mode);
  field_header(b, cfg, "mul");
  const Register a = b.add_register("a", n);
  const Register bb = b.add_register("b", n);
  const Register out = b.add_register("out", n);
  gadgets::field_mul(b, t, a.wires(), bb.wires(), out.wires(), cfg.uncompute);
  SynthStats stats;
  stats.field_ops.mul = 1;
  return finish(std::move(b), std::move(stats));
}

Synthesis synth_const_mul(const SynthConfig& cfg, const FieldElement& c) {
  if (!(c.field() == cfg.field)) throw SpecMismatch("constant over another field");
  CircuitBuilder b(cfg.mode);
  field_header(b, cfg, "const-mul");
  b.add_metadata("constant " + c.to_hex());
  const Register in = b.add_register("in", cfg.field.degree());
  const Register out = b.add_register("out", cfg.field.degree());
  gadgets::matrix_mul(b, multiplication_matrix(c), in.wires(), out.wires());
  SynthStats stats;
  stats.field_ops.const_mul = 1;
  return finish(std::move(b), std::move(stats));
}

Synthesis synth_frobenius(const SynthConfig& cfg, std::size_t e) {
  CircuitBuilder b(cfg.mode);
  field_header(b, cfg, "frobenius");
  b.add_metadata("exponent " + std::to_string(e));
  const Register in = b.add_register("in", cfg.field.degree());
  const Register out = b.add_register("out", cfg.field.degree());
  gadgets::matrix_mul(b, frobenius_matrix(cfg.field, e), in.wires(), out.wires());
  return finish(std::move(b));
}

Synthesis synth_inverse(const SynthConfig& cfg) {
  const FieldTables t(cfg.field);
  CircuitBuilder b(cfg.mode);
  field_header(b, cfg, "inv");
  const Register in = b.add_register("in", t.n());
  const Register out = b.add_register("out", t.n());
  SynthStats stats;
  stats.inverter_mults = gadgets::itoh_tsuji(b, t, in.wires(), out.wires(), cfg.uncompute);
  return finish(std::move(b), std::move(stats));
}

Synthesis synth_point_add(const SynthConfig& cfg) {
  const CurveTables t(require_curve(cfg));
  const std::size_t n = t.field.n();
  CircuitBuilder b(cfg.mode);
  field_header(b, cfg, "add");
  b.add_metadata("curve " + t.curve.to_text());
  const PointWires p1 = point_registers(b, n, "1");
  const PointWires p2 = point_registers(b, n, "2");
  const PointWires p3 = point_registers(b, n, "3");
  SynthStats stats;
  gadgets::point_add(b, t, p1, p2, p3, cfg.uncompute, &stats.field_ops);
  stats.point_adders = 1;
  return finish(std::move(b), std::move(stats));
}

namespace {

void double_scalar_body(CircuitBuilder& b, const SynthConfig& cfg, const CurveTables& t, const Wires& k,
                        const Wires& l, const AffinePoint& p, const AffinePoint& q, const PointWires& out,
                        ScalarMethod method, SynthStats& stats) {
  auto compute = [&](const PointWires& dst) {
    switch (method) {
      case ScalarMethod::kTree:
        tree_compute(b, t, k, l, p, q, dst, stats);
        break;
      case ScalarMethod::kRightToLeft:
        sequential_compute(b, t, k, l, p, q, dst, false, stats);
        break;
      case ScalarMethod::kLeftToRight:
        sequential_compute(b, t, k, l, p, q, dst, true, stats);
        break;
    }
  };
  if (cfg.uncompute == Uncompute::kGarbage) {
    compute(out);
    return;
  }
  const PointWires tmp = gadgets::alloc_point(b, t.field.n());
  gadgets::with_uncompute(
      b, [&] { compute(tmp); }, [&] { copy_point(b, tmp, out); });
}

std::string_view method_name(ScalarMethod m) {
  switch (m) {
    case ScalarMethod::kTree:
      return "dsa-tree";
    case ScalarMethod::kRightToLeft:
      return "dsa-r2l";
    case ScalarMethod::kLeftToRight:
      return "dsa-l2r";
  }
  return "dsa";
}

}  // namespace

Synthesis synth_double_scalar(const SynthConfig& cfg, const AffinePoint& p, const AffinePoint& q,
                              ScalarMethod method) {
  const CurveTables t(require_curve(cfg));
  check_point(t.curve, p);
  check_point(t.curve, q);
  const std::size_t n = t.field.n();
  CircuitBuilder b(cfg.mode);
  field_header(b, cfg, method_name(method));
  b.add_metadata("curve " + t.curve.to_text());
  b.add_metadata(points_metadata(p, q));
  const Register k = b.add_register("k", n + 1);
  const Register l = b.add_register("l", n + 1);
  const PointWires out = point_registers(b, n, "");
  SynthStats stats;
  double_scalar_body(b, cfg, t, k.wires(), l.wires(), p, q, out, method, stats);
  return finish(std::move(b), std::move(stats));
}

Synthesis synth_proj_to_affine(const SynthConfig& cfg) {
  const FieldTables t(cfg.field);
  const std::size_t n = t.n();
  CircuitBuilder b(cfg.mode);
  field_header(b, cfg, "p2a");
  const PointWires in = point_registers(b, n, "");
  const Register ax = b.add_register("ax", n);
  const Register ay = b.add_register("ay", n);
  gadgets::proj_to_affine(b, t, in, ax.wires(), ay.wires(), cfg.uncompute);
  SynthStats stats;
  stats.inverter_mults = static_cast<int>(itoh_tsuji_chain(n).size());
  return finish(std::move(b), std::move(stats));
}

unsigned aqft_band(std::size_t m, double epsilon) {
  if (!(epsilon > 0.0) || epsilon >= 1.0) throw InvalidArgument("epsilon must lie in (0, 1)");
  const auto log_m = m <= 1 ? 0u : static_cast<unsigned>(std::bit_width(m - 1));
  const auto log_eps = static_cast<unsigned>(std::ceil(std::log2(1.0 / epsilon) - 1e-12));
  return std::max(1u, log_m + log_eps);
}

Synthesis synth_aqft(std::size_t m, unsigned band) {
  if (m == 0) throw InvalidArgument("QFT needs at least one qubit");
  if (band == 0) throw InvalidArgument("AQFT band must be positive");
  CircuitBuilder b;
  b.add_metadata("kind aqft");
  b.add_metadata("band " + std::to_string(band));
  const Register q = b.add_register("q", m);
  gadgets::qft(b, q.wires(), band);
  return finish(std::move(b));
}

Synthesis synth_shor(const SynthConfig& cfg, const AffinePoint& p, const AffinePoint& q) {
  const CurveTables t(require_curve(cfg));
  check_point(t.curve, p);
  check_point(t.curve, q);
  const std::size_t n = t.field.n();
  const std::size_t m = n + 1;
  const unsigned band = cfg.qft_band.value_or(static_cast<unsigned>(m));

  CircuitBuilder b(cfg.mode);
  field_header(b, cfg, "shor");
  b.add_metadata("curve " + t.curve.to_text());
  b.add_metadata(points_metadata(p, q));
  b.add_metadata("band " + std::to_string(band));
  const Register k = b.add_register("k", m);
  const Register l = b.add_register("l", m);
  const PointWires proj = point_registers(b, n, "");
  const Register ax = b.add_register("ax", n);
  const Register ay = b.add_register("ay", n);

  SynthStats stats;
  b.stage_begin();
  for (Qubit w : k.wires()) b.h(w);
  for (Qubit w : l.wires()) b.h(w);
  stats.stages.emplace_back("hadamard", b.stage_end());

  b.stage_begin();
  double_scalar_body(b, cfg, t, k.wires(), l.wires(), p, q, proj, ScalarMethod::kTree, stats);
  stats.stages.emplace_back("double_scalar", b.stage_end());

  b.stage_begin();
  gadgets::proj_to_affine(b, t.field, proj, ax.wires(), ay.wires(), cfg.uncompute);
  stats.inverter_mults = static_cast<int>(itoh_tsuji_chain(n).size());
  stats.stages.emplace_back("proj_to_affine", b.stage_end());

  b.stage_begin();
  gadgets::qft(b, k.wires(), band);
  gadgets::qft(b, l.wires(), band);
  stats.stages.emplace_back("qft", b.stage_end());

  return finish(std::move(b), std::move(stats));
}

CurvePoints default_curve(const Field& f) {
  if (f.degree() <= 8) {
    ToyCurve toy = find_toy_curve(f);
    const AffinePoint q = scalar_mul(toy.curve, 3, toy.generator);
    return {toy.curve, toy.generator, q, toy.order};
  }
  StructuralCurve s = structural_curve(f);
  return {s.curve, s.p, s.q, std::nullopt};
}

std::string points_metadata(const AffinePoint& p, const AffinePoint& q) {
  return "points P=" + p.to_text() + " Q=" + q.to_text();
}

std::optional<std::pair<AffinePoint, AffinePoint>> parse_points_metadata(const Field& f, std::string_view text) {
  static const std::regex re(R"(P=\((0x[0-9a-fA-F]+),(0x[0-9a-fA-F]+)\)\s+Q=\((0x[0-9a-fA-F]+),(0x[0-9a-fA-F]+)\))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(text.begin(), text.end(), m, re)) return std::nullopt;
  auto el = [&](int i) { return f.element_from_hex(m[i].str()); };
  return std::make_pair(AffinePoint{el(1), el(2)}, AffinePoint{el(3), el(4)});
}

}  // namespace edshor
