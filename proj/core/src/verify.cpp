#include "edshor/verify.hpp"

#include <bit>
#include <functional>
#include <optional>

#include "edshor/errors.hpp"
#include "edshor/sim.hpp"
#include "edshor/synth.hpp"

namespace edshor {

namespace {

/// Returns an empty string when the lane is correct, otherwise a description.
using LaneCheck = std::function<std::string(const LaneBatch&)>;
using LaneSetup = std::function<LaneCheck(LaneBatch&, std::size_t lane)>;

BitVec random_bits(std::size_t n, std::mt19937_64& rng) {
  BitVec v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, rng() & 1u);
  return v;
}

std::uint64_t bits_value(const BitVec& v) { return v.to_uint(); }

struct Context {
  std::string kind;
  std::optional<Field> field;
  std::optional<CurveSpec> curve;
  std::optional<std::pair<AffinePoint, AffinePoint>> points;
  bool clean = false;
};

Context read_context(const Circuit& c) {
  Context ctx;
  ctx.kind = c.metadata_value("kind").value_or("");
  if (auto f = c.metadata_value("field")) ctx.field = Field::parse(*f);
  if (auto cv = c.metadata_value("curve")) {
    ctx.curve = CurveSpec::parse(*cv);
    if (!ctx.field) ctx.field = ctx.curve->field();
  }
  if (auto pts = c.metadata_value("points"); pts && ctx.field) ctx.points = parse_points_metadata(*ctx.field, *pts);
  ctx.clean = c.metadata_value("uncompute").value_or("") == "clean";
  return ctx;
}

std::string describe_mismatch(std::string_view what, const std::string& got, const std::string& want) {
  return std::string(what) + " = " + got + ", expected " + want;
}

void write_point(LaneBatch& lb, std::size_t lane, const Circuit& c, const std::string& suffix,
                 const ProjectivePoint& p) {
  lb.write(c.reg("x" + suffix), lane, p.X.coeffs());
  lb.write(c.reg("y" + suffix), lane, p.Y.coeffs());
  lb.write(c.reg("z" + suffix), lane, p.Z.coeffs());
}

ProjectivePoint read_point_lane(const LaneBatch& lb, std::size_t lane, const Field& f, const Circuit& c,
                                const std::string& suffix) {
  return {f.element(lb.read(c.reg("x" + suffix), lane)), f.element(lb.read(c.reg("y" + suffix), lane)),
          f.element(lb.read(c.reg("z" + suffix), lane))};
}

ProjectivePoint scaled(const AffinePoint& p, const FieldElement& lambda) {
  return {p.x * lambda, p.y * lambda, lambda};
}

std::string check_projective(const ProjectivePoint& got, const AffinePoint& want) {
  if (got.Z.is_zero() || !projectively_equal(got, to_projective(want))) {
    return describe_mismatch("point", got.to_text(), want.to_text());
  }
  return "";
}

/// Reference setup per kind, or nullopt when the kind has no classical
/// reference. `inputs` receives the registers that must be restored.
std::optional<LaneSetup> reference_for(const Circuit& c, const Context& ctx, std::mt19937_64& rng,
                                       std::vector<std::string>& inputs) {
  const std::string& kind = ctx.kind;
  if (kind == "fanout") {
    inputs = {"src"};
    return [&c, &rng](LaneBatch& lb, std::size_t lane) -> LaneCheck {
      const bool v = rng() & 1u;
      lb.set(c.reg("src")[0], lane, v);
      return [&c, lane, v](const LaneBatch& out) -> std::string {
        const Register& copies = c.reg("copies");
        for (std::size_t i = 0; i < copies.length; ++i) {
          if (out.get(copies[i], lane) != v) return "copy " + std::to_string(i) + " differs from the source";
        }
        return "";
      };
    };
  }
  if (kind == "parity") {
    inputs = {"src"};
    return [&c, &rng](LaneBatch& lb, std::size_t lane) -> LaneCheck {
      const BitVec v = random_bits(c.reg("src").length, rng);
      lb.write(c.reg("src"), lane, v);
      const bool want = v.popcount() % 2 == 1;
      return [&c, lane, want](const LaneBatch& out) -> std::string {
        if (out.get(c.reg("target")[0], lane) != want) return "parity bit is wrong";
        return "";
      };
    };
  }
  if (!ctx.field) return std::nullopt;
  const Field& f = *ctx.field;

  if (kind == "mul") {
    inputs = {"a", "b"};
    return [&c, &rng, &f](LaneBatch& lb, std::size_t lane) -> LaneCheck {
      const FieldElement a = random_element(f, rng);
      const FieldElement b = random_element(f, rng);
      lb.write(c.reg("a"), lane, a.coeffs());
      lb.write(c.reg("b"), lane, b.coeffs());
      const FieldElement want = a * b;
      return [&c, &f, lane, a, b, want](const LaneBatch& out) -> std::string {
        const FieldElement got = f.element(out.read(c.reg("out"), lane));
        if (got == want) return "";
        return describe_mismatch(a.to_hex() + "*" + b.to_hex(), got.to_hex(), want.to_hex());
      };
    };
  }
  if (kind == "inv" || kind == "const-mul" || kind == "frobenius") {
    inputs = {"in"};
    std::function<FieldElement(const FieldElement&)> ref;
    if (kind == "inv") {
      ref = [](const FieldElement& a) { return inv_fermat(a); };
    } else if (kind == "const-mul") {
      const FieldElement k = f.element_from_hex(c.metadata_value("constant").value_or("0x0"));
      ref = [k](const FieldElement& a) { return k * a; };
    } else {
      const std::size_t e = std::stoul(c.metadata_value("exponent").value_or("1"));
      ref = [e](const FieldElement& a) { return frobenius(a, e); };
    }
    return [&c, &rng, &f, ref](LaneBatch& lb, std::size_t lane) -> LaneCheck {
      const FieldElement a = random_element(f, rng);
      lb.write(c.reg("in"), lane, a.coeffs());
      const FieldElement want = ref(a);
      return [&c, &f, lane, a, want](const LaneBatch& out) -> std::string {
        const FieldElement got = f.element(out.read(c.reg("out"), lane));
        if (got == want) return "";
        return describe_mismatch("f(" + a.to_hex() + ")", got.to_hex(), want.to_hex());
      };
    };
  }
  if (kind == "p2a") {
    inputs = {"x", "y", "z"};
    return [&c, &rng, &f](LaneBatch& lb, std::size_t lane) -> LaneCheck {
      const AffinePoint p{random_element(f, rng), random_element(f, rng)};
      const FieldElement lambda = random_nonzero(f, rng);
      write_point(lb, lane, c, "", scaled(p, lambda));
      return [&c, &f, lane, p](const LaneBatch& out) -> std::string {
        const AffinePoint got{f.element(out.read(c.reg("ax"), lane)), f.element(out.read(c.reg("ay"), lane))};
        if (got == p) return "";
        return describe_mismatch("affine", got.to_text(), p.to_text());
      };
    };
  }
  if (!ctx.curve) return std::nullopt;
  const CurveSpec& curve = *ctx.curve;

  if (kind == "add") {
    inputs = {"x1", "y1", "z1", "x2", "y2", "z2"};
    return [&c, &rng, &f, &curve](LaneBatch& lb, std::size_t lane) -> LaneCheck {
      const AffinePoint p1 = random_point(curve, rng);
      const AffinePoint p2 = random_point(curve, rng);
      write_point(lb, lane, c, "1", scaled(p1, random_nonzero(f, rng)));
      write_point(lb, lane, c, "2", scaled(p2, random_nonzero(f, rng)));
      const AffinePoint want = affine_add(curve, p1, p2);
      return [&c, &f, lane, want](const LaneBatch& out) -> std::string {
        return check_projective(read_point_lane(out, lane, f, c, "3"), want);
      };
    };
  }
  if (!ctx.points) return std::nullopt;
  const AffinePoint& P = ctx.points->first;
  const AffinePoint& Q = ctx.points->second;
  const std::size_t bits = f.degree() + 1;
  if (bits > 64) return std::nullopt;

  if (kind == "dsa-tree" || kind == "dsa-r2l" || kind == "dsa-l2r" || kind == "shor") {
    const bool shor = kind == "shor";
    if (!shor) inputs = {"k", "l"};
    return [&c, &rng, &f, &curve, &P, &Q, bits, shor](LaneBatch& lb, std::size_t lane) -> LaneCheck {
      const BitVec k = random_bits(bits, rng);
      const BitVec l = random_bits(bits, rng);
      lb.write(c.reg("k"), lane, k);
      lb.write(c.reg("l"), lane, l);
      const AffinePoint want = double_scalar(curve, bits_value(k), bits_value(l), P, Q);
      return [&c, &f, lane, want, shor](const LaneBatch& out) -> std::string {
        if (shor) {
          const AffinePoint got{f.element(out.read(c.reg("ax"), lane)), f.element(out.read(c.reg("ay"), lane))};
          if (got == want) return "";
          return describe_mismatch("affine", got.to_text(), want.to_text());
        }
        return check_projective(read_point_lane(out, lane, f, c, ""), want);
      };
    };
  }
  return std::nullopt;
}

}  // namespace

std::string CheckResult::to_line() const {
  if (passed) return "PASS " + name + " (" + std::to_string(cases) + " cases)";
  return "FAIL " + name + ": " + detail;
}

FieldElement random_element(const Field& f, std::mt19937_64& rng) { return f.element(random_bits(f.degree(), rng)); }

FieldElement random_nonzero(const Field& f, std::mt19937_64& rng) {
  for (;;) {
    FieldElement e = random_element(f, rng);
    if (!e.is_zero()) return e;
  }
}

AffinePoint random_point(const CurveSpec& c, std::mt19937_64& rng) {
  for (;;) {
    const auto pts = points_with_x(c, random_element(c.field(), rng));
    if (!pts.empty()) return pts[rng() % pts.size()];
  }
}

bool inject_fault(Circuit& c) {
  std::vector<std::size_t> toffolis;
  auto& gates = c.mutable_gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].kind == GateKind::kToffoli) toffolis.push_back(i);
  }
  if (toffolis.empty()) return false;
  Gate& g = gates[toffolis[toffolis.size() / 2]];
  g = Gate::cx(g.qubits[0], g.qubits[2]);
  return true;
}

CheckResult verify_circuit(const Circuit& c, std::size_t samples, std::uint64_t seed) {
  CheckResult result;
  const Context ctx = read_context(c);
  result.name = ctx.kind.empty() ? "circuit" : ctx.kind;
  if (ctx.field) result.name += " n=" + std::to_string(ctx.field->degree());
  result.name += ctx.clean ? " clean" : (c.metadata_value("uncompute") ? " garbage" : "");

  Circuit work = c;
  if (ctx.kind == "shor") {
    auto& g = work.mutable_gates();
    std::erase_if(g, [](const Gate& x) { return !x.is_classical(); });
  }

  std::mt19937_64 rng(seed);
  std::vector<std::string> inputs;
  const auto setup = reference_for(work, ctx, rng, inputs);
  if (!setup) {
    result.passed = false;
    result.detail = "no classical reference for kind '" + ctx.kind + "'";
    return result;
  }

  std::vector<bool> registered(work.width(), false);
  for (const Register& r : work.registers()) {
    for (std::size_t i = 0; i < r.length; ++i) registered[r[i]] = true;
  }

  const std::size_t batches = (std::max<std::size_t>(samples, 1) + LaneBatch::kLanes - 1) / LaneBatch::kLanes;
  for (std::size_t batch = 0; batch < batches; ++batch) {
    LaneBatch lb(work.width());
    std::vector<LaneCheck> checks;
    for (std::size_t lane = 0; lane < LaneBatch::kLanes; ++lane) checks.push_back((*setup)(lb, lane));
    std::vector<std::uint64_t> before;
    for (const auto& name : inputs) {
      for (Qubit q : work.reg(name).wires()) before.push_back(lb.word(q));
    }
    lb.run(work);

    std::size_t idx = 0;
    for (const auto& name : inputs) {
      for (Qubit q : work.reg(name).wires()) {
        if (lb.word(q) != before[idx++]) {
          result.passed = false;
          result.detail = "input register '" + name + "' was not restored";
          return result;
        }
      }
    }
    if (ctx.clean) {
      for (Qubit q = 0; q < work.width(); ++q) {
        if (!registered[q] && lb.word(q) != 0) {
          result.passed = false;
          result.detail = "ancilla qubit " + std::to_string(q) + " is not returned to zero";
          return result;
        }
      }
    }
    for (std::size_t lane = 0; lane < LaneBatch::kLanes; ++lane) {
      const std::string err = checks[lane](lb);
      ++result.cases;
      if (!err.empty()) {
        result.passed = false;
        result.detail = err;
        return result;
      }
    }
  }
  return result;
}

std::vector<CheckResult> verify_field_suite(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(o.seed);
  for (std::size_t n = 2; n <= o.n_max; ++n) {
    const Field f = Field::standard(n);
    CheckResult r{"field n=" + std::to_string(n) + " " + f.modulus().to_hex(), true, 0, ""};
    const BitMatrix M = build_reduction_matrix(f);
    const bool exhaustive = n <= 6;
    const std::size_t count = exhaustive ? (std::size_t{1} << n) * (std::size_t{1} << n) : o.samples;
    for (std::size_t i = 0; i < count && r.passed; ++i) {
      const FieldElement a = exhaustive ? f.element(i >> n) : random_element(f, rng);
      const FieldElement b = exhaustive ? f.element(i & ((std::size_t{1} << n) - 1)) : random_element(f, rng);
      const BitVec lo = build_toeplitz_L(a).apply(b.coeffs());
      const BitVec hi = build_toeplitz_U(a).apply(b.coeffs());
      const FieldElement via_matrices = f.element(lo ^ M.apply(hi));
      ++r.cases;
      if (!(via_matrices == a * b)) {
        r.passed = false;
        r.detail = describe_mismatch("L b + M U b for " + a.to_hex() + "*" + b.to_hex(), via_matrices.to_hex(),
                            (a * b).to_hex());
      }
      const ItohTsujiResult it = itoh_tsuji_inverse(a);
      if (r.passed && !(it.value == inv_fermat(a))) {
        r.passed = false;
        r.detail = describe_mismatch("Itoh-Tsuji inverse of " + a.to_hex(), it.value.to_hex(), inv_fermat(a).to_hex());
      }
      if (r.passed && !a.is_zero() && !(it.value * a).is_one()) {
        r.passed = false;
        r.detail = "a * a^-1 != 1 for a = " + a.to_hex();
      }
      const int want_mults = static_cast<int>(std::bit_width(n - 1)) - 1 + std::popcount(n - 1) - 1;
      if (r.passed && it.mult_count != want_mults) {
        r.passed = false;
        r.detail = describe_mismatch("Itoh-Tsuji multiplications", std::to_string(it.mult_count), std::to_string(want_mults));
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> verify_curve_suite(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(o.seed);
  for (std::size_t n = 2; n <= std::min<std::size_t>(o.n_max, 8); ++n) {
    const Field f = Field::standard(n);
    const ToyCurve toy = find_toy_curve(f);
    const CurveSpec& c = toy.curve;
    CheckResult r{"curve n=" + std::to_string(n) + " d1=" + c.d1().to_hex() + " d2=" + c.d2().to_hex(), true, 0, ""};
    auto fail = [&](std::string why) {
      if (r.passed) r.detail = std::move(why);
      r.passed = false;
    };
    const auto pts = enumerate_points(c);
    if (static_cast<double>(pts.size()) > hasse_upper_bound(n)) fail("point count exceeds the Hasse bound");
    const AffinePoint id = identity_point(c);
    const bool all_pairs = pts.size() * pts.size() <= 4096;
    const std::size_t pairs = all_pairs ? pts.size() * pts.size() : o.samples;
    for (std::size_t i = 0; i < pairs && r.passed; ++i) {
      const AffinePoint& p1 = all_pairs ? pts[i / pts.size()] : pts[rng() % pts.size()];
      const AffinePoint& p2 = all_pairs ? pts[i % pts.size()] : pts[rng() % pts.size()];
      ++r.cases;
      try {
        const AffinePoint s = affine_add(c, p1, p2);
        if (!on_curve(c, s)) fail("sum of " + p1.to_text() + " and " + p2.to_text() + " is off the curve");
        if (!(s == affine_add(c, p2, p1))) fail("addition is not commutative");
        if (!(affine_add(c, p1, id) == p1)) fail("identity is not neutral");
        FieldOpCount count;
        const ProjectivePoint ps = projective_add(c, scaled(p1, random_nonzero(f, rng)),
                                                  scaled(p2, random_nonzero(f, rng)), &count);
        if (!projectively_equal(ps, to_projective(s))) fail("projective and affine sums differ");
        if (!(count == FieldOpCount{21, 4, 1, 15})) fail("projective addition operation count changed");
      } catch (const CompletenessViolation& e) {
        fail(e.what());
      }
    }
    if (r.passed && !(scalar_mul(c, toy.order, toy.generator) == id)) fail("generator order is wrong");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> verify_circuit_suite(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  for (std::size_t n = 2; n <= o.n_max; ++n) {
    const Field f = Field::standard(n);
    const CurvePoints cp = default_curve(f);
    SynthConfig cfg{f, cp.curve, o.uncompute, std::nullopt, BuildMode::kRecord};
    std::vector<Synthesis> built;
    built.push_back(synth_mul(cfg));
    built.push_back(synth_inverse(cfg));
    built.push_back(synth_point_add(cfg));
    built.push_back(synth_proj_to_affine(cfg));
    built.push_back(synth_double_scalar(cfg, cp.p, cp.q, ScalarMethod::kRightToLeft));
    built.push_back(synth_double_scalar(cfg, cp.p, cp.q, ScalarMethod::kLeftToRight));
    built.push_back(synth_double_scalar(cfg, cp.p, cp.q, ScalarMethod::kTree));
    for (Synthesis& s : built) {
      const bool faulty = o.inject_fault && inject_fault(s.circuit);
      CheckResult r = verify_circuit(s.circuit, o.samples, o.seed + n);
      if (faulty) r.name += " (fault injected)";
      if (o.inject_fault && !faulty) r.name += " (no Toffoli to replace)";
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace edshor
