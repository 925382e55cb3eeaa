#include <doctest.h>

#include <bit>
#include <random>

#include "edshor/errors.hpp"
#include "edshor/sim.hpp"
#include "edshor/synth.hpp"
#include "edshor/verify.hpp"
#include "oracles.hpp"

using namespace edshor;

namespace {

BitVec zero_state(const Circuit& c) { return BitVec(c.width()); }

BitVec bits(std::size_t n, std::uint64_t v) { return BitVec::from_uint(n, v); }

/// Every qubit outside the named registers is zero.
bool ancillae_clean(const Circuit& c, const BitVec& state) {
  std::vector<bool> named(c.width(), false);
  for (const auto& r : c.registers()) {
    for (std::size_t i = 0; i < r.length; ++i) named[r[i]] = true;
  }
  for (std::size_t q = 0; q < c.width(); ++q) {
    if (!named[q] && state.get(q)) return false;
  }
  return true;
}

unsigned clog2(std::size_t m) { return m <= 1 ? 0 : static_cast<unsigned>(std::bit_width(m - 1)); }

}  // namespace

TEST_CASE("fan-out tree") {
  const Synthesis s7 = synth_fanout(7);
  CHECK(s7.report.depth == 3);
  CHECK(s7.report.cnot == 7);
  const Synthesis s1 = synth_fanout(1);
  CHECK(s1.report.depth == 1);
  CHECK(s1.report.cnot == 1);
  for (std::size_t m = 1; m <= 40; ++m) {
    const Synthesis s = synth_fanout(m);
    CHECK(s.report.depth == clog2(m + 1));
    CHECK(s.report.cnot == m);
    BitVec in = zero_state(s.circuit);
    in.set(s.circuit.reg("src")[0]);
    const BitVec out = basis_sim(s.circuit, in);
    CHECK(out.popcount() == m + 1);
  }
}

TEST_CASE("parity tree") {
  std::mt19937_64 rng(1);
  CHECK(synth_parity(1).report.cnot == 1);
  CHECK(synth_parity(1).report.depth == 1);
  for (std::size_t m = 2; m <= 33; ++m) {
    const Synthesis s = synth_parity(m);
    CHECK(s.report.depth == 2 * clog2(m) + 1);
    const Register& src = s.circuit.reg("src");
    for (int t = 0; t < 20; ++t) {
      BitVec in = zero_state(s.circuit);
      const BitVec v = bits(m, rng() & ((m >= 64) ? ~0ull : ((1ull << m) - 1)));
      write_register(in, src, v);
      const BitVec out = basis_sim(s.circuit, in);
      CHECK(read_register(out, src) == v);
      CHECK(out.get(s.circuit.reg("target")[0]) == (v.popcount() % 2 == 1));
    }
  }
  // The fold alone on eight wires takes three layers.
  CircuitBuilder b;
  const Register r = b.add_register("r", 8);
  gadgets::fold_parity(b, r.wires());
  CHECK(b.report().depth == 3);
  CHECK(b.report().cnot == 7);
}

TEST_CASE("constant matrix circuits") {
  std::mt19937_64 rng(2);
  const Synthesis id = synth_matrix_mul(BitMatrix::identity(5));
  CHECK(id.report.depth == 1);
  CHECK(id.report.cnot == 5);

  BitMatrix ones(1, 8);
  for (std::size_t j = 0; j < 8; ++j) ones.set(0, j);
  CHECK(synth_matrix_mul(ones).report.depth == 2 * 3 + 1);

  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
    BitMatrix A(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) A.set(r, c, rng() & 1u);
    }
    const Synthesis s = synth_matrix_mul(A);
    CHECK(s.report.ccx == 0);
    for (int t = 0; t < 16; ++t) {
      BitVec in = zero_state(s.circuit);
      const BitVec x = bits(cols, rng() & ((1u << cols) - 1));
      const BitVec y0 = bits(rows, rng() & ((1u << rows) - 1));
      write_register(in, s.circuit.reg("in"), x);
      write_register(in, s.circuit.reg("out"), y0);
      const BitVec out = basis_sim(s.circuit, in);
      CHECK(read_register(out, s.circuit.reg("in")) == x);
      CHECK(read_register(out, s.circuit.reg("out")) == (y0 ^ A.apply(x)));
      CHECK(ancillae_clean(s.circuit, out));
    }
  }
}

TEST_CASE("constant multiplication, squaring and Frobenius circuits") {
  const Field f2 = Field::standard(2);
  SynthConfig cfg2{f2};
  const Synthesis sq = synth_frobenius(cfg2, 1);
  BitVec in = zero_state(sq.circuit);
  write_register(in, sq.circuit.reg("in"), f2.generator().coeffs());
  CHECK(read_register(basis_sim(sq.circuit, in), sq.circuit.reg("out")).to_uint() == 0b11);

  const Field f = Field::standard(5);
  SynthConfig cfg{f};
  const Synthesis one = synth_const_mul(cfg, f.one());
  const Synthesis fn = synth_frobenius(cfg, 5);
  const Synthesis c7 = synth_const_mul(cfg, f.element(7));
  for (std::uint64_t a = 0; a < 32; ++a) {
    for (const Synthesis* s : {&one, &fn, &c7}) {
      BitVec st = zero_state(s->circuit);
      write_register(st, s->circuit.reg("in"), f.element(a).coeffs());
      const BitVec out = read_register(basis_sim(s->circuit, st), s->circuit.reg("out"));
      const FieldElement want = s == &c7 ? f.element(7) * f.element(a) : f.element(a);
      CHECK(f.element(out) == want);
    }
  }
}

TEST_CASE("multiplier equals the carry-less oracle on all (a, b, c) for n <= 4") {
  for (std::size_t n : {2u, 3u, 4u}) {
    const Field f = Field::standard(n);
    const std::uint64_t p = f.modulus().to_uint();
    for (Uncompute u : {Uncompute::kClean, Uncompute::kGarbage}) {
      SynthConfig cfg{f};
      cfg.uncompute = u;
      const Synthesis s = synth_mul(cfg);
      const Circuit& c = s.circuit;
      CHECK(s.report.ccx == (u == Uncompute::kGarbage ? n * n : 2 * n * n));
      const std::uint64_t size = 1u << n;
      for (std::uint64_t a = 0; a < size; ++a) {
        for (std::uint64_t b = 0; b < size; ++b) {
          for (std::uint64_t z = 0; z < size; ++z) {
            BitVec st = zero_state(c);
            write_register(st, c.reg("a"), bits(n, a));
            write_register(st, c.reg("b"), bits(n, b));
            write_register(st, c.reg("out"), bits(n, z));
            const BitVec out = basis_sim(c, st);
            REQUIRE(read_register(out, c.reg("out")).to_uint() == (z ^ oracle::gf_mul(a, b, p)));
            REQUIRE(read_register(out, c.reg("a")).to_uint() == a);
            REQUIRE(read_register(out, c.reg("b")).to_uint() == b);
            if (u == Uncompute::kClean) REQUIRE(ancillae_clean(c, out));
          }
        }
      }
    }
  }
}

TEST_CASE("multiplier structure") {
  SynthConfig cfg{Field::standard(2)};
  cfg.uncompute = Uncompute::kGarbage;
  const Synthesis s = synth_mul(cfg);
  CHECK(s.report.ccx == 4);
  CHECK(s.report.toffoli_depth == 1);

  std::mt19937_64 rng(9);
  for (std::size_t n : {5u, 8u, 16u}) {
    SynthConfig c{Field::standard(n)};
    const CheckResult r = verify_circuit(synth_mul(c).circuit, 256, rng());
    CHECK_MESSAGE(r.passed, r.detail);
  }

  // b = 1 copies a into out.
  const Field f = Field::standard(6);
  const Synthesis m = synth_mul(SynthConfig{f});
  for (std::uint64_t a = 0; a < 64; ++a) {
    BitVec st = zero_state(m.circuit);
    write_register(st, m.circuit.reg("a"), bits(6, a));
    write_register(st, m.circuit.reg("b"), bits(6, 1));
    CHECK(read_register(basis_sim(m.circuit, st), m.circuit.reg("out")).to_uint() == a);
  }
}

TEST_CASE("multiplier with aliased operands squares") {
  const Field f = Field::standard(4);
  const gadgets::FieldTables t(f);
  CircuitBuilder b;
  const Register a = b.add_register("a", 4);
  const Register out = b.add_register("out", 4);
  gadgets::field_mul(b, t, a.wires(), a.wires(), out.wires(), Uncompute::kClean);
  const Circuit c = std::move(b).finish();
  c.validate();
  for (std::uint64_t v = 0; v < 16; ++v) {
    BitVec st = zero_state(c);
    write_register(st, c.reg("a"), bits(4, v));
    const BitVec res = basis_sim(c, st);
    CHECK(f.element(read_register(res, c.reg("out"))) == square(f.element(v)));
    CHECK(ancillae_clean(c, res));
  }
}

TEST_CASE("inverter") {
  for (std::size_t n = 2; n <= 6; ++n) {
    const Field f = Field::standard(n);
    const std::uint64_t p = f.modulus().to_uint();
    const Synthesis s = synth_inverse(SynthConfig{f});
    const Circuit& c = s.circuit;
    for (std::uint64_t a = 0; a < (1u << n); ++a) {
      BitVec st = zero_state(c);
      write_register(st, c.reg("in"), bits(n, a));
      const BitVec out = basis_sim(c, st);
      const std::uint64_t want = oracle::gf_pow(a, (1u << n) - 2, p);
      REQUIRE(read_register(out, c.reg("out")).to_uint() == want);
      REQUIRE(ancillae_clean(c, out));
    }
    CHECK(s.stats.inverter_mults == static_cast<int>(itoh_tsuji_chain(n).size()));
  }
}

TEST_CASE("point adder on toy curves") {
  for (std::size_t n : {2u, 3u}) {
    const Field f = Field::standard(n);
    const CurvePoints cp = default_curve(f);
    for (Uncompute u : {Uncompute::kClean, Uncompute::kGarbage}) {
      SynthConfig cfg{f, cp.curve, u};
      const Synthesis s = synth_point_add(cfg);
      CHECK(s.stats.field_ops == FieldOpCount{21, 4, 1, 15});
      const Circuit& c = s.circuit;
      const auto pts = enumerate_points(cp.curve);
      for (const auto& p1 : pts) {
        for (const auto& p2 : pts) {
          BitVec st = zero_state(c);
          write_register(st, c.reg("x1"), p1.x.coeffs());
          write_register(st, c.reg("y1"), p1.y.coeffs());
          write_register(st, c.reg("z1"), f.one().coeffs());
          write_register(st, c.reg("x2"), p2.x.coeffs());
          write_register(st, c.reg("y2"), p2.y.coeffs());
          write_register(st, c.reg("z2"), f.one().coeffs());
          const BitVec out = basis_sim(c, st);
          const ProjectivePoint got{f.element(read_register(out, c.reg("x3"))),
                                    f.element(read_register(out, c.reg("y3"))),
                                    f.element(read_register(out, c.reg("z3")))};
          REQUIRE(projectively_equal(got, projective_add(cp.curve, to_projective(p1), to_projective(p2))));
          if (u == Uncompute::kClean) REQUIRE(ancillae_clean(c, out));
        }
      }
    }
  }
}

TEST_CASE("identity plus identity") {
  const Field f = Field::standard(4);
  const CurvePoints cp = default_curve(f);
  const Synthesis s = synth_point_add(SynthConfig{f, cp.curve});
  BitVec st = zero_state(s.circuit);
  write_register(st, s.circuit.reg("z1"), f.one().coeffs());
  write_register(st, s.circuit.reg("z2"), f.one().coeffs());
  const BitVec out = basis_sim(s.circuit, st);
  const ProjectivePoint got{f.element(read_register(out, s.circuit.reg("x3"))),
                            f.element(read_register(out, s.circuit.reg("y3"))),
                            f.element(read_register(out, s.circuit.reg("z3")))};
  CHECK(projectively_equal(got, projective_identity(cp.curve)));
}

TEST_CASE("point synthesizers need a curve") {
  SynthConfig cfg{Field::standard(3)};
  CHECK_THROWS_AS(synth_point_add(cfg), InvalidArgument);
  const CurvePoints other = default_curve(Field::standard(4));
  cfg.curve = other.curve;
  CHECK_THROWS_AS(synth_point_add(cfg), SpecMismatch);
}

TEST_CASE("double-scalar multipliers on the n = 3 toy curve") {
  const Field f = Field::standard(3);
  const CurvePoints cp = default_curve(f);
  const std::uint64_t M = 16;
  for (ScalarMethod m : {ScalarMethod::kRightToLeft, ScalarMethod::kLeftToRight, ScalarMethod::kTree}) {
    const Synthesis s = synth_double_scalar(SynthConfig{f, cp.curve}, cp.p, cp.q, m);
    const Circuit& c = s.circuit;
    LaneBatch lb(c.width());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> inputs;
    for (std::uint64_t k = 0; k < M; ++k) {
      for (std::uint64_t l = 0; l < M; ++l) inputs.emplace_back(k, l);
    }
    for (std::size_t base = 0; base < inputs.size(); base += LaneBatch::kLanes) {
      LaneBatch batch(c.width());
      for (std::size_t lane = 0; lane < LaneBatch::kLanes; ++lane) {
        batch.write(c.reg("k"), lane, bits(4, inputs[base + lane].first));
        batch.write(c.reg("l"), lane, bits(4, inputs[base + lane].second));
      }
      batch.run(c);
      for (std::size_t lane = 0; lane < LaneBatch::kLanes; ++lane) {
        const auto [k, l] = inputs[base + lane];
        const ProjectivePoint got{f.element(batch.read(c.reg("x"), lane)), f.element(batch.read(c.reg("y"), lane)),
                                  f.element(batch.read(c.reg("z"), lane))};
        REQUIRE(projectively_equal(got, to_projective(double_scalar(cp.curve, k, l, cp.p, cp.q))));
        REQUIRE(batch.read(c.reg("k"), lane).to_uint() == k);
      }
    }
    if (m == ScalarMethod::kTree) {
      CHECK(s.stats.adder_layers == 3);
      CHECK(s.stats.point_adders == 7);
    } else if (m == ScalarMethod::kRightToLeft) {
      CHECK(s.stats.point_adders == 8);
    } else {
      CHECK(s.stats.point_adders == 8 + 3);
    }
  }
}

TEST_CASE("tree adder count and layers for n + 1 not a power of two") {
  for (std::size_t n : {4u, 5u, 6u, 8u, 12u}) {
    const Field f = Field::standard(n);
    const CurvePoints cp = default_curve(f);
    SynthConfig cfg{f, cp.curve, Uncompute::kGarbage};
    cfg.mode = BuildMode::kMeter;
    const Synthesis s = synth_double_scalar(cfg, cp.p, cp.q, ScalarMethod::kTree);
    CHECK(s.stats.point_adders == static_cast<int>(2 * (n + 1) - 1));
    CHECK(s.stats.adder_layers == static_cast<int>(clog2(n + 1) + 1));
  }
}

TEST_CASE("leaf initialization depth is logarithmic") {
  for (std::size_t n : {3u, 7u, 15u}) {
    const Field f = Field::standard(n);
    const CurvePoints cp = default_curve(f);
    CircuitBuilder b(BuildMode::kMeter);
    const Register k = b.add_register("k", n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      gadgets::load_point_controlled(b, k[i], scalar_mul(cp.curve, std::uint64_t{1} << i, cp.p),
                                     gadgets::alloc_point(b, n));
    }
    CHECK(b.report().depth <= clog2(2 * (n + 1)) + 2);
  }
}

TEST_CASE("projective to affine") {
  std::mt19937_64 rng(8);
  const Field f = Field::standard(4);
  const Synthesis s = synth_proj_to_affine(SynthConfig{f});
  const Circuit& c = s.circuit;
  auto run = [&](const FieldElement& X, const FieldElement& Y, const FieldElement& Z) {
    BitVec st = zero_state(c);
    write_register(st, c.reg("x"), X.coeffs());
    write_register(st, c.reg("y"), Y.coeffs());
    write_register(st, c.reg("z"), Z.coeffs());
    const BitVec out = basis_sim(c, st);
    CHECK(ancillae_clean(c, out));
    return AffinePoint{f.element(read_register(out, c.reg("ax"))), f.element(read_register(out, c.reg("ay")))};
  };
  CHECK(run(f.zero(), f.zero(), f.one()) == AffinePoint{f.zero(), f.zero()});
  for (int i = 0; i < 100; ++i) {
    const FieldElement x = f.element(rng() % 16), y = f.element(rng() % 16), l = f.element(1 + rng() % 15);
    CHECK(run(x, y, f.one()) == AffinePoint{x, y});
    CHECK(run(x * l, y * l, l) == AffinePoint{x, y});
  }
}

TEST_CASE("AQFT band and structure") {
  CHECK(aqft_band(8, std::ldexp(1.0, -16)) == 19);
  CHECK(aqft_band(1, 0.5) == 1);
  CHECK_THROWS_AS(aqft_band(4, 0.0), InvalidArgument);
  const Synthesis one = synth_aqft(1, 1);
  CHECK(one.report.h == 1);
  CHECK(one.report.gate_count() == 1);
  const Synthesis full = synth_aqft(6, 6);
  CHECK(full.report.cp == 15);
  CHECK(full.report.cnot == 9);
  const Synthesis banded = synth_aqft(6, 2);
  CHECK(banded.report.cp == 5);
  for (const Gate& g : banded.circuit.gates()) {
    if (g.kind == GateKind::kCPhase) CHECK(g.phase_k <= 2);
  }
}

TEST_CASE("assembled discrete-log circuit") {
  const Field f = Field::standard(3);
  const CurvePoints cp = default_curve(f);
  const Synthesis s = synth_shor(SynthConfig{f, cp.curve}, cp.p, cp.q);
  REQUIRE(s.stats.stages.size() == 4);
  CHECK(s.stats.stages[0].first == "hadamard");
  CHECK(s.stats.stages[1].first == "double_scalar");
  CHECK(s.stats.stages[2].first == "proj_to_affine");
  CHECK(s.stats.stages[3].first == "qft");
  CHECK(s.stats.stages[0].second.depth == 1);
  CHECK(s.stats.stages[0].second.h == 8);
  std::uint64_t depth_sum = 0, width_max = 0, gates = 0;
  for (const auto& [name, r] : s.stats.stages) {
    depth_sum += r.depth;
    width_max = std::max(width_max, r.width);
    gates += r.gate_count();
  }
  CHECK(s.report.depth <= depth_sum);
  CHECK(s.report.depth >= s.stats.stages[1].second.depth);
  CHECK(s.report.width >= width_max);
  CHECK(s.report.gate_count() == gates);
  const CheckResult r = verify_circuit(s.circuit, 128, 3);
  CHECK_MESSAGE(r.passed, r.detail);
}

TEST_CASE("depth scaling of the multiplier and inverter") {
  std::uint64_t prev = 0;
  for (std::size_t n : {4u, 8u, 16u, 32u, 64u}) {
    SynthConfig cfg{Field::standard(n)};
    cfg.uncompute = Uncompute::kGarbage;
    cfg.mode = BuildMode::kMeter;
    const auto d = synth_mul(cfg).report.depth;
    if (prev) CHECK(d - prev <= 8);
    prev = d;
    const auto inv = synth_inverse(cfg).report.depth;
    CHECK(static_cast<double>(inv) / (clog2(n) * clog2(n)) < 16.0);
  }
}
