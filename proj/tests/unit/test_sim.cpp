#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "edshor/errors.hpp"
#include "edshor/sim.hpp"
#include "edshor/synth.hpp"
#include "oracles.hpp"

using namespace edshor;

namespace {

double norm2(const Amplitudes& a) {
  double s = 0;
  for (const auto& x : a) s += std::norm(x);
  return s;
}

/// |sum_{k,l} w^(uk+vl) [kP+lQ = R]|^2 / M^4 summed over R, by brute force.
std::vector<double> brute_distribution(const CurveSpec& c, const AffinePoint& p, const AffinePoint& q, std::size_t M) {
  std::vector<AffinePoint> pts;
  std::vector<std::size_t> label(M * M);
  for (std::size_t k = 0; k < M; ++k) {
    for (std::size_t l = 0; l < M; ++l) {
      const AffinePoint r = double_scalar(c, k, l, p, q);
      auto it = std::find(pts.begin(), pts.end(), r);
      if (it == pts.end()) {
        pts.push_back(r);
        it = pts.end() - 1;
      }
      label[k * M + l] = static_cast<std::size_t>(it - pts.begin());
    }
  }
  std::vector<double> out(M * M, 0.0);
  for (std::size_t u = 0; u < M; ++u) {
    for (std::size_t v = 0; v < M; ++v) {
      std::vector<std::complex<double>> acc(pts.size());
      for (std::size_t k = 0; k < M; ++k) {
        for (std::size_t l = 0; l < M; ++l) {
          const double ang = 2.0 * std::numbers::pi * static_cast<double>((u * k + v * l) % M) / static_cast<double>(M);
          acc[label[k * M + l]] += std::polar(1.0, ang);
        }
      }
      double s = 0;
      for (const auto& a : acc) s += std::norm(a);
      out[u * M + v] = s / static_cast<double>(M * M * M * M);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("Hadamard on |0>") {
  Circuit c(1);
  c.append(Gate::h(0));
  Amplitudes in(2, 0.0);
  in[0] = 1.0;
  const Amplitudes out = statevector_sim(c, in);
  CHECK(std::abs(out[0] - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(out[1] - 1 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("statevector preserves the norm and inverts") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Circuit c(5);
    for (int i = 0; i < 40; ++i) {
      const Qubit a = rng() % 5, b = (a + 1 + rng() % 4) % 5, t = (b + 1 + rng() % 3) % 5;
      switch (rng() % 5) {
        case 0: c.append(Gate::x(a)); break;
        case 1: c.append(Gate::cx(a, b)); break;
        case 2:
          if (t != a) c.append(Gate::ccx(a, b, t));
          break;
        case 3: c.append(Gate::h(a)); break;
        default: c.append(Gate::cp(a, b, 1 + rng() % 5, rng() & 1u)); break;
      }
    }
    const Amplitudes in = oracle::random_state(32, rng);
    const Amplitudes out = statevector_sim(c, in);
    CHECK(std::abs(norm2(out) - 1.0) < 1e-12);
    const Amplitudes back = statevector_sim(inverse(c), out);
    for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(back[i] - in[i]) < 1e-12);
  }
}

TEST_CASE("basis simulation rejects phase gates by name") {
  Circuit c(2);
  c.append(Gate::h(1));
  try {
    basis_sim(c, BitVec(2));
    FAIL("expected UnsupportedGate");
  } catch (const UnsupportedGate& e) {
    CHECK(std::string(e.what()).find("h") != std::string::npos);
  }
  LaneBatch lb(2);
  CHECK_THROWS_AS(lb.run(c), UnsupportedGate);
}

TEST_CASE("dense simulation has a width cap") {
  const Circuit c(21);
  Amplitudes tiny(2);
  CHECK_THROWS_AS(statevector_apply(c, tiny), ResourceLimit);
  try {
    statevector_apply(c, tiny);
  } catch (const ResourceLimit& e) {
    CHECK(std::string(e.what()).find("21") != std::string::npos);
  }
  CHECK_THROWS_AS(statevector_apply(Circuit(4), tiny, 3), ResourceLimit);
}

TEST_CASE("AQFT with full band equals the DFT") {
  std::mt19937_64 rng(5);
  for (std::size_t m = 1; m <= 5; ++m) {
    const Circuit c = synth_aqft(m, static_cast<unsigned>(m)).circuit;
    for (int t = 0; t < 5; ++t) {
      const Amplitudes in = oracle::random_state(std::size_t{1} << m, rng);
      const Amplitudes got = statevector_sim(c, in);
      const Amplitudes want = oracle::dft(in);
      for (std::size_t i = 0; i < in.size(); ++i) REQUIRE(std::abs(got[i] - want[i]) < 1e-10);
    }
  }
}

TEST_CASE("outcome distribution matches brute force on the n = 3 toy curve") {
  const Field f = Field::standard(3);
  const ToyCurve toy = find_toy_curve(f);
  const AffinePoint Q = scalar_mul(toy.curve, 3, toy.generator);
  const auto dist = shor_distribution(toy.curve, toy.generator, Q);
  CHECK(std::abs(std::accumulate(dist.begin(), dist.end(), 0.0) - 1.0) < 1e-9);
  const auto brute = brute_distribution(toy.curve, toy.generator, Q, 16);
  REQUIRE(dist.size() == brute.size());
  for (std::size_t i = 0; i < dist.size(); ++i) REQUIRE(std::abs(dist[i] - brute[i]) < 1e-9);
}

TEST_CASE("degenerate points give a delta at the origin") {
  const Field f = Field::standard(3);
  const ToyCurve toy = find_toy_curve(f);
  const AffinePoint id = identity_point(toy.curve);
  const auto dist = shor_distribution(toy.curve, id, id);
  CHECK(std::abs(dist[0] - 1.0) < 1e-9);
  CHECK(std::abs(std::accumulate(dist.begin() + 1, dist.end(), 0.0)) < 1e-9);
}

TEST_CASE("distribution depends on Q only through the point") {
  const Field f = Field::standard(4);
  const ToyCurve toy = find_toy_curve(f);
  const std::uint64_t r = 2;
  const auto a = shor_distribution(toy.curve, toy.generator, scalar_mul(toy.curve, r, toy.generator));
  const auto b = shor_distribution(toy.curve, toy.generator, scalar_mul(toy.curve, r + toy.order, toy.generator));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("post-processing") {
  const Field f = Field::standard(3);
  const ToyCurve toy = find_toy_curve(f);
  const CurveSpec& c = toy.curve;
  const std::uint64_t q = toy.order, M = 16;
  const AffinePoint& P = toy.generator;
  CHECK(postprocess(c, P, P, 4, 4, M, q) == std::optional<std::uint64_t>(1));
  CHECK_FALSE(postprocess(c, P, P, 0, 4, M, q));
  for (std::uint64_t r = 1; r < q; ++r) {
    const AffinePoint Q = scalar_mul(c, r, P);
    const auto dist = shor_distribution(c, P, Q);
    for (std::uint64_t u = 0; u < M; ++u) {
      for (std::uint64_t v = 0; v < M; ++v) {
        const auto cand = postprocess(c, P, Q, u, v, M, q);
        if (cand) {
          CHECK(*cand >= 1);
          CHECK(*cand <= q);
          CHECK(scalar_mul(c, *cand, P) == Q);
        }
      }
    }
    CHECK(success_probability(c, P, Q, dist, q) > 0.1);
  }
}
