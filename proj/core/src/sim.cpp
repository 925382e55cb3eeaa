#include "edshor/sim.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "edshor/errors.hpp"

namespace edshor {

namespace {

[[noreturn]] void unsupported(const Gate& g) {
  throw UnsupportedGate("classical simulator cannot apply '" + g.to_text() + "'");
}

/// Inverse of a mod m, if gcd(a, m) = 1.
std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t r0 = static_cast<std::int64_t>(m), r1 = static_cast<std::int64_t>(a % m);
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t quot = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - quot * r1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - quot * t1);
  }
  if (r0 != 1) return std::nullopt;
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((t0 % mm) + mm) % mm);
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

BitVec basis_sim(const Circuit& c, BitVec state) {
  if (state.size() != c.width()) throw SpecMismatch("state width does not match circuit width");
  for (const Gate& g : c.gates()) {
    const auto& q = g.qubits;
    switch (g.kind) {
      case GateKind::kX:
        state.flip(q[0]);
        break;
      case GateKind::kCnot:
        if (state.get(q[0])) state.flip(q[1]);
        break;
      case GateKind::kToffoli:
        if (state.get(q[0]) && state.get(q[1])) state.flip(q[2]);
        break;
      default:
        unsupported(g);
    }
  }
  return state;
}

void write_register(BitVec& state, const Register& r, const BitVec& value) {
  if (value.size() != r.length) throw SpecMismatch("value length does not match register '" + r.name + "'");
  for (std::size_t i = 0; i < r.length; ++i) state.set(r[i], value.get(i));
}

BitVec read_register(const BitVec& state, const Register& r) {
  BitVec v(r.length);
  for (std::size_t i = 0; i < r.length; ++i) v.set(i, state.get(r[i]));
  return v;
}

void LaneBatch::set(Qubit q, std::size_t lane, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << lane;
  bits_[q] = value ? (bits_[q] | mask) : (bits_[q] & ~mask);
}

void LaneBatch::write(const Register& r, std::size_t lane, const BitVec& value) {
  if (value.size() != r.length) throw SpecMismatch("value length does not match register '" + r.name + "'");
  for (std::size_t i = 0; i < r.length; ++i) set(r[i], lane, value.get(i));
}

BitVec LaneBatch::read(const Register& r, std::size_t lane) const {
  BitVec v(r.length);
  for (std::size_t i = 0; i < r.length; ++i) v.set(i, get(r[i], lane));
  return v;
}

void LaneBatch::run(std::span<const Gate> gates) {
  for (const Gate& g : gates) {
    const auto& q = g.qubits;
    switch (g.kind) {
      case GateKind::kX:
        bits_[q[0]] = ~bits_[q[0]];
        break;
      case GateKind::kCnot:
        bits_[q[1]] ^= bits_[q[0]];
        break;
      case GateKind::kToffoli:
        bits_[q[2]] ^= bits_[q[0]] & bits_[q[1]];
        break;
      default:
        unsupported(g);
    }
  }
}

void statevector_apply(const Circuit& c, Amplitudes& state, std::size_t max_qubits) {
  if (c.width() > max_qubits) {
    throw ResourceLimit("statevector simulation is limited to " + std::to_string(max_qubits) + " qubits; this circuit needs " +
                        std::to_string(c.width()) + " (2^" + std::to_string(c.width()) + " amplitudes)");
  }
  const std::size_t dim = std::size_t{1} << c.width();
  if (state.size() != dim) throw SpecMismatch("state dimension does not match circuit width");
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (const Gate& g : c.gates()) {
    const std::size_t b0 = std::size_t{1} << g.qubits[0];
    const std::size_t b1 = std::size_t{1} << g.qubits[1];
    const std::size_t b2 = std::size_t{1} << g.qubits[2];
    switch (g.kind) {
      case GateKind::kX:
        for (std::size_t i = 0; i < dim; ++i) {
          if (!(i & b0)) std::swap(state[i], state[i | b0]);
        }
        break;
      case GateKind::kCnot:
        for (std::size_t i = 0; i < dim; ++i) {
          if ((i & b0) && !(i & b1)) std::swap(state[i], state[i | b1]);
        }
        break;
      case GateKind::kToffoli:
        for (std::size_t i = 0; i < dim; ++i) {
          if ((i & b0) && (i & b1) && !(i & b2)) std::swap(state[i], state[i | b2]);
        }
        break;
      case GateKind::kH:
        for (std::size_t i = 0; i < dim; ++i) {
          if (i & b0) continue;
          const auto a = state[i];
          const auto b = state[i | b0];
          state[i] = (a + b) * inv_sqrt2;
          state[i | b0] = (a - b) * inv_sqrt2;
        }
        break;
      case GateKind::kCPhase: {
        const double angle = (g.inverse ? -2.0 : 2.0) * std::numbers::pi / std::ldexp(1.0, g.phase_k);
        const std::complex<double> phase = std::polar(1.0, angle);
        for (std::size_t i = 0; i < dim; ++i) {
          if ((i & b0) && (i & b1)) state[i] *= phase;
        }
        break;
      }
    }
  }
}

Amplitudes statevector_sim(const Circuit& c, const Amplitudes& input, std::size_t max_qubits) {
  Amplitudes state = input;
  statevector_apply(c, state, max_qubits);
  return state;
}

std::vector<double> shor_distribution(const CurveSpec& c, const AffinePoint& p, const AffinePoint& q) {
  const std::size_t n = c.field().degree();
  if (n > 8) throw ResourceLimit("outcome distribution is limited to n <= 8");
  const std::size_t M = std::size_t{1} << (n + 1);

  std::vector<AffinePoint> kp, lq;
  kp.reserve(M);
  lq.reserve(M);
  kp.push_back(identity_point(c));
  lq.push_back(identity_point(c));
  for (std::size_t i = 1; i < M; ++i) {
    kp.push_back(affine_add(c, kp.back(), p));
    lq.push_back(affine_add(c, lq.back(), q));
  }
  std::map<AffinePoint, std::vector<std::size_t>> classes;
  for (std::size_t k = 0; k < M; ++k) {
    for (std::size_t l = 0; l < M; ++l) classes[affine_add(c, kp[k], lq[l])].push_back(k * M + l);
  }

  const std::size_t cells = M * M;
  std::unique_ptr<fftw_complex[], FftwFree> in(fftw_alloc_complex(cells));
  std::unique_ptr<fftw_complex[], FftwFree> out(fftw_alloc_complex(cells));
  fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(M), static_cast<int>(M), in.get(), out.get(), FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
  std::vector<double> prob(cells, 0.0);
  const double norm = 1.0 / static_cast<double>(cells);
  for (const auto& [value, members] : classes) {
    for (std::size_t i = 0; i < cells; ++i) in[i][0] = in[i][1] = 0.0;
    for (std::size_t idx : members) in[idx][0] = 1.0;
    fftw_execute(plan);
    for (std::size_t i = 0; i < cells; ++i) {
      const double re = out[i][0] * norm;
      const double im = out[i][1] * norm;
      prob[i] += re * re + im * im;
    }
  }
  fftw_destroy_plan(plan);
  return prob;
}

std::optional<std::uint64_t> postprocess(const CurveSpec& c, const AffinePoint& p, const AffinePoint& q,
                                         std::uint64_t u, std::uint64_t v, std::uint64_t M, std::uint64_t order) {
  if (order == 0 || M == 0) throw InvalidArgument("order and register size must be positive");
  auto nearest = [&](std::uint64_t x) { return ((2 * x * order + M) / (2 * M)) % order; };
  const std::uint64_t s = nearest(u);
  const std::uint64_t t = nearest(v);
  const auto s_inv = inverse_mod(s, order);
  if (!s_inv) return std::nullopt;
  std::uint64_t r = (t * *s_inv) % order;
  if (r == 0) r = order;
  if (!(scalar_mul(c, r, p) == q)) return std::nullopt;
  return r;
}

double success_probability(const CurveSpec& c, const AffinePoint& p, const AffinePoint& q,
                           std::span<const double> distribution, std::uint64_t order) {
  const auto M = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(distribution.size()))));
  if (M * M != distribution.size()) throw SpecMismatch("distribution is not square");
  double total = 0.0;
  for (std::uint64_t u = 0; u < M; ++u) {
    for (std::uint64_t v = 0; v < M; ++v) {
      const double pr = distribution[u * M + v];
      if (pr > 0.0 && postprocess(c, p, q, u, v, M, order)) total += pr;
    }
  }
  return total;
}

}  // namespace edshor
