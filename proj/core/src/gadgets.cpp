#include "edshor/gadgets.hpp"

#include <algorithm>

#include "edshor/errors.hpp"

namespace edshor::gadgets {

FieldTables::FieldTables(Field f)
    : field(std::move(f)), reduction(build_reduction_matrix(field)), squaring(squaring_matrix(field)) {}

CurveTables::CurveTables(const CurveSpec& c)
    : curve(c),
      field(c.field()),
      mul_d1(multiplication_matrix(c.d1())),
      mul_d2(multiplication_matrix(c.d2())) {}

PointWires alloc_point(CircuitBuilder& b, std::size_t n) { return {b.alloc(n), b.alloc(n), b.alloc(n)}; }

namespace {

void require_size(std::span<const Qubit> w, std::size_t n, const char* what) {
  if (w.size() != n) throw SpecMismatch(std::string(what) + " has the wrong number of qubits");
}

/// [source] followed by `extra` fresh copies of it.
Wires copies_of(CircuitBuilder& b, Qubit source, std::size_t extra) {
  Wires w{source};
  if (extra == 0) return w;
  const Wires fresh = b.alloc(extra);
  fan_out(b, source, fresh);
  w.insert(w.end(), fresh.begin(), fresh.end());
  return w;
}

/// Computes the field product of a and bb into fresh wires, leaving garbage.
Wires mastrovito_compute(CircuitBuilder& b, const FieldTables& t, std::span<const Qubit> a,
                         std::span<const Qubit> bb) {
  const std::size_t n = t.n();
  std::vector<Wires> acopy(n), bcopy(n);
  for (std::size_t i = 0; i < n; ++i) acopy[i] = copies_of(b, a[i], n - 1);
  // Operand aliasing (squaring through the generic multiplier) would make the
  // (0, 0) Toffoli read one wire twice; take every b copy fresh in that case.
  const bool alias = a[0] == bb[0];
  for (std::size_t j = 0; j < n; ++j) {
    if (alias) {
      bcopy[j] = b.alloc(n);
      fan_out(b, bb[j], bcopy[j]);
    } else {
      bcopy[j] = copies_of(b, bb[j], n - 1);
    }
  }

  const Wires products = b.alloc(n * n);
  std::vector<Wires> coeff(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Qubit p = products[i * n + j];
      b.ccx(acopy[i][j], bcopy[j][i], p);
      coeff[i + j].push_back(p);
    }
  }
  Wires c(2 * n - 1);
  for (std::size_t k = 0; k < 2 * n - 1; ++k) c[k] = fold_parity(b, coeff[k]);

  // Reduction: row r collects c_r and one copy of each eta_j = c_{n+j}
  // with M[r][j] set.
  const BitMatrix& M = t.reduction;
  std::vector<Wires> eta(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t w = M.column_weight(j);
    eta[j] = w == 0 ? Wires{} : copies_of(b, c[n + j], w - 1);
  }
  std::vector<std::size_t> used(n - 1, 0);
  Wires roots(n);
  for (std::size_t r = 0; r < n; ++r) {
    Wires leaves{c[r]};
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (M.get(r, j)) leaves.push_back(eta[j][used[j]++]);
    }
    roots[r] = fold_parity(b, leaves);
  }
  return roots;
}

Wires itoh_tsuji_compute(CircuitBuilder& b, const FieldTables& t, std::span<const Qubit> in, int* mults) {
  const std::size_t n = t.n();
  Wires beta(in.begin(), in.end());
  for (const ItohTsujiStep& step : itoh_tsuji_chain(n)) {
    const Wires s = b.alloc(n);
    const Wires next = b.alloc(n);
    if (step.kind == ItohTsujiStep::Kind::kDouble) {
      matrix_mul(b, frobenius_matrix(t.field, step.k), beta, s);
      field_mul(b, t, s, beta, next, Uncompute::kGarbage);
    } else {
      matrix_mul(b, t.squaring, beta, s);
      field_mul(b, t, s, in, next, Uncompute::kGarbage);
    }
    ++*mults;
    beta = next;
  }
  const Wires result = b.alloc(n);
  matrix_mul(b, t.squaring, beta, result);
  return result;
}

void count_op(FieldOpCount* count, int FieldOpCount::*field) {
  if (count) ++(count->*field);
}

}  // namespace

void fan_out(CircuitBuilder& b, Qubit source, std::span<const Qubit> targets) {
  Wires holders{source};
  std::size_t next = 0;
  while (next < targets.size()) {
    const std::size_t round = holders.size();
    for (std::size_t h = 0; h < round && next < targets.size(); ++h) {
      b.cx(holders[h], targets[next]);
      holders.push_back(targets[next]);
      ++next;
    }
  }
}

Qubit fold_parity(CircuitBuilder& b, std::span<const Qubit> leaves) {
  if (leaves.empty()) throw InvalidArgument("parity of an empty set");
  for (std::size_t step = 1; step < leaves.size(); step *= 2) {
    for (std::size_t i = 0; i + step < leaves.size(); i += 2 * step) b.cx(leaves[i + step], leaves[i]);
  }
  return leaves[0];
}

void parity_into(CircuitBuilder& b, std::span<const Qubit> sources, Qubit target) {
  if (sources.size() == 1) {
    b.cx(sources[0], target);
    return;
  }
  Qubit root = 0;
  with_uncompute(
      b, [&] { root = fold_parity(b, sources); }, [&] { b.cx(root, target); });
}

void matrix_mul(CircuitBuilder& b, const BitMatrix& A, std::span<const Qubit> in, std::span<const Qubit> out) {
  require_size(in, A.cols(), "matrix input");
  require_size(out, A.rows(), "matrix output");
  Wires roots(A.rows());
  std::vector<bool> nonempty(A.rows(), false);
  with_uncompute(
      b,
      [&] {
        std::vector<Wires> copies(A.cols());
        for (std::size_t j = 0; j < A.cols(); ++j) {
          const std::size_t w = A.column_weight(j);
          if (w > 0) copies[j] = copies_of(b, in[j], w - 1);
        }
        std::vector<std::size_t> used(A.cols(), 0);
        for (std::size_t r = 0; r < A.rows(); ++r) {
          Wires leaves;
          for (std::size_t j = 0; j < A.cols(); ++j) {
            if (A.get(r, j)) leaves.push_back(copies[j][used[j]++]);
          }
          if (leaves.empty()) continue;
          nonempty[r] = true;
          roots[r] = fold_parity(b, leaves);
        }
      },
      [&] {
        for (std::size_t r = 0; r < A.rows(); ++r) {
          if (nonempty[r]) b.cx(roots[r], out[r]);
        }
      });
}

void xor_into(CircuitBuilder& b, std::span<const Qubit> in, std::span<const Qubit> out) {
  require_size(out, in.size(), "xor output");
  for (std::size_t i = 0; i < in.size(); ++i) b.cx(in[i], out[i]);
}

void field_mul(CircuitBuilder& b, const FieldTables& t, std::span<const Qubit> a, std::span<const Qubit> bb,
               std::span<const Qubit> out, Uncompute mode) {
  const std::size_t n = t.n();
  require_size(a, n, "multiplier operand a");
  require_size(bb, n, "multiplier operand b");
  require_size(out, n, "multiplier output");
  Wires roots;
  auto compute = [&] { roots = mastrovito_compute(b, t, a, bb); };
  auto copy_out = [&] { xor_into(b, roots, out); };
  if (mode == Uncompute::kGarbage) {
    compute();
    copy_out();
  } else {
    with_uncompute(b, compute, copy_out);
  }
}

int itoh_tsuji(CircuitBuilder& b, const FieldTables& t, std::span<const Qubit> in, std::span<const Qubit> out,
               Uncompute mode) {
  const std::size_t n = t.n();
  require_size(in, n, "inverter input");
  require_size(out, n, "inverter output");
  int mults = 0;
  if (mode == Uncompute::kGarbage) {
    // The final squaring is linear and writes straight into `out`.
    const Wires r = itoh_tsuji_compute(b, t, in, &mults);
    xor_into(b, r, out);
  } else {
    Wires r;
    with_uncompute(
        b, [&] { r = itoh_tsuji_compute(b, t, in, &mults); }, [&] { xor_into(b, r, out); });
  }
  return mults;
}

void point_add(CircuitBuilder& b, const CurveTables& t, const PointWires& p1, const PointWires& p2,
               const PointWires& out, Uncompute mode, FieldOpCount* count) {
  const FieldTables& ft = t.field;
  const std::size_t n = ft.n();
  for (const Wires* w : {&p1.x, &p1.y, &p1.z, &p2.x, &p2.y, &p2.z, &out.x, &out.y, &out.z}) {
    require_size(*w, n, "point coordinate");
  }

  auto fresh = [&] { return b.alloc(n); };
  auto sum = [&](const Wires& u, const Wires& v) {
    Wires s = fresh();
    xor_into(b, u, s);
    xor_into(b, v, s);
    count_op(count, &FieldOpCount::add);
    return s;
  };
  auto acc = [&](const Wires& target, const Wires& v) {
    xor_into(b, v, target);
    count_op(count, &FieldOpCount::add);
  };
  auto mul_into = [&](const Wires& u, const Wires& v, const Wires& target) {
    field_mul(b, ft, u, v, target, Uncompute::kGarbage);
    count_op(count, &FieldOpCount::mul);
  };
  auto mul = [&](const Wires& u, const Wires& v) {
    Wires r = fresh();
    mul_into(u, v, r);
    return r;
  };
  auto cmul = [&](const BitMatrix& m, const Wires& u) {
    Wires r = fresh();
    matrix_mul(b, m, u, r);
    count_op(count, &FieldOpCount::const_mul);
    return r;
  };

  auto compute = [&](const PointWires& dst) {
    const Wires w1 = sum(p1.x, p1.y);
    const Wires w2 = sum(p2.x, p2.y);
    const Wires t1 = sum(p1.x, p1.z);
    const Wires t2 = sum(p1.y, p1.z);
    const Wires t3 = sum(p2.y, p2.z);
    const Wires t4 = sum(p2.x, p2.z);
    const Wires k1 = cmul(t.mul_d1, p2.z);
    const Wires k2 = cmul(t.mul_d2, w2);
    const Wires k3 = cmul(t.mul_d1, p1.z);
    const Wires g = sum(k1, k2);

    const Wires A = mul(p1.x, t1);
    const Wires B = mul(p1.y, t2);
    const Wires C = mul(p1.z, p2.z);
    const Wires D = mul(w2, p2.z);
    const Wires h1 = mul(g, w1);

    const Wires c2 = fresh();
    matrix_mul(b, ft.squaring, C, c2);
    count_op(count, &FieldOpCount::square);
    const Wires E = cmul(t.mul_d1, c2);

    const Wires U = mul(A, D);
    acc(U, E);
    const Wires V = mul(B, D);
    acc(V, E);
    const Wires I = mul(k3, C);
    const Wires H = mul(h1, C);
    const Wires j1 = mul(A, t3);
    acc(j1, I);
    const Wires j2 = mul(B, t4);
    acc(j2, I);

    const Wires S = mul(U, V);
    const Wires f1 = mul(p2.x, j1);
    acc(f1, H);
    const Wires f2 = mul(p2.y, j2);
    acc(f2, H);

    const Wires g1 = mul(f1, V);
    const Wires g2 = mul(f2, U);
    const Wires sy = mul(S, p1.y);
    const Wires sx = mul(S, p1.x);
    mul_into(S, p1.z, dst.z);
    const Wires q1 = mul(g1, p1.z);
    const Wires q2 = mul(g2, p1.z);

    xor_into(b, sy, dst.x);
    acc(dst.x, q1);
    xor_into(b, sx, dst.y);
    acc(dst.y, q2);
  };

  if (mode == Uncompute::kGarbage) {
    compute(out);
    return;
  }
  const PointWires tmp = alloc_point(b, n);
  with_uncompute(
      b, [&] { compute(tmp); },
      [&] {
        xor_into(b, tmp.x, out.x);
        xor_into(b, tmp.y, out.y);
        xor_into(b, tmp.z, out.z);
      });
}

void load_point_controlled(CircuitBuilder& b, Qubit control, const AffinePoint& p, const PointWires& dst) {
  Wires targets;
  for (std::size_t i = 0; i < dst.x.size(); ++i) {
    if (p.x.coeffs().get(i)) targets.push_back(dst.x[i]);
  }
  for (std::size_t i = 0; i < dst.y.size(); ++i) {
    if (p.y.coeffs().get(i)) targets.push_back(dst.y[i]);
  }
  if (!targets.empty()) {
    const Wires c = copies_of(b, control, targets.size() - 1);
    for (std::size_t i = 0; i < targets.size(); ++i) b.cx(c[i], targets[i]);
  }
  b.x(dst.z[0]);
}

void proj_to_affine(CircuitBuilder& b, const FieldTables& t, const PointWires& in, std::span<const Qubit> ax,
                    std::span<const Qubit> ay, Uncompute mode) {
  const std::size_t n = t.n();
  require_size(ax, n, "affine x");
  require_size(ay, n, "affine y");
  auto compute = [&](std::span<const Qubit> ox, std::span<const Qubit> oy) {
    const Wires zi = b.alloc(n);
    itoh_tsuji(b, t, in.z, zi, Uncompute::kGarbage);
    field_mul(b, t, in.x, zi, ox, Uncompute::kGarbage);
    field_mul(b, t, in.y, zi, oy, Uncompute::kGarbage);
  };
  if (mode == Uncompute::kGarbage) {
    compute(ax, ay);
    return;
  }
  const Wires tx = b.alloc(n);
  const Wires ty = b.alloc(n);
  with_uncompute(
      b, [&] { compute(tx, ty); },
      [&] {
        xor_into(b, tx, ax);
        xor_into(b, ty, ay);
      });
}

void qft(CircuitBuilder& b, std::span<const Qubit> q, unsigned band) {
  const std::size_t m = q.size();
  for (std::size_t j = m; j-- > 0;) {
    b.h(q[j]);
    for (std::size_t k = j; k-- > 0;) {
      const std::size_t dist = j - k + 1;
      if (dist <= band) b.cp(q[k], q[j], static_cast<unsigned>(dist));
    }
  }
  for (std::size_t i = 0; i < m / 2; ++i) {
    const Qubit u = q[i];
    const Qubit v = q[m - 1 - i];
    b.cx(u, v);
    b.cx(v, u);
    b.cx(u, v);
  }
}

}  // namespace edshor::gadgets
