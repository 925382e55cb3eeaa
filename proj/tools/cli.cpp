#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "edshor/errors.hpp"
#include "edshor/sim.hpp"
#include "edshor/synth.hpp"
#include "edshor/verify.hpp"

namespace edshor::cli {

namespace {

const std::vector<std::string> kKinds = {"mul", "inv", "add", "dsa-r2l", "dsa-l2r", "dsa-tree", "p2a", "aqft", "shor"};

struct CircuitOptions {
  std::size_t n = 4;
  std::string poly;
  std::string d1;
  std::string d2;
  std::string curve = "auto";
  std::string uncompute = "clean";
  std::optional<double> epsilon;
  std::optional<unsigned> band;
};

void add_circuit_options(CLI::App* app, CircuitOptions& o, bool need_n = true) {
  auto* n = app->add_option("--n", o.n, "Extension degree (qubit count for aqft)")->check(CLI::Range(2, 1024));
  if (need_n) n->required();
  app->add_option("--poly", o.poly, "Field modulus in hex, e.g. 0x11b");
  app->add_option("--d1", o.d1, "Curve parameter d1 in hex");
  app->add_option("--d2", o.d2, "Curve parameter d2 in hex");
  app->add_option("--curve", o.curve, "'auto' or 'edwards n=.. poly=.. d1=.. d2=..'");
  app->add_option("--uncompute", o.uncompute, "Ancilla handling")->check(CLI::IsMember({"clean", "garbage"}));
  app->add_option("--epsilon", o.epsilon, "AQFT error target")->check(CLI::Range(1e-300, 0.999999));
  app->add_option("--band", o.band, "AQFT band, overriding --epsilon")->check(CLI::PositiveNumber);
}

Field make_field(const CircuitOptions& o, std::size_t n) {
  if (o.poly.empty()) return Field::standard(n);
  Field f = Field::from_modulus(BitVec::from_hex(n + 1, o.poly));
  if (f.degree() != n) throw InvalidArgument("--poly has degree " + std::to_string(f.degree()) + ", not " + std::to_string(n));
  return f;
}

/// P of maximal order with Q = 3P for small fields, else the first two
/// non-identity points by x.
std::pair<AffinePoint, AffinePoint> points_on(const CurveSpec& c) {
  const Field& f = c.field();
  if (f.degree() <= 8) {
    std::optional<AffinePoint> best;
    std::uint64_t best_order = 0;
    for (const AffinePoint& p : enumerate_points(c)) {
      const std::uint64_t ord = order_of(c, p);
      if (ord > best_order) {
        best_order = ord;
        best = p;
      }
    }
    return {*best, scalar_mul(c, 3, *best)};
  }
  std::vector<AffinePoint> found;
  for (std::uint64_t x = 1; found.size() < 2; ++x) {
    for (const AffinePoint& p : points_with_x(c, f.element(x))) {
      if (found.size() < 2) found.push_back(p);
    }
  }
  return {found[0], found[1]};
}

CurvePoints make_curve(const CircuitOptions& o, const Field& f) {
  if (!o.d1.empty() || !o.d2.empty()) {
    if (o.d1.empty() || o.d2.empty()) throw InvalidArgument("--d1 and --d2 must be given together");
    CurveSpec c(f.element_from_hex(o.d1), f.element_from_hex(o.d2));
    auto [p, q] = points_on(c);
    return {c, p, q, std::nullopt};
  }
  if (o.curve != "auto") {
    CurveSpec c = CurveSpec::parse(o.curve);
    if (!(c.field() == f)) throw InvalidArgument("--curve is over a different field");
    auto [p, q] = points_on(c);
    return {c, p, q, std::nullopt};
  }
  return default_curve(f);
}

Uncompute parse_uncompute(const std::string& s) { return s == "garbage" ? Uncompute::kGarbage : Uncompute::kClean; }

bool needs_curve(const std::string& kind) { return kind == "add" || kind.starts_with("dsa") || kind == "shor"; }

Synthesis build(const std::string& kind, const CircuitOptions& o, std::size_t n, BuildMode mode) {
  if (kind == "aqft") {
    const unsigned band = o.band ? *o.band : o.epsilon ? aqft_band(n, *o.epsilon) : static_cast<unsigned>(n);
    return synth_aqft(n, band);
  }
  const Field f = make_field(o, n);
  SynthConfig cfg{f, std::nullopt, parse_uncompute(o.uncompute), std::nullopt, mode};
  std::optional<CurvePoints> cp;
  if (needs_curve(kind)) {
    cp = make_curve(o, f);
    cfg.curve = cp->curve;
  }
  if (kind == "mul") return synth_mul(cfg);
  if (kind == "inv") return synth_inverse(cfg);
  if (kind == "add") return synth_point_add(cfg);
  if (kind == "p2a") return synth_proj_to_affine(cfg);
  if (kind == "dsa-r2l") return synth_double_scalar(cfg, cp->p, cp->q, ScalarMethod::kRightToLeft);
  if (kind == "dsa-l2r") return synth_double_scalar(cfg, cp->p, cp->q, ScalarMethod::kLeftToRight);
  if (kind == "dsa-tree") return synth_double_scalar(cfg, cp->p, cp->q, ScalarMethod::kTree);
  if (kind == "shor") {
    if (o.band) {
      cfg.qft_band = *o.band;
    } else if (o.epsilon) {
      cfg.qft_band = aqft_band(n + 1, *o.epsilon);
    }
    return synth_shor(cfg, cp->p, cp->q);
  }
  throw InvalidArgument("unknown kind '" + kind + "'");
}

void print_report(std::ostream& out, const std::string& kind, std::size_t n, const Synthesis& s) {
  out << ResourceReport::csv_header() << '\n';
  out << s.report.csv_row(kind, n) << '\n';
  for (const auto& [stage, report] : s.stats.stages) out << report.csv_row(kind + "." + stage, n) << '\n';
}

int cmd_synth(const std::string& kind, const CircuitOptions& o, const std::string& out_path, std::ostream& out) {
  Synthesis s = build(kind, o, o.n, BuildMode::kRecord);
  const std::string path = out_path.empty() ? kind + "-n" + std::to_string(o.n) + ".circ" : out_path;
  std::ofstream file(path);
  if (!file) throw InvalidArgument("cannot write '" + path + "'");
  file << serialize(s.circuit);
  print_report(out, kind, o.n, s);
  return kOk;
}

int cmd_export(const std::string& kind, const CircuitOptions& o, const std::string& out_path, std::ostream& out) {
  Synthesis s = build(kind, o, o.n, BuildMode::kRecord);
  if (out_path.empty()) {
    out << serialize(s.circuit);
  } else {
    std::ofstream file(out_path);
    if (!file) throw InvalidArgument("cannot write '" + out_path + "'");
    file << serialize(s.circuit);
  }
  return kOk;
}

int cmd_estimate(const std::vector<std::string>& kinds, const std::vector<std::size_t>& ns, const CircuitOptions& o,
                 std::ostream& out) {
  out << ResourceReport::csv_header() << ",depth_delta\n";
  for (const std::string& kind : kinds) {
    std::optional<std::uint64_t> prev;
    for (std::size_t n : ns) {
      const Synthesis s = build(kind, o, n, BuildMode::kMeter);
      out << s.report.csv_row(kind, n) << ',';
      if (prev) out << static_cast<std::int64_t>(s.report.depth) - static_cast<std::int64_t>(*prev);
      out << '\n';
      prev = s.report.depth;
    }
  }
  return kOk;
}

int cmd_verify(const std::string& suite, const VerifyOptions& vo, const std::string& file, std::ostream& out) {
  std::vector<CheckResult> results;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw InvalidArgument("cannot read '" + file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    Circuit c = parse_circuit(ss.str());
    c.validate();
    if (vo.inject_fault) inject_fault(c);
    results.push_back(verify_circuit(c, vo.samples, vo.seed));
  } else {
    auto append = [&](std::vector<CheckResult> r) { results.insert(results.end(), r.begin(), r.end()); };
    if (suite == "field" || suite == "all") append(verify_field_suite(vo));
    if (suite == "curve" || suite == "all") append(verify_curve_suite(vo));
    if (suite == "circuits" || suite == "all") append(verify_circuit_suite(vo));
  }
  bool ok = true;
  for (const CheckResult& r : results) {
    out << r.to_line() << '\n';
    ok = ok && r.passed;
  }
  out << (ok ? "all checks passed" : "some checks failed") << '\n';
  return ok ? kOk : kCheckFailed;
}

int cmd_shor_demo(std::size_t n, std::uint64_t seed, std::ostream& out) {
  if (n > 4) throw InvalidArgument("shor-demo supports n <= 4");
  const Field f = Field::standard(n);
  const ToyCurve toy = find_toy_curve(f);
  const CurveSpec& c = toy.curve;
  const std::uint64_t q = toy.order;
  std::mt19937_64 rng(seed);
  const std::uint64_t r = 1 + rng() % (q - 1);
  const AffinePoint P = toy.generator;
  const AffinePoint Q = scalar_mul(c, r, P);

  out << "curve " << c.to_text() << '\n';
  out << "P=" << P.to_text() << " order=" << q << " Q=" << Q.to_text() << " secret r=" << r << '\n';

  const std::vector<double> dist = shor_distribution(c, P, Q);
  const std::uint64_t M = std::uint64_t{1} << (n + 1);
  std::vector<std::uint64_t> idx(dist.size());
  for (std::uint64_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return dist[a] > dist[b]; });
  out << "u,v,probability,candidate_r\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(8, idx.size()); ++i) {
    const std::uint64_t u = idx[i] / M, v = idx[i] % M;
    const auto cand = postprocess(c, P, Q, u, v, M, q);
    out << u << ',' << v << ',' << dist[idx[i]] << ',' << (cand ? std::to_string(*cand) : "-") << '\n';
  }
  const double p_star = success_probability(c, P, Q, dist, q);
  out << "success probability per run: " << p_star << '\n';

  std::discrete_distribution<std::size_t> sampler(dist.begin(), dist.end());
  for (int attempt = 1; attempt <= 100; ++attempt) {
    const std::size_t outcome = sampler(rng);
    const auto cand = postprocess(c, P, Q, outcome / M, outcome % M, M, q);
    if (cand) {
      out << "recovered r=" << *cand % q << " after " << attempt << " run(s)\n";
      return *cand % q == r % q ? kOk : kCheckFailed;
    }
  }
  out << "no run recovered r\n";
  return kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum circuits for discrete logarithms on binary Edwards curves", "edshor"};
  app.require_subcommand(1);

  CircuitOptions synth_opts, export_opts, estimate_opts;
  std::string synth_kind, export_kind, synth_out, export_out;
  auto* synth = app.add_subcommand("synth", "Synthesize a circuit, write it and print its resources");
  synth->add_option("--kind", synth_kind, "Circuit kind")->required()->check(CLI::IsMember(kKinds));
  synth->add_option("--out", synth_out, "Circuit file (default <kind>-n<N>.circ)");
  add_circuit_options(synth, synth_opts);

  auto* exp = app.add_subcommand("export", "Print a circuit in text form");
  exp->add_option("--kind", export_kind, "Circuit kind")->required()->check(CLI::IsMember(kKinds));
  exp->add_option("--out", export_out, "Write to a file instead of stdout");
  add_circuit_options(exp, export_opts);

  std::vector<std::size_t> n_list;
  std::vector<std::string> est_kinds = {"mul", "inv", "add", "dsa-tree"};
  auto* est = app.add_subcommand("estimate", "Resource table over several n");
  est->add_option("--n-list", n_list, "Comma-separated degrees")->required()->delimiter(',')->check(CLI::Range(2, 1024));
  est->add_option("--kinds", est_kinds, "Comma-separated kinds")->delimiter(',')->check(CLI::IsMember(kKinds));
  add_circuit_options(est, estimate_opts, false);

  VerifyOptions vo;
  std::string suite = "all", file;
  std::string verify_uncompute = "clean";
  auto* ver = app.add_subcommand("verify", "Check arithmetic and circuits against reference implementations");
  ver->add_option("suite", suite, "field|curve|circuits|all")->check(CLI::IsMember({"field", "curve", "circuits", "all"}));
  ver->add_option("--n-max", vo.n_max, "Largest degree to check")->check(CLI::Range(2, 16));
  ver->add_option("--seed", vo.seed, "Random seed");
  ver->add_option("--samples", vo.samples, "Random inputs per circuit")->check(CLI::PositiveNumber);
  ver->add_option("--uncompute", verify_uncompute, "Ancilla handling")->check(CLI::IsMember({"clean", "garbage"}));
  ver->add_flag("--inject-fault", vo.inject_fault, "Replace a Toffoli by a CNOT before checking");
  ver->add_option("--file", file, "Check a circuit file using its metadata");

  std::size_t demo_n = 3;
  std::uint64_t demo_seed = 1;
  auto* demo = app.add_subcommand("shor-demo", "Exact outcome distribution and recovery on a toy curve");
  demo->add_option("--n", demo_n, "Extension degree")->check(CLI::Range(2, 4));
  demo->add_option("--seed", demo_seed, "Seed for the secret and the sampled runs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return cmd_synth(synth_kind, synth_opts, synth_out, out);
    if (*exp) return cmd_export(export_kind, export_opts, export_out, out);
    if (*est) return cmd_estimate(est_kinds, n_list, estimate_opts, out);
    if (*ver) {
      vo.uncompute = parse_uncompute(verify_uncompute);
      return cmd_verify(suite, vo, file, out);
    }
    if (*demo) return cmd_shor_demo(demo_n, demo_seed, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace edshor::cli
