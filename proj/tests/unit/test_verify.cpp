#include <doctest.h>

#include "edshor/synth.hpp"
#include "edshor/verify.hpp"

using namespace edshor;

TEST_CASE("suites pass on correct code") {
  VerifyOptions o;
  o.n_max = 4;
  o.samples = 64;
  for (const auto& suite : {verify_field_suite(o), verify_curve_suite(o), verify_circuit_suite(o)}) {
    CHECK_FALSE(suite.empty());
    for (const CheckResult& r : suite) {
      CHECK_MESSAGE(r.passed, r.to_line());
      CHECK(r.cases > 0);
      CHECK(r.to_line().starts_with("PASS "));
    }
  }
  o.uncompute = gadgets::Uncompute::kGarbage;
  for (const CheckResult& r : verify_circuit_suite(o)) CHECK_MESSAGE(r.passed, r.to_line());
}

TEST_CASE("a replaced Toffoli is caught") {
  const Field f = Field::standard(4);
  const CurvePoints cp = default_curve(f);
  SynthConfig cfg{f, cp.curve};
  for (Circuit c : {synth_mul(cfg).circuit, synth_inverse(cfg).circuit, synth_point_add(cfg).circuit,
                    synth_proj_to_affine(cfg).circuit}) {
    REQUIRE(verify_circuit(c, 128, 1).passed);
    REQUIRE(inject_fault(c));
    const CheckResult r = verify_circuit(c, 128, 1);
    CHECK_FALSE(r.passed);
    CHECK(r.to_line().starts_with("FAIL "));
  }
  Circuit no_toffoli = synth_fanout(3).circuit;
  CHECK_FALSE(inject_fault(no_toffoli));
}

TEST_CASE("fault injection in the suite reports failures") {
  VerifyOptions o;
  o.n_max = 3;
  o.samples = 64;
  o.inject_fault = true;
  bool any_failed = false;
  for (const CheckResult& r : verify_circuit_suite(o)) any_failed = any_failed || !r.passed;
  CHECK(any_failed);
}

TEST_CASE("circuits without metadata are rejected") {
  Circuit c(2);
  c.append(Gate::cx(0, 1));
  CHECK_FALSE(verify_circuit(c, 64, 1).passed);
}
