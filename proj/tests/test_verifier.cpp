#include "doctest.h"
#include "entire/verifier.hpp"
#include "mutations.hpp"
#include "oracle.hpp"

using namespace entire;

namespace {
Rational from_oracle(const oracle::BR& q) { return parse_rational(oracle::str(q)); }

const ConstructionState& three_steps() {
  static const ConstructionState st = [] {
    ConstructionConfig cfg;
    cfg.steps = 3;
    return run(cfg);
  }();
  return st;
}
}  // namespace

TEST_CASE("base case verifies") {
  ConstructionState st = run(ConstructionConfig{});
  VerificationReport rep = check_invariants(st, 1);
  CHECK(rep.pass);
  CHECK(st.repaired_set.empty());
  CHECK_THROWS_AS(check_invariants(st, 2), MalformedArtifact);
}

TEST_CASE("three steps verify") {
  VerificationReport rep = verify_all(three_steps());
  CHECK_MESSAGE(rep.pass, rep.first_failure);
  CHECK(rep.steps.size() == 3);
}

TEST_CASE("tail bound") {
  PerturbationTerm t;
  t.multiplier = QPolynomial{1};
  CHECK(tail_sup_bound(2, 0, Rational(1), t) == Rational(1, 16));
  CHECK(tail_sup_bound(2, 0, Rational(1), t) == from_oracle(oracle::tail(2, 0, 1)));
  for (int n = 1; n <= 4; ++n) CHECK(tail_sup_bound(n, 0, Rational(0), t) == pow(Rational(1, n), static_cast<unsigned>(n + 3)));
  t.multiplier = QPolynomial{1, 0, 1};
  CHECK(tail_sup_bound(3, 1, Rational(10), t) == from_oracle(oracle::tail(3, 2, 10)));
}

TEST_CASE("tail bounds at R = 10 are eventually summable") {
  PerturbationTerm t;
  t.multiplier = QPolynomial{1};
  Rational prev = tail_sup_bound(30, 0, Rational(10), t);
  Rational sum = 0;
  for (int n = 31; n <= 60; ++n) {
    Rational cur = tail_sup_bound(n, 0, Rational(10), t);
    CHECK(cur < prev / 2);
    sum += cur;
    prev = cur;
  }
  CHECK(sum < 1);
}

TEST_CASE("tail premise") {
  CHECK(tail_premise_holds(QPolynomial{1, -2, 3}, Rational(10)));
  CHECK(tail_premise_holds(QPolynomial{1}, Rational(0)));
}

TEST_CASE("nonpolynomial evidence") {
  ConstructionConfig cfg;
  cfg.steps = 2;
  ConstructionState st = run(cfg);
  CHECK(nonpolynomial_evidence(st));
  CHECK(nonpolynomial_evidence(run(ConstructionConfig{})));
  std::vector<Rational> c = st.f.coeffs();
  c[2] = 0;
  st.f = QPolynomial(c);
  CHECK_FALSE(nonpolynomial_evidence(st));
}

TEST_CASE("zeroed coefficient names (v) and k") {
  Json j = to_json(three_steps());
  j["coefficients"][2] = "0";
  VerificationReport rep = verify_all(state_from_json(j));
  CHECK_FALSE(rep.pass);
  CHECK(rep.failed("(v)"));
  bool named = false;
  for (const auto& s : rep.steps) {
    for (const auto& it : s.items) {
      for (const auto& w : it.witnesses) named = named || w.find("a_2") != std::string::npos;
    }
  }
  CHECK(named);
}

TEST_CASE("each mutation is caught under the right item") {
  for (const auto& m : mutations::all()) {
    Json j = to_json(three_steps());
    m.apply(j);
    VerificationReport rep = verify_all(state_from_json(j));
    CHECK_MESSAGE(!rep.pass, m.name);
    CHECK_MESSAGE(rep.failed(m.item), m.name);
  }
}

TEST_CASE("Rouche preservation across a run") {
  PreservationReport p = rouche_preservation(three_steps());
  CHECK(p.checked > 0);
  CHECK(p.preserved == p.checked);
  CHECK(p.failures.empty());
}
