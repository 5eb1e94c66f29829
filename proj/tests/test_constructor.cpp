#include "doctest.h"
#include "entire/constructor.hpp"
#include "oracle.hpp"

using namespace entire;

namespace {
Rational from_oracle(const oracle::BR& q) { return parse_rational(oracle::str(q)); }
}  // namespace

TEST_CASE("nu_bound matches hand values") {
  CHECK(nu_bound(2, 1, QPolynomial::constant(1), 4) == from_oracle(oracle::nu(1, 4, 2, 0)));
  CHECK(nu_bound(2, 1, QPolynomial::constant(1), 4) == Rational(1, 128));
  QPolynomial L6{1, -2, 3};
  CHECK(nu_bound(1, 2, L6, 11) == from_oracle(oracle::nu(6, 11, 1, 2)));
  CHECK(nu_bound(1, 2, L6, 11) == Rational(1, 66));
  CHECK(nu_bound(1, 0, QPolynomial{2, 0, 0, 5}, 7) == Rational(1, 49));
}

TEST_CASE("admissibility bound excludes eps = 1 for n >= 2") {
  for (int n = 2; n <= 5; ++n) CHECK(nu_bound(n, 0, QPolynomial::constant(1), s_tilde(n, QPolynomial{1, 1}, QPolynomial{1})) < 1);
}

TEST_CASE("s_tilde at step one") {
  CHECK(s_tilde(1, QPolynomial{1, 1}, QPolynomial{1}) == oracle::s_tilde(1, 1, 0));
  CHECK(s_tilde(1, QPolynomial{1, 1}, QPolynomial{1}) == 11);
}

TEST_CASE("solve_linear_target") {
  auto [eps, delta] = solve_linear_target(QPolynomial{1, 1}, GaussianRational(2), GaussianRational(3) + Rational(1, 8),
                                          QPolynomial{1}, 3);
  CHECK(eps == from_oracle(oracle::solve_real({1, 1}, 2, oracle::BR(25, 8), {1}, 3)));
  CHECK(eps == Rational(1, 64));
  CHECK(delta == 0);
  auto [e2, d2] = solve_linear_target(QPolynomial{0, 0, 1}, GaussianRational(Rational(3, 2)), GaussianRational(2),
                                      QPolynomial{1}, 3);
  CHECK(e2 == from_oracle(oracle::solve_real({0, 0, 1}, oracle::BR(3, 2), 2, {1}, 3)));
  CHECK(e2 == Rational(-2, 27));
  CHECK(eval_exact(QPolynomial{0, 0, 1} + QPolynomial::monomial(3, e2), Rational(3, 2)) == Rational(2));
}

TEST_CASE("solve_linear_target two-parameter round trip") {
  const GaussianRational I = GaussianRational::i();
  QPolynomial f{1, 1};
  GaussianRational y(Rational(5, 4), Rational(7, 8));
  auto [eps, delta] = solve_linear_target(f, I, y, QPolynomial{1}, 3);
  QPolynomial g = f + QPolynomial{eps, delta}.shifted(3);
  CHECK(eval_exact(g, I) == y);
  CHECK_THROWS_AS(solve_linear_target(f, GaussianRational(1), y, QPolynomial{-1, 1}, 3), std::domain_error);
}

TEST_CASE("pick_below") {
  CHECK(pick_below(Rational(1, 11), 0, 1, 0) == from_oracle(oracle::pow2_below(oracle::BR(1, 11))));
  CHECK(pick_below(Rational(2, 3), 0, 1, 0) == Rational(1, 2));
  CHECK(pick_below(Rational(1, 2), 0, 1, 0) == Rational(1, 4));
  for (std::uint64_t seed = 1; seed < 20; ++seed) {
    Rational b(3, 7);
    Rational x = pick_below(b, seed, 2, 1);
    CHECK(sgn(x) > 0);
    CHECK(x < b);
    CHECK(pick_below(b, seed, 2, 1) == x);
  }
}

TEST_CASE("init") {
  ConstructionConfig cfg;
  ConstructionState st = init(cfg);
  CHECK(st.f == QPolynomial{1, 1});
  CHECK(eval_exact(st.f, GaussianRational(0)) == GaussianRational(1));
  CHECK(st.repaired_set.empty());
  REQUIRE(st.radii.size() == 1);
  CHECK(st.radii[0] > 1);
  CHECK(st.radii[0] < 2);
  ConstructionConfig zero;
  zero.r = 0;
  CHECK_THROWS_AS(init(zero), std::invalid_argument);
}

TEST_CASE("choose_radius") {
  Rational r = choose_radius(QPolynomial{1, 1}, 1, {GaussianRational(1)}, kDefaultDepth);
  CHECK(r > 1);
  CHECK(r < 2);
  // z^2 - 9/4 has roots on |z| = 3/2, so that candidate must be skipped.
  Rational s = choose_radius(QPolynomial{Rational(-9, 4), 0, 1}, 1, {GaussianRational(0)}, kDefaultDepth);
  CHECK(s != Rational(3, 2));
  CHECK(s > 1);
  CHECK(s < 2);
}

TEST_CASE("epsilon0_upper_bound at step one") {
  ConstructionState st = init(ConstructionConfig{});
  Rational r = st.radii[0];
  Rational b = epsilon0_upper_bound(st);
  CHECK(sgn(b) > 0);
  // Here the quotient is exactly 1 / r_1.
  CHECK(b <= 1 / r);
  if (r == Rational(3, 2)) CHECK(b <= Rational(2, 3));
}

TEST_CASE("first step with seed 0") {
  ConstructionConfig cfg;
  cfg.steps = 2;
  ConstructionState st = run(cfg);
  REQUIRE(!st.perturbation_log.empty());
  const PerturbationTerm& t0 = st.perturbation_log.front();
  CHECK(t0.n == 1);
  CHECK(t0.j == 0);
  oracle::BR bound = std::min(oracle::BR(2, 3), oracle::nu(1, oracle::s_tilde(1, 1, 0), 1, 0));
  CHECK(t0.epsilon == from_oracle(oracle::pow2_below(bound)));
  CHECK(t0.epsilon == Rational(1, 16));
  CHECK(st.f.coefficient(2) != 0);
  for (const auto& t : st.perturbation_log) CHECK(sgn(std::max<Rational>(abs(t.epsilon), abs(t.delta))) > 0);
}

TEST_CASE("truncation telescopes") {
  ConstructionConfig cfg;
  cfg.steps = 3;
  ConstructionState st = run(cfg);
  CHECK(truncation(st, 3) == st.f);
  CHECK(truncation(st, 1) == QPolynomial{1, 1});
  QPolynomial f2 = truncation(st, 2);
  for (int k = 0; k < 2; ++k) CHECK(f2.coefficient(static_cast<std::size_t>(k)) == st.f.coefficient(static_cast<std::size_t>(k)));
}
