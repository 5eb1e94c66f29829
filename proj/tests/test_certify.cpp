#include "doctest.h"
#include "entire/certify.hpp"
#include "oracle.hpp"

using namespace entire;

namespace {
const GaussianRational I = GaussianRational::i();
Circle circle(Rational r) { return Circle{GaussianRational(0), std::move(r)}; }
}  // namespace

TEST_CASE("min_modulus_on_circle") {
  for (int depth : {1, 3, 8}) {
    Rational L = min_modulus_on_circle(QPolynomial{0, 1}, circle(2), depth);
    CHECK(L > 0);
    CHECK(L <= 2);
  }
  CHECK(min_modulus_on_circle(QPolynomial{0, 1}, circle(2), 6) >= 1);
  Rational L = min_modulus_on_circle(QPolynomial{-3, 1}, circle(1), 8);
  CHECK(L > 0);
  CHECK(L <= 2);
  for (int depth : {1, 4, 8}) CHECK(min_modulus_on_circle(QPolynomial{1, 0, 1}, circle(1), depth) == 0);
}

TEST_CASE("max_modulus_on_circle") {
  Rational U = max_modulus_on_circle(QPolynomial{0, 0, 1}, circle(2), 8);
  CHECK(U >= 4);
  CHECK(U <= 8);
  CHECK(max_modulus_on_circle(QPolynomial::constant(5), circle(3), 8) == 5);
  Rational V = max_modulus_on_circle(QPolynomial{1, 1}, circle(1), 8);
  CHECK(V >= 2);
  CHECK(V <= 4);
}

TEST_CASE("count_roots_in_disk") {
  CHECK(count_roots_in_disk(QPolynomial{1, 0, 1}, Disk{GaussianRational(0), 2}) == 2);
  CHECK(count_roots_in_disk(QPolynomial{1, 0, 1}, Disk{GaussianRational(0), Rational(1, 2)}) == 0);
  CHECK(count_roots_in_disk(QPolynomial{1, -2, 1}, Disk{GaussianRational(1), Rational(1, 4)}) == 2);
  CHECK_THROWS_AS(count_roots_in_disk(QPolynomial{1, 0, 1}, Disk{GaussianRational(0), 1}), BoundaryUndecidable);
}

TEST_CASE("isolate_simple_roots") {
  auto enc = isolate_simple_roots(QPolynomial{1, 0, 1}, Disk{GaussianRational(0), 2}, Rational(1, 100));
  REQUIRE(enc.size() == 2);
  int hit_i = 0;
  int hit_mi = 0;
  for (const auto& e : enc) {
    CHECK(e.multiplicity == 1);
    CHECK(e.certified_simple);
    hit_i += e.ball.contains(I);
    hit_mi += e.ball.contains(-I);
  }
  CHECK(hit_i == 1);
  CHECK(hit_mi == 1);
  auto one = isolate_simple_roots(QPolynomial{Rational(-1, 2), 1}, Disk{GaussianRational(0), 1}, Rational(1, 100));
  REQUIRE(one.size() == 1);
  CHECK(one[0].ball.contains(GaussianRational(Rational(1, 2))));
  CHECK(one[0].multiplicity == 1);
  bool obstructed = false;
  try {
    auto dbl = isolate_all_simple(QPolynomial{1, -2, 1}, Disk{GaussianRational(0), 2}, Rational(1, 100));
  } catch (const MultiplicityObstruction&) {
    obstructed = true;
  }
  CHECK(obstructed);
}

TEST_CASE("isolated roots agree with the oracle") {
  QPolynomial p{Rational(-3, 2), Rational(1, 3), 2, Rational(-1, 5), 1};
  std::vector<mpq_class> coeffs(p.coeffs().begin(), p.coeffs().end());
  auto rts = oracle::roots(oracle::to_complex(coeffs));
  auto enc = isolate_all_simple(p, Disk{GaussianRational(0), 4}, Rational(1, 1000));
  REQUIRE(enc.size() == rts.size());
  for (const auto& e : enc) {
    oracle::BC c(oracle::to_bf(e.ball.center.re), oracle::to_bf(e.ball.center.im));
    int inside = 0;
    for (const auto& r : rts) inside += abs(r - c) < oracle::to_bf(e.ball.radius);
    CHECK(inside == 1);
  }
}

TEST_CASE("dominates_on_circle") {
  CHECK(dominates_on_circle(QPolynomial{0, 1}, QPolynomial::constant(1), circle(2)));
  CHECK_FALSE(dominates_on_circle(QPolynomial{0, 1}, QPolynomial::constant(3), circle(2)));
  CHECK_FALSE(dominates_on_circle(QPolynomial{0, 1}, QPolynomial{0, 1}, circle(2)));
}

TEST_CASE("circle points are exact") {
  Circle c{GaussianRational(Rational(1, 2), -1), Rational(3, 4)};
  for (int q = 0; q < 4; ++q) {
    for (int k = 0; k <= 4; ++k) {
      GaussianRational z = circle_point(c, q, Rational(k) / 4);
      CHECK(gnorm(z - c.center) == c.radius * c.radius);
    }
  }
}
