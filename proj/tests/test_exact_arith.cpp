#include "doctest.h"
#include "entire/exact_arith.hpp"

using namespace entire;

TEST_CASE("parse and print rationals") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(to_string(Rational(-3, 2)) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("gnorm") {
  CHECK(gnorm(GaussianRational(0)) == 0);
  CHECK(gnorm(GaussianRational(1, 1)) == 2);
  CHECK(gnorm(GaussianRational(Rational(3, 2), Rational(-2))) == Rational(25, 4));
}

TEST_CASE("gaussian field operations") {
  GaussianRational a(Rational(1, 2), Rational(-3));
  GaussianRational b(2, 5);
  CHECK((a * b) / b == a);
  CHECK(a - a == GaussianRational(0));
  CHECK(conj(conj(a)) == a);
  CHECK(GaussianRational::i() * GaussianRational::i() == GaussianRational(-1));
  CHECK(gnorm(a * b) == gnorm(a) * gnorm(b));
}

TEST_CASE("gaussian parse round trip") {
  for (const char* s : {"0", "1", "i", "-i", "1+i", "3/7-5/2i", "-1/2i"}) {
    GaussianRational z = parse_gaussian(s);
    CHECK(parse_gaussian(to_string(z)) == z);
  }
  CHECK(parse_gaussian("1+i") == GaussianRational(1, 1));
  CHECK(parse_gaussian("3/7-5/2i") == GaussianRational(Rational(3, 7), Rational(-5, 2)));
  CHECK(to_string(GaussianRational(1, 1)) == "1+i");
}

TEST_CASE("ball_mul") {
  auto one = ComplexBall::point(GaussianRational(1));
  auto p = ball_mul(one, one);
  CHECK(p.center == GaussianRational(1));
  CHECK(p.radius == 0);
  ComplexBall z{GaussianRational(Rational(2, 3), Rational(1, 5)), Rational(1, 7)};
  auto q = ball_mul(z, ComplexBall::point(GaussianRational(0)));
  CHECK(q.center == GaussianRational(0));
  CHECK(q.radius == 0);
}

TEST_CASE("ball_mul encloses every product of members") {
  ComplexBall a{GaussianRational(1, 2), Rational(1, 4)};
  ComplexBall b{GaussianRational(-3, Rational(1, 2)), Rational(1, 8)};
  ComplexBall prod = ball_mul(a, b);
  for (int k = 0; k < 16; ++k) {
    Rational t(k, 16);
    GaussianRational da(a.radius * (1 - t * t) / (1 + t * t), a.radius * 2 * t / (1 + t * t));
    GaussianRational db(-b.radius * 2 * t / (1 + t * t), b.radius * (1 - t * t) / (1 + t * t));
    CHECK(prod.contains((a.center + da) * (b.center + db)));
  }
}

TEST_CASE("ball_abs_bounds") {
  auto [l0, u0] = ball_abs_bounds(ComplexBall{GaussianRational(0), Rational(1)});
  CHECK(l0 == 0);
  CHECK(u0 == 1);
  auto [l1, u1] = ball_abs_bounds(ComplexBall{GaussianRational(3), Rational(1)});
  CHECK(l1 == 2);
  CHECK(u1 == 4);
  auto [l2, u2] = ball_abs_bounds(ComplexBall::point(GaussianRational(3, 4)));
  CHECK(l2 == 5);
  CHECK(u2 == 5);
}

TEST_CASE("square root brackets") {
  Rational two(2);
  Rational lo = sqrt_lower(two, 80);
  Rational hi = sqrt_upper(two, 80);
  CHECK(lo * lo <= two);
  CHECK(hi * hi >= two);
  CHECK(hi - lo <= Rational(1, 1) / pow(Rational(2), 78));
  CHECK(sqrt_lower(Rational(9, 4)) == Rational(3, 2));
}

TEST_CASE("dyadic rounding") {
  Rational x(1, 3);
  CHECK(floor_dyadic(x, 4) == Rational(5, 16));
  CHECK(ceil_dyadic(x, 4) == Rational(3, 8));
  CHECK(ceil_log2(Rational(5)) == 3);
  CHECK(ceil_log2(Rational(1, 4)) == -2);
}
