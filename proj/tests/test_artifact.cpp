#include "doctest.h"
#include "entire/artifact.hpp"

using namespace entire;

TEST_CASE("artifact round trip is byte identical") {
  ConstructionConfig cfg;
  cfg.steps = 2;
  ConstructionState st = run(cfg);
  const std::string text = serialize(st);
  ConstructionState back = parse_artifact(text);
  CHECK(serialize(back) == text);
  CHECK(back.f == st.f);
  CHECK(back.n == st.n);
}

TEST_CASE("step one artifact") {
  ConstructionState st = run(ConstructionConfig{});
  Json j = to_json(st);
  CHECK(j["coefficients"] == Json::array({"1", "1"}));
}

TEST_CASE("malformed artifacts") {
  CHECK_THROWS_AS(parse_artifact("{"), MalformedArtifact);
  CHECK_THROWS_AS(parse_artifact("{}"), MalformedArtifact);
  CHECK_THROWS_AS(parse_artifact(R"({"r": 3})"), MalformedArtifact);
  std::string text = serialize(run(ConstructionConfig{}));
  auto pos = text.find("\"1\"");
  text.replace(pos, 3, "\"1/0\"");
  CHECK_THROWS_AS(parse_artifact(text), MalformedArtifact);
}

TEST_CASE("rational and gaussian json") {
  CHECK(rational_from(rational_json(Rational(-7, 3))) == Rational(-7, 3));
  GaussianRational z(Rational(1, 2), -4);
  CHECK(gaussian_from(gaussian_json(z)) == z);
  QPolynomial p{Rational(1, 3), 0, -2};
  CHECK(polynomial_from(polynomial_json(p)) == p);
}
