// Single-field corruptions of a serialized artifact, each paired with the
// invariant the verifier must name.

#ifndef ENTIRE_TEST_MUTATIONS_HPP
#define ENTIRE_TEST_MUTATIONS_HPP

#include <functional>
#include <string>
#include <vector>

#include "entire/artifact.hpp"

namespace mutations {

using entire::Json;

struct Mutation {
  std::string name;
  std::string item;
  std::function<void(Json&)> apply;
};

inline Json& term(Json& j, int n, int jj) {
  for (auto& t : j["perturbations"]) {
    if (t["n"] == n && t["j"] == jj) return t;
  }
  throw std::runtime_error("no such term");
}

inline std::vector<Mutation> all() {
  return {
      {"coefficient zeroed", "(v)", [](Json& j) { j["coefficients"][2] = "0"; }},
      {"epsilon doubled", "(iv)",
       [](Json& j) {
         auto& t = term(j, 1, 0);
         t["epsilon"] = entire::to_string(entire::parse_rational(t["epsilon"].get<std::string>()) * 2);
       }},
      {"radius moved outside (n, n+1)", "(vi)", [](Json& j) { j["radii"][1] = "7/2"; }},
      {"P-divisibility broken", "(ii)",
       [](Json& j) {
         auto& c = term(j, 1, 2)["multiplier"]["coeffs"][0];
         c = entire::to_string(entire::parse_rational(c.get<std::string>()) + 1);
       }},
      {"membership swapped", "(iii)",
       [](Json& j) {
         Json a = j["forward_set"][0];
         j["forward_set"][0] = j["repaired_set"][0]["point"];
         j["repaired_set"][0]["point"] = a;
       }},
      {"derivative point forged", "(iii)",
       [](Json& j) {
         for (auto& c : j["certificates"]) {
           if (c["kind"] == "derivative-nonzero") {
             c["point"] = entire::gaussian_json(entire::GaussianRational(5));
             return;
           }
         }
         throw std::runtime_error("no derivative certificate");
       }},
  };
}

}  // namespace mutations

#endif  // ENTIRE_TEST_MUTATIONS_HPP
