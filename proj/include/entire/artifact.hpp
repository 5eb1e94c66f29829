// JSON form of a construction result. Every number is an exact rational
// string; the file alone is enough to re-verify the construction.

#ifndef ENTIRE_ARTIFACT_HPP
#define ENTIRE_ARTIFACT_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "entire/constructor.hpp"
#include "json.hpp"

namespace entire {

using Json = nlohmann::ordered_json;

class MalformedArtifact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json rational_json(const Rational& q);
Json gaussian_json(const GaussianRational& z);
Json polynomial_json(const QPolynomial& p);
Rational rational_from(const Json& j);
GaussianRational gaussian_from(const Json& j);
QPolynomial polynomial_from(const Json& j);

Json to_json(const ConstructionState& state);
/// Throws MalformedArtifact.
ConstructionState state_from_json(const Json& j);

std::string serialize(const ConstructionState& state);
/// Throws MalformedArtifact on syntax or schema errors.
ConstructionState parse_artifact(std::string_view text);

}  // namespace entire

#endif  // ENTIRE_ARTIFACT_HPP
