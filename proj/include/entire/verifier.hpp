// Independent re-verification of a construction artifact. The truncations are
// rebuilt from the perturbation log; stored certificates are compared against
// recomputed values, never trusted.

#ifndef ENTIRE_VERIFIER_HPP
#define ENTIRE_VERIFIER_HPP

#include <string>
#include <vector>

#include "entire/artifact.hpp"
#include "entire/constructor.hpp"

namespace entire {

struct ItemResult {
  std::string item;  // "(i)" .. "(vi)" or "telescoping"
  bool pass = true;
  std::vector<std::string> witnesses;
};

struct MarginRecheck {
  int step = 0;
  Circle circle;
  Rational lower;
  Rational upper;
  bool pass = false;
};

struct TailBound {
  int n = 0;
  int j = 0;
  Rational R;
  Rational bound;
  bool premise = false;
};

struct StepReport {
  int m = 0;
  std::vector<ItemResult> items;
  std::vector<MarginRecheck> margins;
  std::vector<TailBound> tails;
};

struct VerificationReport {
  std::vector<StepReport> steps;
  bool pass = true;
  std::string first_failure;  // "m=<m> <item>: <witness>"

  /// True if `item` failed at some step.
  bool failed(const std::string& item) const;
  Json to_json() const;
};

struct VerifyOptions {
  int depth = kDefaultDepth;
  bool recheck_margins = true;
  Rational tail_radius = 10;
};

/// Items (i)-(vi) at stage m (1 <= m <= steps).
VerificationReport check_invariants(const ConstructionState& result, int m, const VerifyOptions& opts = {});
/// Every stage 1..steps.
VerificationReport verify_all(const ConstructionState& result, const VerifyOptions& opts = {});

/// (R+1)/n * (max(1,R)/n)^(n+2+deg P_{n,j}).
Rational tail_sup_bound(int n, int j, const Rational& R, const PerturbationTerm& term);
/// |P(z)| <= L(P) max(1,|z|)^deg P at exact sample points of |z| < R.
bool tail_premise_holds(const QPolynomial& P, const Rational& R);

/// a_k != 0 for 1 <= k <= m.
bool nonpolynomial_evidence(const ConstructionState& result);

struct PreservationReport {
  int checked = 0;
  int preserved = 0;
  std::vector<std::string> failures;
};

/// For every applied term, root counts of f - beta_i inside each tracked circle
/// before and after the term.
PreservationReport rouche_preservation(const ConstructionState& result, int depth = kDefaultDepth);

}  // namespace entire

#endif  // ENTIRE_VERIFIER_HPP
