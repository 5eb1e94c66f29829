// Inductive construction of truncations f_1, f_2, ... of an entire function
// with rational Taylor coefficients mapping X onto Y and pulling Y back into X.
//
// Step n turns f_n into f_{n+1} through substeps f_{n,0}, ..., f_{n,s}; each
// adds a term (eps + delta z) z^k P_{n,j}(z) with exact rational parameters.
// Substep indices are fixed: j = 0 is the Rouche-bounded eps_{n,0} term, j = 1
// the real forward target, j = 2 the nonreal forward pair, j = 3 the derivative
// guard and j = 3 + i the i-th preimage repair. Skipped substeps leave no term.

#ifndef ENTIRE_CONSTRUCTOR_HPP
#define ENTIRE_CONSTRUCTOR_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entire/certify.hpp"
#include "entire/dense_sets.hpp"
#include "entire/exact_arith.hpp"
#include "entire/polynomial.hpp"

namespace entire {

struct PerturbationTerm {
  int n = 0;
  int j = 0;
  Rational epsilon;
  Rational delta;
  int exponent = 0;
  QPolynomial multiplier;

  /// (epsilon + delta z) z^exponent multiplier(z).
  QPolynomial as_polynomial() const;
};

struct Certificate {
  std::string kind;  // rouche-margin | boundary-clear | exact-membership | derivative-nonzero | root-count
  int step = 0;
  int substep = -1;
  std::optional<Disk> region;  // circle or disk, depending on kind
  std::vector<int> betas;      // 1-based indices into the Y enumeration
  Rational lower;
  Rational upper;
  int depth = 0;
  int count = -1;
  std::optional<GaussianRational> point;
  std::optional<GaussianRational> value;
  bool recheckable = true;
};

struct RepairedPoint {
  GaussianRational point;
  int beta = 0;  // f_m(point) = beta_{beta}
  int step = 0;  // first m with point in the repaired set
};

struct TrackedDisk {
  Disk disk;
  int beta = 0;
  bool real_root = false;
  std::optional<GaussianRational> exact;
};

struct StepPlan {
  int n = 0;
  Rational r_next;
  std::vector<TrackedDisk> disks;
  int m_n = 0;
  int s_n = 0;
  int substeps = 0;  // highest substep index allowed: 3 + number of repair classes
  long s_tilde = 0;
};

struct ConstructionConfig {
  Rational r = 1;
  std::uint64_t seed = 0;
  int steps = 1;
  int depth = kDefaultDepth;
  std::string set_x = "qi";
  std::string set_y = "qi";
  bool allow_zero_r = false;
};

struct ConstructionState {
  ConstructionConfig config;
  int n = 1;
  QPolynomial f;
  QPolynomial P;
  std::vector<Rational> radii;
  std::vector<GaussianRational> forward_set;
  std::vector<RepairedPoint> repaired_set;
  std::vector<PerturbationTerm> perturbation_log;
  std::vector<Certificate> certificates;
  std::vector<StepPlan> plans;
};

class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& substep, const std::string& what)
      : std::runtime_error(substep + ": " + what), substep_(substep) {}
  const std::string& substep() const { return substep_; }

 private:
  std::string substep_;
};

class RadiusExhausted : public ConstructionError {
 public:
  explicit RadiusExhausted(const std::string& what) : ConstructionError("choose_radius", what) {}
};

/// s~_n = 3 + (3n+1) max(deg f_n, n + 1 + deg P_n).
long s_tilde(int n, const QPolynomial& f, const QPolynomial& P);
/// nu_{n,j} = 1 / (L(P_{n,j}) s~_n n^(n+3+deg P_{n,j})).
Rational nu_bound(int n, int j, const QPolynomial& multiplier, long s_tilde_n);
/// nu_m = 1 / m^(m+2+deg(h_m P_m)).
Rational nu_step(int m, int degree_hP);

/// Largest value k / 2^e strictly below `bound`, with the odd numerator k
/// drawn from (seed, n, j); seed 0 always gives k = 1.
Rational pick_below(const Rational& bound, std::uint64_t seed, int n, int j);

/// The Y (or X) index list beta_1..beta_count.
std::vector<GaussianRational> enumerate_prefix(const DenseSet& set, int count);

ConstructionState init(const ConstructionConfig& config);

/// Rational r in (n, n+1) with |f - beta| certified positive on |z| = r for every beta.
Rational choose_radius(const QPolynomial& f, int n, const std::vector<GaussianRational>& betas, int depth);

/// Certified positive rational below min_i min|f_n - beta_i| / max|z^(n+1) P_n| on |z| = r_n.
Rational epsilon0_upper_bound(const ConstructionState& state);

/// eps + delta alpha = (y - f(alpha)) / (alpha^exponent P(alpha)); delta = 0 for real alpha.
/// Throws std::domain_error if P(alpha) = 0 or alpha = 0, or if a real alpha gives a nonreal quotient.
std::pair<Rational, Rational> solve_linear_target(const QPolynomial& f, const GaussianRational& alpha,
                                                  const GaussianRational& y, const QPolynomial& P, int exponent);

/// Advances state from f_n to f_{n+1}.
void run_step(ConstructionState& state);

/// init followed by steps - 1 calls to run_step.
ConstructionState run(const ConstructionConfig& config);

/// f_m reconstructed from the log: z + r plus every term with n < m.
QPolynomial truncation(const ConstructionState& state, int m);

}  // namespace entire

#endif  // ENTIRE_CONSTRUCTOR_HPP
