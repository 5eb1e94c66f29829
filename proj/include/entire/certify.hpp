// Certified modulus bounds on circles, root counting in disks and simple-root
// isolation. Everything here is a Rouché-style argument carried out in ball
// arithmetic: a bound or count is returned only if every enclosure used to
// derive it is sound.

#ifndef ENTIRE_CERTIFY_HPP
#define ENTIRE_CERTIFY_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "entire/exact_arith.hpp"
#include "entire/polynomial.hpp"

namespace entire {

struct Circle {
  GaussianRational center;
  Rational radius;
};

struct Disk {
  GaussianRational center;
  Rational radius;

  Circle boundary() const { return {center, radius}; }
};

struct RootEnclosure {
  ComplexBall ball;
  int multiplicity = 1;
  bool certified_simple = false;
};

/// A root lies on (or too close to) a contour for the refinement budget.
class BoundaryUndecidable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cluster of roots could not be separated down to the requested tolerance.
class MultiplicityObstruction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultDepth = 8;
inline constexpr int kMaxDepth = 20;

/// L >= 0 with |p(z)| >= L on the circle; 0 if positivity is not certified.
/// Arcs whose image ball contains 0 are split up to kMaxDepth.
Rational min_modulus_on_circle(const GPoly& p, const Circle& c, int depth = kDefaultDepth);

/// U with |p(z)| <= U on the circle.
Rational max_modulus_on_circle(const GPoly& p, const Circle& c, int depth = kDefaultDepth);

/// Number of roots of p in the open disk, with multiplicity, by a certified
/// winding number. Throws BoundaryUndecidable if the boundary cannot be
/// certified root-free within kMaxDepth.
int count_roots_in_disk(const GPoly& p, const Disk& d);

/// Pairwise-disjoint enclosures inside d whose multiplicities sum to the
/// number of roots in d. A certified_simple enclosure has a certified count of
/// exactly one on its ball. Enclosure radii are at most `tol`.
std::vector<RootEnclosure> isolate_simple_roots(const GPoly& p, const Disk& d, const Rational& tol);

/// Same as isolate_simple_roots but throws MultiplicityObstruction if some
/// enclosure is not certified simple.
std::vector<RootEnclosure> isolate_all_simple(const GPoly& p, const Disk& d, const Rational& tol);

/// True only if a certified upper bound of |pert| is strictly below a
/// certified lower bound of |base| on the circle (Rouché applies).
bool dominates_on_circle(const GPoly& base, const GPoly& pert, const Circle& c, int depth = kDefaultDepth);

/// Newton iteration from `start`, rounded to 2^-bits after every step. Not a
/// certificate: callers verify what they build from the result.
GaussianRational newton_refine(const GPoly& p, const GaussianRational& start, unsigned bits);

/// Exact point of the circle for parameter t in [0, 1] on quadrant q (0..3).
GaussianRational circle_point(const Circle& c, int quadrant, const Rational& t);

}  // namespace entire

#endif  // ENTIRE_CERTIFY_HPP
