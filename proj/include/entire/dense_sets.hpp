// Countable dense conjugate-closed subsets of C with a fixed three-phase
// enumeration: position 1 is a pinned element, positions 3n-1 and 3n are a
// nonreal conjugate pair and position 3n+1 is real.

#ifndef ENTIRE_DENSE_SETS_HPP
#define ENTIRE_DENSE_SETS_HPP

#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "entire/exact_arith.hpp"

namespace entire {

class EmptyIntersection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Constraint { any, real, nonreal };

class DenseSet {
 public:
  virtual ~DenseSet() = default;
  virtual std::string identifier() const = 0;
  /// k >= 1.
  virtual GaussianRational element_at(std::size_t k) const = 0;
  virtual bool contains(const GaussianRational& z) const = 0;
  /// An element strictly inside the ball satisfying the constraint.
  virtual GaussianRational find_near(const ComplexBall& target, Constraint c) const = 0;

  bool contains(const GaussianRational& z, Constraint c) const;
};

/// Q[i] with a pinned real first element.
class GaussianRationals final : public DenseSet {
 public:
  explicit GaussianRationals(Rational pinned = 0);

  std::string identifier() const override { return "qi"; }
  GaussianRational element_at(std::size_t k) const override;
  bool contains(const GaussianRational&) const override { return true; }
  GaussianRational find_near(const ComplexBall& target, Constraint c) const override;
  using DenseSet::contains;

  const Rational& pinned() const { return pinned_; }

  /// n-th real (n >= 1) in height order, skipping the pinned element.
  Rational real_at(std::size_t n) const;
  /// n-th nonreal element with positive imaginary part (n >= 1).
  GaussianRational upper_at(std::size_t n) const;

 private:
  Rational pinned_;
  mutable std::mutex mu_;
  mutable std::vector<Rational> reals_;
  mutable std::vector<GaussianRational> uppers_;
  mutable long real_height_ = -1;
  mutable long upper_height_ = 0;
};

/// Rationals of height max(|p|, q) == h, ordered by (q, |p|, sign).
std::vector<Rational> rationals_of_height(long h);

/// Simplest rational (least denominator, then least |numerator|) in the open interval (lo, hi).
Rational simplest_between(const Rational& lo, const Rational& hi);

/// Set lookup by identifier; only "qi" exists. Throws std::invalid_argument.
std::unique_ptr<DenseSet> make_dense_set(const std::string& id, const Rational& pinned);

}  // namespace entire

#endif  // ENTIRE_DENSE_SETS_HPP
