// Fixed-point ball kernels for polynomial evaluation.
//
// A FixedBall stores integers (re, im, rad) meaning the disk centered at
// (re + i*im) / 2^prec with radius rad / 2^prec. Every operation rounds the
// center to the grid and pads the radius, so enclosures stay sound while the
// operand sizes stay bounded.
//
// eval_batch() is the OpenMP path; eval_batch_serial() is the reference it is
// tested against. Both write result k from input k only, so the output does
// not depend on scheduling.

#ifndef ENTIRE_KERNELS_HPP
#define ENTIRE_KERNELS_HPP

#include <span>
#include <vector>

#include "entire/exact_arith.hpp"
#include "entire/polynomial.hpp"

namespace entire::kernels {

struct FixedBall {
  Integer re;
  Integer im;
  Integer rad;

  /// Certified: no point of the ball is zero.
  bool excludes_zero() const;
  /// floor(|center|) in grid units, minus rad; clamped at 0.
  Integer abs_lower() const;
  /// ceil(|center|) in grid units, plus rad.
  Integer abs_upper() const;
};

struct FixedPoly {
  unsigned prec = 0;
  std::vector<Integer> re;
  std::vector<Integer> im;
  std::vector<Integer> err;

  int degree() const { return static_cast<int>(re.size()) - 1; }
};

FixedPoly make_fixed(const GPoly& p, unsigned prec);
FixedBall to_fixed(const ComplexBall& b, unsigned prec);
ComplexBall from_fixed(const FixedBall& b, unsigned prec);
Rational fixed_to_rational(const Integer& mantissa, unsigned prec);

/// Working precision for evaluating a degree-`degree` polynomial on points of
/// modulus <= 2^log2_magnitude with enclosures of radius about 2^-log2_inv_radius.
unsigned choose_precision(int degree, long log2_magnitude, long log2_inv_radius);

FixedBall horner(const FixedPoly& p, const FixedBall& z);

void eval_batch_serial(const FixedPoly& p, std::span<const FixedBall> points, std::span<FixedBall> out);
void eval_batch(const FixedPoly& p, std::span<const FixedBall> points, std::span<FixedBall> out);

}  // namespace entire::kernels

#endif  // ENTIRE_KERNELS_HPP
