// Exact rational and Gaussian-rational arithmetic, plus complex balls with
// rational centers and outward-rounded radii.

#ifndef ENTIRE_EXACT_ARITH_HPP
#define ENTIRE_EXACT_ARITH_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>

namespace entire {

using Integer = mpz_class;
using Rational = mpq_class;

/// Default number of fractional bits used when bracketing square roots.
inline constexpr unsigned kDefaultSqrtBits = 64;

/// Parses "p", "-p" or "p/q" (base 10). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

Rational pow(const Rational& base, unsigned exponent);
Integer pow(const Integer& base, unsigned exponent);

/// Largest multiple of 2^-bits that is <= x.
Rational floor_dyadic(const Rational& x, unsigned bits);
/// Smallest multiple of 2^-bits that is >= x.
Rational ceil_dyadic(const Rational& x, unsigned bits);

/// Dyadic lower/upper bounds of sqrt(x) for x >= 0 with `bits` fractional bits.
Rational sqrt_lower(const Rational& x, unsigned bits = kDefaultSqrtBits);
Rational sqrt_upper(const Rational& x, unsigned bits = kDefaultSqrtBits);

/// Smallest k with |x| <= 2^k. Requires x != 0.
long ceil_log2(const Rational& x);

/// Exact element of Q[i].
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational real) : re(std::move(real)) {}  // NOLINT: implicit on purpose
  GaussianRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}
  GaussianRational(long real) : re(real) {}  // NOLINT

  bool is_real() const { return sgn(im) == 0; }
  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  static GaussianRational i() { return {Rational(0), Rational(1)}; }
};

GaussianRational operator+(GaussianRational a, const GaussianRational& b);
GaussianRational operator-(GaussianRational a, const GaussianRational& b);
GaussianRational operator*(GaussianRational a, const GaussianRational& b);
GaussianRational operator/(GaussianRational a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a);
bool operator==(const GaussianRational& a, const GaussianRational& b);

/// Lexicographic (re, im); used only for deterministic ordering.
bool lex_less(const GaussianRational& a, const GaussianRational& b);

GaussianRational conj(const GaussianRational& q);
/// re^2 + im^2, exact.
Rational gnorm(const GaussianRational& q);
GaussianRational pow(const GaussianRational& base, unsigned exponent);

/// "a", "bi", "a+bi", "a-bi"; unit imaginary parts print as "i" / "-i".
std::string to_string(const GaussianRational& q);
/// Inverse of to_string; also accepts "a+b*i" and whitespace. Throws std::invalid_argument.
GaussianRational parse_gaussian(std::string_view text);

/// Closed complex disk {z : |z - center| <= radius}.
struct ComplexBall {
  GaussianRational center;
  Rational radius;

  static ComplexBall point(GaussianRational c) { return {std::move(c), Rational(0)}; }

  bool contains(const GaussianRational& z) const;
  /// Certified: true only if 0 lies in the closed ball.
  bool contains_zero() const;
};

ComplexBall ball_add(const ComplexBall& a, const ComplexBall& b);
ComplexBall ball_sub(const ComplexBall& a, const ComplexBall& b);
ComplexBall ball_mul(const ComplexBall& a, const ComplexBall& b, unsigned bits = kDefaultSqrtBits);
/// (lower, upper) with lower <= |x| <= upper for every x in the ball.
std::pair<Rational, Rational> ball_abs_bounds(const ComplexBall& a, unsigned bits = kDefaultSqrtBits);

}  // namespace entire

#endif  // ENTIRE_EXACT_ARITH_HPP
