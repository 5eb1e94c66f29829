// Dense exact-coefficient polynomials.

#ifndef ENTIRE_POLYNOMIAL_HPP
#define ENTIRE_POLYNOMIAL_HPP

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "entire/exact_arith.hpp"

namespace entire {

/// Polynomial with rational coefficients; coeffs()[k] is the coefficient of z^k.
/// Trailing zeros are always trimmed, so the zero polynomial has no coefficients
/// and degree() == -1.
class QPolynomial {
 public:
  QPolynomial() = default;
  explicit QPolynomial(std::vector<Rational> coeffs);
  QPolynomial(std::initializer_list<Rational> coeffs);

  static QPolynomial constant(Rational c);
  static QPolynomial monomial(unsigned k, Rational c = 1);
  /// z - root (root must be real).
  static QPolynomial linear_root(const Rational& root);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  /// Coefficient of z^k; zero past the degree.
  Rational coefficient(std::size_t k) const;

  QPolynomial& operator+=(const QPolynomial& o);
  QPolynomial& operator-=(const QPolynomial& o);
  QPolynomial& operator*=(const Rational& s);

  /// Multiplication by z^k.
  QPolynomial shifted(unsigned k) const;

  friend bool operator==(const QPolynomial& a, const QPolynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

QPolynomial operator+(QPolynomial a, const QPolynomial& b);
QPolynomial operator-(QPolynomial a, const QPolynomial& b);
QPolynomial operator*(const QPolynomial& a, const QPolynomial& b);
QPolynomial operator*(QPolynomial a, const Rational& s);

/// Polynomial with Gaussian-rational coefficients. Shifted targets f - beta
/// with non-real beta live here; every QPolynomial converts implicitly.
class GPoly {
 public:
  GPoly() = default;
  GPoly(const QPolynomial& p);  // NOLINT: implicit on purpose
  explicit GPoly(std::vector<GaussianRational> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<GaussianRational>& coeffs() const { return coeffs_; }

 private:
  void trim();
  std::vector<GaussianRational> coeffs_;
};

/// p - c.
GPoly shift_constant(const QPolynomial& p, const GaussianRational& c);
GPoly operator+(const GPoly& a, const GPoly& b);
GPoly derivative(const GPoly& p);

GaussianRational eval_exact(const QPolynomial& p, const GaussianRational& z);
Rational eval_exact(const QPolynomial& p, const Rational& x);
GaussianRational eval_exact(const GPoly& p, const GaussianRational& z);

/// Interval extension at the given fixed-point precision (0 picks one from
/// the degree and the magnitude of the ball). Always contains p(x) for x in z.
ComplexBall eval_ball(const GPoly& p, const ComplexBall& z, unsigned prec = 0);
/// Serial reference: Horner over rational-center balls (ball_mul/ball_add).
ComplexBall eval_ball_reference(const GPoly& p, const ComplexBall& z);

/// Sum of absolute values of the coefficients.
Rational length(const QPolynomial& p);
QPolynomial derivative(const QPolynomial& p);

/// prod (z - tau)^2 over the distinct taus. Throws std::invalid_argument if the
/// set is not closed under conjugation.
QPolynomial from_conjugate_closed_roots(std::span<const GaussianRational> taus);

/// Quotient and remainder of a / b over Q. Throws std::domain_error if b == 0.
std::pair<QPolynomial, QPolynomial> divmod(const QPolynomial& a, const QPolynomial& b);
/// True iff p divides q exactly. Throws std::domain_error if p == 0.
bool divides(const QPolynomial& p, const QPolynomial& q);

}  // namespace entire

#endif  // ENTIRE_POLYNOMIAL_HPP
