#include "entire/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "entire/kernels.hpp"

namespace entire {

QPolynomial::QPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

QPolynomial::QPolynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }

QPolynomial QPolynomial::constant(Rational c) { return QPolynomial(std::vector<Rational>{std::move(c)}); }

QPolynomial QPolynomial::monomial(unsigned k, Rational c) {
  std::vector<Rational> v(k + 1);
  v[k] = std::move(c);
  return QPolynomial(std::move(v));
}

QPolynomial QPolynomial::linear_root(const Rational& root) { return QPolynomial{Rational(-root), Rational(1)}; }

Rational QPolynomial::coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

void QPolynomial::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

QPolynomial& QPolynomial::operator+=(const QPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

QPolynomial& QPolynomial::operator-=(const QPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

QPolynomial& QPolynomial::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

QPolynomial QPolynomial::shifted(unsigned k) const {
  if (is_zero()) return {};
  std::vector<Rational> v(k, Rational(0));
  v.insert(v.end(), coeffs_.begin(), coeffs_.end());
  return QPolynomial(std::move(v));
}

QPolynomial operator+(QPolynomial a, const QPolynomial& b) { return a += b; }
QPolynomial operator-(QPolynomial a, const QPolynomial& b) { return a -= b; }
QPolynomial operator*(QPolynomial a, const Rational& s) { return a *= s; }

QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<Rational> v(x.size() + y.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) v[i + j] += x[i] * y[j];
  }
  return QPolynomial(std::move(v));
}

GPoly::GPoly(const QPolynomial& p) {
  coeffs_.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) coeffs_.emplace_back(c);
}

GPoly::GPoly(std::vector<GaussianRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void GPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

GPoly shift_constant(const QPolynomial& p, const GaussianRational& c) {
  std::vector<GaussianRational> v;
  v.reserve(std::max<std::size_t>(1, p.coeffs().size()));
  for (const auto& a : p.coeffs()) v.emplace_back(a);
  if (v.empty()) v.emplace_back(0);
  v[0] -= c;
  return GPoly(std::move(v));
}

GPoly operator+(const GPoly& a, const GPoly& b) {
  std::vector<GaussianRational> v(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t k = 0; k < a.coeffs().size(); ++k) v[k] += a.coeffs()[k];
  for (std::size_t k = 0; k < b.coeffs().size(); ++k) v[k] += b.coeffs()[k];
  return GPoly(std::move(v));
}

GPoly derivative(const GPoly& p) {
  const auto& c = p.coeffs();
  if (c.size() <= 1) return {};
  std::vector<GaussianRational> v;
  v.reserve(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) v.push_back(c[k] * GaussianRational(Rational(static_cast<long>(k))));
  return GPoly(std::move(v));
}

GaussianRational eval_exact(const QPolynomial& p, const GaussianRational& z) {
  const auto& c = p.coeffs();
  if (c.empty()) return {};
  if (z.is_real()) return {eval_exact(p, z.re), Rational(0)};
  GaussianRational acc(c.back());
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    acc *= z;
    acc.re += c[k];
  }
  return acc;
}

Rational eval_exact(const QPolynomial& p, const Rational& x) {
  const auto& c = p.coeffs();
  if (c.empty()) return 0;
  Rational acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    acc *= x;
    acc += c[k];
  }
  return acc;
}

GaussianRational eval_exact(const GPoly& p, const GaussianRational& z) {
  const auto& c = p.coeffs();
  if (c.empty()) return {};
  GaussianRational acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    acc *= z;
    acc += c[k];
  }
  return acc;
}

ComplexBall eval_ball(const GPoly& p, const ComplexBall& z, unsigned prec) {
  if (prec == 0) {
    Rational mag = abs(z.center.re) + abs(z.center.im) + z.radius;
    long log_mag = sgn(mag) == 0 ? 0 : ceil_log2(mag);
    long log_inv = sgn(z.radius) == 0 ? 0 : -ceil_log2(z.radius);
    prec = kernels::choose_precision(p.degree(), log_mag, log_inv);
  }
  kernels::FixedPoly fp = kernels::make_fixed(p, prec);
  return kernels::from_fixed(kernels::horner(fp, kernels::to_fixed(z, prec)), prec);
}

ComplexBall eval_ball_reference(const GPoly& p, const ComplexBall& z) {
  const auto& c = p.coeffs();
  if (c.empty()) return ComplexBall::point(GaussianRational(0));
  ComplexBall acc = ComplexBall::point(c.back());
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    acc = ball_add(ball_mul(acc, z), ComplexBall::point(c[k]));
  }
  return acc;
}

Rational length(const QPolynomial& p) {
  Rational sum = 0;
  for (const auto& c : p.coeffs()) sum += abs(c);
  return sum;
}

QPolynomial derivative(const QPolynomial& p) {
  const auto& c = p.coeffs();
  if (c.size() <= 1) return {};
  std::vector<Rational> v(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) v[k - 1] = c[k] * static_cast<long>(k);
  return QPolynomial(std::move(v));
}

QPolynomial from_conjugate_closed_roots(std::span<const GaussianRational> taus) {
  std::vector<GaussianRational> distinct;
  for (const auto& t : taus) {
    if (std::find(distinct.begin(), distinct.end(), t) == distinct.end()) distinct.push_back(t);
  }
  QPolynomial result = QPolynomial::constant(1);
  for (const auto& t : distinct) {
    if (t.is_real()) {
      QPolynomial lin = QPolynomial::linear_root(t.re);
      result = result * lin * lin;
      continue;
    }
    if (std::find(distinct.begin(), distinct.end(), conj(t)) == distinct.end()) {
      throw std::invalid_argument("root set is not closed under conjugation: " + to_string(t));
    }
    if (sgn(t.im) < 0) continue;
    // (z - t)(z - conj t) = z^2 - 2 re(t) z + |t|^2
    QPolynomial quad{gnorm(t), Rational(-2 * t.re), Rational(1)};
    result = result * quad * quad;
  }
  return result;
}

std::pair<QPolynomial, QPolynomial> divmod(const QPolynomial& a, const QPolynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  const auto& d = b.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {QPolynomial{}, a};
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - db + 1));
  const Rational& lead = d.back();
  for (int k = a.degree(); k >= db; --k) {
    Rational q = rem[static_cast<std::size_t>(k)] / lead;
    if (sgn(q) == 0) continue;
    quot[static_cast<std::size_t>(k - db)] = q;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= q * d[static_cast<std::size_t>(j)];
  }
  return {QPolynomial(std::move(quot)), QPolynomial(std::move(rem))};
}

bool divides(const QPolynomial& p, const QPolynomial& q) { return divmod(q, p).second.is_zero(); }

}  // namespace entire
