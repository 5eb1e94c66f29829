#include "entire/exact_arith.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace entire {

namespace {

std::string strip(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '*') out.push_back(ch);
  }
  return out;
}

bool valid_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Integer parse_integer(std::string_view s) {
  if (!valid_integer(s)) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  if (s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = strip(text);
  auto slash = s.find('/');
  Integer num = parse_integer(std::string_view(s).substr(0, slash));
  Integer den = 1;
  if (slash != std::string::npos) den = parse_integer(std::string_view(s).substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  out.canonicalize();
  return out;
}

Integer pow(const Integer& base, unsigned exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Rational floor_dyadic(const Rational& x, unsigned bits) {
  Integer scaled = x.get_num() << bits;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  Rational out(q, Integer(1) << bits);
  out.canonicalize();
  return out;
}

Rational ceil_dyadic(const Rational& x, unsigned bits) {
  Integer scaled = x.get_num() << bits;
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  Rational out(q, Integer(1) << bits);
  out.canonicalize();
  return out;
}

Rational sqrt_lower(const Rational& x, unsigned bits) {
  if (sgn(x) < 0) throw std::domain_error("sqrt_lower of a negative rational");
  Integer scaled = x.get_num() << (2 * bits);
  Integer n;
  mpz_fdiv_q(n.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  Integer s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  Rational out(s, Integer(1) << bits);
  out.canonicalize();
  return out;
}

Rational sqrt_upper(const Rational& x, unsigned bits) {
  if (sgn(x) < 0) throw std::domain_error("sqrt_upper of a negative rational");
  Integer scaled = x.get_num() << (2 * bits);
  Integer n;
  mpz_cdiv_q(n.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  Integer s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  if (s * s < n) s += 1;
  Rational out(s, Integer(1) << bits);
  out.canonicalize();
  return out;
}

long ceil_log2(const Rational& x) {
  if (sgn(x) == 0) throw std::domain_error("ceil_log2 of zero");
  Integer a = abs(x.get_num());
  const Integer& b = x.get_den();
  long k = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 2));
  // |x| <= 2^k  <=>  a <= b * 2^k
  auto le = [&](long e) {
    if (e >= 0) return a <= (b << static_cast<unsigned long>(e));
    return (a << static_cast<unsigned long>(-e)) <= b;
  };
  while (!le(k)) ++k;
  while (le(k - 1)) --k;
  return k;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (o.is_real()) {
    re *= o.re;
    im *= o.re;
    return *this;
  }
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  Rational n = gnorm(o);
  if (sgn(n) == 0) throw std::domain_error("division by zero Gaussian rational");
  *this *= conj(o);
  re /= n;
  im /= n;
  return *this;
}

GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
GaussianRational operator-(const GaussianRational& a) { return {Rational(-a.re), Rational(-a.im)}; }

bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }

bool lex_less(const GaussianRational& a, const GaussianRational& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

GaussianRational conj(const GaussianRational& q) { return {q.re, Rational(-q.im)}; }

Rational gnorm(const GaussianRational& q) { return q.re * q.re + q.im * q.im; }

GaussianRational pow(const GaussianRational& base, unsigned exponent) {
  GaussianRational result(1);
  GaussianRational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

std::string to_string(const GaussianRational& q) {
  if (q.is_real()) return to_string(q.re);
  std::string imag;
  Rational mag = abs(q.im);
  if (mag != 1) imag = to_string(mag);
  imag += "i";
  if (sgn(q.re) == 0) return (sgn(q.im) < 0 ? "-" : "") + imag;
  return to_string(q.re) + (sgn(q.im) < 0 ? "-" : "+") + imag;
}

GaussianRational parse_gaussian(std::string_view text) {
  std::string s = strip(text);
  if (s.empty()) throw std::invalid_argument("empty Gaussian rational");
  if (s.back() != 'i') return {parse_rational(s), Rational(0)};
  s.pop_back();
  // Split at the last sign that starts the imaginary part.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/') {
      split = k;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  Rational im;
  if (im_part.empty() || im_part == "+") {
    im = 1;
  } else if (im_part == "-") {
    im = -1;
  } else {
    im = parse_rational(im_part);
  }
  Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part);
  return {re, im};
}

bool ComplexBall::contains(const GaussianRational& z) const { return gnorm(z - center) <= radius * radius; }

bool ComplexBall::contains_zero() const { return gnorm(center) <= radius * radius; }

ComplexBall ball_add(const ComplexBall& a, const ComplexBall& b) { return {a.center + b.center, a.radius + b.radius}; }

ComplexBall ball_sub(const ComplexBall& a, const ComplexBall& b) { return {a.center - b.center, a.radius + b.radius}; }

ComplexBall ball_mul(const ComplexBall& a, const ComplexBall& b, unsigned bits) {
  ComplexBall out;
  out.center = a.center * b.center;
  Rational rad = a.radius * b.radius;
  if (sgn(b.radius) != 0) rad += sqrt_upper(gnorm(a.center), bits) * b.radius;
  if (sgn(a.radius) != 0) rad += sqrt_upper(gnorm(b.center), bits) * a.radius;
  out.radius = rad;
  return out;
}

std::pair<Rational, Rational> ball_abs_bounds(const ComplexBall& a, unsigned bits) {
  Rational n = gnorm(a.center);
  Rational lower = sqrt_lower(n, bits) - a.radius;
  if (sgn(lower) < 0) lower = 0;
  Rational upper = sqrt_upper(n, bits) + a.radius;
  return {lower, upper};
}

}  // namespace entire
