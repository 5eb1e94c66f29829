#include "entire/kernels.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>

namespace entire::kernels {

namespace {

// floor(v / 2^p); returns 1 if the division was inexact, else 0.
int shift_floor(Integer& out, const Integer& v, unsigned p) {
  mpz_fdiv_q_2exp(out.get_mpz_t(), v.get_mpz_t(), p);
  return mpz_divisible_2exp_p(v.get_mpz_t(), p) ? 0 : 1;
}

// floor(x * 2^p); returns 1 if inexact.
int scale_floor(Integer& out, const Rational& x, unsigned p) {
  Integer scaled = x.get_num() << p;
  mpz_fdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  return mpz_divisible_p(scaled.get_mpz_t(), x.get_den_mpz_t()) ? 0 : 1;
}

Integer isqrt_norm(const Integer& re, const Integer& im) {
  Integer n = re * re + im * im;
  Integer s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  return s;
}

}  // namespace

bool FixedBall::excludes_zero() const { return re * re + im * im > rad * rad; }

Integer FixedBall::abs_lower() const {
  Integer s = isqrt_norm(re, im) - rad;
  if (sgn(s) < 0) s = 0;
  return s;
}

Integer FixedBall::abs_upper() const { return isqrt_norm(re, im) + 1 + rad; }

FixedPoly make_fixed(const GPoly& p, unsigned prec) {
  FixedPoly out;
  out.prec = prec;
  const auto& c = p.coeffs();
  out.re.resize(c.size());
  out.im.resize(c.size());
  out.err.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    int inexact = scale_floor(out.re[k], c[k].re, prec);
    inexact += scale_floor(out.im[k], c[k].im, prec);
    out.err[k] = inexact;
  }
  return out;
}

FixedBall to_fixed(const ComplexBall& b, unsigned prec) {
  FixedBall out;
  int inexact = scale_floor(out.re, b.center.re, prec);
  inexact += scale_floor(out.im, b.center.im, prec);
  Integer scaled = b.radius.get_num() << prec;
  mpz_cdiv_q(out.rad.get_mpz_t(), scaled.get_mpz_t(), b.radius.get_den_mpz_t());
  out.rad += inexact;
  return out;
}

Rational fixed_to_rational(const Integer& mantissa, unsigned prec) {
  Rational q(mantissa, Integer(1) << prec);
  q.canonicalize();
  return q;
}

ComplexBall from_fixed(const FixedBall& b, unsigned prec) {
  return {GaussianRational(fixed_to_rational(b.re, prec), fixed_to_rational(b.im, prec)), fixed_to_rational(b.rad, prec)};
}

unsigned choose_precision(int degree, long log2_magnitude, long log2_inv_radius) {
  long bits = 96;
  bits += static_cast<long>(std::max(degree, 0)) * std::max(log2_magnitude, 0L);
  bits += std::max(log2_inv_radius, 0L);
  return static_cast<unsigned>(bits);
}

FixedBall horner(const FixedPoly& p, const FixedBall& z) {
  FixedBall acc;
  if (p.re.empty()) {
    acc.re = 0;
    acc.im = 0;
    acc.rad = 0;
    return acc;
  }
  const unsigned prec = p.prec;
  const std::size_t d = p.re.size() - 1;
  acc.re = p.re[d];
  acc.im = p.im[d];
  acc.rad = p.err[d];

  const Integer z_abs = isqrt_norm(z.re, z.im) + 1;
  const bool z_exact = sgn(z.rad) == 0;
  Integer t_re;
  Integer t_im;
  Integer t_rad;
  Integer tmp;
  for (std::size_t k = d; k-- > 0;) {
    // Center: (acc.re + i acc.im)(z.re + i z.im), scale 2^(2 prec).
    t_re = acc.re * z.re;
    tmp = acc.im * z.im;
    t_re -= tmp;
    t_im = acc.re * z.im;
    tmp = acc.im * z.re;
    t_im += tmp;
    // Radius: |acc|*z.rad + |z|*acc.rad + acc.rad*z.rad, scale 2^(2 prec).
    t_rad = z_abs * acc.rad;
    if (!z_exact) {
      tmp = isqrt_norm(acc.re, acc.im) + 1;
      tmp *= z.rad;
      t_rad += tmp;
      tmp = acc.rad * z.rad;
      t_rad += tmp;
    }
    int inexact = shift_floor(acc.re, t_re, prec);
    inexact += shift_floor(acc.im, t_im, prec);
    mpz_cdiv_q_2exp(acc.rad.get_mpz_t(), t_rad.get_mpz_t(), prec);
    acc.rad += inexact;
    acc.re += p.re[k];
    acc.im += p.im[k];
    acc.rad += p.err[k];
  }
  return acc;
}

void eval_batch_serial(const FixedPoly& p, std::span<const FixedBall> points, std::span<FixedBall> out) {
  if (out.size() != points.size()) throw std::invalid_argument("eval_batch_serial: size mismatch");
  for (std::size_t k = 0; k < points.size(); ++k) out[k] = horner(p, points[k]);
}

void eval_batch(const FixedPoly& p, std::span<const FixedBall> points, std::span<FixedBall> out) {
  if (out.size() != points.size()) throw std::invalid_argument("eval_batch: size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  if (n < 8) {
    eval_batch_serial(p, points, out);
    return;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = horner(p, points[static_cast<std::size_t>(k)]);
}

}  // namespace entire::kernels
