// Test-only reference computations, written without the library: bound
// formulas in boost rationals, simultaneous root iteration in 50-digit
// floats, and exact circle sampling in raw GMP rationals.

#ifndef ENTIRE_TEST_ORACLE_HPP
#define ENTIRE_TEST_ORACLE_HPP

#include <gmpxx.h>

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using BR = boost::multiprecision::cpp_rational;
using BF = boost::multiprecision::cpp_bin_float_50;
using BC = boost::multiprecision::cpp_complex_50;

inline std::string str(const BR& q) { return q.str(); }

inline BR bpow(BR b, unsigned e) {
  BR out = 1;
  while (e--) out *= b;
  return out;
}

/// 1 / (L s~ n^(n+3+deg)).
inline BR nu(const BR& L, long s_tilde, long n, long deg) {
  return BR(1) / (L * s_tilde * bpow(BR(n), static_cast<unsigned>(n + 3 + deg)));
}

/// 3 + (3n+1) max(deg f, n + 1 + deg P).
inline long s_tilde(long n, long deg_f, long deg_p) { return 3 + (3 * n + 1) * std::max(deg_f, n + 1 + deg_p); }

/// (R+1)/n (max(1,R)/n)^(n+2+deg).
inline BR tail(long n, long deg, const BR& R) {
  BR m = R > 1 ? R : BR(1);
  return (R + 1) / n * bpow(m / n, static_cast<unsigned>(n + 2 + deg));
}

inline BR horner(const std::vector<BR>& c, const BR& x) {
  BR acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Real-mode target solve: (y - f(a)) / (a^e P(a)).
inline BR solve_real(const std::vector<BR>& f, const BR& a, const BR& y, const std::vector<BR>& P, unsigned e) {
  return (y - horner(f, a)) / (bpow(a, e) * horner(P, a));
}

/// Largest 2^-k strictly below b (b > 0).
inline BR pow2_below(const BR& b) {
  BR x = 1;
  while (x >= b) x /= 2;
  while (x * 2 < b) x *= 2;
  return x;
}

/// All roots of the polynomial (ascending coefficients, leading one nonzero)
/// by Aberth-Ehrlich iteration.
inline std::vector<BC> roots(const std::vector<BC>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<BC> z;
  if (n < 1) return z;
  BF bound = 0;
  for (int k = 0; k < n; ++k) bound = std::max<BF>(bound, BF(abs(c[k] / c[n])));
  bound += 1;
  for (int k = 0; k < n; ++k) {
    BF ang = 2 * boost::math::constants::pi<BF>() * k / n + BF(4) / 10;
    z.emplace_back(bound / 2 * cos(ang), bound / 2 * sin(ang));
  }
  auto eval = [&](const BC& x, BC& p, BC& dp) {
    p = c[n];
    dp = 0;
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * x + p;
      p = p * x + c[k];
    }
  };
  for (int iter = 0; iter < 2000; ++iter) {
    BF move = 0;
    for (int i = 0; i < n; ++i) {
      BC p;
      BC dp;
      eval(z[i], p, dp);
      if (abs(p) == 0) continue;
      BC ratio = p / dp;
      BC s = 0;
      for (int j = 0; j < n; ++j) {
        if (j != i) s += BC(1) / (z[i] - z[j]);
      }
      BC w = ratio / (BC(1) - ratio * s);
      z[i] -= w;
      move = std::max<BF>(move, BF(abs(w)));
    }
    if (move < BF("1e-45")) break;
  }
  return z;
}

inline BF to_bf(const mpq_class& q) { return BF(q.get_num().get_str()) / BF(q.get_den().get_str()); }

inline std::vector<BC> to_complex(const std::vector<mpq_class>& c) {
  std::vector<BC> out;
  for (const auto& q : c) out.emplace_back(to_bf(q), BF(0));
  return out;
}

struct DiskCount {
  int count = 0;
  BF clearance;  // min over roots of ||root - center| - radius|
};

inline DiskCount count_in_disk(const std::vector<BC>& rts, const BC& center, const BF& radius) {
  DiskCount out;
  out.clearance = BF(1e100);
  for (const auto& r : rts) {
    BF d = abs(r - center);
    if (d < radius) ++out.count;
    out.clearance = std::min<BF>(out.clearance, BF(abs(d - radius)));
  }
  return out;
}

/// Exact point c + R((1 - t^2) + 2ti)/(1 + t^2) on the circle.
inline std::pair<mpq_class, mpq_class> circle_point(const mpq_class& cre, const mpq_class& cim, const mpq_class& R,
                                                    const mpq_class& t) {
  mpq_class d = 1 + t * t;
  return {cre + R * (1 - t * t) / d, cim + R * 2 * t / d};
}

/// min |p|^2 over n exact circle points (p with complex rational coefficients).
inline mpq_class sampled_min_norm(const std::vector<std::pair<mpq_class, mpq_class>>& p, const mpq_class& cre,
                                  const mpq_class& cim, const mpq_class& R, int n) {
  mpq_class best = -1;
  for (int k = 0; k < n; ++k) {
    const double theta = -M_PI + (2 * M_PI) * (k + 0.5) / n;
    mpq_class t(std::ldexp(std::floor(std::ldexp(std::tan(theta / 2), 24)), -24));
    t.canonicalize();
    auto [x, y] = circle_point(cre, cim, R, t);
    mpq_class ar = 0;
    mpq_class ai = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
      mpq_class nr = ar * x - ai * y + it->first;
      mpq_class ni = ar * y + ai * x + it->second;
      ar = nr;
      ai = ni;
    }
    mpq_class v = ar * ar + ai * ai;
    if (best < 0 || v < best) best = v;
  }
  return best;
}

}  // namespace oracle

#endif  // ENTIRE_TEST_ORACLE_HPP
