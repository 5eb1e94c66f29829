#include "entire/dense_sets.hpp"

#include <algorithm>
#include <optional>
#include <tuple>

namespace entire {

namespace {

Integer floor_q(const Rational& x) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

Integer ceil_q(const Rational& x) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

// Simplest rational in (lo, +inf) for lo >= 0.
Rational simplest_above(const Rational& lo) { return Rational(floor_q(lo) + 1); }

Rational simplest_nonneg(const Rational& lo, const std::optional<Rational>& hi) {
  if (!hi) return simplest_above(lo);
  Integer fl = floor_q(lo);
  if (Rational(fl + 1) < *hi) return Rational(fl + 1);
  // fl <= lo < hi <= fl + 1: recurse on the reciprocal of the fractional parts.
  Rational flq(fl);
  Rational inv_hi = 1 / (*hi - flq);
  std::optional<Rational> inv_lo;
  if (lo != flq) inv_lo = 1 / (lo - flq);
  return flq + 1 / simplest_nonneg(inv_hi, inv_lo);
}

// Integer grid points B/q with (x - cx)^2 + (B/q - cy)^2 < rho2, walked by
// increasing |B|; returns the first hit.
std::optional<Integer> smallest_column_hit(const Integer& q, const Rational& dx2, const Rational& cy, const Rational& rho2,
                                           bool nonzero) {
  if (dx2 >= rho2) return std::nullopt;
  const Rational qq(q);
  Rational w = sqrt_upper(rho2 - dx2, 64 + static_cast<unsigned>(std::max(0L, -ceil_log2(rho2 - dx2))));
  Integer lo = ceil_q((cy - w) * qq);
  Integer hi = floor_q((cy + w) * qq);
  if (lo > hi) return std::nullopt;
  auto inside = [&](const Integer& b) {
    if (nonzero && sgn(b) == 0) return false;
    Rational dy = Rational(b) / qq - cy;
    return dx2 + dy * dy < rho2;
  };
  // Order: |B| ascending, positive before negative.
  Integer start = sgn(lo) > 0 ? lo : (sgn(hi) < 0 ? hi : Integer(0));
  Integer up = start;
  Integer down = start;
  for (int guard = 0; guard < 1 << 20; ++guard) {
    std::vector<Integer> cands;
    if (up <= hi) cands.push_back(up);
    if (down >= lo && down != up) cands.push_back(down);
    if (cands.empty()) return std::nullopt;
    std::sort(cands.begin(), cands.end(), [](const Integer& a, const Integer& b) {
      Integer aa = abs(a);
      Integer bb = abs(b);
      if (aa != bb) return aa < bb;
      return a > b;
    });
    for (const auto& c : cands) {
      if (inside(c)) return c;
    }
    up += 1;
    down -= 1;
  }
  return std::nullopt;
}

std::optional<GaussianRational> grid_search(const Integer& q, const ComplexBall& t, Constraint c) {
  const Rational qq(q);
  const Rational rho2 = t.radius * t.radius;
  const Rational& cx = t.center.re;
  const Rational& cy = t.center.im;
  Integer lo = ceil_q((cx - t.radius) * qq);
  Integer hi = floor_q((cx + t.radius) * qq);
  if (lo > hi) return std::nullopt;
  Integer start = sgn(lo) > 0 ? lo : (sgn(hi) < 0 ? hi : Integer(0));
  Integer up = start;
  Integer down = start;
  const bool nonreal = c == Constraint::nonreal;
  while (up <= hi || down >= lo) {
    std::vector<Integer> cands;
    if (up <= hi) cands.push_back(up);
    if (down >= lo && down != up) cands.push_back(down);
    std::sort(cands.begin(), cands.end(), [](const Integer& a, const Integer& b) {
      Integer aa = abs(a);
      Integer bb = abs(b);
      if (aa != bb) return aa < bb;
      return a > b;
    });
    for (const auto& a : cands) {
      Rational x = Rational(a) / qq;
      x.canonicalize();
      Rational dx = x - cx;
      auto b = smallest_column_hit(q, dx * dx, cy, rho2, nonreal);
      if (b) {
        Rational y = Rational(*b) / qq;
        y.canonicalize();
        return GaussianRational(x, y);
      }
    }
    up += 1;
    down -= 1;
  }
  return std::nullopt;
}

}  // namespace

bool DenseSet::contains(const GaussianRational& z, Constraint c) const {
  if (c == Constraint::real && !z.is_real()) return false;
  if (c == Constraint::nonreal && z.is_real()) return false;
  return contains(z);
}

std::vector<Rational> rationals_of_height(long h) {
  std::vector<Rational> out;
  if (h == 0) {
    out.emplace_back(0);
    return out;
  }
  for (long q = 1; q <= h; ++q) {
    for (long p = 1; p <= h; ++p) {
      if (std::max(p, q) != h) continue;
      Integer g;
      mpz_gcd(g.get_mpz_t(), Integer(p).get_mpz_t(), Integer(q).get_mpz_t());
      if (g != 1) continue;
      out.emplace_back(p, q);
      out.emplace_back(-p, q);
    }
  }
  return out;
}

Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("simplest_between: empty interval");
  if (sgn(lo) < 0 && sgn(hi) > 0) return 0;
  if (sgn(hi) <= 0) return -simplest_nonneg(-hi, Rational(-lo));
  return simplest_nonneg(lo, hi);
}

GaussianRationals::GaussianRationals(Rational pinned) : pinned_(std::move(pinned)) {}

Rational GaussianRationals::real_at(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("real_at: index starts at 1");
  std::lock_guard<std::mutex> lock(mu_);
  while (reals_.size() < n) {
    ++real_height_;
    for (auto& x : rationals_of_height(real_height_)) {
      if (x != pinned_) reals_.push_back(std::move(x));
    }
  }
  return reals_[n - 1];
}

GaussianRational GaussianRationals::upper_at(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("upper_at: index starts at 1");
  std::lock_guard<std::mutex> lock(mu_);
  while (uppers_.size() < n) {
    ++upper_height_;
    const long h = upper_height_;
    std::vector<Rational> all;
    for (long k = 0; k <= h; ++k) {
      auto v = rationals_of_height(k);
      all.insert(all.end(), v.begin(), v.end());
    }
    using Key = std::tuple<Integer, Integer, Integer, Integer>;
    std::vector<std::pair<Key, GaussianRational>> batch;
    auto height = [](const Rational& x) {
      Integer p = abs(x.get_num());
      return std::max(p, Integer(x.get_den()));
    };
    for (const auto& a : all) {
      for (const auto& b : all) {
        if (sgn(b) <= 0) continue;
        if (std::max(height(a), height(b)) != h) continue;
        Integer l = lcm(a.get_den(), b.get_den());
        Integer an = a.get_num() * (l / a.get_den());
        Integer bn = b.get_num() * (l / b.get_den());
        batch.emplace_back(Key{l, abs(an) + abs(bn), bn, an}, GaussianRational(a, b));
      }
    }
    std::sort(batch.begin(), batch.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [k, z] : batch) uppers_.push_back(std::move(z));
  }
  return uppers_[n - 1];
}

GaussianRational GaussianRationals::element_at(std::size_t k) const {
  if (k == 0) throw std::invalid_argument("element_at: index starts at 1");
  if (k == 1) return pinned_;
  const std::size_t n = (k + 1) / 3;
  switch ((k + 1) % 3) {
    case 0: return upper_at(n);
    case 1: return conj(upper_at(n));
    default: return real_at(n);
  }
}

GaussianRational GaussianRationals::find_near(const ComplexBall& target, Constraint c) const {
  if (sgn(target.radius) <= 0) throw EmptyIntersection("find_near: ball has no interior");
  if (c == Constraint::real) {
    const Rational im2 = target.center.im * target.center.im;
    const Rational r2 = target.radius * target.radius;
    if (im2 >= r2) throw EmptyIntersection("find_near: ball misses the real line");
    const Rational gap = r2 - im2;
    Rational w = sqrt_lower(gap, 64 + static_cast<unsigned>(std::max(0L, -ceil_log2(gap))));
    if (sgn(w) <= 0) throw EmptyIntersection("find_near: real slice too thin");
    return simplest_between(target.center.re - w, target.center.re + w);
  }
  for (long q = 1; q <= 1024; ++q) {
    if (auto z = grid_search(Integer(q), target, c)) return *z;
  }
  // Tiny balls: dyadic grids.
  for (unsigned k = 11;; ++k) {
    if (auto z = grid_search(Integer(1) << k, target, c)) return *z;
    if (k > 100000) break;
  }
  throw EmptyIntersection("find_near: no grid point found");
}

std::unique_ptr<DenseSet> make_dense_set(const std::string& id, const Rational& pinned) {
  if (id == "qi") return std::make_unique<GaussianRationals>(pinned);
  throw std::invalid_argument("unknown set identifier: " + id);
}

}  // namespace entire
