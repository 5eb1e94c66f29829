#include "entire/constructor.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace entire {

namespace {

unsigned bits_for(const Rational& x) {
  if (sgn(x) == 0) return kDefaultSqrtBits;
  return kDefaultSqrtBits + static_cast<unsigned>(std::max(0L, -ceil_log2(x)));
}

Rational mod_upper(const GaussianRational& z) {
  Rational n = gnorm(z);
  return sqrt_upper(n, bits_for(n));
}

Rational mod_lower(const GaussianRational& z) {
  Rational n = gnorm(z);
  return sqrt_lower(n, bits_for(n));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rational pow2(long e) {
  if (e >= 0) return Rational(Integer(1) << static_cast<unsigned long>(e));
  Rational q(Integer(1), Integer(1) << static_cast<unsigned long>(-e));
  return q;
}

QPolynomial quadratic_factor(const GaussianRational& a) {
  if (a.is_real()) return QPolynomial::linear_root(a.re);
  return QPolynomial{gnorm(a), Rational(-2 * a.re), Rational(1)};
}

QPolynomial term_polynomial(const Rational& eps, const Rational& delta, int exponent, const QPolynomial& mult) {
  QPolynomial lin{eps, delta};
  return (lin * mult).shifted(static_cast<unsigned>(exponent));
}

bool contains_point(const std::vector<GaussianRational>& v, const GaussianRational& z) {
  return std::find(v.begin(), v.end(), z) != v.end();
}

bool strictly_inside(const Disk& d, const GaussianRational& z) {
  return gnorm(z - d.center) < d.radius * d.radius;
}

Certificate make_cert(std::string kind, int step, int substep = -1) {
  Certificate c;
  c.kind = std::move(kind);
  c.step = step;
  c.substep = substep;
  return c;
}

std::pair<Rational, Rational> choose_radius_with_margin(const QPolynomial& f, int n,
                                                        const std::vector<GaussianRational>& betas, int depth) {
  // n + 1/2, n + 1/4, n + 3/4, n + 1/8, ...
  int tried = 0;
  for (unsigned level = 1; level < 16 && tried < 64; ++level) {
    const long den = 1L << level;
    for (long num = 1; num < den && tried < 64; num += 2) {
      ++tried;
      Rational r = Rational(n) + Rational(num, den);
      r.canonicalize();
      Rational worst;
      bool ok = true;
      for (std::size_t i = 0; i < betas.size(); ++i) {
        Rational L = min_modulus_on_circle(shift_constant(f, betas[i]), Circle{GaussianRational(0), r}, depth);
        if (sgn(L) <= 0) {
          ok = false;
          break;
        }
        if (i == 0 || L < worst) worst = L;
      }
      if (ok) return {r, worst};
    }
  }
  throw RadiusExhausted("no certified radius in (" + std::to_string(n) + ", " + std::to_string(n + 1) + ")");
}

struct Margin {
  Circle circle;
  std::vector<int> betas;
  Rational lower;
  Rational used = 0;
  Rational reach;  // upper bound of |z| on the circle
};

// One step n -> n+1.
class StepRunner {
 public:
  explicit StepRunner(ConstructionState& state)
      : st_(state),
        n_(state.n),
        depth_(state.config.depth),
        X_(make_dense_set(state.config.set_x, Rational(0))),
        Y_(make_dense_set(state.config.set_y, state.config.r)) {
    betas_ = enumerate_prefix(*Y_, 3 * n_ + 1);
    alphas_ = enumerate_prefix(*X_, 3 * n_ + 1);
    stilde_ = s_tilde(n_, st_.f, st_.P);
    old_points_ = st_.forward_set;
    for (const auto& rp : st_.repaired_set) old_points_.push_back(rp.point);
  }

  void run() {
    epsilon0_phase();
    setup_margins();
    forward_real();
    forward_pair();
    derivative_guard();
    repairs();
    finalize();
  }

 private:
  const GaussianRational& alpha(int k) const { return alphas_[static_cast<std::size_t>(k - 1)]; }
  const GaussianRational& beta(int k) const { return betas_[static_cast<std::size_t>(k - 1)]; }

  void epsilon0_phase() {
    const Rational bound = epsilon0_upper_bound(st_);
    const Rational nu0 = nu_bound(n_, 0, st_.P, stilde_);
    const int d0 = st_.P.degree() + 2 * static_cast<int>(stilde_) + 3;
    const Rational budget = nu_step(n_, d0) / 2 / length(st_.P);
    Rational active = std::min({bound, nu0, budget});
    Rational eps = pick_below(active, st_.config.seed, n_, 0);
    std::string last_error = "no attempt";
    for (int attempt = 0; attempt < 48; ++attempt, eps /= 2) {
      QPolynomial f0 = st_.f + term_polynomial(eps, 0, n_ + 1, st_.P);
      if (sgn(f0.coefficient(static_cast<std::size_t>(n_ + 1))) == 0) {
        last_error = "coefficient of z^(n+1) vanished";
        continue;
      }
      try {
        std::vector<GaussianRational> bs(betas_.begin(), betas_.end());
        auto [r, margin] = choose_radius_with_margin(f0, n_ + 1, bs, depth_);
        plan_ = make_plan(f0, r);
        r_margin_ = margin;
      } catch (const MultiplicityObstruction& e) {
        last_error = e.what();
        continue;
      } catch (const RadiusExhausted& e) {
        last_error = e.what();
        continue;
      }
      eps0_ = eps;
      f0_ = f0;
      fcur_ = f0;
      eps0_bound_ = bound;
      PerturbationTerm t{n_, 0, eps, Rational(0), n_ + 1, st_.P};
      st_.perturbation_log.push_back(t);
      last_mult_ = st_.P;
      return;
    }
    throw ConstructionError("apply_epsilon0", "retry budget exhausted (" + last_error + ")");
  }

  // Root enclosures of f0 - beta inside B(0, r), with real roots identified.
  std::vector<RootEnclosure> enclosures_for(const QPolynomial& f0, const GaussianRational& b, const Rational& r,
                                            std::vector<char>& real_flags) {
    const Disk big{GaussianRational(0), r};
    Rational tol = pow2(-30);
    for (int round = 0; round < 4; ++round, tol /= 256) {
      auto enc = isolate_all_simple(shift_constant(f0, b), big, tol);
      real_flags.assign(enc.size(), 0);
      if (!b.is_real()) return enc;
      bool ok = true;
      for (std::size_t k = 0; k < enc.size(); ++k) {
        const ComplexBall& ball = enc[k].ball;
        if (abs(ball.center.im) > ball.radius) continue;
        // A conjugation-symmetric disk holding exactly one root holds a real root.
        Disk sym{GaussianRational(ball.center.re), abs(ball.center.im) + ball.radius};
        int c = -1;
        try {
          c = count_roots_in_disk(shift_constant(f0, b), sym);
        } catch (const BoundaryUndecidable&) {
        }
        if (c == 1) {
          real_flags[k] = 1;
          enc[k].ball = ComplexBall{sym.center, sym.radius};
        } else {
          ok = false;
        }
      }
      if (ok) return enc;
    }
    throw ConstructionError("plan_step", "could not separate roots of f - " + to_string(b) + " from the real axis");
  }

  StepPlan make_plan(const QPolynomial& f0, const Rational& r) {
    StepPlan plan;
    plan.n = n_;
    plan.r_next = r;
    plan.s_tilde = stilde_;
    struct Raw {
      int beta;
      ComplexBall ball;
      bool real;
      int mirror_of;  // index of the conjugate entry this one copies, or -1
    };
    std::vector<Raw> raw;
    for (int i = 1; i <= 3 * n_ + 1; ++i) {
      const GaussianRational& b = beta(i);
      const std::size_t first = raw.size();
      if (!b.is_real() && (i % 3) == 0 && beta(i - 1) == conj(b)) {
        for (std::size_t k = 0; k < first; ++k) {
          if (raw[k].beta == i - 1) {
            raw.push_back({i, ComplexBall{conj(raw[k].ball.center), raw[k].ball.radius}, false, static_cast<int>(k)});
          }
        }
      } else {
        std::vector<char> flags;
        auto enc = enclosures_for(f0, b, r, flags);
        // Nonreal roots of a real target come in conjugate pairs; keep the
        // upper one and mirror it.
        for (std::size_t k = 0; k < enc.size(); ++k) {
          if (!b.is_real() || flags[k] || sgn(enc[k].ball.center.im) > 0) {
            raw.push_back({i, enc[k].ball, flags[k] != 0, -1});
          }
        }
        const std::size_t upto = raw.size();
        if (b.is_real()) {
          for (std::size_t k = first; k < upto; ++k) {
            if (!raw[k].real) {
              raw.push_back({i, ComplexBall{conj(raw[k].ball.center), raw[k].ball.radius}, false, static_cast<int>(k)});
            }
          }
        }
      }
      if (raw.size() == first) {
        throw ConstructionError("plan_step", "beta_" + std::to_string(i) + " = " + to_string(b) +
                                                 " has no preimage in B(0, " + to_string(r) + ")");
      }
    }

    // Centers: Newton-polished approximations, conjugate-consistent.
    std::vector<GaussianRational> centers;
    for (const auto& e : raw) {
      if (e.mirror_of >= 0) {
        centers.push_back(conj(centers[static_cast<std::size_t>(e.mirror_of)]));
        continue;
      }
      GaussianRational c = newton_refine(shift_constant(f0, beta(e.beta)), e.ball.center, 80);
      c = GaussianRational(floor_dyadic(c.re, 40), floor_dyadic(c.im, 40));
      if (e.real) c.im = 0;
      if (gnorm(c - e.ball.center) > e.ball.radius * e.ball.radius) c = e.ball.center;
      centers.push_back(c);
    }

    for (std::size_t a = 0; a < raw.size(); ++a) {
      Rational gap = r - mod_upper(centers[a]);
      for (std::size_t b = 0; b < raw.size(); ++b) {
        if (a == b) continue;
        Rational d = mod_lower(centers[a] - centers[b]);
        if (d < gap) gap = d;
      }
      if (sgn(gap) <= 0) throw ConstructionError("plan_step", "tracked roots are not separated");
      Rational half = gap / 2;
      Rational eta = floor_dyadic(half, 20 + static_cast<unsigned>(std::max(0L, -ceil_log2(half))));
      Disk d{centers[a], eta};
      if (mod_upper(raw[a].ball.center - d.center) + raw[a].ball.radius >= eta) {
        throw ConstructionError("plan_step", "root enclosure is not inside its tracking disk");
      }
      int count = count_roots_in_disk(shift_constant(f0, beta(raw[a].beta)), d);
      if (count != 1) throw ConstructionError("plan_step", "tracking disk does not hold exactly one root");
      plan.disks.push_back(TrackedDisk{d, raw[a].beta, raw[a].real, std::nullopt});
    }
    plan.m_n = static_cast<int>(plan.disks.size());

    // s_n: conjugation classes of ({alpha_{3n-1}, alpha_{3n}, alpha_{3n+1}} u taus) \ (X_n u X~_n).
    int classes = 0;
    int repair_candidates = 0;
    if (!contains_point(old_points_, alpha(3 * n_ - 1))) ++classes;
    if (!contains_point(old_points_, alpha(3 * n_ + 1))) ++classes;
    for (const auto& d : plan.disks) {
      if (!is_representative(d)) continue;
      std::optional<GaussianRational> known;
      for (const auto& p : old_points_) {
        if (strictly_inside(d.disk, p) && eval_exact(f0, p) == beta(d.beta)) known = p;
      }
      bool is_alpha = false;
      for (int k = 3 * n_ - 1; k <= 3 * n_ + 1; ++k) {
        if (strictly_inside(d.disk, alpha(k)) && eval_exact(f0, alpha(k)) == beta(d.beta)) is_alpha = true;
      }
      if (known) continue;
      if (!is_alpha) ++classes;
      const bool is_zero = strictly_inside(d.disk, GaussianRational(0)) && eval_exact(f0, GaussianRational(0)) == beta(d.beta);
      if (!is_alpha && !is_zero) ++repair_candidates;
    }
    plan.s_n = classes;
    plan.substeps = 3 + repair_candidates;
    if (plan.s_n > stilde_ || plan.substeps > stilde_) {
      throw ConstructionError("plan_step", "step count exceeds the budget s~_n = " + std::to_string(stilde_));
    }
    return plan;
  }

  bool is_representative(const TrackedDisk& d) const {
    const GaussianRational& b = beta(d.beta);
    if (!b.is_real()) return (d.beta % 3) == 2;
    if (d.real_root) return true;
    return sgn(d.disk.center.im) > 0;
  }

  std::size_t partner_of(std::size_t k) const {
    const TrackedDisk& d = plan_.disks[k];
    if (d.real_root) return k;
    const GaussianRational cb = conj(beta(d.beta));
    for (std::size_t q = 0; q < plan_.disks.size(); ++q) {
      const TrackedDisk& e = plan_.disks[q];
      if (q != k && e.disk.center == conj(d.disk.center) && beta(e.beta) == cb) return q;
    }
    throw ConstructionError("repair", "tracking disk without a conjugate partner");
  }

  void setup_margins() {
    auto add = [&](const Circle& c, int beta_count) {
      Margin m;
      m.circle = c;
      m.reach = mod_upper(c.center) + c.radius;
      for (int i = 1; i <= beta_count; ++i) {
        Rational L = min_modulus_on_circle(shift_constant(f0_, beta(i)), c, depth_);
        if (sgn(L) <= 0) {
          throw ConstructionError("admissible", "no certified margin on circle at " + to_string(c.center) + " radius " +
                                                    to_string(c.radius));
        }
        if (i == 1 || L < m.lower) m.lower = L;
        m.betas.push_back(i);
      }
      margins_.push_back(std::move(m));
    };
    add(Circle{GaussianRational(0), st_.radii.back()}, 3 * n_ - 2);
    add(Circle{GaussianRational(0), plan_.r_next}, 3 * n_ + 1);
    for (const auto& d : plan_.disks) add(d.disk.boundary(), 3 * n_ + 1);

    const int d_bound = st_.P.degree() + 2 * (3 + plan_.m_n) + 3;
    term_budget_ = nu_step(n_, d_bound) / (2 * (plan_.substeps));
  }

  std::vector<Rational> circle_uppers(const QPolynomial& mult) const {
    QPolynomial g = mult.shifted(static_cast<unsigned>(n_ + 2));
    std::vector<Rational> out;
    out.reserve(margins_.size());
    for (const auto& m : margins_) out.push_back(max_modulus_on_circle(g, m.circle, depth_));
    return out;
  }

  // Largest |eps| for a delta-free term that every check still admits.
  Rational epsilon_cap(int j, const QPolynomial& mult, const std::vector<Rational>& ug) const {
    Rational cap = nu_bound(n_, j, mult, stilde_);
    cap = std::min<Rational>(cap, term_budget_ / length(mult));
    for (std::size_t k = 0; k < margins_.size(); ++k) {
      if (sgn(ug[k]) == 0) continue;
      cap = std::min<Rational>(cap, (margins_[k].lower - margins_[k].used) / ug[k]);
    }
    return cap;
  }

  bool admissible(int j, const Rational& eps, const Rational& delta, const QPolynomial& mult,
                  const std::vector<Rational>& ug) const {
    const Rational m = std::max(abs(eps), abs(delta));
    if (sgn(m) == 0) return false;
    if (!(m < nu_bound(n_, j, mult, stilde_))) return false;
    if (!(length(term_polynomial(eps, delta, n_ + 2, mult)) < term_budget_)) return false;
    for (std::size_t k = 0; k < margins_.size(); ++k) {
      Rational u = (abs(eps) + abs(delta) * margins_[k].reach) * ug[k];
      if (!(margins_[k].used + u < margins_[k].lower)) return false;
    }
    return true;
  }

  void apply(int j, const Rational& eps, const Rational& delta, const QPolynomial& mult, const std::vector<Rational>& ug) {
    for (std::size_t k = 0; k < margins_.size(); ++k) {
      margins_[k].used += (abs(eps) + abs(delta) * margins_[k].reach) * ug[k];
    }
    fcur_ += term_polynomial(eps, delta, n_ + 2, mult);
    st_.perturbation_log.push_back(PerturbationTerm{n_, j, eps, delta, n_ + 2, mult});
    last_mult_ = mult;
  }

  void forward_real() {
    const GaussianRational& a = alpha(3 * n_ + 1);
    mult1_ = st_.P;
    if (eval_exact(st_.P, a).is_zero()) return;
    auto ug = circle_uppers(mult1_);
    const Rational fa = eval_exact(fcur_, a.re);
    const Rational ga = eval_exact(mult1_, a.re) * pow(a.re, static_cast<unsigned>(n_ + 2));
    Rational rho = epsilon_cap(1, mult1_, ug) * abs(ga);
    for (int attempt = 0; attempt < 256; ++attempt, rho /= 2) {
      GaussianRational y = Y_->find_near(ComplexBall{GaussianRational(fa + rho / 2), rho / 2}, Constraint::real);
      auto [eps, delta] = solve_linear_target(fcur_, a, y, mult1_, n_ + 2);
      if (admissible(1, eps, delta, mult1_, ug)) {
        apply(1, eps, delta, mult1_, ug);
        return;
      }
    }
    throw ConstructionError("solve_target_forward", "no admissible real target for alpha_" + std::to_string(3 * n_ + 1));
  }

  void forward_pair() {
    const GaussianRational& a = alpha(3 * n_ - 1);
    const GaussianRational& a1 = alpha(3 * n_ + 1);
    mult2_ = st_.P;
    if (!eval_exact(st_.P, a1).is_zero()) mult2_ = mult2_ * QPolynomial::linear_root(a1.re);
    if (eval_exact(mult2_, a).is_zero()) return;
    auto ug = circle_uppers(mult2_);
    const GaussianRational fa = eval_exact(fcur_, a);
    const GaussianRational ga = eval_exact(mult2_, a) * pow(a, static_cast<unsigned>(n_ + 2));
    // |eps|, |delta| <= |w| (1 + |alpha|) / |Im alpha| with w = (y - f(alpha)) / g(alpha).
    const Rational spread = (1 + mod_upper(a)) / abs(a.im);
    Rational rho = epsilon_cap(2, mult2_, ug) * mod_lower(ga) / (2 * spread * (1 + margin_reach_max()));
    for (int attempt = 0; attempt < 256; ++attempt, rho /= 2) {
      GaussianRational c = fa;
      c.re += rho / 2;
      GaussianRational y = Y_->find_near(ComplexBall{c, rho / 2}, Constraint::any);
      auto [eps, delta] = solve_linear_target(fcur_, a, y, mult2_, n_ + 2);
      if (admissible(2, eps, delta, mult2_, ug)) {
        apply(2, eps, delta, mult2_, ug);
        return;
      }
    }
    throw ConstructionError("solve_target_forward", "no admissible target pair for alpha_" + std::to_string(3 * n_ - 1));
  }

  Rational margin_reach_max() const {
    Rational r = 0;
    for (const auto& m : margins_) r = std::max(r, m.reach);
    return r;
  }

  void derivative_guard() {
    const GaussianRational& a = alpha(3 * n_ - 1);
    QPolynomial mult = mult2_;
    if (!eval_exact(st_.P, a).is_zero()) mult = mult * quadratic_factor(a);
    auto ug = circle_uppers(mult);
    Rational eps = pick_below(epsilon_cap(3, mult, ug), st_.config.seed, n_, 3);
    for (int attempt = 0; attempt < 64; ++attempt, eps /= 2) {
      if (!admissible(3, eps, Rational(0), mult, ug)) continue;
      QPolynomial d = derivative(fcur_ + term_polynomial(eps, 0, n_ + 2, mult));
      bool ok = true;
      for (int k = 3 * n_ - 1; k <= 3 * n_ + 1; ++k) {
        if (eval_exact(d, alpha(k)).is_zero()) ok = false;
      }
      if (ok) {
        apply(3, eps, Rational(0), mult, ug);
        return;
      }
    }
    throw ConstructionError("ensure_nonzero_derivative", "retry budget exhausted");
  }

  std::vector<GaussianRational> known_points() const {
    std::vector<GaussianRational> pts = old_points_;
    pts.emplace_back(0);
    for (int k = 3 * n_ - 1; k <= 3 * n_ + 1; ++k) pts.push_back(alpha(k));
    pts.insert(pts.end(), repaired_now_.begin(), repaired_now_.end());
    return pts;
  }

  std::optional<GaussianRational> known_root(const TrackedDisk& d) const {
    for (const auto& p : known_points()) {
      if (strictly_inside(d.disk, p) && eval_exact(fcur_, p) == beta(d.beta)) return p;
    }
    return std::nullopt;
  }

  void repairs() {
    QPolynomial base = st_.P;
    for (int k = 3 * n_ - 1; k <= 3 * n_ + 1; ++k) {
      if (k == 3 * n_) continue;
      if (!eval_exact(st_.P, alpha(k)).is_zero()) {
        QPolynomial q = quadratic_factor(alpha(k));
        base = base * q * q;
      }
    }
    int applied = 0;
    for (std::size_t k = 0; k < plan_.disks.size(); ++k) {
      TrackedDisk& d = plan_.disks[k];
      if (!is_representative(d)) continue;
      const std::size_t partner = partner_of(k);
      if (auto p = known_root(d)) {
        d.exact = *p;
        plan_.disks[partner].exact = conj(*p);
        continue;
      }
      if (3 + applied + 1 > plan_.substeps) throw ConstructionError("repair", "more repairs than planned");
      QPolynomial mult = base;
      for (const auto& x : repaired_now_) {
        if (sgn(x.im) < 0) continue;
        QPolynomial q = quadratic_factor(x);
        mult = mult * q * q;
      }
      const int j = 3 + applied + 1;
      GaussianRational x = repair_one(j, d, mult);
      ++applied;
      d.exact = x;
      plan_.disks[partner].exact = conj(x);
      repaired_now_.push_back(x);
      if (!x.is_real()) repaired_now_.push_back(conj(x));
    }
  }

  GaussianRational repair_one(int j, const TrackedDisk& d, const QPolynomial& mult) {
    const GaussianRational& b = beta(d.beta);
    const GPoly target = shift_constant(fcur_, b);
    auto ug = circle_uppers(mult);
    unsigned bits = 80;
    GaussianRational z = newton_refine(target, d.disk.center, bits);
    if (d.real_root) z.im = 0;
    const Rational cap = epsilon_cap(j, mult, ug);
    // |w| = |f(x) - beta| / |g(x)| ~ |f'| |x - z| / |g|.
    GaussianRational fp = eval_exact(derivative(target), z);
    GaussianRational gz = eval_exact(mult, z) * pow(z, static_cast<unsigned>(n_ + 2));
    Rational spread = d.real_root ? Rational(1) : (1 + mod_upper(z)) / std::max<Rational>(abs(z.im), d.disk.radius / 1024);
    Rational rho = d.disk.radius / 4;
    if (sgn(gnorm(fp)) != 0 && sgn(gnorm(gz)) != 0) {
      Rational est = cap * mod_lower(gz) / (mod_upper(fp) * 4 * spread * (1 + margin_reach_max()));
      if (sgn(est) > 0 && est < rho) rho = est;
    }
    for (int attempt = 0; attempt < 400; ++attempt, rho /= 2) {
      const unsigned need = static_cast<unsigned>(std::max(0L, -ceil_log2(rho))) + 48;
      if (need > bits) {
        bits = need + 32;
        z = newton_refine(target, z, bits);
        if (d.real_root) z.im = 0;
      }
      GaussianRational x;
      try {
        x = X_->find_near(ComplexBall{z, rho}, d.real_root ? Constraint::real : Constraint::nonreal);
      } catch (const EmptyIntersection&) {
        continue;
      }
      if (x.is_zero() || !strictly_inside(d.disk, x)) continue;
      if (eval_exact(mult, x).is_zero()) continue;
      auto [eps, delta] = solve_linear_target(fcur_, x, b, mult, n_ + 2);
      if (admissible(j, eps, delta, mult, ug)) {
        apply(j, eps, delta, mult, ug);
        return x;
      }
    }
    throw ConstructionError("solve_target_preimage", "no admissible preimage repair near " + to_string(d.disk.center));
  }

  void finalize() {
    for (auto& d : plan_.disks) {
      if (!d.exact) d.exact = known_root(d);
      if (!d.exact) throw ConstructionError("finalize", "tracking disk at " + to_string(d.disk.center) + " has no exact root");
      if (eval_exact(fcur_, *d.exact) != beta(d.beta)) throw ConstructionError("finalize", "exact root lost its value");
    }
    const int m = n_ + 1;
    for (int k = 3 * n_ - 1; k <= 3 * n_ + 1; ++k) st_.forward_set.push_back(alpha(k));
    std::vector<GaussianRational> roots = st_.forward_set;
    for (const auto& rp : st_.repaired_set) roots.push_back(rp.point);
    for (const auto& d : plan_.disks) {
      const GaussianRational& p = *d.exact;
      if (p.is_zero()) continue;
      bool seen = false;
      for (const auto& rp : st_.repaired_set) seen = seen || rp.point == p;
      if (!seen) {
        st_.repaired_set.push_back(RepairedPoint{p, d.beta, m});
        roots.push_back(p);
      }
    }
    QPolynomial next_P = from_conjugate_closed_roots(roots);
    if (!divides(st_.P, next_P) || !divides(last_mult_, next_P)) {
      throw ConstructionError("finalize", "multiplier chain does not divide P_{n+1}");
    }
    QPolynomial df = derivative(fcur_);
    for (const auto& a : st_.forward_set) {
      if (eval_exact(df, a).is_zero()) throw ConstructionError("finalize", "derivative vanishes at " + to_string(a));
    }
    if (sgn(fcur_.coefficient(static_cast<std::size_t>(m))) == 0) throw ConstructionError("finalize", "a_m vanished");

    // Certificates.
    {
      Certificate c = make_cert("rouche-margin", n_, 0);
      c.region = Disk{GaussianRational(0), st_.radii.back()};
      for (int i = 1; i <= 3 * n_ - 2; ++i) c.betas.push_back(i);
      c.lower = eps0_bound_;
      c.upper = eps0_;
      c.depth = depth_;
      st_.certificates.push_back(std::move(c));
    }
    for (const auto& mg : margins_) {
      Certificate c = make_cert("rouche-margin", n_);
      c.region = Disk{mg.circle.center, mg.circle.radius};
      c.betas = mg.betas;
      c.lower = mg.lower;
      c.upper = mg.used;
      c.depth = depth_;
      st_.certificates.push_back(std::move(c));
    }
    for (const auto& d : plan_.disks) {
      Certificate c = make_cert("root-count", n_);
      c.region = d.disk;
      c.betas = {d.beta};
      c.count = 1;
      c.point = d.exact;
      st_.certificates.push_back(std::move(c));
    }
    {
      Certificate c = make_cert("boundary-clear", m);
      c.region = Disk{GaussianRational(0), plan_.r_next};
      for (int i = 1; i <= 3 * n_ + 1; ++i) c.betas.push_back(i);
      c.lower = r_margin_;
      c.depth = depth_;
      st_.certificates.push_back(std::move(c));
    }
    for (int k = 3 * n_ - 1; k <= 3 * n_ + 1; ++k) {
      Certificate c = make_cert("exact-membership", m);
      c.point = alpha(k);
      c.value = eval_exact(fcur_, alpha(k));
      st_.certificates.push_back(c);
      c.kind = "derivative-nonzero";
      c.value = eval_exact(df, alpha(k));
      st_.certificates.push_back(std::move(c));
    }

    st_.f = fcur_;
    st_.P = next_P;
    st_.radii.push_back(plan_.r_next);
    st_.plans.push_back(plan_);
    st_.n = m;
  }

  ConstructionState& st_;
  const int n_;
  const int depth_;
  std::unique_ptr<DenseSet> X_;
  std::unique_ptr<DenseSet> Y_;
  std::vector<GaussianRational> betas_;
  std::vector<GaussianRational> alphas_;
  std::vector<GaussianRational> old_points_;
  std::vector<GaussianRational> repaired_now_;
  long stilde_ = 0;
  StepPlan plan_;
  Rational r_margin_;
  Rational eps0_;
  Rational eps0_bound_;
  QPolynomial f0_;
  QPolynomial fcur_;
  QPolynomial mult1_;
  QPolynomial mult2_;
  QPolynomial last_mult_;
  std::vector<Margin> margins_;
  Rational term_budget_;
};

}  // namespace

QPolynomial PerturbationTerm::as_polynomial() const { return term_polynomial(epsilon, delta, exponent, multiplier); }

long s_tilde(int n, const QPolynomial& f, const QPolynomial& P) {
  return 3L + (3L * n + 1) * std::max<long>(f.degree(), n + 1 + P.degree());
}

Rational nu_bound(int n, int /*j*/, const QPolynomial& multiplier, long s_tilde_n) {
  if (n < 1) throw std::invalid_argument("nu_bound: n must be >= 1");
  if (multiplier.is_zero()) throw std::invalid_argument("nu_bound: zero multiplier");
  Rational den = length(multiplier) * Rational(s_tilde_n) *
                 pow(Rational(n), static_cast<unsigned>(n + 3 + multiplier.degree()));
  return 1 / den;
}

Rational nu_step(int m, int degree_hP) {
  if (m < 1) throw std::invalid_argument("nu_step: m must be >= 1");
  return 1 / pow(Rational(m), static_cast<unsigned>(m + 2 + degree_hP));
}

Rational pick_below(const Rational& bound, std::uint64_t seed, int n, int j) {
  if (sgn(bound) <= 0) throw std::invalid_argument("pick_below: bound must be positive");
  long k = 1;
  if (seed != 0) {
    std::uint64_t h = splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(n) << 16) ^ static_cast<std::uint64_t>(j)));
    k = 2 * static_cast<long>(h % 8) + 3;
  }
  Rational kq(k);
  long e = std::max(0L, ceil_log2(kq / bound));
  while (!(kq * pow2(-e) < bound)) ++e;
  while (e > 0 && kq * pow2(-(e - 1)) < bound) --e;
  return kq * pow2(-e);
}

std::vector<GaussianRational> enumerate_prefix(const DenseSet& set, int count) {
  std::vector<GaussianRational> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 1; k <= count; ++k) out.push_back(set.element_at(static_cast<std::size_t>(k)));
  return out;
}

ConstructionState init(const ConstructionConfig& config) {
  if (config.steps < 1) throw std::invalid_argument("init: steps must be >= 1");
  if (sgn(config.r) == 0 && !config.allow_zero_r) throw std::invalid_argument("init: r must be a nonzero rational");
  make_dense_set(config.set_x, Rational(0));
  auto Y = make_dense_set(config.set_y, config.r);
  if (!Y->contains(GaussianRational(config.r))) throw ConstructionError("init", "r is not in Y");
  ConstructionState st;
  st.config = config;
  st.n = 1;
  st.f = QPolynomial{config.r, Rational(1)};
  st.P = QPolynomial::constant(1);
  auto [r1, margin] = choose_radius_with_margin(st.f, 1, {GaussianRational(config.r)}, config.depth);
  st.radii.push_back(r1);
  Certificate c = make_cert("boundary-clear", 1);
  c.region = Disk{GaussianRational(0), r1};
  c.betas = {1};
  c.lower = margin;
  c.depth = config.depth;
  st.certificates.push_back(std::move(c));
  return st;
}

Rational choose_radius(const QPolynomial& f, int n, const std::vector<GaussianRational>& betas, int depth) {
  return choose_radius_with_margin(f, n, betas, depth).first;
}

Rational epsilon0_upper_bound(const ConstructionState& state) {
  const int n = state.n;
  auto Y = make_dense_set(state.config.set_y, state.config.r);
  const Circle c{GaussianRational(0), state.radii.at(static_cast<std::size_t>(n - 1))};
  Rational lower;
  for (int i = 1; i <= 3 * n - 2; ++i) {
    Rational L = min_modulus_on_circle(shift_constant(state.f, Y->element_at(static_cast<std::size_t>(i))), c,
                                       state.config.depth);
    if (i == 1 || L < lower) lower = L;
  }
  if (sgn(lower) <= 0) throw ConstructionError("epsilon0_upper_bound", "circle margin is not certified positive");
  Rational upper = max_modulus_on_circle(state.P.shifted(static_cast<unsigned>(n + 1)), c, state.config.depth);
  return lower / upper;
}

std::pair<Rational, Rational> solve_linear_target(const QPolynomial& f, const GaussianRational& alpha,
                                                  const GaussianRational& y, const QPolynomial& P, int exponent) {
  GaussianRational g = eval_exact(P, alpha) * pow(alpha, static_cast<unsigned>(exponent));
  if (g.is_zero()) throw std::domain_error("solve_linear_target: alpha^k P(alpha) = 0");
  GaussianRational w = (y - eval_exact(f, alpha)) / g;
  if (alpha.is_real()) {
    if (!w.is_real()) throw std::domain_error("solve_linear_target: real point with a nonreal quotient");
    return {w.re, Rational(0)};
  }
  Rational delta = w.im / alpha.im;
  Rational eps = w.re - delta * alpha.re;
  return {eps, delta};
}

void run_step(ConstructionState& state) {
  StepRunner runner(state);
  runner.run();
}

ConstructionState run(const ConstructionConfig& config) {
  ConstructionState st = init(config);
  while (st.n < config.steps) run_step(st);
  return st;
}

QPolynomial truncation(const ConstructionState& state, int m) {
  QPolynomial f{state.config.r, Rational(1)};
  for (const auto& t : state.perturbation_log) {
    if (t.n < m) f += t.as_polynomial();
  }
  return f;
}

}  // namespace entire
