#include "entire/certify.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <utility>

#include "entire/kernels.hpp"

namespace entire {

using kernels::FixedBall;
using kernels::FixedPoly;

namespace {

// Quadrants are half-open so that every nonzero point has exactly one.
int quadrant(const FixedBall& b) {
  const int re = sgn(b.re);
  const int im = sgn(b.im);
  if (re > 0 && im >= 0) return 0;
  if (re <= 0 && im > 0) return 1;
  if (re < 0 && im <= 0) return 2;
  return 3;
}

// Winding number of a closed chain of image balls, each excluding 0.
// Consecutive balls share the image of a common contour point and each spans
// less than a half-turn, so the argument step between consecutive centers is
// the principal one and can be counted in quarter turns.
int winding_from_centers(const std::vector<FixedBall>& images) {
  long quarters = 0;
  const std::size_t n = images.size();
  for (std::size_t k = 0; k < n; ++k) {
    const FixedBall& a = images[k];
    const FixedBall& b = images[(k + 1) % n];
    int d = (quadrant(b) - quadrant(a) + 4) % 4;
    if (d == 1) {
      quarters += 1;
    } else if (d == 3) {
      quarters -= 1;
    } else if (d == 2) {
      Integer cross = a.re * b.im - a.im * b.re;
      quarters += sgn(cross) > 0 ? 2 : -2;
    }
  }
  return static_cast<int>(quarters / 4);
}

// floor(x * 2^p) with an inexactness flag.
int scale_floor(Integer& out, const Rational& x, unsigned p) {
  Integer scaled = x.get_num() << p;
  mpz_fdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  return mpz_divisible_p(scaled.get_mpz_t(), x.get_den_mpz_t()) ? 0 : 1;
}

// Fixed ball with center (a+b)/2 and radius |b-a|/2 at precision p.
FixedBall chord_ball(const GaussianRational& a, const GaussianRational& b, unsigned p) {
  GaussianRational mid = a + b;
  mid.re /= 2;
  mid.im /= 2;
  FixedBall out;
  int inexact = scale_floor(out.re, mid.re, p);
  inexact += scale_floor(out.im, mid.im, p);
  GaussianRational d = b - a;
  if (d.is_real() || sgn(d.re) == 0) {
    Rational half = (abs(d.re) + abs(d.im)) / 2;
    Integer scaled = half.get_num() << p;
    mpz_cdiv_q(out.rad.get_mpz_t(), scaled.get_mpz_t(), half.get_den_mpz_t());
  } else {
    Rational quarter = gnorm(d) / 4;
    Integer scaled = quarter.get_num() << (2 * p);
    Integer n;
    mpz_cdiv_q(n.get_mpz_t(), scaled.get_mpz_t(), quarter.get_den_mpz_t());
    mpz_sqrt(out.rad.get_mpz_t(), n.get_mpz_t());
    if (out.rad * out.rad < n) out.rad += 1;
  }
  out.rad += inexact;
  return out;
}

long magnitude_log2(const GaussianRational& c, const Rational& r) {
  Rational m = abs(c.re) + abs(c.im) + r;
  return sgn(m) == 0 ? 0 : ceil_log2(m);
}

unsigned precision_for(const GPoly& p, const GaussianRational& center, const Rational& radius, long extra_levels) {
  long inv = sgn(radius) == 0 ? 0 : -ceil_log2(radius);
  return kernels::choose_precision(p.degree(), magnitude_log2(center, radius), inv + extra_levels);
}

// ---------------------------------------------------------------------------
// Contours made of pieces, each enclosed in a ball.

struct ArcPiece {
  int quadrant = 0;
  Integer index;  // t in [index, index+1] / 2^level
  int level = 0;
};

struct SegmentPiece {
  GaussianRational a;
  GaussianRational b;
  int level = 0;
};

struct CircleContour {
  Circle circle;
  unsigned prec;

  FixedBall ball(const ArcPiece& arc) const {
    Integer denom = Integer(1) << static_cast<unsigned>(arc.level);
    Rational t0(arc.index, denom);
    Rational t1(arc.index + 1, denom);
    t0.canonicalize();
    t1.canonicalize();
    return chord_ball(circle_point(circle, arc.quadrant, t0), circle_point(circle, arc.quadrant, t1), prec);
  }

  static std::pair<ArcPiece, ArcPiece> split(const ArcPiece& arc) {
    ArcPiece left{arc.quadrant, arc.index * 2, arc.level + 1};
    ArcPiece right{arc.quadrant, arc.index * 2 + 1, arc.level + 1};
    return {left, right};
  }

  std::vector<ArcPiece> initial(int level) const {
    std::vector<ArcPiece> out;
    const long per = 1L << level;
    for (int q = 0; q < 4; ++q) {
      for (long k = 0; k < per; ++k) out.push_back({q, Integer(k), level});
    }
    return out;
  }
};

struct SegmentContour {
  unsigned prec;

  FixedBall ball(const SegmentPiece& s) const { return chord_ball(s.a, s.b, prec); }

  static std::pair<SegmentPiece, SegmentPiece> split(const SegmentPiece& s) {
    GaussianRational mid = s.a + s.b;
    mid.re /= 2;
    mid.im /= 2;
    return {SegmentPiece{s.a, mid, s.level + 1}, SegmentPiece{mid, s.b, s.level + 1}};
  }
};

template <class Piece>
struct Evaluated {
  std::vector<Piece> pieces;
  std::vector<FixedBall> images;
};

template <class Contour, class Piece>
std::vector<FixedBall> evaluate(const FixedPoly& fp, const Contour& contour, const std::vector<Piece>& pieces) {
  std::vector<FixedBall> points(pieces.size());
  for (std::size_t k = 0; k < pieces.size(); ++k) points[k] = contour.ball(pieces[k]);
  std::vector<FixedBall> out(pieces.size());
  kernels::eval_batch(fp, points, out);
  return out;
}

// Splits (in place, keeping cyclic order) every piece selected by `pick`.
template <class Contour, class Piece, class Pick>
void refine(const FixedPoly& fp, const Contour& contour, Evaluated<Piece>& ev, Pick pick) {
  std::vector<Piece> fresh;
  std::vector<std::size_t> slots;
  std::vector<Piece> pieces;
  std::vector<FixedBall> images;
  pieces.reserve(ev.pieces.size() * 2);
  images.reserve(ev.pieces.size() * 2);
  for (std::size_t k = 0; k < ev.pieces.size(); ++k) {
    if (pick(k)) {
      auto [l, r] = Contour::split(ev.pieces[k]);
      slots.push_back(pieces.size());
      pieces.push_back(l);
      images.emplace_back();
      fresh.push_back(l);
      slots.push_back(pieces.size());
      pieces.push_back(r);
      images.emplace_back();
      fresh.push_back(r);
    } else {
      pieces.push_back(std::move(ev.pieces[k]));
      images.push_back(std::move(ev.images[k]));
    }
  }
  std::vector<FixedBall> computed = evaluate(fp, contour, fresh);
  for (std::size_t k = 0; k < slots.size(); ++k) images[slots[k]] = std::move(computed[k]);
  ev.pieces = std::move(pieces);
  ev.images = std::move(images);
}

// Refines pieces whose image contains 0 until none does. Returns false if a
// piece at max_level still contains 0.
template <class Contour, class Piece>
bool exclude_zero(const FixedPoly& fp, const Contour& contour, Evaluated<Piece>& ev, int max_level) {
  for (;;) {
    bool any = false;
    for (std::size_t k = 0; k < ev.pieces.size(); ++k) {
      if (!ev.images[k].excludes_zero()) {
        if (ev.pieces[k].level >= max_level) return false;
        any = true;
      }
    }
    if (!any) return true;
    refine(fp, contour, ev, [&](std::size_t k) { return !ev.images[k].excludes_zero(); });
  }
}

constexpr int kArcLevelOffset = 2;  // four quadrants at level 0

int arc_level_for_depth(int depth) { return std::max(0, depth - kArcLevelOffset); }

// ---------------------------------------------------------------------------
// Boxes for isolation.

struct Box {
  Rational x0, x1, y0, y1;

  GaussianRational center() const {
    Rational cx = (x0 + x1) / 2;
    Rational cy = (y0 + y1) / 2;
    return {cx, cy};
  }
  Rational half_diag_upper() const {
    Rational w = (x1 - x0) / 2;
    Rational h = (y1 - y0) / 2;
    return sqrt_upper(w * w + h * h, 64 + static_cast<unsigned>(std::max(0L, -ceil_log2(w))));
  }
  Rational width() const { return x1 - x0; }
};

std::optional<int> box_count(const FixedPoly& fp, unsigned prec, const Box& b, int max_level) {
  // Whole-box exclusion first.
  ComplexBall whole{b.center(), b.half_diag_upper()};
  FixedBall image = kernels::horner(fp, kernels::to_fixed(whole, prec));
  if (image.excludes_zero()) return 0;
  GaussianRational c00(b.x0, b.y0);
  GaussianRational c10(b.x1, b.y0);
  GaussianRational c11(b.x1, b.y1);
  GaussianRational c01(b.x0, b.y1);
  SegmentContour contour{prec};
  Evaluated<SegmentPiece> ev;
  const std::array<std::pair<GaussianRational, GaussianRational>, 4> edges{
      {{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}}};
  for (const auto& [a, e] : edges) {
    auto [l, r] = SegmentContour::split(SegmentPiece{a, e, 0});
    ev.pieces.push_back(l);
    ev.pieces.push_back(r);
  }
  ev.images = evaluate(fp, contour, ev.pieces);
  if (!exclude_zero(fp, contour, ev, max_level)) return std::nullopt;
  return winding_from_centers(ev.images);
}

bool box_outside_disk(const Box& b, const Disk& d) {
  // Distance from the disk center to the box is >= radius.
  Rational dx = 0;
  if (d.center.re < b.x0) dx = b.x0 - d.center.re;
  if (d.center.re > b.x1) dx = d.center.re - b.x1;
  Rational dy = 0;
  if (d.center.im < b.y0) dy = b.y0 - d.center.im;
  if (d.center.im > b.y1) dy = d.center.im - b.y1;
  return dx * dx + dy * dy >= d.radius * d.radius;
}

bool box_inside_disk(const Box& b, const Disk& d) {
  const Rational r2 = d.radius * d.radius;
  for (const auto& x : {b.x0, b.x1}) {
    for (const auto& y : {b.y0, b.y1}) {
      if (gnorm(GaussianRational(x, y) - d.center) >= r2) return false;
    }
  }
  return true;
}

bool ball_inside_disk(const ComplexBall& ball, const Disk& d) {
  return sqrt_upper(gnorm(ball.center - d.center)) + ball.radius < d.radius;
}

bool balls_disjoint(const ComplexBall& a, const ComplexBall& b) {
  return sqrt_lower(gnorm(a.center - b.center)) > a.radius + b.radius;
}

struct CountedBox {
  Box box;
  int count = 0;
};

// Splits a box into four children whose counts are decidable, trying a few
// split positions so that roots on a cut line can be dodged.
std::vector<CountedBox> subdivide(const FixedPoly& fp, unsigned prec, const CountedBox& parent) {
  static const std::array<Rational, 7> fractions{Rational(1, 2),  Rational(7, 16),  Rational(9, 16), Rational(13, 32),
                                                 Rational(19, 32), Rational(25, 64), Rational(39, 64)};
  const Box& b = parent.box;
  for (const auto& s : fractions) {
    Rational xm = b.x0 + s * (b.x1 - b.x0);
    Rational ym = b.y0 + s * (b.y1 - b.y0);
    std::array<Box, 4> kids{Box{b.x0, xm, b.y0, ym}, Box{xm, b.x1, b.y0, ym}, Box{b.x0, xm, ym, b.y1},
                            Box{xm, b.x1, ym, b.y1}};
    std::vector<CountedBox> out;
    int sum = 0;
    bool ok = true;
    for (const auto& k : kids) {
      auto c = box_count(fp, prec, k, 10);
      if (!c) {
        ok = false;
        break;
      }
      sum += *c;
      if (*c > 0) out.push_back({k, *c});
    }
    if (!ok) continue;
    if (sum != parent.count) throw std::logic_error("isolate: child counts do not add up to the parent count");
    return out;
  }
  throw BoundaryUndecidable("isolate: no decidable subdivision of a box");
}

}  // namespace

GaussianRational circle_point(const Circle& c, int quadrant, const Rational& t) {
  // ((1 - t^2) + 2t i) / (1 + t^2) lies exactly on the unit circle.
  Rational t2 = t * t;
  Rational den = 1 + t2;
  GaussianRational u((1 - t2) / den, 2 * t / den);
  switch (quadrant & 3) {
    case 1: u = GaussianRational(Rational(-u.im), u.re); break;
    case 2: u = -u; break;
    case 3: u = GaussianRational(u.im, Rational(-u.re)); break;
    default: break;
  }
  u.re *= c.radius;
  u.im *= c.radius;
  return c.center + u;
}

Rational min_modulus_on_circle(const GPoly& p, const Circle& c, int depth) {
  if (depth < 1) throw std::invalid_argument("min_modulus_on_circle: depth must be >= 1");
  if (sgn(c.radius) <= 0) throw std::invalid_argument("min_modulus_on_circle: radius must be positive");
  if (p.is_zero()) return 0;
  const int base = arc_level_for_depth(depth);
  const int max_level = arc_level_for_depth(kMaxDepth);
  const unsigned prec = precision_for(p, c.center, c.radius, kMaxDepth);
  FixedPoly fp = kernels::make_fixed(p, prec);
  CircleContour contour{c, prec};
  Evaluated<ArcPiece> ev;
  ev.pieces = contour.initial(base);
  ev.images = evaluate(fp, contour, ev.pieces);
  if (!exclude_zero(fp, contour, ev, max_level)) return 0;

  // Tighten around the minimum: split arcs whose lower bound is well below
  // the smallest center modulus.
  const int tight_level = std::min(max_level, base + 6);
  for (int round = 0; round < 6; ++round) {
    Integer best;
    bool first = true;
    for (const auto& im : ev.images) {
      Integer a = im.abs_lower() + im.rad;  // ~ |center|
      if (first || a < best) best = a;
      first = false;
    }
    bool any = false;
    std::vector<char> pick(ev.pieces.size(), 0);
    for (std::size_t k = 0; k < ev.pieces.size(); ++k) {
      if (ev.pieces[k].level < tight_level && 2 * ev.images[k].abs_lower() < best) {
        pick[k] = 1;
        any = true;
      }
    }
    if (!any) break;
    refine(fp, contour, ev, [&](std::size_t k) { return pick[k] != 0; });
  }
  Integer low;
  bool first = true;
  for (const auto& im : ev.images) {
    Integer a = im.abs_lower();
    if (first || a < low) low = a;
    first = false;
  }
  return kernels::fixed_to_rational(low, prec);
}

Rational max_modulus_on_circle(const GPoly& p, const Circle& c, int depth) {
  if (depth < 1) throw std::invalid_argument("max_modulus_on_circle: depth must be >= 1");
  if (sgn(c.radius) <= 0) throw std::invalid_argument("max_modulus_on_circle: radius must be positive");
  if (p.is_zero()) return 0;
  if (p.degree() == 0) return sqrt_upper(gnorm(p.coeffs()[0]));
  const int base = arc_level_for_depth(depth);
  const int max_level = arc_level_for_depth(kMaxDepth);
  const unsigned prec = precision_for(p, c.center, c.radius, kMaxDepth);
  FixedPoly fp = kernels::make_fixed(p, prec);
  CircleContour contour{c, prec};
  Evaluated<ArcPiece> ev;
  ev.pieces = contour.initial(base);
  ev.images = evaluate(fp, contour, ev.pieces);
  const int tight_level = std::min(max_level, base + 6);
  for (int round = 0; round < 6; ++round) {
    Integer best = 0;
    for (const auto& im : ev.images) {
      Integer a = im.abs_lower() + im.rad;
      if (a > best) best = a;
    }
    bool any = false;
    std::vector<char> pick(ev.pieces.size(), 0);
    for (std::size_t k = 0; k < ev.pieces.size(); ++k) {
      if (ev.pieces[k].level < tight_level && 2 * ev.images[k].abs_upper() > 3 * best) {
        pick[k] = 1;
        any = true;
      }
    }
    if (!any) break;
    refine(fp, contour, ev, [&](std::size_t k) { return pick[k] != 0; });
  }
  Integer high = 0;
  for (const auto& im : ev.images) {
    Integer a = im.abs_upper();
    if (a > high) high = a;
  }
  return kernels::fixed_to_rational(high, prec);
}

int count_roots_in_disk(const GPoly& p, const Disk& d) {
  if (p.is_zero()) throw std::invalid_argument("count_roots_in_disk: zero polynomial");
  if (sgn(d.radius) <= 0) throw std::invalid_argument("count_roots_in_disk: radius must be positive");
  if (p.degree() == 0) return 0;
  const Circle c = d.boundary();
  const unsigned prec = precision_for(p, c.center, c.radius, kMaxDepth);
  FixedPoly fp = kernels::make_fixed(p, prec);
  CircleContour contour{c, prec};
  Evaluated<ArcPiece> ev;
  ev.pieces = contour.initial(2);
  ev.images = evaluate(fp, contour, ev.pieces);
  if (!exclude_zero(fp, contour, ev, arc_level_for_depth(kMaxDepth))) {
    throw BoundaryUndecidable("count_roots_in_disk: boundary of disk at " + to_string(d.center) + " radius " +
                              to_string(d.radius) + " not certified root-free");
  }
  return winding_from_centers(ev.images);
}

std::vector<RootEnclosure> isolate_simple_roots(const GPoly& p, const Disk& d, const Rational& tol) {
  if (sgn(tol) <= 0) throw std::invalid_argument("isolate_simple_roots: tolerance must be positive");
  const int total = count_roots_in_disk(p, d);
  if (total == 0) return {};
  Rational smallest = std::min(tol, d.radius);
  const unsigned prec = precision_for(p, d.center, smallest, 40);
  FixedPoly fp = kernels::make_fixed(p, prec);

  // Initial box: slightly larger than the disk, enlarged until its boundary is decidable.
  CountedBox root;
  bool found = false;
  for (const auto& factor : {Rational(9, 8), Rational(5, 4), Rational(11, 8), Rational(3, 2), Rational(13, 8)}) {
    Rational h = d.radius * factor;
    Box b{d.center.re - h, d.center.re + h, d.center.im - h, d.center.im + h};
    auto c = box_count(fp, prec, b, 14);
    if (c) {
      root = {b, *c};
      found = true;
      break;
    }
  }
  if (!found) throw BoundaryUndecidable("isolate: no decidable bounding box");

  const Rational min_width = d.radius / Rational(Integer(1) << 90U);
  std::vector<CountedBox> work{root};
  std::vector<CountedBox> done;
  while (!work.empty()) {
    CountedBox cb = std::move(work.back());
    work.pop_back();
    if (cb.count == 0 || box_outside_disk(cb.box, d)) continue;
    if (box_inside_disk(cb.box, d) && cb.box.half_diag_upper() <= tol) {
      done.push_back(std::move(cb));
      continue;
    }
    if (cb.box.width() < min_width) throw BoundaryUndecidable("isolate: subdivision limit reached");
    for (auto& kid : subdivide(fp, prec, cb)) work.push_back(std::move(kid));
  }

  // Make the enclosing balls disjoint, inside d, and certified by a count on
  // the ball itself.
  std::vector<RootEnclosure> out;
  for (int pass = 0; pass < 200; ++pass) {
    std::vector<ComplexBall> balls;
    balls.reserve(done.size());
    for (const auto& cb : done) balls.push_back({cb.box.center(), cb.box.half_diag_upper()});
    std::vector<char> bad(done.size(), 0);
    for (std::size_t a = 0; a < done.size(); ++a) {
      if (!ball_inside_disk(balls[a], d)) bad[a] = 1;
      for (std::size_t b = a + 1; b < done.size(); ++b) {
        if (!balls_disjoint(balls[a], balls[b])) bad[a] = bad[b] = 1;
      }
    }
    for (std::size_t a = 0; a < done.size(); ++a) {
      if (bad[a]) continue;
      try {
        int c = count_roots_in_disk(p, Disk{balls[a].center, balls[a].radius});
        if (c != done[a].count) bad[a] = 1;
      } catch (const BoundaryUndecidable&) {
        bad[a] = 1;
      }
    }
    if (std::none_of(bad.begin(), bad.end(), [](char x) { return x != 0; })) {
      for (std::size_t a = 0; a < done.size(); ++a) {
        out.push_back({balls[a], done[a].count, done[a].count == 1});
      }
      break;
    }
    std::vector<CountedBox> next;
    for (std::size_t a = 0; a < done.size(); ++a) {
      if (!bad[a]) {
        next.push_back(done[a]);
        continue;
      }
      if (done[a].box.width() < min_width) throw BoundaryUndecidable("isolate: cannot separate enclosures");
      for (auto& kid : subdivide(fp, prec, done[a])) {
        if (!box_outside_disk(kid.box, d)) next.push_back(std::move(kid));
      }
    }
    done = std::move(next);
  }
  int sum = 0;
  for (const auto& e : out) sum += e.multiplicity;
  if (sum != total) throw BoundaryUndecidable("isolate: enclosures do not account for every root in the disk");
  std::sort(out.begin(), out.end(),
            [](const RootEnclosure& a, const RootEnclosure& b) { return lex_less(a.ball.center, b.ball.center); });
  return out;
}

std::vector<RootEnclosure> isolate_all_simple(const GPoly& p, const Disk& d, const Rational& tol) {
  auto out = isolate_simple_roots(p, d, tol);
  for (const auto& e : out) {
    if (!e.certified_simple) {
      throw MultiplicityObstruction("root cluster of multiplicity " + std::to_string(e.multiplicity) + " near " +
                                    to_string(e.ball.center));
    }
  }
  return out;
}

bool dominates_on_circle(const GPoly& base, const GPoly& pert, const Circle& c, int depth) {
  Rational lower = min_modulus_on_circle(base, c, depth);
  if (sgn(lower) <= 0) return false;
  Rational upper = max_modulus_on_circle(pert, c, depth);
  return upper < lower;
}

GaussianRational newton_refine(const GPoly& p, const GaussianRational& start, unsigned bits) {
  GPoly dp = derivative(p);
  GaussianRational z{floor_dyadic(start.re, bits), floor_dyadic(start.im, bits)};
  const Rational stop = Rational(1, 1) / Rational(Integer(1) << (2 * bits));
  for (int it = 0; it < 200; ++it) {
    GaussianRational fz = eval_exact(p, z);
    if (fz.is_zero()) break;
    GaussianRational dz = eval_exact(dp, z);
    if (dz.is_zero()) break;
    GaussianRational step = fz / dz;
    GaussianRational next = z - step;
    next = GaussianRational{floor_dyadic(next.re, bits), floor_dyadic(next.im, bits)};
    if (next == z || gnorm(step) < stop) {
      z = std::move(next);
      break;
    }
    z = std::move(next);
  }
  return z;
}

}  // namespace entire
