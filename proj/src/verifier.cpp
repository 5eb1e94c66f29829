#include "entire/verifier.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "entire/certify.hpp"
#include "entire/dense_sets.hpp"

namespace entire {

namespace {

struct Context {
  const ConstructionState& st;
  std::unique_ptr<DenseSet> X;
  std::unique_ptr<DenseSet> Y;
  std::vector<GaussianRational> alphas;  // alphas[k-1] = alpha_k
  std::vector<GaussianRational> betas;
  std::vector<QPolynomial> f;                            // f[k] = f_k, k = 1..steps
  std::map<int, std::vector<const PerturbationTerm*>> terms;  // by step n, in log order

  explicit Context(const ConstructionState& s)
      : st(s), X(make_dense_set(s.config.set_x, Rational(0))), Y(make_dense_set(s.config.set_y, s.config.r)) {
    const int steps = s.n;
    alphas = enumerate_prefix(*X, 3 * steps + 1);
    betas = enumerate_prefix(*Y, 3 * steps + 1);
    for (const auto& t : s.perturbation_log) terms[t.n].push_back(&t);
    f.resize(static_cast<std::size_t>(steps) + 1);
    f[1] = QPolynomial{s.config.r, Rational(1)};
    for (int k = 1; k < steps; ++k) {
      QPolynomial next = f[static_cast<std::size_t>(k)];
      for (const auto* t : terms[k]) next += t->as_polynomial();
      f[static_cast<std::size_t>(k) + 1] = next;
    }
  }

  const GaussianRational& alpha(int k) const { return alphas.at(static_cast<std::size_t>(k - 1)); }
  const GaussianRational& beta(int k) const { return betas.at(static_cast<std::size_t>(k - 1)); }
  const QPolynomial& fm(int m) const { return f.at(static_cast<std::size_t>(m)); }

  std::vector<GaussianRational> forward(int m) const {
    std::vector<GaussianRational> out;
    for (int k = 2; k <= 3 * m - 2; ++k) out.push_back(alpha(k));
    return out;
  }

  std::vector<GaussianRational> repaired(int m) const {
    std::vector<GaussianRational> out;
    for (const auto& r : st.repaired_set) {
      if (r.step <= m) out.push_back(r.point);
    }
    return out;
  }

  // f_{n,0} and the polynomials after each later term of step n.
  std::vector<QPolynomial> substages(int n) const {
    std::vector<QPolynomial> out;
    QPolynomial cur = fm(n);
    out.push_back(cur);
    auto it = terms.find(n);
    if (it == terms.end()) return out;
    for (const auto* t : it->second) {
      cur += t->as_polynomial();
      out.push_back(cur);
    }
    return out;
  }
};

class Checker {
 public:
  Checker(const Context& ctx, int m, const VerifyOptions& opts) : c_(ctx), m_(m), opts_(opts) { rep_.m = m; }

  StepReport run() {
    telescoping();
    item_i();
    item_ii();
    item_iii();
    item_iv();
    item_v();
    item_vi();
    return rep_;
  }

 private:
  ItemResult& item(const std::string& name) {
    for (auto& it : rep_.items) {
      if (it.item == name) return it;
    }
    rep_.items.push_back(ItemResult{name, true, {}});
    return rep_.items.back();
  }

  void fail(const std::string& name, const std::string& witness) {
    ItemResult& it = item(name);
    it.pass = false;
    it.witnesses.push_back(witness);
  }

  bool last_stage() const { return m_ == c_.st.n; }

  void telescoping() {
    item("telescoping");
    if (last_stage() && !(c_.fm(m_) == c_.st.f)) {
      fail("telescoping", "stored coefficients differ from z + r plus the logged terms");
    }
  }

  void item_i() {
    item("(i)");
    if (c_.fm(m_).degree() < m_) fail("(i)", "deg f_m = " + std::to_string(c_.fm(m_).degree()) + " < m");
  }

  void item_ii() {
    item("(ii)");
    std::vector<GaussianRational> roots = c_.forward(m_);
    auto rep = c_.repaired(m_);
    roots.insert(roots.end(), rep.begin(), rep.end());
    QPolynomial Pm;
    try {
      Pm = from_conjugate_closed_roots(roots);
    } catch (const std::invalid_argument& e) {
      fail("(ii)", std::string("X_m u X~_m: ") + e.what());
      return;
    }
    if (m_ >= c_.st.n) return;
    std::vector<GaussianRational> next = c_.forward(m_ + 1);
    auto rep1 = c_.repaired(m_ + 1);
    next.insert(next.end(), rep1.begin(), rep1.end());
    QPolynomial Pn;
    try {
      Pn = from_conjugate_closed_roots(next);
    } catch (const std::invalid_argument& e) {
      fail("(ii)", std::string("X_{m+1} u X~_{m+1}: ") + e.what());
      return;
    }
    if (!divides(Pm, Pn)) fail("(ii)", "P_m does not divide P_{m+1}");
    auto it = c_.terms.find(m_);
    if (it == c_.terms.end()) return;
    QPolynomial prev = Pm;
    for (const auto* t : it->second) {
      if (t->multiplier.is_zero() || !divides(prev, t->multiplier)) {
        fail("(ii)", "multiplier of term j=" + std::to_string(t->j) + " is not a multiple of the previous one");
        return;
      }
      if (t->j == 0 && !(t->multiplier == Pm)) fail("(ii)", "multiplier of term j=0 is not P_m");
      prev = t->multiplier;
    }
    if (!divides(prev, Pn)) fail("(ii)", "last multiplier does not divide P_{m+1}");
  }

  void item_iii() {
    item("(iii)");
    const QPolynomial& f = c_.fm(m_);
    const QPolynomial df = derivative(f);
    auto X = c_.forward(m_);
    // The stored forward set must be the enumeration prefix.
    for (std::size_t k = 0; k < X.size(); ++k) {
      if (k >= c_.st.forward_set.size() || !(c_.st.forward_set[k] == X[k])) {
        fail("(iii)", "forward_set[" + std::to_string(k) + "] is not alpha_" + std::to_string(k + 2));
        break;
      }
    }
    for (const auto& a : X) {
      if (!c_.Y->contains(eval_exact(f, a))) fail("(iii)", "f_m(" + to_string(a) + ") not in Y");
      if (eval_exact(df, a).is_zero()) fail("(iii)", "f_m'(" + to_string(a) + ") = 0");
    }
    std::vector<GaussianRational> candidates = c_.repaired(m_);
    for (const auto& r : c_.st.repaired_set) {
      if (r.step > m_) continue;
      if (r.point.is_zero() || !c_.X->contains(r.point)) fail("(iii)", "repaired point " + to_string(r.point) + " not admissible");
      if (r.beta < 1 || r.beta > 3 * m_ - 2 || !(eval_exact(f, r.point) == c_.beta(r.beta))) {
        fail("(iii)", "f_m(" + to_string(r.point) + ") != beta_" + std::to_string(r.beta));
      }
      if (eval_exact(df, r.point).is_zero()) fail("(iii)", "f_m' vanishes at repaired point " + to_string(r.point));
    }
    candidates.emplace_back(0);
    for (int j = 1; j <= 3 * m_ - 2; ++j) {
      bool hit = false;
      for (const auto& p : candidates) hit = hit || eval_exact(f, p) == c_.beta(j);
      if (!hit) fail("(iii)", "beta_" + std::to_string(j) + " has no preimage in X~_m u {0}");
    }
    for (const auto& cert : c_.st.certificates) {
      if (cert.step != m_) continue;
      if (cert.kind != "exact-membership" && cert.kind != "derivative-nonzero") continue;
      if (!cert.point || !cert.value) {
        fail("(iii)", cert.kind + " certificate without point/value");
        continue;
      }
      if (std::find(X.begin(), X.end(), *cert.point) == X.end()) {
        fail("(iii)", cert.kind + " certificate names " + to_string(*cert.point) + ", not in X_m");
        continue;
      }
      const GaussianRational v = cert.kind == "exact-membership" ? eval_exact(f, *cert.point) : eval_exact(df, *cert.point);
      if (!(v == *cert.value)) fail("(iii)", cert.kind + " certificate value mismatch at " + to_string(*cert.point));
      if (cert.kind == "derivative-nonzero" && v.is_zero()) fail("(iii)", "derivative certificate records zero");
    }
  }

  void item_iv() {
    item("(iv)");
    if (m_ >= c_.st.n) return;
    const QPolynomial& f = c_.fm(m_);
    std::vector<GaussianRational> roots = c_.forward(m_);
    auto rep = c_.repaired(m_);
    roots.insert(roots.end(), rep.begin(), rep.end());
    QPolynomial Pm;
    try {
      Pm = from_conjugate_closed_roots(roots);
    } catch (const std::invalid_argument&) {
      Pm = QPolynomial::constant(1);
    }
    const long st = s_tilde(m_, f, Pm);
    auto it = c_.terms.find(m_);
    if (it == c_.terms.end()) {
      fail("(iv)", "no perturbation recorded for step m");
      return;
    }
    for (const auto* t : it->second) {
      const std::string tag = "term (" + std::to_string(t->n) + "," + std::to_string(t->j) + ")";
      if (t->j == 0 && (sgn(t->delta) != 0 || t->exponent != m_ + 1)) fail("(iv)", tag + " has the wrong shape");
      if (t->j != 0 && t->exponent != m_ + 2) fail("(iv)", tag + " has the wrong exponent");
      const Rational mx = std::max<Rational>(abs(t->epsilon), abs(t->delta));
      if (sgn(mx) == 0) fail("(iv)", tag + " is zero");
      if (t->multiplier.is_zero()) {
        fail("(iv)", tag + " has a zero multiplier");
        continue;
      }
      const Rational nu = nu_bound(m_, t->j, t->multiplier, st);
      if (!(mx < nu)) fail("(iv)", tag + ": max(|eps|,|delta|) = " + to_string(mx) + " >= nu = " + to_string(nu));
    }
    QPolynomial diff = c_.fm(m_ + 1) - f;
    for (int k = 0; k < m_ && k <= diff.degree(); ++k) {
      if (sgn(diff.coefficient(static_cast<std::size_t>(k))) != 0) {
        fail("(iv)", "f_{m+1} - f_m is not divisible by z^m");
        return;
      }
    }
    const Rational L = length(diff);
    const int deg = diff.degree() - m_;
    if (sgn(L) <= 0) {
      fail("(iv)", "h_m P_m = 0");
      return;
    }
    const Rational nu_m = nu_step(m_, deg);
    if (!(L < nu_m)) fail("(iv)", "L(h_m P_m) = " + to_string(L) + " >= nu_m = " + to_string(nu_m));
    for (const auto* t : it->second) {
      rep_.tails.push_back(TailBound{t->n, t->j, opts_.tail_radius, tail_sup_bound(t->n, t->j, opts_.tail_radius, *t),
                                     tail_premise_holds(t->multiplier, opts_.tail_radius)});
    }
  }

  void item_v() {
    item("(v)");
    const QPolynomial& f = c_.fm(m_);
    for (int k = 1; k <= m_; ++k) {
      if (sgn(f.coefficient(static_cast<std::size_t>(k))) == 0) fail("(v)", "a_" + std::to_string(k) + " = 0");
      const Rational stored = c_.st.f.coefficient(static_cast<std::size_t>(k));
      if (sgn(stored) == 0) {
        fail("(v)", "stored a_" + std::to_string(k) + " = 0");
      } else if (stored != f.coefficient(static_cast<std::size_t>(k))) {
        fail("(v)", "stored a_" + std::to_string(k) + " differs from the reconstruction");
      }
    }
    if (c_.st.f.coefficient(0) != f.coefficient(0)) fail("(v)", "stored a_0 differs from the reconstruction");
  }

  void item_vi() {
    item("(vi)");
    if (static_cast<int>(c_.st.radii.size()) < m_) {
      fail("(vi)", "missing radius r_m");
      return;
    }
    const Rational r = c_.st.radii[static_cast<std::size_t>(m_ - 1)];
    if (!(Rational(m_) < r && r < Rational(m_ + 1))) {
      fail("(vi)", "r_" + std::to_string(m_) + " = " + to_string(r) + " outside (m, m+1)");
      return;
    }
    const Disk B{GaussianRational(0), r};
    const QPolynomial& f = c_.fm(m_);
    std::vector<GaussianRational> cands = c_.repaired(m_);
    cands.emplace_back(0);
    for (int i = 1; i <= 3 * m_ - 2; ++i) {
      const GaussianRational& b = c_.beta(i);
      const GPoly p = shift_constant(f, b);
      const std::string tag = "beta_" + std::to_string(i);
      if (sgn(min_modulus_on_circle(p, B.boundary(), opts_.depth)) <= 0) {
        fail("(vi)", tag + ": boundary |z| = r_m not certified root-free");
        continue;
      }
      std::vector<RootEnclosure> enc;
      try {
        enc = isolate_all_simple(p, B, Rational(1, 1 << 16));
      } catch (const std::exception& e) {
        fail("(vi)", tag + ": isolation failed: " + e.what());
        continue;
      }
      std::vector<GaussianRational> mine;
      for (const auto& q : cands) {
        if (gnorm(q) < r * r && eval_exact(f, q) == b) mine.push_back(q);
      }
      std::vector<int> used(mine.size(), 0);
      for (const auto& e : enc) {
        int hits = 0;
        for (std::size_t k = 0; k < mine.size(); ++k) {
          if (e.ball.contains(mine[k])) {
            ++hits;
            ++used[k];
          }
        }
        if (hits != 1) fail("(vi)", tag + ": root near " + to_string(e.ball.center) + " is not an exact point of X~_m u {0}");
      }
      if (std::any_of(used.begin(), used.end(), [](int u) { return u != 1; })) {
        fail("(vi)", tag + ": exact preimages and isolated roots do not match one to one");
      }
      if (m_ < c_.st.n) {
        try {
          int before = count_roots_in_disk(p, B);
          int after = count_roots_in_disk(shift_constant(c_.fm(m_ + 1), b), B);
          if (before != after) fail("(vi)", tag + ": root count in B(0, r_m) changes at f_{m+1}");
          for (const auto& q : mine) {
            if (!(eval_exact(c_.fm(m_ + 1), q) == b)) fail("(vi)", tag + ": f_{m+1} moves the preimage " + to_string(q));
          }
        } catch (const BoundaryUndecidable& e) {
          fail("(vi)", tag + ": " + e.what());
        }
      }
    }
    for (const auto& cert : c_.st.certificates) {
      if (cert.kind == "boundary-clear" && cert.step == m_ && (!cert.region || cert.region->radius != r)) {
        fail("(vi)", "boundary certificate radius differs from r_m");
      }
    }
    if (m_ < c_.st.n && opts_.recheck_margins) margins();
  }

  // Rouche margins of step m, recomputed from the log.
  void margins() {
    if (static_cast<std::size_t>(m_) > c_.st.plans.size()) {
      fail("(vi)", "missing plan for step m");
      return;
    }
    const StepPlan& plan = c_.st.plans[static_cast<std::size_t>(m_ - 1)];
    if (c_.st.radii.size() <= static_cast<std::size_t>(m_) || plan.r_next != c_.st.radii[static_cast<std::size_t>(m_)]) {
      fail("(vi)", "plan radius differs from r_{m+1}");
      return;
    }
    const QPolynomial& f = c_.fm(m_);
    auto it = c_.terms.find(m_);
    if (it == c_.terms.end() || it->second.empty() || it->second.front()->j != 0) {
      fail("(vi)", "step m has no leading eps_{m,0} term");
      return;
    }
    const PerturbationTerm& t0 = *it->second.front();
    const Circle bn{GaussianRational(0), c_.st.radii[static_cast<std::size_t>(m_ - 1)]};
    Rational low;
    for (int i = 1; i <= 3 * m_ - 2; ++i) {
      Rational L = min_modulus_on_circle(shift_constant(f, c_.beta(i)), bn, opts_.depth);
      if (i == 1 || L < low) low = L;
    }
    Rational up = max_modulus_on_circle(t0.multiplier.shifted(static_cast<unsigned>(t0.exponent)), bn, opts_.depth);
    {
      MarginRecheck mr{m_, bn, low, abs(t0.epsilon) * up, false};
      mr.pass = sgn(low) > 0 && mr.upper < low;
      if (!mr.pass) fail("(vi)", "eps_{m,0} = " + to_string(t0.epsilon) + " violates the Rouche quotient on |z| = r_m");
      rep_.margins.push_back(mr);
    }
    const QPolynomial f0 = f + t0.as_polynomial();
    std::vector<std::pair<Circle, int>> circles;
    circles.emplace_back(bn, 3 * m_ - 2);
    circles.emplace_back(Circle{GaussianRational(0), plan.r_next}, 3 * m_ + 1);
    for (const auto& d : plan.disks) circles.emplace_back(d.disk.boundary(), 3 * m_ + 1);
    for (const auto& [circle, count] : circles) {
      Rational L;
      for (int i = 1; i <= count; ++i) {
        Rational v = min_modulus_on_circle(shift_constant(f0, c_.beta(i)), circle, opts_.depth);
        if (i == 1 || v < L) L = v;
      }
      Rational U = 0;
      for (std::size_t k = 1; k < it->second.size(); ++k) {
        U += max_modulus_on_circle(it->second[k]->as_polynomial(), circle, opts_.depth);
      }
      MarginRecheck mr{m_, circle, L, U, sgn(L) > 0 && U < L};
      if (!mr.pass) {
        fail("(vi)", "Rouche margin fails on circle at " + to_string(circle.center) + " radius " + to_string(circle.radius));
      }
      rep_.margins.push_back(mr);
    }
    // Each tracked disk holds exactly one root, and it is the recorded exact point.
    const QPolynomial& f1 = c_.fm(m_ + 1);
    for (const auto& d : plan.disks) {
      if (d.beta < 1 || d.beta > 3 * m_ + 1) {
        fail("(vi)", "tracked disk with invalid beta index");
        continue;
      }
      const GaussianRational& b = c_.beta(d.beta);
      try {
        if (count_roots_in_disk(shift_constant(f1, b), d.disk) != 1) fail("(vi)", "tracked disk does not hold one root");
      } catch (const BoundaryUndecidable& e) {
        fail("(vi)", e.what());
      }
      if (!d.exact || !(eval_exact(f1, *d.exact) == b) ||
          !(gnorm(*d.exact - d.disk.center) < d.disk.radius * d.disk.radius)) {
        fail("(vi)", "tracked disk at " + to_string(d.disk.center) + " lacks its exact preimage");
      }
    }
  }

  const Context& c_;
  const int m_;
  const VerifyOptions& opts_;
  StepReport rep_;
};

void summarize(VerificationReport& r) {
  r.pass = true;
  r.first_failure.clear();
  for (const auto& s : r.steps) {
    for (const auto& it : s.items) {
      if (!it.pass) {
        if (r.pass) {
          r.first_failure = "m=" + std::to_string(s.m) + " " + it.item + ": " + (it.witnesses.empty() ? "" : it.witnesses.front());
        }
        r.pass = false;
      }
    }
  }
}

}  // namespace

bool VerificationReport::failed(const std::string& item) const {
  for (const auto& s : steps) {
    for (const auto& it : s.items) {
      if (it.item == item && !it.pass) return true;
    }
  }
  return false;
}

Json VerificationReport::to_json() const {
  Json j;
  j["pass"] = pass;
  j["first_failure"] = first_failure;
  Json steps_j = Json::array();
  for (const auto& s : steps) {
    Json sj;
    sj["m"] = s.m;
    Json items = Json::object();
    for (const auto& it : s.items) items[it.item] = Json{{"pass", it.pass}, {"witnesses", it.witnesses}};
    sj["items"] = items;
    Json margins = Json::array();
    for (const auto& mr : s.margins) {
      margins.push_back(Json{{"circle", {{"center", gaussian_json(mr.circle.center)}, {"radius", rational_json(mr.circle.radius)}}},
                             {"lower", rational_json(mr.lower)},
                             {"upper", rational_json(mr.upper)},
                             {"pass", mr.pass}});
    }
    sj["margins"] = margins;
    Json tails = Json::array();
    for (const auto& t : s.tails) {
      tails.push_back(Json{{"n", t.n}, {"j", t.j}, {"R", rational_json(t.R)}, {"bound", rational_json(t.bound)}, {"premise", t.premise}});
    }
    sj["tails"] = tails;
    steps_j.push_back(sj);
  }
  j["steps"] = steps_j;
  return j;
}

VerificationReport check_invariants(const ConstructionState& result, int m, const VerifyOptions& opts) {
  if (m < 1 || m > result.n) throw MalformedArtifact("stage " + std::to_string(m) + " outside the artifact");
  Context ctx(result);
  VerificationReport r;
  r.steps.push_back(Checker(ctx, m, opts).run());
  summarize(r);
  return r;
}

VerificationReport verify_all(const ConstructionState& result, const VerifyOptions& opts) {
  Context ctx(result);
  VerificationReport r;
  for (int m = 1; m <= result.n; ++m) r.steps.push_back(Checker(ctx, m, opts).run());
  summarize(r);
  return r;
}

Rational tail_sup_bound(int n, int /*j*/, const Rational& R, const PerturbationTerm& term) {
  if (n < 1) throw std::invalid_argument("tail_sup_bound: n must be >= 1");
  const Rational nq(n);
  const Rational base = std::max<Rational>(Rational(1), R) / nq;
  const int deg = std::max(0, term.multiplier.degree());
  return (R + 1) / nq * pow(base, static_cast<unsigned>(n + 2 + deg));
}

bool tail_premise_holds(const QPolynomial& P, const Rational& R) {
  const Rational L = length(P);
  const int deg = std::max(0, P.degree());
  for (int s = 0; s <= 8; ++s) {
    Rational scale = R * s / 8;
    for (int q = 0; q < 4; ++q) {
      for (const auto& t : {Rational(0), Rational(1, 3), Rational(2, 3)}) {
        GaussianRational z = circle_point(Circle{GaussianRational(0), sgn(scale) > 0 ? scale : Rational(1, 1024)}, q, t);
        Rational lhs = gnorm(eval_exact(P, z));
        Rational rhs = L * L * pow(std::max<Rational>(Rational(1), gnorm(z)), static_cast<unsigned>(deg));
        if (lhs > rhs) return false;
      }
    }
  }
  return true;
}

bool nonpolynomial_evidence(const ConstructionState& result) {
  for (int k = 1; k <= result.n; ++k) {
    if (sgn(result.f.coefficient(static_cast<std::size_t>(k))) == 0) return false;
  }
  return true;
}

PreservationReport rouche_preservation(const ConstructionState& result, int depth) {
  (void)depth;
  PreservationReport out;
  Context ctx(result);
  for (int n = 1; n < result.n; ++n) {
    if (static_cast<std::size_t>(n) > result.plans.size()) {
      out.failures.push_back("missing plan for step " + std::to_string(n));
      continue;
    }
    const StepPlan& plan = result.plans[static_cast<std::size_t>(n - 1)];
    const auto stages = ctx.substages(n);
    std::vector<std::pair<Disk, int>> disks;
    disks.emplace_back(Disk{GaussianRational(0), result.radii[static_cast<std::size_t>(n - 1)]}, 3 * n - 2);
    disks.emplace_back(Disk{GaussianRational(0), plan.r_next}, 3 * n + 1);
    for (const auto& d : plan.disks) disks.emplace_back(d.disk, 3 * n + 1);
    for (std::size_t k = 1; k < stages.size(); ++k) {
      // The eps_{n,0} term is only tracked on |z| = r_n; later ones on every circle.
      const std::size_t ncircles = k == 1 ? 1 : disks.size();
      for (std::size_t c = 0; c < ncircles; ++c) {
        for (int i = 1; i <= disks[c].second; ++i) {
          ++out.checked;
          const std::string tag = "step " + std::to_string(n) + " term " + std::to_string(k - 1) + " circle " +
                                  std::to_string(c) + " beta_" + std::to_string(i);
          try {
            int before = count_roots_in_disk(shift_constant(stages[k - 1], ctx.beta(i)), disks[c].first);
            int after = count_roots_in_disk(shift_constant(stages[k], ctx.beta(i)), disks[c].first);
            if (before == after) {
              ++out.preserved;
            } else {
              out.failures.push_back(tag + ": " + std::to_string(before) + " -> " + std::to_string(after));
            }
          } catch (const BoundaryUndecidable& e) {
            out.failures.push_back(tag + ": " + e.what());
          }
        }
      }
    }
  }
  return out;
}

}  // namespace entire
