// One PASS/FAIL line per acceptance criterion.

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

#include "entire/artifact.hpp"
#include "entire/certify.hpp"
#include "entire/constructor.hpp"
#include "entire/verifier.hpp"
#include "mutations.hpp"
#include "oracle.hpp"

using namespace entire;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int n, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s - %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Rational random_rational(std::mt19937_64& rng, long height) {
  long p = static_cast<long>(rng() % static_cast<unsigned long>(2 * height + 1)) - height;
  long q = 1 + static_cast<long>(rng() % static_cast<unsigned long>(height));
  Rational out(p, q);
  out.canonicalize();
  return out;
}

QPolynomial random_poly(std::mt19937_64& rng) {
  const int deg = 1 + static_cast<int>(rng() % 10);
  std::vector<Rational> c;
  for (int k = 0; k <= deg; ++k) c.push_back(random_rational(rng, 10));
  while (sgn(c.back()) == 0) c.back() = random_rational(rng, 10);
  return QPolynomial(c);
}

Circle random_circle(std::mt19937_64& rng) {
  GaussianRational center(Rational(static_cast<long>(rng() % 17) - 8) / 4, Rational(static_cast<long>(rng() % 17) - 8) / 4);
  return Circle{center, Rational(1 + static_cast<long>(rng() % 12)) / 4};
}

Rational from_oracle(const oracle::BR& q) { return parse_rational(oracle::str(q)); }

const ConstructionState* g_run = nullptr;

void criterion1() {
  ConstructionConfig cfg;
  cfg.steps = 3;
  auto t0 = Clock::now();
  static ConstructionState st;
  try {
    st = run(cfg);
  } catch (const std::exception& e) {
    report(1, false, std::string("construction aborted: ") + e.what());
    return;
  }
  g_run = &st;
  const double build = seconds_since(t0);
  bool pass = build < 600;
  std::string detail;
  auto X = make_dense_set(cfg.set_x, 0);
  auto Y = make_dense_set(cfg.set_y, cfg.r);
  for (int m = 1; m <= 3; ++m) {
    VerificationReport rep = check_invariants(st, m);
    if (!rep.pass) {
      pass = false;
      detail += " " + rep.first_failure;
    }
    const QPolynomial fm = truncation(st, m);
    for (int k = 1; k <= 3 * m - 2; ++k) {
      if (!Y->contains(eval_exact(fm, X->element_at(static_cast<std::size_t>(k))))) {
        pass = false;
        detail += " f_" + std::to_string(m) + "(alpha_" + std::to_string(k) + ") not in Y";
      }
    }
  }
  std::ostringstream os;
  os << "steps=3 built in " << build << " s, total " << seconds_since(t0) << " s, items (i)-(vi) at m=1..3" << detail;
  report(1, pass, os.str());
}

void criterion2() {
  if (!g_run) {
    report(2, false, "no construction to inspect");
    return;
  }
  PreservationReport p = rouche_preservation(*g_run);
  std::ostringstream os;
  os << p.preserved << "/" << p.checked << " counts preserved";
  if (!p.failures.empty()) os << "; first: " << p.failures.front();
  report(2, p.checked > 0 && p.preserved == p.checked, os.str());
}

void criterion3() {
  std::mt19937_64 rng(20240303);
  auto t0 = Clock::now();
  int agree = 0;
  int total = 0;
  std::string first;
  while (total < 200) {
    QPolynomial p = random_poly(rng);
    Circle c = random_circle(rng);
    std::vector<mpq_class> coeffs(p.coeffs().begin(), p.coeffs().end());
    auto rts = oracle::roots(oracle::to_complex(coeffs));
    oracle::BC center(oracle::to_bf(c.center.re), oracle::to_bf(c.center.im));
    auto oc = oracle::count_in_disk(rts, center, oracle::to_bf(c.radius));
    if (oc.clearance < oracle::BF("1e-20")) continue;
    if (sgn(min_modulus_on_circle(p, c, kDefaultDepth)) <= 0) continue;
    ++total;
    int got = -1;
    try {
      got = count_roots_in_disk(p, Disk{c.center, c.radius});
    } catch (const BoundaryUndecidable&) {
    }
    if (got == oc.count) {
      ++agree;
    } else if (first.empty()) {
      first = "; first mismatch: got " + std::to_string(got) + ", oracle " + std::to_string(oc.count);
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << agree << "/" << total << " counts match the oracle in " << secs << " s" << first;
  report(3, agree == total && secs < 120, os.str());
}

void criterion4() {
  std::mt19937_64 rng(977);
  int sound = 0;
  int tight = 0;
  const int pairs = 50;
  for (int k = 0; k < pairs; ++k) {
    QPolynomial p = random_poly(rng);
    Circle c = random_circle(rng);
    Rational L = min_modulus_on_circle(p, c, 10);
    std::vector<std::pair<mpq_class, mpq_class>> pc;
    for (const auto& a : p.coeffs()) pc.emplace_back(a, 0);
    mpq_class smin = oracle::sampled_min_norm(pc, c.center.re, c.center.im, c.radius, 10000);
    sound += L * L <= smin;
    tight += 16 * L * L >= smin;
  }
  std::ostringstream os;
  os << "L <= sampled min in " << sound << "/" << pairs << ", L >= sampled min / 4 in " << tight << "/" << pairs;
  report(4, sound == pairs && 10 * tight >= 9 * pairs, os.str());
}

void criterion5() {
  PerturbationTerm t;
  t.multiplier = QPolynomial{1};
  const Rational a = nu_bound(2, 1, QPolynomial{1}, 4);
  const Rational b = nu_bound(1, 2, QPolynomial{1, -2, 3}, 11);
  const Rational c = tail_sup_bound(2, 0, Rational(1), t);
  const bool pass = a == Rational(1, 128) && a == from_oracle(oracle::nu(1, 4, 2, 0)) && b == Rational(1, 66) &&
                    b == from_oracle(oracle::nu(6, 11, 1, 2)) && c == Rational(1, 16) &&
                    c == from_oracle(oracle::tail(2, 0, 1));
  report(5, pass, "nu = " + to_string(a) + ", " + to_string(b) + "; tail = " + to_string(c));
}

void criterion6() {
  if (!g_run) {
    report(6, false, "no construction to inspect");
    return;
  }
  const QPolynomial f3 = truncation(*g_run, 3);
  const QPolynomial d3 = derivative(f3);
  auto X = make_dense_set("qi", 0);
  bool pass = true;
  std::string detail;
  for (int k = 1; k <= 3; ++k) {
    if (sgn(f3.coefficient(static_cast<std::size_t>(k))) == 0) {
      pass = false;
      detail += " a_" + std::to_string(k) + " = 0";
    }
  }
  int checked = 0;
  for (int k = 2; k <= 7; ++k) {
    ++checked;
    if (eval_exact(d3, X->element_at(static_cast<std::size_t>(k))).is_zero()) {
      pass = false;
      detail += " f_3' vanishes at alpha_" + std::to_string(k);
    }
  }
  report(6, pass, "a_1..a_3 nonzero, f_3' nonzero at " + std::to_string(checked) + " points of X_3" + detail);
}

void criterion7() {
  if (!g_run) {
    report(7, false, "no construction to inspect");
    return;
  }
  ConstructionConfig cfg;
  cfg.steps = 3;
  const std::string a = serialize(*g_run);
  const std::string b = serialize(run(cfg));
  cfg.seed = 1;
  ConstructionState s1 = run(cfg);
  const QPolynomial& f0 = g_run->f;
  int differ = -1;
  for (int k = 2; k <= std::max(f0.degree(), s1.f.degree()); ++k) {
    if (f0.coefficient(static_cast<std::size_t>(k)) != s1.f.coefficient(static_cast<std::size_t>(k))) {
      differ = k;
      break;
    }
  }
  report(7, a == b && differ >= 2,
         std::string(a == b ? "byte-identical reruns" : "reruns differ") + "; seeds 0 and 1 first differ at a_" +
             std::to_string(differ));
}

void criterion8() {
  if (!g_run) {
    report(8, false, "no construction to inspect");
    return;
  }
  int caught = 0;
  std::string detail;
  auto muts = mutations::all();
  for (const auto& m : muts) {
    Json j = to_json(*g_run);
    m.apply(j);
    VerificationReport rep = verify_all(state_from_json(j));
    const bool ok = !rep.pass && rep.failed(m.item);
    caught += ok;
    detail += "; " + m.name + " -> " + (rep.pass ? "not caught" : rep.first_failure.substr(0, rep.first_failure.find(':')));
  }
  report(8, caught == static_cast<int>(muts.size()),
         std::to_string(caught) + "/" + std::to_string(muts.size()) + " caught" + detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  return failures == 0 ? 0 : 1;
}
