#include "entire/artifact.hpp"

namespace entire {

namespace {

Json disk_json(const Disk& d) { return Json{{"center", gaussian_json(d.center)}, {"radius", rational_json(d.radius)}}; }

Disk disk_from(const Json& j) { return Disk{gaussian_from(j.at("center")), rational_from(j.at("radius"))}; }

Json certificate_json(const Certificate& c) {
  Json j;
  j["kind"] = c.kind;
  j["step"] = c.step;
  if (c.substep >= 0) j["substep"] = c.substep;
  if (c.region) j[c.kind == "root-count" ? "disk" : "circle"] = disk_json(*c.region);
  if (!c.betas.empty()) j["betas"] = c.betas;
  if (c.kind == "rouche-margin" || c.kind == "boundary-clear") {
    j["bound"] = rational_json(c.lower);
    j["depth"] = c.depth;
  }
  if (c.kind == "rouche-margin") j["upper"] = rational_json(c.upper);
  if (c.count >= 0) j["count"] = c.count;
  if (c.point) j["point"] = gaussian_json(*c.point);
  if (c.value) j["value"] = gaussian_json(*c.value);
  j["recheckable"] = c.recheckable;
  return j;
}

Certificate certificate_from(const Json& j) {
  Certificate c;
  c.kind = j.at("kind").get<std::string>();
  c.step = j.at("step").get<int>();
  c.substep = j.value("substep", -1);
  if (j.contains("circle")) c.region = disk_from(j.at("circle"));
  if (j.contains("disk")) c.region = disk_from(j.at("disk"));
  if (j.contains("betas")) c.betas = j.at("betas").get<std::vector<int>>();
  if (j.contains("bound")) c.lower = rational_from(j.at("bound"));
  if (j.contains("upper")) c.upper = rational_from(j.at("upper"));
  c.depth = j.value("depth", 0);
  c.count = j.value("count", -1);
  if (j.contains("point")) c.point = gaussian_from(j.at("point"));
  if (j.contains("value")) c.value = gaussian_from(j.at("value"));
  c.recheckable = j.value("recheckable", true);
  return c;
}

}  // namespace

Json rational_json(const Rational& q) { return to_string(q); }

Json gaussian_json(const GaussianRational& z) { return Json{{"re", to_string(z.re)}, {"im", to_string(z.im)}}; }

Json polynomial_json(const QPolynomial& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(to_string(c));
  return Json{{"coeffs", coeffs}};
}

Rational rational_from(const Json& j) {
  if (!j.is_string()) throw MalformedArtifact("expected a rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw MalformedArtifact(e.what());
  }
}

GaussianRational gaussian_from(const Json& j) { return {rational_from(j.at("re")), rational_from(j.at("im"))}; }

QPolynomial polynomial_from(const Json& j) {
  std::vector<Rational> v;
  for (const auto& c : j.at("coeffs")) v.push_back(rational_from(c));
  return QPolynomial(std::move(v));
}

Json to_json(const ConstructionState& st) {
  Json j;
  j["r"] = rational_json(st.config.r);
  j["seed"] = st.config.seed;
  j["steps"] = st.n;
  j["set_x"] = st.config.set_x;
  j["set_y"] = st.config.set_y;
  j["depth"] = st.config.depth;
  j["allow_zero_r"] = st.config.allow_zero_r;
  Json coeffs = Json::array();
  for (const auto& c : st.f.coeffs()) coeffs.push_back(to_string(c));
  j["coefficients"] = coeffs;
  Json radii = Json::array();
  for (const auto& r : st.radii) radii.push_back(rational_json(r));
  j["radii"] = radii;
  Json terms = Json::array();
  for (const auto& t : st.perturbation_log) {
    terms.push_back(Json{{"n", t.n},
                         {"j", t.j},
                         {"epsilon", rational_json(t.epsilon)},
                         {"delta", rational_json(t.delta)},
                         {"exponent", t.exponent},
                         {"multiplier", polynomial_json(t.multiplier)}});
  }
  j["perturbations"] = terms;
  Json fwd = Json::array();
  for (const auto& a : st.forward_set) fwd.push_back(gaussian_json(a));
  j["forward_set"] = fwd;
  Json rep = Json::array();
  for (const auto& r : st.repaired_set) {
    rep.push_back(Json{{"point", gaussian_json(r.point)}, {"beta", r.beta}, {"step", r.step}});
  }
  j["repaired_set"] = rep;
  Json plans = Json::array();
  for (const auto& p : st.plans) {
    Json disks = Json::array();
    for (const auto& d : p.disks) {
      Json dj = disk_json(d.disk);
      dj["beta"] = d.beta;
      dj["real_root"] = d.real_root;
      if (d.exact) dj["exact"] = gaussian_json(*d.exact);
      disks.push_back(dj);
    }
    plans.push_back(Json{{"n", p.n},
                         {"r_next", rational_json(p.r_next)},
                         {"m_n", p.m_n},
                         {"s_n", p.s_n},
                         {"substeps", p.substeps},
                         {"s_tilde", p.s_tilde},
                         {"disks", disks}});
  }
  j["plans"] = plans;
  Json certs = Json::array();
  for (const auto& c : st.certificates) certs.push_back(certificate_json(c));
  j["certificates"] = certs;
  return j;
}

ConstructionState state_from_json(const Json& j) {
  try {
    ConstructionState st;
    st.config.r = rational_from(j.at("r"));
    st.config.seed = j.at("seed").get<std::uint64_t>();
    st.n = j.at("steps").get<int>();
    st.config.steps = st.n;
    st.config.set_x = j.value("set_x", std::string("qi"));
    st.config.set_y = j.value("set_y", std::string("qi"));
    st.config.depth = j.value("depth", kDefaultDepth);
    st.config.allow_zero_r = j.value("allow_zero_r", false);
    if (st.n < 1) throw MalformedArtifact("steps must be >= 1");
    std::vector<Rational> coeffs;
    for (const auto& c : j.at("coefficients")) coeffs.push_back(rational_from(c));
    st.f = QPolynomial(std::move(coeffs));
    for (const auto& r : j.at("radii")) st.radii.push_back(rational_from(r));
    for (const auto& t : j.at("perturbations")) {
      st.perturbation_log.push_back(PerturbationTerm{t.at("n").get<int>(), t.at("j").get<int>(),
                                                     rational_from(t.at("epsilon")), rational_from(t.at("delta")),
                                                     t.at("exponent").get<int>(), polynomial_from(t.at("multiplier"))});
    }
    for (const auto& a : j.at("forward_set")) st.forward_set.push_back(gaussian_from(a));
    for (const auto& r : j.at("repaired_set")) {
      st.repaired_set.push_back(RepairedPoint{gaussian_from(r.at("point")), r.at("beta").get<int>(), r.at("step").get<int>()});
    }
    if (j.contains("plans")) {
      for (const auto& p : j.at("plans")) {
        StepPlan plan;
        plan.n = p.at("n").get<int>();
        plan.r_next = rational_from(p.at("r_next"));
        plan.m_n = p.at("m_n").get<int>();
        plan.s_n = p.at("s_n").get<int>();
        plan.substeps = p.at("substeps").get<int>();
        plan.s_tilde = p.at("s_tilde").get<long>();
        for (const auto& d : p.at("disks")) {
          TrackedDisk td;
          td.disk = disk_from(d);
          td.beta = d.at("beta").get<int>();
          td.real_root = d.value("real_root", false);
          if (d.contains("exact")) td.exact = gaussian_from(d.at("exact"));
          plan.disks.push_back(std::move(td));
        }
        st.plans.push_back(std::move(plan));
      }
    }
    for (const auto& c : j.at("certificates")) st.certificates.push_back(certificate_from(c));
    return st;
  } catch (const Json::exception& e) {
    throw MalformedArtifact(std::string("artifact schema error: ") + e.what());
  }
}

std::string serialize(const ConstructionState& state) { return to_json(state).dump(2) + "\n"; }

ConstructionState parse_artifact(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw MalformedArtifact(std::string("artifact is not valid JSON: ") + e.what());
  }
  return state_from_json(j);
}

}  // namespace entire
