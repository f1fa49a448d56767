#include "dioph/serialization.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "dioph/error.hpp"
#include "json.hpp"

namespace dioph {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("field '") + key + "' has the wrong type");
  }
}

Integer to_int(const json& j) {
  if (j.is_string()) return parse_integer(j.get<std::string>());
  if (j.is_number_integer()) return Integer(j.get<long>());
  throw InvalidArgument("expected an integer as a decimal string");
}

Rational to_rat(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw InvalidArgument("expected a rational as a decimal string");
}

json ints(const std::vector<Integer>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

std::vector<Integer> ints_from(const json& a) {
  if (!a.is_array()) throw InvalidArgument("expected an array of integers");
  std::vector<Integer> out;
  for (const auto& x : a) out.push_back(to_int(x));
  return out;
}

std::string rat(const Rational& r) { return r.get_str(); }

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json interval_json(const RationalInterval& iv) { return json::array({rat(iv.lo), rat(iv.hi)}); }

RationalInterval interval_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("expected an interval [lo, hi]");
  return {to_rat(j[0]), to_rat(j[1])};
}

json plan_json(const ConstructionPlan& plan) {
  json j;
  j["kind"] = to_string(plan.kind);
  j["k"] = plan.k;
  json l = json::array();
  for (const auto& x : plan.lambdas) l.push_back(rat(x));
  j["lambdas"] = l;
  j["w"] = rat(plan.w);
  j["depth"] = plan.depth;
  j["salt"] = plan.salt;
  return j;
}

ConstructionPlan plan_from(const json& j) {
  ConstructionPlan plan;
  plan.kind = parse_plan_kind(field<std::string>(j, "kind"));
  if (j.contains("k")) plan.k = field<unsigned>(j, "k");
  if (j.contains("lambdas")) {
    for (const auto& x : j.at("lambdas")) plan.lambdas.push_back(to_rat(x));
  } else if (j.contains("lambda")) {
    plan.lambdas.push_back(to_rat(j.at("lambda")));
  } else {
    throw InvalidArgument("plan needs 'lambda' or 'lambdas'");
  }
  if (j.contains("w")) plan.w = to_rat(j.at("w"));
  if (j.contains("depth")) plan.depth = field<std::size_t>(j, "depth");
  if (j.contains("salt")) plan.salt = field<std::uint64_t>(j, "salt");
  return plan;
}

json source_json(const RealSource& src, std::size_t min_terms) {
  json j;
  switch (src.kind()) {
    case SourceKind::ExactRational: {
      Rational v = *src.exact_value();
      j["kind"] = "rational";
      j["num"] = v.get_num().get_str();
      j["den"] = v.get_den().get_str();
      return j;
    }
    case SourceKind::ContinuedFraction:
      if (src.has_generator() && min_terms > 0) src.materialize(min_terms);
      j["kind"] = "cf";
      j["quotients"] = ints(src.known_quotients());
      break;
    case SourceKind::BinarySeries: {
      if (src.has_generator() && min_terms > 0) src.materialize(min_terms);
      j["kind"] = "binseries";
      json e = json::array();
      for (auto x : src.known_exponents()) e.push_back(x);
      j["exponents"] = e;
      break;
    }
    case SourceKind::Power:
      j["kind"] = "power";
      j["exponent"] = src.power_exponent();
      j["base"] = source_json(src.base(), min_terms);
      return j;
  }
  if (!src.provenance().empty()) j["provenance"] = parse(src.provenance());
  return j;
}

RealSource regenerate(const json& prov) {
  std::string gen = field<std::string>(prov, "generator");
  if (gen == "periodic") {
    return RealSource::periodic_continued_fraction(ints_from(prov.at("prefix")), ints_from(prov.at("period")));
  }
  if (gen == "plan") {
    ConstructionPlan plan = plan_from(prov.at("plan"));
    std::size_t coordinate = field<std::size_t>(prov, "coordinate");
    Construction c = construct(plan);
    if (coordinate < 1 || coordinate > c.sources.size()) throw InvalidArgument("provenance coordinate out of range");
    return c.sources[coordinate - 1];
  }
  throw InvalidArgument("unknown source generator '" + gen + "'");
}

RealSource source_from(const json& j) {
  std::string kind = field<std::string>(j, "kind");
  if (kind == "rational") {
    Integer den = to_int(j.at("den"));
    if (sgn(den) == 0) throw InvalidArgument("zero denominator");
    return RealSource::rational(to_int(j.at("num")), den);
  }
  if (kind == "power") {
    return RealSource::power(source_from(j.at("base")), field<unsigned>(j, "exponent"));
  }
  if (kind == "cf") {
    std::vector<Integer> q = ints_from(j.at("quotients"));
    if (j.contains("provenance")) {
      RealSource src = regenerate(j.at("provenance"));
      src.materialize(q.size());
      std::vector<Integer> got = src.known_quotients();
      if (got.size() < q.size() || !std::equal(q.begin(), q.end(), got.begin())) {
        throw VerificationFailure("stored quotients disagree with the regenerated source");
      }
      return src;
    }
    return RealSource::continued_fraction(std::move(q));
  }
  if (kind == "binseries") {
    std::vector<std::uint64_t> e;
    for (const auto& x : j.at("exponents")) e.push_back(x.is_string() ? std::stoull(x.get<std::string>()) : x.get<std::uint64_t>());
    if (j.contains("provenance")) {
      RealSource src = regenerate(j.at("provenance"));
      src.materialize(e.size());
      std::vector<std::uint64_t> got = src.known_exponents();
      if (got.size() < e.size() || !std::equal(e.begin(), e.end(), got.begin())) {
        throw VerificationFailure("stored exponents disagree with the regenerated source");
      }
      return src;
    }
    return RealSource::binary_series(std::move(e));
  }
  throw InvalidArgument("unknown source kind '" + kind + "'");
}

json distance_json(const DistanceInterval& d) {
  return {{"lo", rat(d.lo)}, {"hi", rat(d.hi)}, {"precision", d.target_precision}, {"indeterminate", d.indeterminate}};
}

DistanceInterval distance_from(const json& j) {
  DistanceInterval d;
  d.lo = to_rat(j.at("lo"));
  d.hi = to_rat(j.at("hi"));
  d.target_precision = field<unsigned>(j, "precision");
  d.indeterminate = field<bool>(j, "indeterminate");
  return d;
}

json achieved_json(const AchievedExponent& a) {
  return {{"unbounded", a.unbounded}, {"lower", rat(a.lower)}, {"approx", fmt_double(a.approx())}};
}

AchievedExponent achieved_from(const json& j) {
  AchievedExponent a;
  a.unbounded = field<bool>(j, "unbounded");
  a.lower = to_rat(j.at("lower"));
  return a;
}

const std::map<std::string, ExponentName>& exponent_names() {
  static const std::map<std::string, ExponentName> m = {
      {to_string(ExponentName::Lambda1), ExponentName::Lambda1},
      {to_string(ExponentName::LambdaK), ExponentName::LambdaK},
      {to_string(ExponentName::OmegaK), ExponentName::OmegaK},
      {to_string(ExponentName::ChiK), ExponentName::ChiK},
      {to_string(ExponentName::UniformChiK), ExponentName::UniformChiK}};
  return m;
}

json witness_json(const WitnessRecord& w) {
  json j;
  j["mode"] = to_string(w.mode);
  j["window"] = w.window.get_str();
  j["denominators"] = ints(w.denominators);
  j["numerators"] = ints(w.numerators);
  json e = json::array();
  for (const auto& d : w.errors) e.push_back(distance_json(d));
  j["errors"] = e;
  j["achieved"] = achieved_json(w.achieved);
  j["transformed"] = w.transformed;
  j["vacuous"] = w.vacuous;
  return j;
}

WitnessRecord witness_from(const json& j) {
  WitnessRecord w;
  std::string mode = field<std::string>(j, "mode");
  if (mode == to_string(WitnessMode::SharedDenominator)) {
    w.mode = WitnessMode::SharedDenominator;
  } else if (mode == to_string(WitnessMode::PerCoordinate)) {
    w.mode = WitnessMode::PerCoordinate;
  } else {
    throw InvalidArgument("unknown witness mode '" + mode + "'");
  }
  w.window = to_int(j.at("window"));
  w.denominators = ints_from(j.at("denominators"));
  w.numerators = ints_from(j.at("numerators"));
  for (const auto& e : j.at("errors")) w.errors.push_back(distance_from(e));
  w.achieved = achieved_from(j.at("achieved"));
  w.transformed = field<bool>(j, "transformed");
  w.vacuous = field<bool>(j, "vacuous");
  return w;
}

json polynomial_json(const MultiPolynomial& p) {
  json j;
  j["k"] = p.variables();
  json t = json::array();
  for (const auto& [m, c] : p.terms()) t.push_back({{"exps", m}, {"coef", rat(c)}});
  j["terms"] = t;
  return j;
}

MultiPolynomial polynomial_from(const json& j) {
  std::size_t k = field<std::size_t>(j, "k");
  if (k == 0) throw InvalidArgument("polynomial needs at least one variable");
  MultiPolynomial p(k);
  for (const auto& t : j.at("terms")) {
    Monomial m = field<Monomial>(t, "exps");
    if (m.size() != k) throw InvalidArgument("monomial exponent vector has the wrong length");
    p.add_term(m, to_rat(t.at("coef")));
  }
  return p;
}

json point_json(const RationalPoint& z) {
  json a = json::array();
  for (const auto& x : z) a.push_back(rat(x));
  return a;
}

RationalPoint point_from(const json& a) {
  RationalPoint z;
  for (const auto& x : a) z.push_back(to_rat(x));
  return z;
}

}  // namespace

std::string plan_to_json(const ConstructionPlan& plan) { return plan_json(plan).dump(2); }

ConstructionPlan plan_from_json(const std::string& text) { return plan_from(parse(text)); }

std::string plan_provenance_json(const ConstructionPlan& plan, std::size_t coordinate) {
  json j;
  j["generator"] = "plan";
  j["coordinate"] = coordinate;
  j["plan"] = plan_json(plan);
  return j.dump();
}

std::string source_to_json(const RealSource& source, std::size_t min_terms) {
  return source_json(source, min_terms).dump(2);
}

RealSource source_from_json(const std::string& text) { return source_from(parse(text)); }

std::string convergents_to_json(const ConvergentList& list) {
  json j;
  j["terminated"] = list.terminated;
  j["truncated"] = list.truncated;
  json items = json::array();
  for (const auto& c : list.items) {
    items.push_back({{"index", c.index},
                     {"quotient", c.quotient.get_str()},
                     {"numerator", c.numerator.get_str()},
                     {"denominator", c.denominator.get_str()}});
  }
  j["convergents"] = items;
  return j.dump(2);
}

ConvergentList convergents_from_json(const std::string& text) {
  json j = parse(text);
  ConvergentList list;
  list.terminated = field<bool>(j, "terminated");
  list.truncated = field<bool>(j, "truncated");
  for (const auto& c : j.at("convergents")) {
    list.items.push_back({field<std::size_t>(c, "index"), to_int(c.at("quotient")), to_int(c.at("numerator")),
                          to_int(c.at("denominator"))});
  }
  return list;
}

std::string witness_to_json(const WitnessRecord& witness) { return witness_json(witness).dump(2); }

WitnessRecord witness_from_json(const std::string& text) { return witness_from(parse(text)); }

std::string estimate_to_json(const ExponentEstimate& est, std::span<const RealSource> sources,
                             std::size_t source_terms) {
  json j;
  j["exponent"] = to_string(est.name);
  j["k"] = est.k;
  j["truncated"] = est.truncated;
  j["empirical"] = achieved_json(est.empirical);
  j["tail"] = achieved_json(est.tail);
  json windows = json::array();
  for (const auto& w : est.windows) {
    json r;
    r["window"] = w.window.get_str();
    r["route"] = w.route;
    r["flag"] = w.flag;
    r["witness"] = w.witness ? witness_json(*w.witness) : json(nullptr);
    windows.push_back(r);
  }
  j["windows"] = windows;
  json profile = json::array();
  for (const auto& p : est.profile) {
    profile.push_back({{"index", p.index},
                       {"q", p.q.get_str()},
                       {"q_next", p.q_next.get_str()},
                       {"a_next", p.a_next.get_str()},
                       {"nu", interval_json(p.nu)},
                       {"eta", interval_json(p.eta)},
                       {"tau", interval_json(p.tau)},
                       {"gap_positive", p.gap_positive},
                       {"gap_bounded", p.gap_bounded}});
  }
  j["profile"] = profile;
  if (!sources.empty()) {
    json s = json::array();
    for (const auto& src : sources) s.push_back(source_json(src, source_terms));
    j["sources"] = s;
  }
  return j.dump(2);
}

EstimateArtifact estimate_from_json(const std::string& text) {
  json j = parse(text);
  EstimateArtifact out;
  auto it = exponent_names().find(field<std::string>(j, "exponent"));
  if (it == exponent_names().end()) throw InvalidArgument("unknown exponent name");
  ExponentEstimate& est = out.estimate;
  est.name = it->second;
  est.k = field<std::size_t>(j, "k");
  est.truncated = field<bool>(j, "truncated");
  est.empirical = achieved_from(j.at("empirical"));
  est.tail = achieved_from(j.at("tail"));
  for (const auto& r : j.at("windows")) {
    WindowResult w;
    w.window = to_int(r.at("window"));
    w.route = field<std::string>(r, "route");
    w.flag = field<std::string>(r, "flag");
    if (!r.at("witness").is_null()) w.witness = witness_from(r.at("witness"));
    est.windows.push_back(std::move(w));
  }
  for (const auto& p : j.at("profile")) {
    ProfileEntry e;
    e.index = field<std::size_t>(p, "index");
    e.q = to_int(p.at("q"));
    e.q_next = to_int(p.at("q_next"));
    e.a_next = to_int(p.at("a_next"));
    e.nu = interval_from(p.at("nu"));
    e.eta = interval_from(p.at("eta"));
    e.tau = interval_from(p.at("tau"));
    e.gap_positive = field<bool>(p, "gap_positive");
    e.gap_bounded = field<bool>(p, "gap_bounded");
    est.profile.push_back(std::move(e));
  }
  if (j.contains("sources")) {
    for (const auto& s : j.at("sources")) out.sources.push_back(source_from(s));
  }
  return out;
}

std::string estimate_to_csv(const ExponentEstimate& est) {
  std::ostringstream out;
  out << "window,best_exponent\n";
  for (const auto& w : est.windows) {
    if (!w.witness) continue;
    out << w.window.get_str() << ',' << (w.witness->achieved.unbounded ? "inf" : fmt_double(w.witness->achieved.approx()))
        << '\n';
  }
  return out.str();
}

std::string trace_to_csv(const ConstructionTrace& trace) {
  std::ostringstream out;
  out << "jump,coordinate,position,h,s,target_ratio,realized_ratio,target_nu,realized_nu\n";
  for (const auto& r : trace.rows) {
    out << r.jump << ',' << r.coordinate << ',' << r.position << ',' << r.h.get_str() << ',' << r.s.get_str() << ','
        << fmt_double(r.target_ratio) << ',' << fmt_double(r.realized_ratio) << ',' << fmt_double(r.target_nu) << ','
        << fmt_double(to_double(r.realized_nu)) << '\n';
  }
  return out.str();
}

std::string construction_to_json(const Construction& c, std::size_t source_terms) {
  json j;
  j["plan"] = plan_json(c.plan);
  json s = json::array();
  for (const auto& src : c.sources) s.push_back(source_json(src, source_terms));
  j["sources"] = s;
  json d = json::array();
  for (const auto& v : c.designated) d.push_back(v);
  j["designated"] = d;
  json rows = json::array();
  for (const auto& r : c.trace.rows) {
    rows.push_back({{"jump", r.jump},
                    {"coordinate", r.coordinate},
                    {"position", r.position},
                    {"h", r.h.get_str()},
                    {"s", r.s.get_str()},
                    {"realized_nu", rat(r.realized_nu)}});
  }
  j["trace"] = rows;
  return j.dump(2);
}

std::string polynomial_to_json(const MultiPolynomial& p) { return polynomial_json(p).dump(2); }

MultiPolynomial polynomial_from_json(const std::string& text) { return polynomial_from(parse(text)); }

std::string scan_to_json(const ScanReport& r, const MultiPolynomial& p, const Box& box,
                         const RationalPointSet& points) {
  json j;
  j["polynomial"] = polynomial_json(p);
  json b = json::array();
  for (const auto& iv : box) b.push_back(interval_json(iv));
  j["box"] = b;
  json pts = json::array();
  for (const auto& z : points.points) pts.push_back(point_json(z));
  j["points"] = {{"height_bound", points.height_bound.get_str()}, {"contains_line", points.contains_line}, {"points", pts}};
  j["mode"] = to_string(r.mode);
  j["x_max"] = r.x_max.get_str();
  j["mu"] = rat(r.mu);
  j["k"] = r.k;
  j["degree"] = r.degree;
  j["refined_degree"] = r.refined_degree;
  j["derivative_bound"] = rat(r.derivative_bound);
  j["exclusion_exponent"] = r.exclusion_exponent;
  j["effective_from"] = r.effective_from ? json(r.effective_from->get_str()) : json(nullptr);
  j["evaluated"] = r.evaluated;
  j["bound_checks"] = r.bound_checks;
  j["exact_route_checks"] = r.exact_route_checks;
  j["near_points"] = r.near_points;
  j["outliers"] = r.outliers;
  j["outliers_effective"] = r.outliers_effective;
  j["points_outside_set"] = r.points_outside_set;
  json hits = json::array();
  for (const auto& h : r.hits) {
    json e;
    e["denominators"] = ints(h.denominators);
    e["numerators"] = ints(h.numerators);
    e["value"] = rat(h.value);
    e["class"] = to_string(h.cls);
    e["on_variety"] = h.on_variety;
    e["in_point_set"] = h.in_point_set;
    e["nearest"] = h.nearest ? json(*h.nearest) : json(nullptr);
    e["distance"] = h.distance ? json(rat(*h.distance)) : json(nullptr);
    e["exclusion_radius"] = h.exclusion_radius ? json(rat(*h.exclusion_radius)) : json(nullptr);
    hits.push_back(e);
  }
  j["hits"] = hits;
  return j.dump(2);
}

ScanArtifact scan_from_json(const std::string& text) {
  json j = parse(text);
  ScanArtifact out;
  out.polynomial = polynomial_from(j.at("polynomial"));
  for (const auto& iv : j.at("box")) out.box.push_back(interval_from(iv));
  const json& pts = j.at("points");
  out.points.height_bound = to_int(pts.at("height_bound"));
  out.points.contains_line = field<bool>(pts, "contains_line");
  for (const auto& z : pts.at("points")) out.points.points.push_back(point_from(z));
  ScanReport& r = out.report;
  std::string mode = field<std::string>(j, "mode");
  if (mode == to_string(ScanMode::SharedDenominator)) {
    r.mode = ScanMode::SharedDenominator;
  } else if (mode == to_string(ScanMode::PerCoordinate)) {
    r.mode = ScanMode::PerCoordinate;
  } else {
    throw InvalidArgument("unknown scan mode '" + mode + "'");
  }
  r.x_max = to_int(j.at("x_max"));
  r.mu = to_rat(j.at("mu"));
  r.k = field<std::size_t>(j, "k");
  r.degree = field<unsigned>(j, "degree");
  r.refined_degree = field<unsigned>(j, "refined_degree");
  r.derivative_bound = to_rat(j.at("derivative_bound"));
  r.exclusion_exponent = field<unsigned>(j, "exclusion_exponent");
  if (!j.at("effective_from").is_null()) r.effective_from = to_int(j.at("effective_from"));
  r.evaluated = field<std::uint64_t>(j, "evaluated");
  r.bound_checks = field<std::uint64_t>(j, "bound_checks");
  r.exact_route_checks = field<std::uint64_t>(j, "exact_route_checks");
  r.near_points = field<std::size_t>(j, "near_points");
  r.outliers = field<std::size_t>(j, "outliers");
  r.outliers_effective = field<std::size_t>(j, "outliers_effective");
  r.points_outside_set = field<std::size_t>(j, "points_outside_set");
  for (const auto& e : j.at("hits")) {
    ScanHit h;
    h.denominators = ints_from(e.at("denominators"));
    h.numerators = ints_from(e.at("numerators"));
    h.value = to_rat(e.at("value"));
    std::string cls = field<std::string>(e, "class");
    h.cls = cls == to_string(HitClass::Outlier) ? HitClass::Outlier : HitClass::NearRationalPoint;
    h.on_variety = field<bool>(e, "on_variety");
    h.in_point_set = field<bool>(e, "in_point_set");
    if (!e.at("nearest").is_null()) h.nearest = field<std::size_t>(e, "nearest");
    if (!e.at("distance").is_null()) h.distance = to_rat(e.at("distance"));
    if (!e.at("exclusion_radius").is_null()) h.exclusion_radius = to_rat(e.at("exclusion_radius"));
    r.hits.push_back(std::move(h));
  }
  return out;
}

std::string scan_to_csv(const ScanReport& r, const RationalPointSet& points) {
  std::ostringstream out;
  out << "x";
  for (std::size_t j = 1; j <= r.k; ++j) out << ",y" << j;
  out << ",abs_value,class,nearest,distance\n";
  for (const auto& h : r.hits) {
    for (std::size_t i = 0; i < h.denominators.size(); ++i) out << (i ? ";" : "") << h.denominators[i].get_str();
    for (const auto& y : h.numerators) out << ',' << y.get_str();
    out << ',' << rat(abs(h.value)) << ',' << to_string(h.cls) << ',';
    if (h.nearest) {
      const RationalPoint& z = points.points[*h.nearest];
      out << '(';
      for (std::size_t i = 0; i < z.size(); ++i) out << (i ? " " : "") << rat(z[i]);
      out << ')';
    }
    out << ',' << (h.distance ? rat(*h.distance) : std::string()) << '\n';
  }
  return out.str();
}

std::string sandwich_to_json(const SandwichReport& r) {
  json j;
  j["windows_checked"] = r.windows_checked;
  j["transforms_verified"] = r.transforms_verified;
  j["transforms_vacuous"] = r.transforms_vacuous;
  j["vacuous"] = r.vacuous;
  j["veronese_floor"] = r.veronese_floor ? json(rat(*r.veronese_floor)) : json(nullptr);
  json v = json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"window", x.window.get_str()}, {"relation", x.relation}, {"detail", x.detail}});
  }
  j["violations"] = v;
  json t = json::array();
  for (const auto& w : r.transformed) t.push_back(witness_json(w));
  j["transformed"] = t;
  return j.dump(2);
}

std::string uniform_chi_to_json(const UniformChiReport& r) {
  json j;
  j["pass"] = r.pass;
  j["worst_window"] = r.worst_window.get_str();
  j["worst"] = achieved_json(r.worst);
  json windows = json::array();
  for (const auto& w : r.windows) {
    windows.push_back({{"window", w.window.get_str()},
                       {"route", w.route},
                       {"flag", w.flag},
                       {"witness", w.witness ? witness_json(*w.witness) : json(nullptr)}});
  }
  j["windows"] = windows;
  return j.dump(2);
}

}  // namespace dioph
