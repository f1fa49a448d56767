#include "run.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dioph/constructors.hpp"
#include "dioph/error.hpp"
#include "dioph/exponents.hpp"
#include "dioph/serialization.hpp"
#include "dioph/variety.hpp"
#include "json.hpp"

namespace dioph::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error("cannot write '" + (dir_ / name).string() + "'");
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
    names_.push_back(name);
  }

  const std::vector<std::string>& names() const { return names_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

Integer parse_positive(const std::string& text, const char* what) {
  Integer v;
  try {
    v = parse_integer(text);
  } catch (const std::exception&) {
    throw InvalidArgument(std::string(what) + " must be an integer");
  }
  if (sgn(v) <= 0) throw InvalidArgument(std::string(what) + " must be positive");
  return v;
}

Rational parse_number(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw InvalidArgument(std::string(what) + " must be a rational number");
  }
}

std::vector<RealSource> load_sources(const std::vector<std::string>& paths) {
  std::vector<RealSource> out;
  for (const auto& p : paths) out.push_back(source_from_json(read_file(p)));
  return out;
}

std::size_t construction_terms(const Construction& c) {
  std::size_t terms = 0;
  for (const auto& d : c.designated) {
    if (!d.empty()) terms = std::max(terms, d.back() + 3);
  }
  return terms;
}

json config_json(const RunConfig& cfg) {
  return {{"command", cfg.command},   {"plan", cfg.plan_path},   {"sources", cfg.source_paths},
          {"poly", cfg.poly_path},    {"artifacts", cfg.artifact_paths},
          {"exponent", cfg.exponent}, {"veronese", cfg.veronese}, {"xmax", cfg.x_max},
          {"ratio", cfg.ratio},       {"depth", cfg.depth},       {"method", cfg.method},
          {"mu", cfg.mu},             {"box", cfg.box},           {"mode", cfg.mode},
          {"height", cfg.height},     {"radius", cfg.radius},     {"precision", cfg.precision},
          {"threads", cfg.threads},   {"seed", cfg.seed},         {"out", cfg.out}};
}

void run_construct(const RunConfig& cfg, unsigned budget, Outputs& out) {
  if (cfg.plan_path.empty()) throw InvalidArgument("construct needs --plan");
  ConstructionPlan plan = plan_from_json(read_file(cfg.plan_path));
  if (cfg.depth > 0) plan.depth = cfg.depth;
  if (cfg.seed != 0) plan.salt = cfg.seed;
  Construction c = construct(plan, budget);
  std::size_t terms = construction_terms(c);
  out.write("construction.json", construction_to_json(c, terms));
  for (std::size_t j = 0; j < c.sources.size(); ++j) {
    out.write("source_" + std::to_string(j + 1) + ".json", source_to_json(c.sources[j], terms));
  }
  out.write("trace.csv", trace_to_csv(c.trace));
}

SearchMethod parse_method(const std::string& m) {
  if (m == "brute") return SearchMethod::BruteForce;
  if (m == "convergents") return SearchMethod::ConvergentCandidates;
  if (m == "both") return SearchMethod::Both;
  throw InvalidArgument("unknown --method '" + m + "'");
}

void run_estimate(const RunConfig& cfg, unsigned budget, Outputs& out) {
  if (cfg.source_paths.empty()) throw InvalidArgument("estimate needs --sources");
  std::vector<RealSource> sources = load_sources(cfg.source_paths);
  Integer x_max = parse_positive(cfg.x_max, "--xmax");
  if (x_max < 2) throw InvalidArgument("--xmax must be at least 2");
  Rational ratio = parse_number(cfg.ratio, "--ratio");
  if (ratio <= 1) throw InvalidArgument("--ratio must exceed 1");
  SearchMethod method = parse_method(cfg.method);

  EstimateOptions opt;
  opt.budget = budget;
  opt.threads = cfg.threads;

  const std::string& name = cfg.exponent;
  unsigned k = cfg.veronese;
  if (name == "lambda" && k == 0) throw InvalidArgument("--exponent lambda needs --veronese K");
  if (k > 0 && sources.size() != 1) throw InvalidArgument("--veronese takes exactly one source");
  RealSource base = sources[0];
  if (k > 0) sources = veronese_sources(base, k);

  auto schedule = [&] {
    WindowSchedule s = default_schedule(sources, x_max, budget, k > 0 ? &base : nullptr, k);
    if (ratio != 2) s = merge_schedules(s, geometric_schedule(Integer(2), x_max, ratio));
    return s;
  };

  ExponentEstimate est;
  if (name == "lambda1") {
    if (sources.size() != 1) throw InvalidArgument("--exponent lambda1 takes exactly one source");
    est = lambda1_profile(sources[0], cfg.depth > 0 ? cfg.depth : 8, opt);
  } else if (name == "lambda") {
    est = estimate_lambda_k(base, k, schedule(), opt);
  } else if (name == "omega") {
    est = estimate_omega_k(sources, schedule(), opt);
  } else if (name == "chi") {
    est = estimate_chi_k(sources, schedule(), method, opt);
  } else if (name == "uniform_chi") {
    UniformChiReport report = uniform_chi_check(sources, x_max, opt);
    json j = json::parse(uniform_chi_to_json(report));
    json s = json::array();
    for (const auto& src : sources) s.push_back(json::parse(source_to_json(src)));
    j["sources"] = s;
    out.write("uniform_chi.json", j.dump(2));
    est.name = ExponentName::UniformChiK;
    est.k = sources.size();
    est.windows = report.windows;
    est.empirical = report.worst;
    est.tail = report.worst;
  } else {
    throw InvalidArgument("unknown --exponent '" + name + "'");
  }
  out.write("estimate.json", estimate_to_json(est, sources));
  out.write("estimate.csv", estimate_to_csv(est));
}

void run_variety(const RunConfig& cfg, Outputs& out) {
  if (cfg.poly_path.empty()) throw InvalidArgument("variety needs --poly");
  if (cfg.mu.empty()) throw InvalidArgument("variety needs --mu");
  MultiPolynomial p = polynomial_from_json(read_file(cfg.poly_path));
  Rational mu = parse_number(cfg.mu, "--mu");
  if (sgn(mu) <= 0) throw InvalidArgument("--mu must be positive");
  Integer x_max = parse_positive(cfg.x_max, "--xmax");
  Integer height = parse_positive(cfg.height, "--height");
  Rational radius = parse_number(cfg.radius, "--radius");
  if (cfg.box.size() != 2 * p.variables()) {
    throw InvalidArgument("--box needs 2k endpoints for k = " + std::to_string(p.variables()));
  }
  Box box;
  for (std::size_t j = 0; j < p.variables(); ++j) {
    box.push_back({parse_number(cfg.box[2 * j], "--box"), parse_number(cfg.box[2 * j + 1], "--box")});
  }
  ScanOptions opt;
  if (cfg.mode == "shared") {
    opt.mode = ScanMode::SharedDenominator;
  } else if (cfg.mode == "per_coordinate") {
    opt.mode = ScanMode::PerCoordinate;
  } else {
    throw InvalidArgument("unknown --mode '" + cfg.mode + "'");
  }
  opt.radius = radius;
  opt.threads = cfg.threads;
  RationalPointSet points = rational_point_search(p, height);
  ScanReport report = variety_approx_scan(p, box, x_max, mu, points, opt);
  out.write("scan.csv", scan_to_csv(report, points));
  out.write("scan.json", scan_to_json(report, p, box, points));
}

// Verification of stored artifacts.

void verify_construction(const std::string& text, unsigned budget, std::ostream& log) {
  json j = json::parse(text);
  ConstructionPlan plan = plan_from_json(j.at("plan").dump());
  Construction c = construct(plan, budget);
  std::string again = construction_to_json(c, construction_terms(c));
  std::string stored = text;
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
  if (again != stored) throw VerificationFailure("construction does not regenerate identically from its plan");
  log << "  construction: " << c.sources.size() << " sources, " << c.trace.rows.size() << " jumps regenerated\n";
}

void verify_witnesses(const std::vector<WindowResult>& windows, const std::vector<RealSource>& sources,
                      unsigned budget, std::size_t& checked) {
  for (const auto& w : windows) {
    if (!w.witness || w.witness->transformed) continue;
    verify_witness(*w.witness, sources, budget);
    ++checked;
  }
}

void verify_estimate(const std::string& text, unsigned budget, std::ostream& log) {
  EstimateArtifact art = estimate_from_json(text);
  if (art.sources.empty()) throw InvalidArgument("estimate carries no sources to verify against");
  std::size_t checked = 0;
  verify_witnesses(art.estimate.windows, art.sources, budget, checked);
  if (art.estimate.name != ExponentName::UniformChiK) {
    AchievedExponent best;
    bool any = false;
    for (const auto& w : art.estimate.windows) {
      if (!w.witness || w.witness->transformed) continue;
      if (!any || best < w.witness->achieved) best = w.witness->achieved;
      any = true;
    }
    if (any && (best.unbounded != art.estimate.empirical.unbounded ||
                (!best.unbounded && best.lower != art.estimate.empirical.lower))) {
      throw VerificationFailure("empirical exponent is not the maximum over the stored witnesses");
    }
  }
  log << "  estimate: " << checked << " witnesses re-verified\n";
}

void verify_uniform(const std::string& text, unsigned budget, std::ostream& log) {
  json j = json::parse(text);
  std::vector<RealSource> sources;
  for (const auto& s : j.at("sources")) sources.push_back(source_from_json(s.dump()));
  std::size_t checked = 0;
  for (const auto& w : j.at("windows")) {
    if (w.at("witness").is_null()) continue;
    verify_witness(witness_from_json(w.at("witness").dump()), sources, budget);
    ++checked;
  }
  log << "  uniform chi: " << checked << " witnesses re-verified\n";
}

// |v| * m / (kC) <= X^(-mu), decided exactly as (|v| m / kC)^b X^a <= 1 for mu = a/b.
bool within_threshold(const Rational& v, const Rational& m, const Rational& kc, const Integer& X, const Rational& mu) {
  if (sgn(v) == 0) return true;
  Rational lhs = abs(v) * m / kc;
  unsigned long a = mu.get_num().get_ui();
  unsigned long b = mu.get_den().get_ui();
  Integer num = ipow(lhs.get_num(), b) * ipow(X, a);
  Integer den = ipow(lhs.get_den(), b);
  return num <= den;
}

void verify_scan(const std::string& text, std::ostream& log) {
  ScanArtifact art = scan_from_json(text);
  const MultiPolynomial& p = art.polynomial;
  const ScanReport& r = art.report;
  MultiPolynomial cleared = p.integer_cleared();
  Rational c = derivative_bound(cleared, art.box);
  if (c != r.derivative_bound) throw VerificationFailure("derivative bound does not reproduce");
  Rational kc = Rational(static_cast<long>(p.variables())) * c;
  for (const auto& z : art.points.points) {
    if (sgn(p.evaluate(z)) != 0) throw VerificationFailure("stored rational point is not on the variety");
  }
  std::size_t certificates = 0;
  for (const auto& h : r.hits) {
    RationalPoint z = h.point();
    Rational v = p.evaluate(z);
    if (v != h.value) throw VerificationFailure("hit value does not reproduce");
    if ((sgn(v) == 0) != h.on_variety) throw VerificationFailure("hit variety flag does not reproduce");
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (!art.box[j].contains(z[j])) throw VerificationFailure("hit lies outside the box");
    }
    Rational vc = cleared.evaluate(z);
    bool ok;
    if (r.mode == ScanMode::SharedDenominator) {
      const Integer& x = h.denominators.at(0);
      if (x > r.x_max) throw VerificationFailure("hit denominator exceeds X_max");
      ok = within_threshold(vc, Rational(x), kc, x, r.mu);
      if (sgn(vc) != 0) denominator_bound_check(cleared, z, x);
    } else {
      Integer big = 0, small = 0;
      Degrees deg = degrees(p);
      for (std::size_t j = 0; j < h.denominators.size(); ++j) {
        if (h.denominators[j] > r.x_max) throw VerificationFailure("hit denominator exceeds X_max");
        big = std::max(big, h.denominators[j]);
        if (deg.per_variable[j] > 0 && (sgn(small) == 0 || h.denominators[j] < small)) small = h.denominators[j];
      }
      ok = within_threshold(vc, Rational(small), kc, big, r.mu);
      if (sgn(vc) != 0) denominator_bound_check(cleared, z);
    }
    if (!ok) throw VerificationFailure("hit does not satisfy the scan threshold");
    if (h.cls == HitClass::Outlier) {
      ExclusionCertificate cert = exclusion_certificate(p, art.box, z);
      if (!h.exclusion_radius || cert.radius != *h.exclusion_radius) {
        throw VerificationFailure("exclusion radius does not reproduce");
      }
      if (!verify_exclusion_certificate(p, cert)) throw VerificationFailure("exclusion certificate fails");
      ++certificates;
    } else if (!h.on_variety && !h.distance) {
      throw VerificationFailure("near-point hit carries no distance");
    }
  }
  log << "  scan: " << r.hits.size() << " hits replayed, " << certificates << " exclusion certificates checked\n";
}

void verify_path(const fs::path& path, unsigned budget, std::ostream& log) {
  if (path.extension() != ".json") {
    log << path.string() << ": derived file, skipped\n";
    return;
  }
  std::string text = read_file(path.string());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": malformed JSON");
  }
  log << path.string() << ":\n";
  if (j.contains("tool") && j.contains("config")) {
    log << "  manifest, skipped\n";
  } else if (j.contains("plan") && j.contains("trace")) {
    verify_construction(text, budget, log);
  } else if (j.contains("exponent") && j.contains("windows")) {
    verify_estimate(text, budget, log);
  } else if (j.contains("worst") && j.contains("windows")) {
    verify_uniform(text, budget, log);
  } else if (j.contains("polynomial") && j.contains("hits")) {
    verify_scan(text, log);
  } else if (j.contains("kind")) {
    RealSource src = source_from_json(text);
    log << "  source: description " << (src.provenance().empty() ? "read" : "regenerated") << '\n';
  } else {
    throw InvalidArgument(path.string() + ": unrecognized artifact");
  }
}

void run_verify(const RunConfig& cfg, unsigned budget, std::ostream& log) {
  if (cfg.artifact_paths.empty()) throw InvalidArgument("verify needs artifact paths");
  for (const auto& p : cfg.artifact_paths) {
    fs::path path(p);
    if (fs::is_directory(path)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(path)) {
        if (e.is_regular_file()) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) verify_path(f, budget, log);
    } else if (fs::exists(path)) {
      verify_path(path, budget, log);
    } else {
      throw InvalidArgument("no such artifact '" + p + "'");
    }
  }
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

namespace {

struct Parser {
  CLI::App app{"Simultaneous approximation exponents: constructions, estimates and variety scans", "dioph"};
  CLI::App* construct = nullptr;
  CLI::App* estimate = nullptr;
  CLI::App* verify = nullptr;
  CLI::App* variety = nullptr;

  explicit Parser(RunConfig& cfg);
  void finish(RunConfig& cfg) const {
    if (*construct) cfg.command = "construct";
    if (*estimate) cfg.command = "estimate";
    if (*verify) cfg.command = "verify";
    if (*variety) cfg.command = "variety";
  }
};

Parser::Parser(RunConfig& cfg) {
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  app.add_option("--precision", cfg.precision, "Precision budget in bits (default from DIOPH_PRECISION_BUDGET)")
      ->check(CLI::Range(64u, kMaxPrecisionBudget));
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed; for construct, the plan salt");
  app.add_option("--out", cfg.out, "Output directory");

  construct = app.add_subcommand("construct", "Build sources from a plan");
  construct->add_option("--plan", cfg.plan_path, "Plan JSON")->required()->check(CLI::ExistingFile);
  construct->add_option("--depth", cfg.depth, "Number of jumps")->check(CLI::PositiveNumber);

  estimate = app.add_subcommand("estimate", "Estimate an approximation exponent");
  estimate->add_option("--sources", cfg.source_paths, "Source JSON files")->required()->check(CLI::ExistingFile);
  estimate->add_option("--exponent", cfg.exponent, "lambda1, lambda, omega, chi or uniform_chi")
      ->check(CLI::IsMember({"lambda1", "lambda", "omega", "chi", "uniform_chi"}));
  estimate->add_option("--veronese", cfg.veronese, "Use (zeta, ..., zeta^K) of a single source")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--xmax", cfg.x_max, "Largest window");
  estimate->add_option("--ratio", cfg.ratio, "Extra geometric window ratio");
  estimate->add_option("--depth", cfg.depth, "Profile depth for lambda1")->check(CLI::PositiveNumber);
  estimate->add_option("--method", cfg.method, "brute, convergents or both")
      ->check(CLI::IsMember({"brute", "convergents", "both"}));

  verify = app.add_subcommand("verify", "Replay stored witnesses and certificates");
  verify->add_option("artifacts", cfg.artifact_paths, "Artifact files or directories")->required();

  variety = app.add_subcommand("variety", "Scan rational approximations to a variety");
  variety->add_option("--poly", cfg.poly_path, "Polynomial JSON")->required()->check(CLI::ExistingFile);
  variety->add_option("--mu", cfg.mu, "Approximation exponent")->required();
  variety->add_option("--xmax", cfg.x_max, "Largest denominator");
  variety->add_option("--box", cfg.box, "lo_1 hi_1 ... lo_k hi_k")->required()->allow_extra_args();
  variety->add_option("--mode", cfg.mode, "shared or per_coordinate")
      ->check(CLI::IsMember({"shared", "per_coordinate"}));
  variety->add_option("--height", cfg.height, "Height bound of the rational point search");
  variety->add_option("--radius", cfg.radius, "Hits this close to a rational point count as near it");

}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  Parser parser(cfg);
  parser.app.parse(argc, argv);
  parser.finish(cfg);
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  std::string started_at = utc_now();
  try {
    if (cfg.precision != 0 && cfg.precision < 64) throw InvalidArgument("precision budget must be at least 64 bits");
    if (cfg.threads == 0) throw InvalidArgument("--threads must be positive");
    set_default_precision_budget(cfg.precision);
    unsigned budget = default_precision_budget();

    if (cfg.command == "verify") {
      run_verify(cfg, budget, err);
      return kOk;
    }
    fs::create_directories(cfg.out);
    Outputs out{fs::path(cfg.out)};
    if (cfg.command == "construct") {
      run_construct(cfg, budget, out);
    } else if (cfg.command == "estimate") {
      run_estimate(cfg, budget, out);
    } else if (cfg.command == "variety") {
      run_variety(cfg, out);
    } else {
      throw InvalidArgument("unknown command '" + cfg.command + "'");
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest = {{"tool", "dioph"},          {"version", kVersion},
                     {"config", config_json(cfg)}, {"precision_budget", budget},
                     {"outputs", out.names()},   {"started_at", started_at},
                     {"wall_time_seconds", wall}};
    std::ofstream m(out.dir() / "manifest.json");
    m << manifest.dump(2) << '\n';
    return kOk;
  } catch (const CostGuardExceeded& e) {
    err << "cost guard: " << e.what() << '\n';
    return kCostGuard;
  } catch (const VerificationFailure& e) {
    err << "verification failure: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const Indeterminate& e) {
    err << "indeterminate at the precision budget: " << e.what() << '\n';
    return kIndeterminate;
  } catch (const InvalidArgument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const InfeasibleSchedule& e) {
    err << "infeasible plan: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kOtherError;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  Parser parser(cfg);
  try {
    parser.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = parser.app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }
  parser.finish(cfg);
  return run(cfg, err);
}

}  // namespace dioph::cli
