// cba: command-line front end for the clustered ballistic annihilation
// library. Subcommands: solve, estimate, resolve, sweep, check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cba/analytics.hpp"
#include "cba/checks.hpp"
#include "cba/estimators.hpp"
#include "cba/fixture_io.hpp"
#include "cba/resolver.hpp"
#include "cba/svg.hpp"

#ifndef CBA_VERSION
#define CBA_VERSION "dev"
#endif

using json = nlohmann::ordered_json;
using namespace cba;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// `a:b:step` (inclusive), `x,y,z`, or a single value.
std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad number '" + s + "' in grid '" + text + "'");
    }
    if (used != s.size()) throw UsageError("bad number '" + s + "' in grid '" + text + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw UsageError("range grid must be a:b:step, got '" + text + "'");
    const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || b < a) throw UsageError("range grid needs a <= b and step > 0");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(std::min(b, a + static_cast<double>(i) * step));
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(number(part));
  }
  if (out.empty()) throw UsageError("empty grid");
  for (double p : out) {
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("grid value " + fmt17(p) + " outside [0, 1]");
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(part, &used);
      if (used != part.size() || v < 1) throw std::invalid_argument(part);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("bad size '" + part + "' in list '" + text + "'");
    }
  }
  return out;
}

ClusterLaw parse_law(const std::string& text) {
  try {
    return ClusterLaw::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

SpacingLaw parse_spacing(const std::string& text) {
  try {
    return SpacingLaw::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

class Manifest {
 public:
  Manifest(std::string subcommand, json parameters, std::uint64_t seed)
      : subcommand_(std::move(subcommand)), parameters_(std::move(parameters)), seed_(seed), start_(utc_now()) {}

  void add_output(const std::string& path) { outputs_.push_back(path); }

  json to_json() const {
    json j;
    j["subcommand"] = subcommand_;
    j["parameters"] = parameters_;
    j["seed"] = seed_;
    j["tool_version"] = CBA_VERSION;
    j["started"] = start_;
    j["finished"] = utc_now();
    j["outputs"] = outputs_;
    return j;
  }

  // CSV and SVG outputs reference their manifest through a sidecar file;
  // output on stdout gets its manifest on stderr.
  void write_sidecar(const std::string& path) const {
    if (path == "-") {
      std::cerr << to_json().dump(2) << "\n";
      return;
    }
    std::ofstream out(path + ".manifest.json");
    if (!out) throw std::runtime_error("cannot write " + path + ".manifest.json");
    out << to_json().dump(2) << "\n";
  }

 private:
  std::string subcommand_;
  json parameters_;
  std::uint64_t seed_;
  std::string start_;
  std::vector<std::string> outputs_;
};

// Single owner of one output stream: a file, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path_ != "-") {
      file_.open(path_);
      if (!file_) throw std::runtime_error("cannot open " + path_ + " for writing");
    }
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

 private:
  std::string path_;
  std::ofstream file_;
};

json interval_json(const Interval& ci) { return json::array({ci.lo, ci.hi}); }

json report_json(const EstimateReport& r) {
  json j;
  j["quantity"] = r.quantity;
  j["estimate"] = r.estimate;
  j["trials"] = r.trials;
  j["successes"] = r.successes;
  j["excluded"] = r.excluded;
  j["ci"] = interval_json(r.ci);
  j["level"] = r.level;
  j["std_error"] = r.std_error;
  j["n_sites"] = r.n_sites;
  j["analytic"] = r.analytic ? json(*r.analytic) : json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json tally_json(const InvariantTally& t) {
  json j;
  j["outcomes_checked"] = t.outcomes_checked;
  j["outcome_violations"] = t.outcome_violations;
  j["superadditivity_checks"] = t.superadditivity_checks;
  j["superadditivity_violations"] = t.superadditivity_violations;
  j["monotonicity_checks"] = t.monotonicity_checks;
  j["monotonicity_violations"] = t.monotonicity_violations;
  if (t.violations() > 0) {
    j["first_violation"] = t.first_violation;
    j["first_violation_trial"] = t.first_violation_trial;
  }
  return j;
}

struct Common {
  int threads = 0;
  bool serial = false;

  RunOptions run() const {
    RunOptions opts;
    opts.execution = serial ? Execution::Serial : Execution::Parallel;
    opts.threads = threads;
    return opts;
  }
};

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string law = "delta:1";
  std::string p = "0:1:0.05";
  std::string out = "-";
};

int cmd_solve(const SolveArgs& a) {
  const ClusterLaw law = parse_law(a.law);
  const auto grid = parse_grid(a.p);
  Manifest manifest("solve", {{"law", law.to_string()}, {"p", a.p}}, 0);
  const AnalyticCurve curve = tabulate_curve(law, grid);
  json j;
  j["law"] = law.to_string();
  j["pc"] = curve.pc;
  j["points"] = json::array();
  for (const auto& pt : curve.points) j["points"].push_back({{"p", pt.p}, {"q", pt.q}, {"theta", pt.theta}});
  if (a.out != "-") manifest.add_output(a.out);
  j["manifest"] = manifest.to_json();
  Output out(a.out);
  out.stream() << j.dump(2) << "\n";
  return 0;
}

// ------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string law = "delta:1";
  double p = 0.5;
  std::size_t n = 10000;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::string quantity = "q";
  std::string spacing = "exp";
  std::string ladder;
  std::uint32_t k_max = 4;
  std::uint32_t j = 1;
  std::uint32_t k = 1;
  bool superadditivity = false;
  std::string out = "-";
};

std::vector<std::size_t> default_ladder(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t m : {n / 4, n / 2, n}) {
    if (m >= 1 && (out.empty() || m > out.back())) out.push_back(m);
  }
  return out;
}

std::vector<std::size_t> decade_ladder(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t m = 10; m < n; m *= 10) out.push_back(m);
  out.push_back(n);
  return out;
}

int cmd_estimate(const EstimateArgs& a, const Common& common) {
  ExperimentParams params;
  params.law = parse_law(a.law);
  params.spacing = parse_spacing(a.spacing);
  params.p = a.p;
  params.n = a.n;
  params.seed = a.seed;
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  RunOptions opts = common.run();
  opts.check_superadditivity = a.superadditivity;

  json parameters{{"law", params.law.to_string()},   {"spacing", params.spacing.to_string()},
                  {"p", params.p},                   {"n", params.n},
                  {"trials", a.trials},              {"quantity", a.quantity}};
  EstimateSet set;
  if (a.quantity == "q") {
    const auto ladder = a.ladder.empty() ? default_ladder(a.n) : parse_sizes(a.ladder);
    parameters["ladder"] = ladder;
    set = estimate_q(params, ladder, a.trials, opts);
  } else if (a.quantity == "theta") {
    set.reports.push_back(estimate_theta(params, a.trials, opts, &set.invariants));
  } else if (a.quantity == "sr") {
    parameters["k_max"] = a.k_max;
    set = estimate_sr(params, a.trials, a.k_max, opts);
  } else if (a.quantity == "wcurve") {
    const auto ladder = a.ladder.empty() ? decade_ladder(a.n) : parse_sizes(a.ladder);
    parameters["ladder"] = ladder;
    set = estimate_W_curve(params, ladder, a.trials, opts);
  } else if (a.quantity == "symmetry") {
    parameters["j"] = a.j;
    parameters["k"] = a.k;
    set = estimate_arrival_symmetry(params, a.j, a.k, a.trials, opts);
  } else {
    throw UsageError("unknown quantity '" + a.quantity + "'");
  }

  Manifest manifest("estimate", parameters, a.seed);
  if (a.out != "-") manifest.add_output(a.out);
  json j;
  j["reports"] = json::array();
  for (const auto& r : set.reports) j["reports"].push_back(report_json(r));
  j["invariants"] = tally_json(set.invariants);
  j["manifest"] = manifest.to_json();
  Output out(a.out);
  out.stream() << j.dump(2) << "\n";
  return set.invariants.violations() == 0 ? 0 : kExitCheckFailed;
}

// -------------------------------------------------------------- resolve

struct ResolveArgs {
  std::string fixture;
  std::string collisions = "-";
  std::string survivors;
  std::string svg;
};

int cmd_resolve(const ResolveArgs& a) {
  Configuration config;
  if (a.fixture == "-") {
    config = read_fixture(std::cin);
  } else {
    std::ifstream in(a.fixture);
    if (!in) throw UsageError("cannot read fixture " + a.fixture);
    config = read_fixture(in);
  }
  if (!a.svg.empty() && config.size() > kSvgMaxParticles) {
    throw UsageError("SVG output is limited to " + std::to_string(kSvgMaxParticles) +
                     " sites; drop --svg or cut the fixture down with a smaller window");
  }
  const Outcome outcome = resolve(config);

  Manifest manifest("resolve",
                    {{"fixture", a.fixture}, {"collisions", a.collisions}, {"survivors", a.survivors}, {"svg", a.svg}},
                    0);
  std::vector<std::string> written;
  {
    Output out(a.collisions);
    write_collisions_csv(out.stream(), outcome);
    written.push_back(a.collisions);
  }
  if (!a.survivors.empty()) {
    Output out(a.survivors);
    write_survivors_csv(out.stream(), outcome);
    written.push_back(a.survivors);
  }
  if (!a.svg.empty()) {
    Output out(a.svg);
    write_spacetime_svg(out.stream(), config, outcome);
    written.push_back(a.svg);
  }
  bool to_stdout = false;
  for (const auto& path : written) {
    if (path == "-") {
      to_stdout = true;
    } else {
      manifest.add_output(path);
    }
  }
  for (const auto& path : written) {
    if (path != "-") manifest.write_sidecar(path);
  }
  if (to_stdout) manifest.write_sidecar("-");
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::vector<std::string> laws{"delta:1"};
  std::vector<std::string> spacings{"exp"};
  std::string p = "0.05:1:0.05";
  std::size_t n = 10000;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  bool analytic = false;
  std::string out = "-";
};

int cmd_sweep(const SweepArgs& a, const Common& common) {
  std::vector<ClusterLaw> laws;
  for (const auto& s : a.laws) laws.push_back(parse_law(s));
  std::vector<SpacingLaw> spacings;
  for (const auto& s : a.spacings) spacings.push_back(parse_spacing(s));
  const auto grid = parse_grid(a.p);

  json parameters{{"laws", json::array()}, {"spacings", json::array()}, {"p", a.p}, {"analytic", a.analytic}};
  for (const auto& l : laws) parameters["laws"].push_back(l.to_string());
  for (const auto& s : spacings) parameters["spacings"].push_back(s.to_string());
  if (!a.analytic) {
    parameters["n"] = a.n;
    parameters["trials"] = a.trials;
  }
  Manifest manifest("sweep", parameters, a.seed);

  Output out(a.out);
  std::ostream& os = out.stream();
  const bool labelled = a.analytic ? laws.size() > 1 : laws.size() * spacings.size() > 1;
  if (a.analytic) {
    os << (labelled ? "law," : "") << "p,q,theta,pc\n";
    for (const auto& law : laws) {
      const auto curve = tabulate_curve(law, grid);
      for (const auto& pt : curve.points) {
        if (labelled) os << law.to_string() << ",";
        os << fmt17(pt.p) << "," << fmt17(pt.q) << "," << fmt17(pt.theta) << "," << fmt17(curve.pc) << "\n";
      }
    }
  } else {
    const RunOptions opts = common.run();
    os << (labelled ? "law,spacing," : "") << "p,n,trials,q_hat,ci_lo,ci_hi,q_analytic,theta_hat,theta_analytic\n";
    for (const auto& law : laws) {
      for (const auto& spacing : spacings) {
        for (double p : grid) {
          ExperimentParams params;
          params.law = law;
          params.spacing = spacing;
          params.p = p;
          params.n = a.n;
          params.seed = a.seed;
          const auto q = estimate_q(params, {a.n}, a.trials, opts).reports.back();
          const auto theta = estimate_theta(params, a.trials, opts);
          if (labelled) os << law.to_string() << "," << spacing.to_string() << ",";
          os << fmt17(p) << "," << a.n << "," << a.trials << "," << fmt17(q.estimate) << "," << fmt17(q.ci.lo) << ","
             << fmt17(q.ci.hi) << "," << fmt17(q.analytic.value_or(NAN)) << "," << fmt17(theta.estimate) << ","
             << fmt17(theta.analytic.value_or(NAN)) << "\n";
          os.flush();
        }
      }
    }
  }
  if (a.out != "-") manifest.add_output(a.out);
  manifest.write_sidecar(a.out);
  return 0;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::uint64_t seed = 1;
  std::uint64_t configs = 10000;
  std::uint64_t trials = 20000;
};

int cmd_check(const CheckArgs& a, const Common& common) {
  std::vector<CheckResult> results;
  auto report = [&](CheckResult r) {
    std::printf("%s  %-32s %8.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    results.push_back(std::move(r));
  };

  OracleSuiteOptions oracle;
  oracle.configs = a.configs;
  oracle.seed = a.seed;
  InvariantTally tally;
  report(check_oracle_equivalence(oracle, tally));

  CheckResult super;
  super.name = "superadditivity and monotonicity";
  super.passed = tally.violations() == 0 && tally.superadditivity_checks > 0;
  super.detail = std::to_string(tally.superadditivity_checks) + " cuts, " + std::to_string(tally.monotonicity_checks) +
                 " prefix steps, " + std::to_string(tally.violations()) + " violations";
  if (tally.violations() > 0) super.detail += "; first: " + tally.first_violation;
  report(super);

  report(check_implicit_equation());
  report(check_recursion_closure());
  report(check_series_closure());
  report(check_symmetry(a.trials, a.seed, common.run()));

  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  return ok ? 0 : kExitCheckFailed;
}

int default_threads() {
  if (const char* env = std::getenv("CBA_THREADS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
      throw UsageError(std::string("CBA_THREADS is not an integer: ") + env);
    }
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Clustered three-velocity ballistic annihilation: analytics, simulation and checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CBA_VERSION);

  Common common;
  common.threads = default_threads();
  app.add_option("--threads", common.threads, "worker threads, 0 = OpenMP default (env CBA_THREADS)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--serial", common.serial, "run trials on the serial reference path");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "critical density and q(p), theta(p) from the implicit equation");
  s->add_option("--law", solve.law, "cluster law: delta:k | geom:b | twopoint:k | pmf:w0,w1,.. | powerlaw:a,c");
  s->add_option("--p", solve.p, "p value, list x,y,z or range a:b:step");
  s->add_option("--out", solve.out, "output path, - for stdout");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Monte Carlo estimate of one quantity");
  e->add_option("--law", est.law, "cluster law");
  e->add_option("--p", est.p, "cluster site density")->check(CLI::Range(0.0, 1.0));
  e->add_option("--n", est.n, "sites per half window")->check(CLI::PositiveNumber);
  e->add_option("--trials", est.trials, "independent trials")->check(CLI::PositiveNumber);
  e->add_option("--seed", est.seed, "run seed");
  e->add_option("--quantity", est.quantity, "q | theta | sr | wcurve | symmetry")
      ->check(CLI::IsMember({"q", "theta", "sr", "wcurve", "symmetry"}));
  e->add_option("--spacing", est.spacing, "exp[:rate] | uniform[:lo,hi]");
  e->add_option("--ladder", est.ladder, "comma-separated increasing window sizes (q, wcurve)");
  e->add_option("--kmax", est.k_max, "largest cluster size reported separately (sr)");
  e->add_option("--j", est.j, "arrival index j (symmetry)");
  e->add_option("--k", est.k, "arrival index k (symmetry)");
  e->add_flag("--superadditivity", est.superadditivity, "also check W superadditivity at the midpoint cut");
  e->add_option("--out", est.out, "output path, - for stdout");

  ResolveArgs res;
  auto* r = app.add_subcommand("resolve", "resolve a fixture file");
  r->add_option("fixture", res.fixture, "fixture path, - for stdin")->required();
  r->add_option("--collisions", res.collisions, "collision log CSV, - for stdout");
  r->add_option("--survivors", res.survivors, "survivors CSV");
  r->add_option("--svg", res.svg, "space-time diagram");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "p-grid x law x spacing table");
  w->add_option("--law", sw.laws, "cluster law (repeatable)");
  w->add_option("--spacing", sw.spacings, "spacing law (repeatable)");
  w->add_option("--p", sw.p, "p list or range a:b:step");
  w->add_option("--n", sw.n, "sites per half window")->check(CLI::PositiveNumber);
  w->add_option("--trials", sw.trials, "trials per grid point")->check(CLI::PositiveNumber);
  w->add_option("--seed", sw.seed, "run seed");
  w->add_flag("--analytic", sw.analytic, "analytic curve only: p,q,theta,pc");
  w->add_option("--out", sw.out, "output path, - for stdout");

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "verification suites; exit 1 on any failure");
  c->add_option("--seed", chk.seed, "suite seed");
  c->add_option("--configs", chk.configs, "oracle configurations")->check(CLI::PositiveNumber);
  c->add_option("--trials", chk.trials, "symmetry trials")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  if (*s) return cmd_solve(solve);
  if (*e) return cmd_estimate(est, common);
  if (*r) return cmd_resolve(res);
  if (*w) return cmd_sweep(sw, common);
  return cmd_check(chk, common);
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "cba: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "cba: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "cba: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
