#include "circkep/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "circkep/acceptance.h"
#include "circkep/report_io.h"

namespace circkep {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, end - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw UsageError(what + ": cannot parse '" + item + "' as a number");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

ReducedState parse_ic(const std::string& text) {
  const auto v = parse_list(text, "--ic");
  if (v.size() != 4) throw UsageError("--ic expects r,p,l,theta");
  if (!(v[0] > 0.0) || !(v[2] > 0.0)) throw UsageError("--ic needs r > 0 and l > 0");
  return {v[0], v[1], v[2], v[3], 0.0};
}

int jobs_or_env(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("CIRCKEP_JOBS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;
}

bool integration_failed(Termination t) {
  return t == Termination::NonFinite || t == Termination::MaxSteps || t == Termination::StepUnderflow;
}

// Output goes to --out when given, else to the tool's standard output.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open " + path + " for writing");
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

struct ParamFlags {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;

  void add(CLI::App* app) {
    app->add_option("--alpha", alpha, "velocity exponent alpha >= 0")->required();
    app->add_option("--beta", beta, "radial exponent beta >= 0")->required();
    app->add_option("--delta", delta, "drag strength delta > 0")->required();
  }
  DampingParams params() const { return make_params(alpha, beta, delta); }
};

struct RunFlags {
  std::string ic = "1,0,0.9,0";
  double tau_end = 0.0;
  double t_max = 1e5;
  double rtol = 1e-9;
  double atol = 1e-12;
  long long max_steps = 5'000'000;
  int samples_per_decade = 400;

  void add(CLI::App* app) {
    app->add_option("--ic", ic, "initial condition r,p,l,theta")->capture_default_str();
    app->add_option("--tau-end", tau_end, "end of the chart phase in chart time (0: per-regime default)")
        ->capture_default_str();
    app->add_option("--t-max", t_max, "cap on physical time in the reduced phase")->capture_default_str();
    app->add_option("--rtol", rtol, "relative tolerance")->capture_default_str();
    app->add_option("--atol", atol, "absolute tolerance")->capture_default_str();
    app->add_option("--max-steps", max_steps, "step budget per phase")->capture_default_str();
    app->add_option("--samples-per-decade", samples_per_decade, "chart-phase output density")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }
  LabConfig config() const {
    LabConfig c;
    c.integration.rtol = rtol;
    c.integration.atol = atol;
    c.integration.max_steps = max_steps;
    c.tau_end = tau_end;
    c.t_max_reduced = t_max;
    c.samples_per_decade = samples_per_decade;
    return c;
  }
};

// key=value lines appended as flags that the command line did not set
std::vector<std::string> apply_config(std::vector<std::string> args, CLI::App& app) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  CLI::App* sub = nullptr;
  for (const auto& a : args) {
    if (a.empty() || a[0] == '-') continue;
    for (auto* s : app.get_subcommands({})) {
      if (s->get_name() == a) sub = s;
    }
    if (sub) break;
  }
  if (!sub) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt || key == "config") {
      throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "' for " + sub->get_name());
    }
    const bool given = std::any_of(args.begin(), args.end(),
                                   [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    if (given) continue;
    args.push_back(flag + "=" + value);
  }
  return args;
}

int simulate(const ParamFlags& pf, const RunFlags& rf, const std::string& frame, const std::string& out_path,
             std::ostream& out) {
  const auto params = pf.params();
  const auto run = run_regime(params, parse_ic(rf.ic), rf.config());
  Sink sink(out_path, out);
  if (frame == "reduced") {
    write_run_reduced_csv(*sink, params, run);
  } else {
    write_chart_csv(*sink, params, run.chart, run.chart_traj);
  }
  if (integration_failed(run.reduced.termination)) return kExitIntegration;
  if (run.chart_phase && integration_failed(run.chart_traj.termination)) return kExitIntegration;
  return kExitOk;
}

int classify(const ParamFlags& pf, const RunFlags& rf, bool json, std::ostream& out) {
  const auto params = pf.params();
  const auto rep = simulate_outcome(params, parse_ic(rf.ic), rf.config());
  if (json) {
    out << to_json(rep).dump(2) << '\n';
  } else {
    out << "predicted: " << regime_name(rep.predicted) << '\n';
    out << "observed: " << (rep.observed ? regime_name(*rep.observed) : "Undetermined") << '\n';
    out << "chart: " << chart_name(rep.chart) << '\n';
    out << "ecc_sq_limit: " << format_number(rep.ecc_sq_limit) << '\n';
    out << "theta: " << (rep.theta_diverged ? "diverges" : rep.theta_converged ? "converges" : "undecided") << '\n';
    out << "omega: " << omega_name(rep.omega.kind);
    if (rep.omega.kind == OmegaKind::Finite) out << " (estimate " << format_number(rep.omega.estimate) << ')';
    out << '\n';
    out << "p: " << p_kind_name(rep.p_behavior.kind);
    if (rep.p_behavior.kind == PKind::LimitValue) out << ' ' << format_number(rep.p_behavior.value);
    out << '\n';
    for (const auto& [name, f] : rep.fits) {
      out << "fit " << name << ": exponent " << format_number(f.exponent) << ", r2 " << format_number(f.r_squared)
          << '\n';
    }
    for (const auto& f : rep.flags) out << "flag: " << f << '\n';
  }
  return rep.observed ? kExitOk : kExitUndetermined;
}

int equilibria(const ParamFlags& pf, std::ostream& out) {
  const auto params = pf.params();
  nlohmann::json arr = nlohmann::json::array();
  if (params.gamma > 0.0) {
    arr.push_back(to_json(gamma_pos_equilibrium(params)));
  } else if (params.gamma < 0.0) {
    arr.push_back(to_json(zero_hopf_report(params)));
  } else {
    arr.push_back(to_json(critical_interior_equilibrium(params)));
    arr.push_back(to_json(critical_boundary_equilibrium(params)));
  }
  out << arr.dump(2) << '\n';
  return kExitOk;
}

int chart_transform(const ParamFlags& pf, const std::string& chart_text, const std::string& state,
                    const std::string& coords, std::ostream& out) {
  const auto params = pf.params();
  ChartId chart = run_chart(params);
  if (!chart_text.empty()) {
    const auto c = chart_from_name(chart_text);
    if (!c) throw UsageError("unknown chart '" + chart_text + "'");
    chart = *c;
  }
  if (!chart_admissible(chart, params)) {
    throw UsageError("chart " + std::string(chart_name(chart)) + " does not apply to these parameters");
  }
  if (state.empty() == coords.empty()) throw UsageError("give exactly one of --state and --coords");

  ChartState c;
  ReducedState s;
  if (!state.empty()) {
    const auto v = parse_list(state, "--state");
    if (v.size() < 3 || v.size() > 5) throw UsageError("--state expects r,p,l[,theta[,t]]");
    s = {v[0], v[1], v[2], v.size() > 3 ? v[3] : 0.0, v.size() > 4 ? v[4] : 0.0};
    c = chart_from_reduced(chart, params, s);
  } else {
    const auto v = parse_list(coords, "--coords");
    if (v.size() < 3 || v.size() > 5) throw UsageError("--coords expects c1,c2,c3[,theta[,t]]");
    c = {chart, v[0], v[1], v[2], v.size() > 3 ? v[3] : 0.0, v.size() > 4 ? v[4] : 0.0};
    s = reduced_from_chart(params, c);
  }
  const ChartState d = chart_rhs(params, c);
  nlohmann::json j;
  j["chart"] = std::string(chart_name(chart));
  j["coords"] = {c.c1, c.c2, c.c3};
  j["reduced"] = {{"r", s.r}, {"p", s.p}, {"l", s.l}, {"theta", s.theta}, {"t", s.t}};
  j["ecc_sq"] = chart_ecc_sq(params, c);
  j["field"] = {d.c1, d.c2, d.c3};
  j["dtheta_dtau"] = d.theta;
  j["dt_dtau"] = d.t;
  if (chart == ChartId::GammaNeg || chart == ChartId::Critical) j["hamiltonian"] = hamiltonian(c.c1, c.c2).h;
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Damped Kepler problem: regimes, blowup charts and equilibria", "circkep"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");
  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value file; command-line flags take precedence");
  };

  ParamFlags pf;
  RunFlags rf;
  std::string frame = "chart", out_path;
  bool json = false;

  auto* sim = app.add_subcommand("simulate", "integrate one trajectory and write it as CSV");
  pf.add(sim);
  rf.add(sim);
  sim->add_option("--frame", frame, "chart: chart-phase samples; reduced: whole run in (t,r,p,l)")
      ->check(CLI::IsMember({"chart", "reduced"}))
      ->capture_default_str();
  sim->add_option("--out", out_path, "output file (default: standard output)");
  add_config(sim);

  auto* cls = app.add_subcommand("classify", "run one trajectory and report its asymptotic regime");
  pf.add(cls);
  rf.add(cls);
  cls->add_flag("--json", json, "print the full report as JSON");
  add_config(cls);

  std::string alphas = "0.25,0.75,1.25,1.75,2.25", betas = "0.25,0.75,1.25,1.75,2.25";
  double sweep_delta = 0.2;
  int jobs = 0;
  RunFlags sweep_rf;
  auto* swp = app.add_subcommand("sweep", "regime diagram over an (alpha, beta) grid as CSV");
  swp->add_option("--alphas", alphas, "comma-separated alpha values")->capture_default_str();
  swp->add_option("--betas", betas, "comma-separated beta values")->capture_default_str();
  swp->add_option("--delta", sweep_delta, "drag strength")->capture_default_str();
  swp->add_option("--jobs", jobs, "worker threads (0: CIRCKEP_JOBS, else all cores)")->capture_default_str();
  swp->add_option("--tau-end", sweep_rf.tau_end, "chart-phase length (0: per-regime default)")->capture_default_str();
  swp->add_option("--rtol", sweep_rf.rtol, "relative tolerance")->capture_default_str();
  swp->add_option("--atol", sweep_rf.atol, "absolute tolerance")->capture_default_str();
  swp->add_option("--out", out_path, "output file (default: standard output)");
  add_config(swp);

  auto* eqs = app.add_subcommand("equilibria", "equilibrium reports for the regime's charts as JSON");
  pf.add(eqs);
  add_config(eqs);

  std::string chart_text, state, coords;
  auto* crt = app.add_subcommand("chart", "map a state between reduced and chart coordinates");
  pf.add(crt);
  crt->add_option("--chart", chart_text,
                  "gamma-pos-a0, gamma-pos, gamma-neg, critical, critical-l2 (default: the regime's chart)");
  crt->add_option("--state", state, "reduced state r,p,l[,theta[,t]]");
  crt->add_option("--coords", coords, "chart coordinates c1,c2,c3[,theta[,t]]");
  add_config(crt);

  std::string filter;
  bool quick = false;
  auto* ver = app.add_subcommand("verify", "run the acceptance criteria and print a pass/fail table");
  ver->add_option("--filter", filter, "glob on criterion names, e.g. critical*");
  ver->add_flag("--quick", quick, "skip the regime-diagram sweep");
  ver->add_option("--jobs", jobs, "worker threads for the sweep")->capture_default_str();
  add_config(ver);

  try {
    std::vector<std::string> full = apply_config(args, app);
    std::reverse(full.begin(), full.end());
    app.parse(full);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    for (auto* s : app.get_subcommands()) err << s->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return simulate(pf, rf, frame, out_path, out);
    if (cls->parsed()) return classify(pf, rf, json, out);
    if (eqs->parsed()) return equilibria(pf, out);
    if (crt->parsed()) return chart_transform(pf, chart_text, state, coords, out);
    if (swp->parsed()) {
      const auto a = parse_list(alphas, "--alphas");
      const auto b = parse_list(betas, "--betas");
      LabConfig cfg = sweep_rf.config();
      const auto d = sweep(a, b, sweep_delta, cfg, jobs_or_env(jobs));
      Sink sink(out_path, out);
      write_sweep_csv(*sink, d);
      err << "agreement " << format_number(d.agreement()) << " over " << d.determinate() << " determinate of "
          << d.grid.size() << " points\n";
      return kExitOk;
    }
    if (ver->parsed()) {
      const auto results = run_acceptance(out, filter, quick, jobs_or_env(jobs));
      if (results.empty()) {
        err << "no criteria match '" << filter << "'\n";
        return kExitUsage;
      }
      const bool all = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
      return all ? kExitOk : kExitVerifyFailed;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace circkep
