#include "circkep/regime_lab.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "circkep/equilibria.h"
#include "circkep/math_util.h"

namespace circkep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ChartState to_chart_state(ChartId chart, const State<5>& y) { return {chart, y[0], y[1], y[2], y[3], y[4]}; }

State<5> to_array(const ChartState& c) { return {c.c1, c.c2, c.c3, c.theta, c.t}; }

std::array<double, 3> coords(const State<5>& y) { return {y[0], y[1], y[2]}; }

std::optional<ReducedState> safe_reduced(const DampingParams& params, const ChartState& c) {
  const std::array<double, 3> v{c.c1, c.c2, c.c3};
  if (v[static_cast<std::size_t>(radial_index(c.chart))] <= 0.0) return std::nullopt;
  try {
    const ReducedState s = reduced_from_chart(params, c);
    if (!std::isfinite(s.r) || !std::isfinite(s.p) || !std::isfinite(s.l)) return std::nullopt;
    return s;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<double> log_grid(double first, double last, int per_decade) {
  std::vector<double> out;
  const double step = std::log(10.0) / per_decade;
  for (int k = 0;; ++k) {
    const double tau = first * std::exp(k * step);
    if (tau >= last * (1 - 1e-12)) break;
    out.push_back(tau);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Linear interpolation of a sampled column at time tau.
double value_at(const Trajectory<5>& tr, std::size_t idx, double tau) {
  const auto& s = tr.samples;
  auto it = std::lower_bound(s.begin(), s.end(), tau, [](const Sample<5>& a, double t) { return a.t < t; });
  if (it == s.begin()) return it->y[idx];
  if (it == s.end()) return s.back().y[idx];
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (tau - a.t) / (b.t - a.t);
  return a.y[idx] + w * (b.y[idx] - a.y[idx]);
}

}  // namespace

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::Circularizing: return "Circularizing";
    case Regime::EccToOneFiniteTime: return "EccToOneFiniteTime";
    case Regime::EccToOneInfiniteTime: return "EccToOneInfiniteTime";
    case Regime::CriticalSubHalf: return "CriticalSubHalf";
    case Regime::CriticalSuperHalf: return "CriticalSuperHalf";
  }
  return "unknown";
}

std::optional<Regime> regime_from_name(std::string_view name) {
  for (Regime r : {Regime::Circularizing, Regime::EccToOneFiniteTime, Regime::EccToOneInfiniteTime,
                   Regime::CriticalSubHalf, Regime::CriticalSuperHalf}) {
    if (regime_name(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view omega_name(OmegaKind k) {
  switch (k) {
    case OmegaKind::Finite: return "Finite";
    case OmegaKind::Infinite: return "Infinite";
    case OmegaKind::Undetermined: return "Undetermined";
  }
  return "unknown";
}

std::string_view p_kind_name(PKind k) {
  switch (k) {
    case PKind::Unbounded: return "Unbounded";
    case PKind::LimitValue: return "LimitValue";
    case PKind::ToZero: return "ToZero";
    case PKind::Undetermined: return "Undetermined";
  }
  return "unknown";
}

Regime predicted_regime(const DampingParams& params) {
  if (params.gamma < 0.0) return Regime::Circularizing;
  if (params.gamma > 0.0) {
    return params.alpha - params.beta + 3.0 > 0.0 ? Regime::EccToOneFiniteTime : Regime::EccToOneInfiniteTime;
  }
  return params.delta < 0.5 ? Regime::CriticalSubHalf : Regime::CriticalSuperHalf;
}

PowerFit fit_power_law(const std::vector<std::pair<double, double>>& samples) {
  if (samples.empty()) throw std::invalid_argument("fit_power_law: no samples");
  double tmin = std::numeric_limits<double>::infinity();
  double tmax = 0.0;
  for (const auto& [tau, s] : samples) {
    if (!(tau > 0.0) || !(s > 0.0) || !std::isfinite(tau) || !std::isfinite(s)) {
      throw std::invalid_argument("fit_power_law: samples must be positive and finite");
    }
    tmin = std::min(tmin, tau);
    tmax = std::max(tmax, tau);
  }
  if (tmax < 10.0 * tmin * (1 - 1e-9)) throw std::invalid_argument("fit_power_law: span below one decade");

  const double lo = tmax / 10.0 * (1 - 1e-12);
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [tau, s] : samples) {
    if (tau < lo) continue;
    const double x = std::log(tau);
    const double y = std::log(s);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  if (n < 20) throw std::invalid_argument("fit_power_law: fewer than 20 samples in the trailing decade");
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  PowerFit fit;
  fit.exponent = cxy / vx;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
  fit.r_squared = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return fit;
}

OmegaVerdict collision_time_verdict(const std::vector<std::pair<double, double>>& tau_t, double margin) {
  OmegaVerdict v;
  v.exponent = kNaN;
  v.r_squared = kNaN;
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : tau_t)
    if (p.first > 0.0 && std::isfinite(p.second)) pts.push_back(p);
  if (pts.size() < 2) return v;
  const double tau_last = pts.back().first;
  const double t_last = pts.back().second;
  const double lo = tau_last / 10.0;
  if (pts.front().first > lo) return v;

  auto index_below = [&](double tau) {
    std::size_t i = 0;
    while (i + 1 < pts.size() && pts[i + 1].first <= tau) ++i;
    return i;
  };
  const std::size_t start = index_below(lo);
  // Tail already below integration accuracy and still shrinking: t has converged.
  // A divergent tail (c < 1) grows from one decade to the next and never lands here.
  const double inc_last = t_last - pts[start].second;
  if (pts.front().first <= lo / 10.0 && inc_last <= 1e-10 * std::max(1.0, std::abs(t_last))) {
    const double inc_prev = pts[start].second - pts[index_below(lo / 10.0)].second;
    if (inc_last <= inc_prev) {
      v.kind = OmegaKind::Finite;
      v.estimate = t_last;
      return v;
    }
  }

  // difference over strides of ~1/40 decade so increments stay well above rounding of t
  const std::size_t in_window = pts.size() - start;
  const std::size_t stride = std::max<std::size_t>(1, in_window / 40);
  std::vector<std::pair<double, double>> rate;
  const std::size_t first = start >= stride ? start - stride : 0;
  for (std::size_t i = first; i + stride < pts.size(); i += stride) {
    const auto& a = pts[i];
    const auto& b = pts[i + stride];
    const double d = (b.second - a.second) / (b.first - a.first);
    if (b.first > a.first && d > 0.0 && std::isfinite(d)) rate.emplace_back(std::sqrt(a.first * b.first), d);
  }
  PowerFit fit;
  try {
    fit = fit_power_law(rate);
  } catch (const std::invalid_argument&) {
    return v;
  }
  v.exponent = -fit.exponent;
  v.r_squared = fit.r_squared;
  if (fit.r_squared < 0.9) return v;
  const double c = v.exponent;
  if (c > 1.0 + margin) {
    v.kind = OmegaKind::Finite;
    v.estimate = t_last + fit.prefactor * std::pow(tau_last, 1.0 - c) / (c - 1.0);
  } else if (c < 1.0 - margin) {
    v.kind = OmegaKind::Infinite;
    v.estimate = std::numeric_limits<double>::infinity();
  }
  return v;
}

PBehavior classify_p(const std::vector<std::pair<double, double>>& tau_p) {
  PBehavior out;
  if (tau_p.size() < 10) return out;
  const double tau_end = tau_p.back().first;
  // envelopes of the last three decades, newest first
  std::array<double, 3> env{0, 0, 0};
  std::array<int, 3> count{0, 0, 0};
  for (const auto& [tau, p] : tau_p) {
    if (!(tau > 0.0) || !std::isfinite(p)) continue;
    const int k = static_cast<int>(std::floor(std::log10(tau_end / tau) * (1 - 1e-12)));
    if (k < 0 || k > 2) continue;
    env[static_cast<std::size_t>(k)] = std::max(env[static_cast<std::size_t>(k)], std::abs(p));
    ++count[static_cast<std::size_t>(k)];
  }
  if (count[0] < 5 || count[1] < 5) return out;

  const double c = tau_p.back().second;
  if (std::isfinite(c) && c != 0.0) {
    double dev = 0.0;
    for (const auto& [tau, p] : tau_p)
      if (tau >= tau_end / 10.0) dev = std::max(dev, std::abs(p - c));
    if (dev < 0.05 * std::abs(c)) {
      out.kind = PKind::LimitValue;
      out.value = c;
      return out;
    }
  }
  if (env[0] > 2.0 * env[1]) {
    out.kind = PKind::Unbounded;
    return out;
  }
  const std::size_t oldest = count[2] >= 5 ? 2 : 1;
  if (env[0] < 0.5 * env[oldest]) out.kind = PKind::ToZero;
  return out;
}

ChartId run_chart(const DampingParams& params) {
  const ChartId c = select_chart(params);
  if (c == ChartId::Critical && params.delta >= 0.5) return ChartId::CriticalL2;
  return c;
}

double default_tau_end(ChartId chart) {
  switch (chart) {
    case ChartId::GammaPosA0:
    case ChartId::GammaPosApos: return 1e6;
    case ChartId::GammaNeg: return 1e4;
    case ChartId::Critical:
    case ChartId::CriticalL2: return 1e3;
  }
  return 1e4;
}

RegimeRun run_regime(const DampingParams& params, const ReducedState& ic, const LabConfig& config) {
  RegimeRun run;
  run.chart = run_chart(params);
  run.tau_end = config.tau_end > 0.0 ? config.tau_end : default_tau_end(run.chart);

  ReducedState entry = ic;
  if (ic.r >= config.r_switch) {
    IntegrationConfig ic_cfg = config.integration;
    ic_cfg.stop_time = ic.t + config.t_max_reduced;
    ic_cfg.output_times.clear();
    ic_cfg.nonnegative = {2};
    auto field = [&](double, const State<5>& y) {
      const ReducedState d = reduced_rhs(params, {y[0], y[1], y[2], y[3], y[4]});
      return State<5>{d.r, d.p, d.l, d.theta, d.t};
    };
    std::vector<EventSpec<5>> events{
        {"switch", [&](double, const State<5>& y) { return y[0] - config.r_switch; }, Direction::Down, true},
        {"escape", [&](double, const State<5>& y) { return y[0] - config.r_escape; }, Direction::Up, true}};
    run.reduced = integrate<5>(field, ic.t, {ic.r, ic.p, ic.l, ic.theta, ic.t}, ic_cfg, events);
    if (run.reduced.termination != Termination::TerminalEvent || run.reduced.terminal_event != "switch") {
      run.escaped = run.reduced.terminal_event == "escape";
      return run;
    }
    const auto& y = run.reduced.back().y;
    entry = {y[0], y[1], y[2], y[3], y[4]};
  } else {
    run.reduced.samples.push_back({ic.t, {ic.r, ic.p, ic.l, ic.theta, ic.t}});
  }

  const ChartState c0 = chart_from_reduced(run.chart, params, entry);
  IntegrationConfig cc = config.integration;
  cc.stop_time = run.tau_end;
  cc.output_times = log_grid(config.tau_first, run.tau_end, config.samples_per_decade);
  switch (run.chart) {
    case ChartId::GammaPosA0:
    case ChartId::GammaPosApos: cc.nonnegative = {0, 2}; break;
    case ChartId::GammaNeg:
    case ChartId::Critical: cc.nonnegative = {2}; break;
    case ChartId::CriticalL2: cc.nonnegative = {1, 2}; break;
  }
  const ChartId chart = run.chart;
  auto field = [&](double, const State<5>& y) { return to_array(chart_rhs(params, to_chart_state(chart, y))); };
  const double log_escape = std::log(config.r_escape);
  std::vector<EventSpec<5>> events{{"escape",
                                    [&](double, const State<5>& y) {
                                      const auto s = safe_reduced(params, to_chart_state(chart, y));
                                      return s ? std::log(s->r) - log_escape : -1.0;
                                    },
                                    Direction::Up, true}};
  run.chart_traj = integrate<5>(field, 0.0, to_array(c0), cc, events);
  run.chart_phase = true;
  run.escaped = run.chart_traj.terminal_event == "escape";
  return run;
}

OutcomeReport analyze_run(const DampingParams& params, const RegimeRun& run) {
  OutcomeReport rep;
  rep.params = params;
  rep.predicted = predicted_regime(params);
  rep.chart = run.chart;
  rep.ecc_sq_limit = kNaN;
  rep.omega.exponent = kNaN;
  rep.omega.r_squared = kNaN;

  if (!run.chart_phase) {
    rep.flags.emplace_back(run.escaped ? "escape" : "no-approach");
    if (!run.escaped) rep.flags.emplace_back(std::string("reduced-") + termination_name(run.reduced.termination));
    return rep;
  }
  const auto& tr = run.chart_traj;
  const auto& last = tr.back();
  rep.tau_end = last.t;
  rep.chart_final = coords(last.y);
  rep.theta_final = last.y[3];
  if (tr.termination != Termination::StopTime) {
    rep.flags.emplace_back(run.escaped ? "escape" : std::string("chart-") + termination_name(tr.termination));
    return rep;
  }

  const double tau_end = last.t;
  const double win_lo = tau_end / 10.0;
  const double final_lo = tau_end * std::pow(10.0, -0.25);

  std::vector<double> final_ecc;
  std::vector<std::pair<double, double>> ecc_series, tau_t, tau_p;
  for (const auto& s : tr.samples) {
    const ChartState cs = to_chart_state(run.chart, s.y);
    const double e = chart_ecc_sq(params, cs);
    if (s.t > 0.0) {
      ecc_series.emplace_back(s.t, e);
      tau_t.emplace_back(s.t, s.y[4]);
      if (const auto red = safe_reduced(params, cs)) tau_p.emplace_back(s.t, red->p);
    }
    if (s.t >= final_lo) final_ecc.push_back(e);
  }
  rep.ecc_sq_limit = median(final_ecc);

  const double theta0 = run.reduced.samples.front().y[3];
  rep.delta_theta = last.y[3] - theta0;
  rep.theta_tail = last.y[3] - value_at(tr, 3, win_lo);
  rep.theta_diverged = rep.delta_theta > 40.0 * M_PI && rep.theta_tail / (tau_end - win_lo) > 0.1;
  rep.theta_converged = std::abs(rep.theta_tail) < 1e-4;

  rep.omega = collision_time_verdict(tau_t);
  rep.p_behavior = classify_p(tau_p);

  auto try_fit = [&](const std::string& name, std::size_t idx) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : tr.samples)
      if (s.t >= win_lo / 2) pts.emplace_back(s.t, idx < 5 ? s.y[idx] : sqr(s.y[0] - 1.0) + sqr(s.y[1]));
    try {
      rep.fits[name] = fit_power_law(pts);
    } catch (const std::invalid_argument&) {
      rep.flags.push_back("fit-" + name + "-failed");
    }
  };
  auto window_pts = [&](const std::vector<std::pair<double, double>>& all) {
    std::vector<std::pair<double, double>> w;
    for (const auto& p : all)
      if (p.first >= win_lo / 2) w.push_back(p);
    return w;
  };

  switch (run.chart) {
    case ChartId::GammaPosA0: try_fit("y", 0); break;
    case ChartId::GammaPosApos: try_fit("q1", 0); break;
    case ChartId::GammaNeg: {
      try_fit("x", 2);
      try_fit("hopf_amplitude_sq", 5);
      try {
        rep.fits["ecc_sq"] = fit_power_law(window_pts(ecc_series));
      } catch (const std::invalid_argument&) {
        rep.flags.emplace_back("fit-ecc_sq-failed");
      }
      break;
    }
    case ChartId::Critical:
    case ChartId::CriticalL2: break;
  }

  // ecc vector (l^2/r - 1) e_r - l p e_theta, rotated to the plane
  if (params.gamma > 0.0) {
    if (const auto red = safe_reduced(params, to_chart_state(run.chart, last.y))) {
      const double er = red->l * red->l / red->r - 1.0;
      const double et = -red->l * red->p;
      const double th = last.y[3];
      rep.ecc_vector_limit = Vec2{er * std::cos(th) - et * std::sin(th), er * std::sin(th) + et * std::cos(th)};
    }
  }

  double final_spread = 0.0;
  for (double e : final_ecc) final_spread = std::max(final_spread, std::abs(e - rep.ecc_sq_limit));
  const bool ecc_stable = final_spread < 1e-6;
  const bool ecc_one = std::abs(rep.ecc_sq_limit - 1.0) < 1e-3;

  switch (run.chart) {
    case ChartId::GammaNeg: {
      bool to_zero = rep.ecc_sq_limit < 1e-3;
      const auto f = rep.fits.find("ecc_sq");
      if (!to_zero && f != rep.fits.end() && f->second.exponent < -0.1 && f->second.r_squared >= 0.9 &&
          rep.ecc_sq_limit < 0.05) {
        to_zero = true;
        rep.flags.emplace_back("slow-decay");
      }
      if (to_zero && rep.omega.kind == OmegaKind::Finite) {
        rep.observed = Regime::Circularizing;
      } else if (to_zero) {
        rep.flags.emplace_back("omega-inconsistent");
      }
      break;
    }
    case ChartId::GammaPosA0:
    case ChartId::GammaPosApos: {
      const auto eq = gamma_pos_equilibrium(params);
      const double target = eq.location.at(1);
      const bool settled = std::abs(last.y[1] - target) < 0.05 * std::max(1.0, std::abs(target)) && last.y[2] < 1e-3;
      if (!settled) {
        rep.flags.emplace_back("not-settled");
      } else if (ecc_one && rep.omega.kind == OmegaKind::Finite) {
        rep.observed = Regime::EccToOneFiniteTime;
      } else if (ecc_one && rep.omega.kind == OmegaKind::Infinite) {
        rep.observed = Regime::EccToOneInfiniteTime;
      }
      break;
    }
    case ChartId::Critical:
    case ChartId::CriticalL2: {
      if (ecc_stable && ecc_one) {
        rep.observed = Regime::CriticalSuperHalf;
      } else if (ecc_stable && rep.ecc_sq_limit < 1.0 - 1e-3) {
        rep.observed = Regime::CriticalSubHalf;
      } else {
        rep.flags.emplace_back("not-settled");
      }
      break;
    }
  }
  return rep;
}

OutcomeReport simulate_outcome(const DampingParams& params, const ReducedState& ic, const LabConfig& config) {
  return analyze_run(params, run_regime(params, ic, config));
}

double RegimeDiagram::agreement() const {
  int n = 0, ok = 0;
  for (const auto& p : grid) {
    if (!p.observed) continue;
    if (std::find(p.flags.begin(), p.flags.end(), "near-critical") != p.flags.end()) continue;
    ++n;
    if (p.agree) ++ok;
  }
  return n == 0 ? 0.0 : static_cast<double>(ok) / n;
}

int RegimeDiagram::determinate() const {
  return static_cast<int>(std::count_if(grid.begin(), grid.end(), [](const SweepPoint& p) { return p.observed.has_value(); }));
}

ReducedState standard_ic(double l0) { return {1.0, 0.0, l0, 0.0, 0.0}; }

RegimeDiagram sweep(const std::vector<double>& alphas, const std::vector<double>& betas, double delta,
                    const LabConfig& config, int jobs) {
  if (alphas.empty() || betas.empty()) throw std::invalid_argument("sweep: empty grid");
  std::vector<DampingParams> params;
  for (double a : alphas)
    for (double b : betas) params.push_back(make_params(a, b, delta));  // validates, including (0, 0)

  RegimeDiagram out;
  out.grid.resize(params.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < params.size(); i = next++) {
      const DampingParams& pr = params[i];
      SweepPoint& sp = out.grid[i];
      OutcomeReport rep;
      bool retried = false;
      try {
        rep = simulate_outcome(pr, standard_ic(), config);
        if (std::find(rep.flags.begin(), rep.flags.end(), "escape") != rep.flags.end()) {
          rep = simulate_outcome(pr, standard_ic(0.5), config);
          retried = true;
        }
      } catch (const std::exception& e) {
        rep.params = pr;
        rep.predicted = predicted_regime(pr);
        rep.observed.reset();
        rep.flags = {std::string("error: ") + e.what()};
      }
      sp.alpha = pr.alpha;
      sp.beta = pr.beta;
      sp.delta = pr.delta;
      sp.gamma = pr.gamma;
      sp.predicted = rep.predicted;
      sp.observed = rep.observed;
      sp.agree = rep.observed && *rep.observed == rep.predicted;
      sp.flags = rep.flags;
      if (retried) sp.flags.emplace_back("retried-l0=0.5");
      if (std::abs(pr.gamma) < 0.05) sp.flags.emplace_back("near-critical");
    }
  };
  unsigned n = jobs > 0 ? static_cast<unsigned>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(params.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace circkep
