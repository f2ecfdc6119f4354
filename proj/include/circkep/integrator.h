#pragma once

// Dormand-Prince 5(4) with PI step control, dense output and event location.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace circkep {

template <std::size_t N>
using State = std::array<double, N>;

struct IntegrationConfig {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_init = 0.0;  // 0 picks a starting step automatically
  double h_max = std::numeric_limits<double>::infinity();
  std::int64_t max_steps = 5'000'000;
  double stop_time = 1.0;
  // Record every k-th accepted step. Ignored when output_times is non-empty.
  int sample_stride = 1;
  // If set, samples are taken at exactly these times (dense output), plus the endpoints.
  std::vector<double> output_times;
  // Components that must stay >= 0 (invariant boundaries of the exact flow).
  std::vector<int> nonnegative;
  // Constant step h_init with no error control (order tests only).
  bool fixed_step = false;
};

enum class Direction { Any, Up, Down };

template <std::size_t N>
struct EventSpec {
  std::string name;
  std::function<double(double, const State<N>&)> fn;
  Direction direction = Direction::Any;
  bool terminal = false;
};

enum class Termination { StopTime, TerminalEvent, MaxSteps, NonFinite, StepUnderflow };

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::StopTime: return "StopTime";
    case Termination::TerminalEvent: return "TerminalEvent";
    case Termination::MaxSteps: return "MaxSteps";
    case Termination::NonFinite: return "NonFinite";
    case Termination::StepUnderflow: return "StepUnderflow";
  }
  return "unknown";
}

template <std::size_t N>
struct Sample {
  double t = 0.0;
  State<N> y{};
};

template <std::size_t N>
struct EventHit {
  std::string name;
  double t = 0.0;
  State<N> y{};
};

template <std::size_t N>
struct Trajectory {
  std::vector<Sample<N>> samples;
  Termination termination = Termination::StopTime;
  std::string terminal_event;  // name of the event when termination == TerminalEvent
  std::vector<EventHit<N>> events;
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;

  const Sample<N>& back() const { return samples.back(); }
  bool finished_normally() const {
    return termination == Termination::StopTime || termination == Termination::TerminalEvent;
  }
};

namespace detail {

template <std::size_t N>
bool all_finite(const State<N>& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

// Hairer's continuous extension of DOPRI5.
template <std::size_t N>
struct Dense {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> rc{};

  State<N> operator()(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = rc[0][i] + s * (rc[1][i] + s1 * (rc[2][i] + s * (rc[3][i] + s1 * rc[4][i])));
    }
    return y;
  }
};

}  // namespace detail

/// Integrates y' = field(t, y) from (t0, y0) to config.stop_time.
/// Failures are reported through Trajectory::termination, never thrown.
template <std::size_t N, class Field>
Trajectory<N> integrate(Field&& field, double t0, const State<N>& y0, const IntegrationConfig& config,
                        const std::vector<EventSpec<N>>& events = {}) {
  // Dormand-Prince coefficients
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Trajectory<N> traj;
  const double t_end = config.stop_time;
  double t = t0;
  State<N> y = y0;
  traj.samples.push_back({t, y});

  State<N> k1 = field(t, y);
  if (!detail::all_finite(y) || !detail::all_finite(k1)) {
    traj.termination = Termination::NonFinite;
    return traj;
  }
  if (!(t_end > t0)) {
    traj.termination = Termination::StopTime;
    return traj;
  }

  auto scale = [&](double a, double b) { return config.atol + config.rtol * std::max(std::abs(a), std::abs(b)); };

  // starting step (Hairer's hinit with the max norm)
  double h = config.h_init;
  if (!(h > 0.0)) {
    double dy0 = 0.0, df0 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = scale(y[i], 0.0);
      dy0 = std::max(dy0, std::abs(y[i]) / sk);
      df0 = std::max(df0, std::abs(k1[i]) / sk);
    }
    double h0 = (dy0 < 1e-10 || df0 < 1e-10) ? 1e-6 : 0.01 * dy0 / df0;
    h0 = std::min({h0, config.h_max, t_end - t0});
    State<N> y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h0 * k1[i];
    const State<N> f1 = field(t + h0, y1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) d2 = std::max(d2, std::abs(f1[i] - k1[i]) / scale(y[i], 0.0));
    d2 /= h0;
    if (!std::isfinite(d2)) d2 = 1.0 / h0;
    const double dm = std::max(df0, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min({h, config.h_max, t_end - t0});

  struct EventState {
    double g = 0.0;
  };
  std::vector<EventState> gstate(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) gstate[e].g = events[e].fn(t, y);

  std::size_t next_out = 0;
  while (next_out < config.output_times.size() && config.output_times[next_out] <= t0) ++next_out;

  constexpr double safe = 0.9, facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0, pi_beta = 0.04;
  const double expo1 = 0.2 - pi_beta * 0.75;
  double facold = 1e-4;
  bool last_rejected = false;
  bool last_nonfinite = false;
  std::int64_t steps = 0;
  int stride_count = 0;

  State<N> k2, k3, k4, k5, k6, k7, ytmp, ynew;
  while (true) {
    if (steps >= config.max_steps) {
      traj.termination = Termination::MaxSteps;
      break;
    }
    if (h < 1e-15 * std::max(1.0, std::abs(t))) {
      traj.termination = last_nonfinite ? Termination::NonFinite : Termination::StepUnderflow;
      break;
    }
    ++steps;
    const bool final_step = t + h >= t_end;
    if (final_step) h = t_end - t;

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    k2 = field(t + c2 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = field(t + c3 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = field(t + c4 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = field(t + c5 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = field(t + h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    const double t_new = final_step ? t_end : t + h;
    k7 = field(t_new, ynew);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(ei) / scale(y[i], ynew[i]));
    }

    if (!std::isfinite(err) || !detail::all_finite(ynew) || !detail::all_finite(k7)) {
      ++traj.rejected;
      last_nonfinite = true;
      last_rejected = true;
      h *= 0.25;
      continue;
    }
    last_nonfinite = false;

    const double fac11 = std::pow(err, expo1);
    if (err > 1.0 && !config.fixed_step) {
      ++traj.rejected;
      h /= std::min(facc1, fac11 / safe);
      last_rejected = true;
      continue;
    }

    // accepted
    double fac = fac11 / std::pow(facold, pi_beta);
    fac = std::clamp(fac / safe, facc2, facc1);
    double h_next = h / fac;
    facold = std::max(err, 1e-4);
    if (last_rejected) h_next = std::min(h_next, h);
    last_rejected = false;
    ++traj.accepted;

    bool defect = false;
    for (int idx : config.nonnegative) {
      double& v = ynew[static_cast<std::size_t>(idx)];
      if (v < 0.0) {
        if (v >= -10.0 * config.atol) {
          v = 0.0;
        } else {
          defect = true;
        }
      }
    }

    detail::Dense<N> dense;
    dense.t0 = t;
    dense.h = t_new - t;
    for (std::size_t i = 0; i < N; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = dense.h * k1[i] - ydiff;
      dense.rc[0][i] = y[i];
      dense.rc[1][i] = ydiff;
      dense.rc[2][i] = bspl;
      dense.rc[3][i] = ydiff - dense.h * k7[i] - bspl;
      dense.rc[4][i] = dense.h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }

    // events in (t, t_new]
    double stop_at = std::numeric_limits<double>::infinity();
    std::string stop_name;
    std::vector<EventHit<N>> hits;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const EventSpec<N>& ev = events[e];
      const double g0 = gstate[e].g;
      const double g1 = ev.fn(t_new, ynew);
      gstate[e].g = g1;
      const bool up = g0 < 0.0 && g1 >= 0.0;
      const bool down = g0 > 0.0 && g1 <= 0.0;
      const bool fire = (ev.direction == Direction::Any && (up || down)) ||
                        (ev.direction == Direction::Up && up) || (ev.direction == Direction::Down && down);
      if (!fire) continue;
      double lo = t;
      double hi = t_new;
      const double tol = 1e-12 * std::abs(t_new) + 1e-14;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = ev.fn(mid, dense(mid));
        if ((g0 < 0.0) == (gm < 0.0) && gm != 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      hits.push_back({ev.name, hi, hi == t_new ? ynew : dense(hi)});
      if (ev.terminal && hi < stop_at) {
        stop_at = hi;
        stop_name = ev.name;
      }
    }
    std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    for (auto& hit : hits) {
      if (hit.t <= stop_at) traj.events.push_back(std::move(hit));
    }

    const double t_reach = std::min(stop_at, t_new);
    if (!config.output_times.empty()) {
      while (next_out < config.output_times.size() && config.output_times[next_out] <= t_reach) {
        const double to = config.output_times[next_out++];
        if (to < t_reach) traj.samples.push_back({to, dense(to)});
      }
    }

    if (stop_at <= t_new) {
      const State<N> ys = stop_at == t_new ? ynew : dense(stop_at);
      if (stop_at > traj.samples.back().t) traj.samples.push_back({stop_at, ys});
      traj.termination = Termination::TerminalEvent;
      traj.terminal_event = stop_name;
      break;
    }

    t = t_new;
    y = ynew;
    k1 = k7;
    if (defect) {
      traj.samples.push_back({t, y});
      traj.termination = Termination::NonFinite;
      break;
    }

    if (final_step) {
      traj.samples.push_back({t, y});
      traj.termination = Termination::StopTime;
      break;
    }
    if (config.output_times.empty() && ++stride_count >= std::max(1, config.sample_stride)) {
      stride_count = 0;
      traj.samples.push_back({t, y});
    }
    h = config.fixed_step ? config.h_init : std::min(h_next, config.h_max);
  }
  // the loop may end with MaxSteps/underflow between samples
  if (traj.samples.back().t < t) traj.samples.push_back({t, y});
  return traj;
}

/// Observed order from fixed-step runs with n and 2n steps against a known
/// endpoint: log2(e_n / e_2n).
template <std::size_t N, class Field>
double convergence_order(Field&& field, double t0, const State<N>& y0, double t_end, const State<N>& exact,
                         int n_steps = 64) {
  auto run = [&](int n) {
    IntegrationConfig cfg;
    cfg.fixed_step = true;
    cfg.h_init = (t_end - t0) / n;
    cfg.stop_time = t_end;
    cfg.sample_stride = 1 << 30;
    const auto tr = integrate<N>(field, t0, y0, cfg);
    double e = 0.0;
    for (std::size_t i = 0; i < N; ++i) e = std::max(e, std::abs(tr.back().y[i] - exact[i]));
    return e;
  };
  return std::log2(run(n_steps) / run(2 * n_steps));
}

}  // namespace circkep
