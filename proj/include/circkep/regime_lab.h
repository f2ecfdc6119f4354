#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "circkep/blowup_charts.h"
#include "circkep/core_model.h"
#include "circkep/integrator.h"

namespace circkep {

enum class Regime {
  Circularizing,          // -3 < gamma < 0: ecc_sq -> 0
  EccToOneFiniteTime,     // gamma > 0 and alpha - beta + 3 > 0
  EccToOneInfiniteTime,   // gamma > 0 and alpha - beta + 3 <= 0
  CriticalSubHalf,        // gamma = 0, delta < 1/2: ecc_sq -> 4 delta^2
  CriticalSuperHalf,      // gamma = 0, delta >= 1/2: ecc_sq -> 1
};

std::string_view regime_name(Regime r);
std::optional<Regime> regime_from_name(std::string_view name);

/// Pure arithmetic on gamma, alpha - beta + 3 and delta.
/// gamma = 0 is tested exactly, so only exactly critical inputs land there.
Regime predicted_regime(const DampingParams& params);

struct PowerFit {
  double exponent = 0.0;
  double r_squared = 0.0;
  double prefactor = 0.0;  // s ~ prefactor * tau^exponent
};

/// Least squares of log s against log tau over the trailing decade of tau.
/// Throws std::invalid_argument on non-positive samples, fewer than 20 points
/// in that decade, or a total span of less than one decade.
PowerFit fit_power_law(const std::vector<std::pair<double, double>>& samples);

enum class OmegaKind { Finite, Infinite, Undetermined };

struct OmegaVerdict {
  OmegaKind kind = OmegaKind::Undetermined;
  double estimate = 0.0;  // collision time, meaningful for Finite
  double exponent = 0.0;  // c in dt/dtau ~ tau^-c (NaN when not fitted)
  double r_squared = 0.0;
};

std::string_view omega_name(OmegaKind k);

/// Fits dt/dtau ~ tau^-c over the trailing decade of (tau, t) samples.
/// c > 1 + margin gives Finite (estimate adds the tail integral of the fit),
/// c < 1 - margin gives Infinite, anything else or r^2 < 0.9 is Undetermined.
/// When t has stopped changing to rounding over that decade the tail has
/// already converged and the verdict is Finite with estimate t_end.
OmegaVerdict collision_time_verdict(const std::vector<std::pair<double, double>>& tau_t, double margin = 0.15);

enum class PKind { Unbounded, LimitValue, ToZero, Undetermined };

struct PBehavior {
  PKind kind = PKind::Undetermined;
  double value = 0.0;  // the limit for LimitValue
};

std::string_view p_kind_name(PKind k);

/// Classifies the radial velocity from (tau, p) samples by decade envelopes
/// max |p|: stable last decade -> LimitValue, growth > 2 per decade -> Unbounded,
/// envelope down by more than half across the analysed decades -> ToZero.
PBehavior classify_p(const std::vector<std::pair<double, double>>& tau_p);

struct LabConfig {
  IntegrationConfig integration;  // tolerances and step budget; stop_time is set per phase
  double r_switch = 0.5;
  double r_escape = 1e3;
  double t_max_reduced = 1e5;
  double tau_end = 0.0;  // 0 picks default_tau_end(chart)
  double tau_first = 1e-2;
  int samples_per_decade = 400;
};

/// Chart used for the asymptotic phase: select_chart, except that gamma = 0
/// with delta >= 1/2 runs in CriticalL2 where the attractor sits at mu1 = 0.
ChartId run_chart(const DampingParams& params);
double default_tau_end(ChartId chart);

/// Raw output of one run: reduced coordinates (r, p, l, theta, t) until
/// r < r_switch, then the chart state (c1, c2, c3, theta, t) against tau.
struct RegimeRun {
  ChartId chart = ChartId::GammaNeg;
  Trajectory<5> reduced;
  Trajectory<5> chart_traj;
  bool chart_phase = false;
  bool escaped = false;
  double tau_end = 0.0;
};

RegimeRun run_regime(const DampingParams& params, const ReducedState& ic, const LabConfig& config);

struct OutcomeReport {
  DampingParams params;
  Regime predicted = Regime::Circularizing;
  std::optional<Regime> observed;
  ChartId chart = ChartId::GammaNeg;
  double ecc_sq_limit = 0.0;  // NaN when undetermined
  bool theta_diverged = false;
  bool theta_converged = false;
  double delta_theta = 0.0;
  double theta_tail = 0.0;  // theta increment over the last tau-decade
  double theta_final = 0.0;
  OmegaVerdict omega;
  PBehavior p_behavior;
  std::map<std::string, PowerFit> fits;
  std::optional<Vec2> ecc_vector_limit;
  std::array<double, 3> chart_final{};
  double tau_end = 0.0;
  std::vector<std::string> flags;
};

OutcomeReport analyze_run(const DampingParams& params, const RegimeRun& run);
OutcomeReport simulate_outcome(const DampingParams& params, const ReducedState& ic, const LabConfig& config);

struct SweepPoint {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  Regime predicted = Regime::Circularizing;
  std::optional<Regime> observed;
  bool agree = false;
  std::vector<std::string> flags;
};

struct RegimeDiagram {
  std::vector<SweepPoint> grid;  // alpha-major order

  /// Agreement over determinate points that are not flagged near-critical.
  double agreement() const;
  int determinate() const;
};

/// Standard initial condition (r, p, l, theta) = (1, 0, 0.9, 0); escapes retry once with l = 0.5.
ReducedState standard_ic(double l0 = 0.9);

/// Runs every (alpha, beta) pair on `jobs` worker threads (0: hardware concurrency).
/// Throws std::invalid_argument if the grid contains (0, 0) or invalid values.
RegimeDiagram sweep(const std::vector<double>& alphas, const std::vector<double>& betas, double delta,
                    const LabConfig& config, int jobs = 0);

}  // namespace circkep
