#include "circkep/blowup_charts.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "circkep/math_util.h"

namespace circkep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Deliberately broken build used to check that the acceptance suite notices.
#ifdef CIRCKEP_MUTATION_X1_SIGN
constexpr double kX1Sign = -1.0;
#else
constexpr double kX1Sign = 1.0;
#endif

// Common drag factor of the r1-charts: r1^(-alpha-beta) (1 + r1^2 v^2)^(alpha/2).
double r1_drag(const DampingParams& p, double r1, double v) {
  return pow_nonneg(r1, -(p.alpha + p.beta)) * pow_nonneg(1.0 + r1 * r1 * v * v, 0.5 * p.alpha);
}

// (mu^2 + v^2)^(alpha/2) with the alpha = 0 case kept exact at the origin.
double mu_drag(const DampingParams& p, double mu, double v) {
  return pow_nonneg(mu * mu + v * v, 0.5 * p.alpha);
}

}  // namespace

std::string_view chart_name(ChartId chart) {
  switch (chart) {
    case ChartId::GammaPosA0: return "gamma-pos-a0";
    case ChartId::GammaPosApos: return "gamma-pos";
    case ChartId::GammaNeg: return "gamma-neg";
    case ChartId::Critical: return "critical";
    case ChartId::CriticalL2: return "critical-l2";
  }
  return "unknown";
}

std::optional<ChartId> chart_from_name(std::string_view name) {
  for (ChartId id : {ChartId::GammaPosA0, ChartId::GammaPosApos, ChartId::GammaNeg,
                     ChartId::Critical, ChartId::CriticalL2}) {
    if (chart_name(id) == name) return id;
  }
  return std::nullopt;
}

ChartId select_chart(const DampingParams& params) {
  if (params.gamma > 0.0) return params.alpha == 0.0 ? ChartId::GammaPosA0 : ChartId::GammaPosApos;
  if (params.gamma < 0.0) return ChartId::GammaNeg;
  return ChartId::Critical;
}

bool chart_admissible(ChartId chart, const DampingParams& params) {
  switch (chart) {
    case ChartId::GammaPosA0: return params.gamma > 0.0 && params.alpha == 0.0;
    case ChartId::GammaPosApos: return params.gamma > 0.0 && params.alpha > 0.0;
    case ChartId::GammaNeg: return params.gamma < 0.0;
    case ChartId::Critical:
    case ChartId::CriticalL2: return params.gamma == 0.0;
  }
  return false;
}

int radial_index(ChartId chart) {
  switch (chart) {
    case ChartId::GammaPosA0:
    case ChartId::GammaPosApos: return 0;
    case ChartId::GammaNeg:
    case ChartId::Critical:
    case ChartId::CriticalL2: return 2;
  }
  return 0;
}

ChartState chart_from_reduced(ChartId chart, const DampingParams& params, const ReducedState& s) {
  if (!(s.r > 0.0)) throw std::invalid_argument("chart_from_reduced: r must be positive");
  if (!(s.l > 0.0)) throw std::invalid_argument("chart_from_reduced: l must be positive");
  if (!chart_admissible(chart, params)) {
    throw std::invalid_argument("chart_from_reduced: chart " + std::string(chart_name(chart)) +
                                " is not valid for these parameters");
  }
  const double a = params.alpha;
  const double b = params.beta;
  const double g = params.gamma;
  ChartState c;
  c.chart = chart;
  c.theta = s.theta;
  c.t = s.t;
  switch (chart) {
    case ChartId::GammaPosA0: {
      const double sqrt_r = std::sqrt(s.r);
      c.c1 = std::pow(s.r, 0.5 * g);
      c.c2 = sqrt_r * s.p;
      c.c3 = s.l / sqrt_r;
      break;
    }
    case ChartId::GammaPosApos: {
      const double q1 = std::pow(s.r, g / (2.0 * (1.0 + a)));
      c.c1 = q1;
      c.c2 = s.p * std::pow(q1, (4.0 - 2.0 * b) / g);
      c.c3 = s.l * std::pow(q1, -(1.0 + a + g) / g);
      break;
    }
    case ChartId::GammaNeg:
      c.c1 = s.r / (s.l * s.l);
      c.c2 = s.p * s.l;
      c.c3 = std::pow(s.l, params.gamma_tilde);
      break;
    case ChartId::Critical:
      c.c1 = s.r / (s.l * s.l);
      c.c2 = s.p * s.l;
      c.c3 = s.l;
      break;
    case ChartId::CriticalL2: {
      const double sqrt_r = std::sqrt(s.r);
      c.c1 = s.p * sqrt_r;
      c.c2 = s.l / sqrt_r;
      c.c3 = sqrt_r;
      break;
    }
  }
  return c;
}

ReducedState reduced_from_chart(const DampingParams& params, const ChartState& c) {
  const std::array<double, 3> coords{c.c1, c.c2, c.c3};
  if (!(coords[radial_index(c.chart)] > 0.0)) {
    throw std::invalid_argument("reduced_from_chart: radial-like coordinate must be positive");
  }
  const double a = params.alpha;
  const double b = params.beta;
  const double g = params.gamma;
  ReducedState s;
  s.theta = c.theta;
  s.t = c.t;
  switch (c.chart) {
    case ChartId::GammaPosA0: {
      const double y = c.c1;
      s.r = std::pow(y, 2.0 / g);
      s.p = std::pow(y, -1.0 / g) * c.c2;
      s.l = std::pow(y, 1.0 / g) * c.c3;
      break;
    }
    case ChartId::GammaPosApos: {
      const double q1 = c.c1;
      s.r = std::pow(q1, 2.0 * (1.0 + a) / g);
      s.p = std::pow(q1, (2.0 * b - 4.0) / g) * c.c2;
      s.l = std::pow(q1, (1.0 + a + g) / g) * c.c3;
      break;
    }
    case ChartId::GammaNeg: {
      const double gt = params.gamma_tilde;
      s.l = std::pow(c.c3, 1.0 / gt);
      s.r = std::pow(c.c3, 2.0 / gt) * c.c1;
      s.p = c.c2 / s.l;
      break;
    }
    case ChartId::Critical:
      s.l = c.c3;
      s.r = c.c3 * c.c3 * c.c1;
      s.p = c.c2 / c.c3;
      break;
    case ChartId::CriticalL2:
      s.r = c.c3 * c.c3;
      s.p = c.c1 / c.c3;
      s.l = c.c2 * c.c3;
      break;
  }
  return s;
}

std::array<double, 3> chart_field(ChartId chart, const DampingParams& params,
                                  const std::array<double, 3>& c) {
  const double a = params.alpha;
  const double b = params.beta;
  const double g = params.gamma;
  const double d = params.delta;
  switch (chart) {
    case ChartId::GammaPosA0: {
      const auto [y, v1, mu1] = c;
      return {0.5 * g * y * y * v1,
              -y + mu1 * mu1 * y + 0.5 * v1 * v1 * y - d * v1,
              -(0.5 * y * v1 + d) * mu1};
    }
    case ChartId::GammaPosApos: {
      const auto [q1, v11, mu11] = c;
      const double q1_sq = q1 * q1;
      const double drag = d * mu_drag(params, mu11, v11);
      return {g / (2.0 * (a + 1.0)) * q1_sq * q1 * v11,
              -1.0 + q1_sq * (mu11 * mu11 + (2.0 - b) / (a + 1.0) * v11 * v11) - drag * v11,
              -((a + b - 1.0) / (a + 1.0) * q1_sq * v11 + drag) * mu11};
    }
    case ChartId::GammaNeg: {
      const auto [r1, v, x] = c;
      if (!(r1 > 0.0)) return {kNaN, kNaN, kNaN};
      const double drag = d * r1_drag(params, r1, v);
      return {v + 2.0 * x * drag * r1,
              -(r1 - 1.0) / (r1 * r1 * r1) - 2.0 * x * drag * v,
              -params.gamma_tilde * drag * x * x};
    }
    case ChartId::Critical: {
      const auto [r1, v, rho1] = c;
      if (!(r1 > 0.0)) return {kNaN, kNaN, kNaN};
      const double drag = d * r1_drag(params, r1, v);
      return {v + kX1Sign * 2.0 * drag * r1,
              -(r1 - 1.0) / (r1 * r1 * r1) - 2.0 * drag * v,
              -drag * rho1};
    }
    case ChartId::CriticalL2: {
      const auto [v1, mu1, rho2] = c;
      const double drag = d * mu_drag(params, mu1, v1);
      return {0.5 * v1 * v1 - 1.0 + mu1 * mu1 - drag * v1,
              -(0.5 * v1 + drag) * mu1,
              0.5 * rho2 * v1};
    }
  }
  return {kNaN, kNaN, kNaN};
}

TimeFactors chart_time_factors(const DampingParams& params, const ChartState& c) {
  const double a = params.alpha;
  const double b = params.beta;
  const double g = params.gamma;
  switch (c.chart) {
    case ChartId::GammaPosA0:
      return {c.c3 * c.c1, pow_nonneg(c.c1, 2.0 * b / g)};
    case ChartId::GammaPosApos:
      return {c.c3 * c.c1 * c.c1, pow_nonneg(c.c1, 2.0 * (2.0 * a + b) / g)};
    case ChartId::GammaNeg:
      return {1.0 / (c.c1 * c.c1), pow_nonneg(c.c3, 3.0 / params.gamma_tilde)};
    case ChartId::Critical:
      return {1.0 / (c.c1 * c.c1), c.c3 * c.c3 * c.c3};
    case ChartId::CriticalL2:
      // dtau/ds = mu1^-3 folded in: dtheta/ds = mu1, dt/ds = rho2^3
      return {c.c2, c.c3 * c.c3 * c.c3};
  }
  return {kNaN, kNaN};
}

ChartState chart_rhs(const DampingParams& params, const ChartState& c) {
  ChartState d;
  d.chart = c.chart;
  const std::array<double, 3> coords{c.c1, c.c2, c.c3};
  if (coords[radial_index(c.chart)] < 0.0) {
    d.c1 = d.c2 = d.c3 = d.theta = d.t = kNaN;
    return d;
  }
  const auto f = chart_field(c.chart, params, coords);
  const auto tf = chart_time_factors(params, c);
  d.c1 = f[0];
  d.c2 = f[1];
  d.c3 = f[2];
  d.theta = tf.dtheta;
  d.t = tf.dt;
  return d;
}

HamiltonianValue hamiltonian(double r1, double v) {
  return {0.5 * v * v + sqr(r1 - 1.0) / (2.0 * r1 * r1)};
}

double chart_ecc_sq(const DampingParams& /*params*/, const ChartState& c) {
  switch (c.chart) {
    case ChartId::GammaPosA0: {
      const double mu_sq = c.c3 * c.c3;
      return 1.0 - 2.0 * mu_sq * (1.0 - 0.5 * (mu_sq + c.c2 * c.c2));
    }
    case ChartId::GammaPosApos: {
      const double q_sq = c.c1 * c.c1;
      const double mu_sq = c.c3 * c.c3;
      return 1.0 - 2.0 * q_sq * mu_sq * (1.0 - 0.5 * q_sq * (mu_sq + c.c2 * c.c2));
    }
    case ChartId::GammaNeg:
    case ChartId::Critical:
      return 2.0 * hamiltonian(c.c1, c.c2).h;
    case ChartId::CriticalL2: {
      // 2 H(1/mu1^2, mu1 v1), written so that mu1 = 0 is allowed
      const double mu_sq = c.c2 * c.c2;
      return mu_sq * c.c1 * c.c1 + sqr(1.0 - mu_sq);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace circkep
