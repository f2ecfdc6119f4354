#include "circkep/core_model.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "circkep/math_util.h"

namespace circkep {

DampingParams make_params(double alpha, double beta, double delta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(delta)) {
    throw std::invalid_argument("damping parameters must be finite");
  }
  if (alpha < 0.0 || beta < 0.0) {
    std::ostringstream msg;
    msg << "alpha and beta must be non-negative (got alpha=" << alpha << ", beta=" << beta << ")";
    throw std::invalid_argument(msg.str());
  }
  if (delta <= 0.0) {
    std::ostringstream msg;
    msg << "delta must be positive (got " << delta << ")";
    throw std::invalid_argument(msg.str());
  }
  if (alpha == 0.0 && beta == 0.0) {
    throw std::invalid_argument(
        "(alpha, beta) = (0, 0) is the excluded linear-damping case");
  }
  DampingParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.delta = delta;
  p.gamma = alpha + 2.0 * beta - 3.0;
  p.gamma_tilde = -p.gamma;
  return p;
}

double damping_magnitude(const DampingParams& params, const CartesianState& state) {
  const double speed = state.udot.norm();
  const double radius = state.u.norm();
  return params.delta * pow_nonneg(speed, params.alpha + 1.0) / pow_nonneg(radius, params.beta);
}

namespace {

Vec2 gravity(const Vec2& u) {
  const double radius = u.norm();
  return u * (-1.0 / (radius * radius * radius));
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

CartesianState cartesian_rhs(const DampingParams& params, const CartesianState& state) {
  const double radius = state.u.norm();
  if (!(radius > 0.0)) return {{kNaN, kNaN}, {kNaN, kNaN}};
  const double speed = state.udot.norm();
  const double drag = params.delta * pow_nonneg(speed, params.alpha) / pow_nonneg(radius, params.beta);
  return {state.udot, gravity(state.u) - state.udot * drag};
}

CartesianState kepler_rhs(const CartesianState& state) {
  if (!(state.u.norm() > 0.0)) return {{kNaN, kNaN}, {kNaN, kNaN}};
  return {state.udot, gravity(state.u)};
}

namespace {

ReducedState reduced_rhs_impl(double delta, double alpha, double beta, const ReducedState& s) {
  if (!(s.r > 0.0)) return {kNaN, kNaN, kNaN, kNaN, kNaN};
  const double r2 = s.r * s.r;
  double drag = 0.0;
  if (delta != 0.0) {
    // ((l/r)^2 + p^2)^(alpha/2); reduces to |p|^alpha at l = 0
    const double speed_sq = s.l * s.l / r2 + s.p * s.p;
    drag = delta * pow_nonneg(speed_sq, 0.5 * alpha) / pow_nonneg(s.r, beta);
  }
  ReducedState d;
  d.r = s.p;
  d.p = -1.0 / r2 + s.l * s.l / (r2 * s.r) - drag * s.p;
  d.l = -drag * s.l;
  d.theta = s.l / r2;
  d.t = 1.0;
  return d;
}

}  // namespace

ReducedState reduced_rhs(const DampingParams& params, const ReducedState& state) {
  return reduced_rhs_impl(params.delta, params.alpha, params.beta, state);
}

ReducedState reduced_kepler_rhs(const ReducedState& state) {
  return reduced_rhs_impl(0.0, 0.0, 0.0, state);
}

ReducedState reduced_from_cartesian(const CartesianState& state, double t) {
  ReducedState s;
  s.r = state.u.norm();
  s.theta = std::atan2(state.u.y, state.u.x);
  s.l = std::abs(cross(state.u, state.udot));
  s.p = state.u.dot(state.udot) / s.r;
  s.t = t;
  return s;
}

CartesianState cartesian_from_reduced(const ReducedState& state) {
  const Vec2 radial{std::cos(state.theta), std::sin(state.theta)};
  const Vec2 tangential{-radial.y, radial.x};
  return {radial * state.r, radial * state.p + tangential * (state.l / state.r)};
}

CartesianState counterclockwise(const CartesianState& state) {
  if (cross(state.u, state.udot) >= 0.0) return state;
  return {{state.u.x, -state.u.y}, {state.udot.x, -state.udot.y}};
}

Observables observables(const CartesianState& state) {
  Observables obs;
  const double radius = state.u.norm();
  const double lz = cross(state.u, state.udot);
  // u' x L with L = lz e_z, minus the unit radial vector
  obs.ecc_vector = Vec2{state.udot.y * lz, -state.udot.x * lz} - state.u * (1.0 / radius);
  obs.ecc_sq = obs.ecc_vector.dot(obs.ecc_vector);
  obs.energy = 0.5 * state.udot.dot(state.udot) - 1.0 / radius;
  obs.ang_momentum = std::abs(lz);
  return obs;
}

double reduced_ecc_sq(double r, double p, double l) {
  const double l2 = l * l;
  return l2 * p * p + sqr(l2 / r - 1.0);
}

}  // namespace circkep
