#pragma once

#include <cmath>

namespace circkep {

/// Drag exponents and strength for Delta = delta |u'|^(alpha+1) / |u|^beta.
/// Construct through make_params(); gamma and gamma_tilde are derived.
struct DampingParams {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double gamma = 0.0;        // alpha + 2 beta - 3
  double gamma_tilde = 0.0;  // -gamma
};

/// Validates and builds parameters. Throws std::invalid_argument for negative
/// exponents, delta <= 0 and the excluded linear case (alpha, beta) = (0, 0).
DampingParams make_params(double alpha, double beta, double delta);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// Position and velocity in the orbital plane (Kepler units, GM = 1).
/// Also used for the time derivative (u', u'').
struct CartesianState {
  Vec2 u;
  Vec2 udot;
};

/// Rotation-reduced phase point with the co-integrated polar angle and
/// physical time. Also used for derivatives, where t holds dt/dt = 1.
struct ReducedState {
  double r = 1.0;
  double p = 0.0;
  double l = 0.0;
  double theta = 0.0;
  double t = 0.0;
};

struct Observables {
  Vec2 ecc_vector;
  double ecc_sq = 0.0;
  double energy = 0.0;
  double ang_momentum = 0.0;
};

double damping_magnitude(const DampingParams& params, const CartesianState& state);

/// u'' = -u/|u|^3 - delta |u|^-beta |u'|^alpha u'. The drag is written without
/// the quotient u'/|u'| so the field stays continuous at u' = 0.
CartesianState cartesian_rhs(const DampingParams& params, const CartesianState& state);

/// The undamped Kepler field (delta = 0), which make_params cannot express.
CartesianState kepler_rhs(const CartesianState& state);

ReducedState reduced_rhs(const DampingParams& params, const ReducedState& state);
ReducedState reduced_kepler_rhs(const ReducedState& state);

/// r = |u|, theta = arg u, l = |u x u'|, p = <u, u'>/|u|.
ReducedState reduced_from_cartesian(const CartesianState& state, double t = 0.0);

/// Counterclockwise section: u = r e^{i theta}, u' = (p + i l/r) e^{i theta}.
CartesianState cartesian_from_reduced(const ReducedState& state);

/// Reflects u2 -> -u2 when the motion is clockwise so that the reduced angle
/// increases along the orbit.
CartesianState counterclockwise(const CartesianState& state);

Observables observables(const CartesianState& state);

/// |E|^2 written in reduced coordinates: l^2 p^2 + (l^2 - r)^2 / r^2.
double reduced_ecc_sq(double r, double p, double l);

}  // namespace circkep
