#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "circkep/core_model.h"

namespace circkep {

/// Desingularized blowup charts, one family per sign of gamma.
///   GammaPosA0   (y, v1, mu1)       gamma > 0, alpha = 0
///   GammaPosApos (q1, v11, mu11)    gamma > 0, alpha > 0
///   GammaNeg     (r1, v, x)         gamma < 0
///   Critical     (r1, v, rho1)      gamma = 0
///   CriticalL2   (v1, mu1, rho2)    gamma = 0, the l2 = 1 side of the critical chart
enum class ChartId { GammaPosA0, GammaPosApos, GammaNeg, Critical, CriticalL2 };

std::string_view chart_name(ChartId chart);
std::optional<ChartId> chart_from_name(std::string_view name);

/// Chart coordinates plus the co-integrated polar angle and physical time.
/// Derivatives use the same layout (d/dtau of each field).
struct ChartState {
  ChartId chart = ChartId::GammaNeg;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double theta = 0.0;
  double t = 0.0;
};

struct HamiltonianValue {
  double h = 0.0;
};

ChartId select_chart(const DampingParams& params);

/// True when the chart's coordinates are valid for these parameters.
bool chart_admissible(ChartId chart, const DampingParams& params);

/// Index (0..2) of the radial-like coordinate that is zero at collision.
int radial_index(ChartId chart);

/// Throws std::invalid_argument if r <= 0, l <= 0 or the chart is not
/// admissible for the parameters.
ChartState chart_from_reduced(ChartId chart, const DampingParams& params, const ReducedState& s);
ReducedState reduced_from_chart(const DampingParams& params, const ChartState& c);

/// The desingularized field on (c1, c2, c3) only, defined on the boundary
/// where the radial-like coordinate vanishes. Polynomial in that coordinate,
/// so it may be evaluated slightly on the far side of it (finite differences).
std::array<double, 3> chart_field(ChartId chart, const DampingParams& params,
                                  const std::array<double, 3>& c);

/// dtheta/dtau and dt/dtau in the chart's native time.
struct TimeFactors {
  double dtheta = 0.0;
  double dt = 0.0;
};
TimeFactors chart_time_factors(const DampingParams& params, const ChartState& c);

/// chart_field plus the auxiliary theta and t rates. Returns NaNs when the
/// radial-like coordinate is negative or r1 <= 0 in the r1-charts.
ChartState chart_rhs(const DampingParams& params, const ChartState& c);

HamiltonianValue hamiltonian(double r1, double v);

double chart_ecc_sq(const DampingParams& params, const ChartState& c);

}  // namespace circkep
