#pragma once

#include <iosfwd>
#include <string>

#include "circkep/blowup_charts.h"
#include "circkep/equilibria.h"
#include "circkep/integrator.h"
#include "circkep/regime_lab.h"
#include "json.hpp"

namespace circkep {

/// 17 significant digits (round-trips any double), locale independent.
/// Non-finite values print as nan, inf, -inf.
std::string format_number(double v);

/// Samples are (c1, c2, c3, theta, t) against tau.
void write_chart_csv(std::ostream& os, const DampingParams& params, ChartId chart, const Trajectory<5>& tr);

/// Rows "t,r,p,l,theta,ecc_sq,energy".
void write_reduced_header(std::ostream& os);
void write_reduced_row(std::ostream& os, const ReducedState& s);

/// Reduced-frame view of a whole run: the reduced phase followed by the chart
/// phase mapped back wherever the radial coordinate is still positive.
void write_run_reduced_csv(std::ostream& os, const DampingParams& params, const RegimeRun& run);

void write_sweep_csv(std::ostream& os, const RegimeDiagram& diagram);

nlohmann::json to_json(const EquilibriumReport& rep);
nlohmann::json to_json(const OutcomeReport& rep);

}  // namespace circkep
