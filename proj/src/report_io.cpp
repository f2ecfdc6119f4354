#include "circkep/report_io.h"

#include <charconv>
#include <cmath>
#include <ostream>

namespace circkep {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json number_or_null(const std::optional<double>& v) { return v ? number_or_null(*v) : json(nullptr); }

json complex_list(const std::vector<std::complex<double>>& zs) {
  json arr = json::array();
  for (const auto& z : zs) arr.push_back({{"re", z.real()}, {"im", z.imag()}});
  return arr;
}

double energy(const ReducedState& s) { return 0.5 * s.p * s.p + 0.5 * s.l * s.l / (s.r * s.r) - 1.0 / s.r; }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_chart_csv(std::ostream& os, const DampingParams& params, ChartId chart, const Trajectory<5>& tr) {
  os << "tau,t,theta,c1,c2,c3,ecc_sq\n";
  for (const auto& s : tr.samples) {
    const ChartState c{chart, s.y[0], s.y[1], s.y[2], s.y[3], s.y[4]};
    os << format_number(s.t) << ',' << format_number(c.t) << ',' << format_number(c.theta) << ','
       << format_number(c.c1) << ',' << format_number(c.c2) << ',' << format_number(c.c3) << ','
       << format_number(chart_ecc_sq(params, c)) << '\n';
  }
}

void write_reduced_header(std::ostream& os) { os << "t,r,p,l,theta,ecc_sq,energy\n"; }

void write_reduced_row(std::ostream& os, const ReducedState& s) {
  os << format_number(s.t) << ',' << format_number(s.r) << ',' << format_number(s.p) << ',' << format_number(s.l)
     << ',' << format_number(s.theta) << ',' << format_number(reduced_ecc_sq(s.r, s.p, s.l)) << ','
     << format_number(energy(s)) << '\n';
}

void write_run_reduced_csv(std::ostream& os, const DampingParams& params, const RegimeRun& run) {
  write_reduced_header(os);
  for (const auto& s : run.reduced.samples) write_reduced_row(os, {s.y[0], s.y[1], s.y[2], s.y[3], s.y[4]});
  if (!run.chart_phase) return;
  const int ri = radial_index(run.chart);
  // the first chart sample is the switch point already written
  for (std::size_t i = 1; i < run.chart_traj.samples.size(); ++i) {
    const auto& y = run.chart_traj.samples[i].y;
    if (!(y[static_cast<std::size_t>(ri)] > 0.0)) break;
    const ReducedState s = reduced_from_chart(params, {run.chart, y[0], y[1], y[2], y[3], y[4]});
    if (!std::isfinite(s.r) || !std::isfinite(s.p) || !std::isfinite(s.l) || !(s.r > 0.0)) break;
    write_reduced_row(os, s);
  }
}

void write_sweep_csv(std::ostream& os, const RegimeDiagram& diagram) {
  os << "alpha,beta,delta,gamma,predicted,observed,agree,flags\n";
  for (const auto& p : diagram.grid) {
    std::string flags;
    for (const auto& f : p.flags) {
      if (!flags.empty()) flags += ';';
      flags += f;
    }
    // flags are free text (error messages), so quote them
    std::string quoted = "\"";
    for (char ch : flags) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    quoted += '"';
    os << format_number(p.alpha) << ',' << format_number(p.beta) << ',' << format_number(p.delta) << ','
       << format_number(p.gamma) << ',' << regime_name(p.predicted) << ','
       << (p.observed ? regime_name(*p.observed) : std::string_view("Undetermined")) << ','
       << (p.agree ? "true" : "false") << ',' << quoted << '\n';
  }
}

json to_json(const EquilibriumReport& rep) {
  json j;
  j["chart"] = std::string(chart_name(rep.chart));
  j["exists"] = rep.exists;
  j["location"] = rep.location;
  j["eigenvalues"] = complex_list(rep.eigenvalues);
  j["numeric_eigenvalues"] = complex_list(rep.numeric_eigenvalues);
  j["stability"] = rep.stability ? json(std::string(stability_name(*rep.stability))) : json(nullptr);
  j["extras"] = {{"det_j", number_or_null(rep.det_j)},
                 {"ecc_sq", number_or_null(rep.ecc_sq)},
                 {"decay_a", number_or_null(rep.decay_a)}};
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

json to_json(const OutcomeReport& rep) {
  json j;
  j["params"] = {{"alpha", rep.params.alpha},
                 {"beta", rep.params.beta},
                 {"delta", rep.params.delta},
                 {"gamma", rep.params.gamma}};
  j["chart"] = std::string(chart_name(rep.chart));
  j["regime_predicted"] = std::string(regime_name(rep.predicted));
  j["regime_observed"] = rep.observed ? std::string(regime_name(*rep.observed)) : std::string("Undetermined");
  j["ecc_sq_limit"] = number_or_null(rep.ecc_sq_limit);
  j["theta_diverged"] = rep.theta_diverged;
  j["theta_converged"] = rep.theta_converged;
  j["delta_theta"] = number_or_null(rep.delta_theta);
  j["omega"] = {{"verdict", std::string(omega_name(rep.omega.kind))},
                {"estimate", number_or_null(rep.omega.estimate)},
                {"exponent", number_or_null(rep.omega.exponent)},
                {"r2", number_or_null(rep.omega.r_squared)}};
  json p = {{"kind", std::string(p_kind_name(rep.p_behavior.kind))}};
  if (rep.p_behavior.kind == PKind::LimitValue) p["value"] = rep.p_behavior.value;
  j["p_behavior"] = p;
  json fits = json::object();
  for (const auto& [name, f] : rep.fits) fits[name] = {{"exponent", f.exponent}, {"r2", f.r_squared}};
  j["fits"] = fits;
  j["ecc_vector_limit"] =
      rep.ecc_vector_limit ? json::array({rep.ecc_vector_limit->x, rep.ecc_vector_limit->y}) : json(nullptr);
  j["tau_end"] = rep.tau_end;
  j["flags"] = rep.flags;
  return j;
}

}  // namespace circkep
