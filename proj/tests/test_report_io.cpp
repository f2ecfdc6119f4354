#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "circkep/report_io.h"
#include "doctest.h"

using namespace circkep;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("numbers round-trip with 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-2.0) == "-2");
  CHECK(std::strtod(format_number(1e-300).c_str(), nullptr) == 1e-300);
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  for (double v : {M_PI, -1.0 / 3, 6.02214076e23, 5e-324, 123456789.125}) {
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("chart trajectory CSV") {
  const auto params = make_params(0, 1, 0.1);
  Trajectory<5> tr;
  tr.samples = {{0.0, {1.0, 0.0, 0.5, 0.0, 0.0}}, {0.5, {1.1, -0.2, 0.4, 0.7, 0.3}}};
  std::ostringstream os;
  write_chart_csv(os, params, ChartId::GammaNeg, tr);
  const auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "tau,t,theta,c1,c2,c3,ecc_sq");
  const auto row = split(lines[2]);
  REQUIRE(row.size() == 7);
  CHECK(std::stod(row[0]) == 0.5);
  CHECK(std::stod(row[1]) == 0.3);
  CHECK(std::stod(row[2]) == 0.7);
  CHECK(std::stod(row[3]) == 1.1);
  CHECK(std::stod(row[6]) == chart_ecc_sq(params, {ChartId::GammaNeg, 1.1, -0.2, 0.4, 0.7, 0.3}));
}

TEST_CASE("reduced rows carry eccentricity and energy") {
  std::ostringstream os;
  write_reduced_header(os);
  write_reduced_row(os, {1.0, 0.0, 1.0, 0.25, 2.0});
  const auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "t,r,p,l,theta,ecc_sq,energy");
  CHECK(lines[1] == "2,1,0,1,0.25,0,-0.5");
}

TEST_CASE("whole run in the reduced frame is continuous in time") {
  const auto params = make_params(1, 1, 0.3);
  LabConfig cfg;
  cfg.tau_end = 50;
  const auto run = run_regime(params, standard_ic(), cfg);
  REQUIRE(run.chart_phase);
  std::ostringstream os;
  write_run_reduced_csv(os, params, run);
  const auto lines = lines_of(os.str());
  REQUIRE(lines.size() > run.reduced.samples.size() + 10);
  double last_t = -1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double t = std::stod(split(lines[i])[0]);
    CHECK(t > last_t);
    last_t = t;
  }
}

TEST_CASE("sweep CSV quotes the flags column") {
  RegimeDiagram d;
  SweepPoint p;
  p.alpha = 0.25;
  p.beta = 1.75;
  p.delta = 0.2;
  p.gamma = 0.75;
  p.predicted = Regime::EccToOneFiniteTime;
  p.flags = {"a", "say \"x\""};
  d.grid.push_back(p);
  p.observed = Regime::EccToOneFiniteTime;
  p.agree = true;
  p.flags.clear();
  d.grid.push_back(p);
  std::ostringstream os;
  write_sweep_csv(os, d);
  const auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "alpha,beta,delta,gamma,predicted,observed,agree,flags");
  CHECK(lines[1] == "0.25,1.75,0.20000000000000001,0.75,EccToOneFiniteTime,Undetermined,false,\"a;say \"\"x\"\"\"");
  CHECK(lines[2] == "0.25,1.75,0.20000000000000001,0.75,EccToOneFiniteTime,EccToOneFiniteTime,true,\"\"");
}

TEST_CASE("equilibrium report JSON") {
  const auto j = to_json(critical_interior_equilibrium(make_params(1, 1, 0.3)));
  CHECK(j["chart"] == "critical");
  CHECK(j["exists"] == true);
  CHECK(j["location"].size() == 2);
  REQUIRE(j["eigenvalues"].size() == 2);
  CHECK(j["eigenvalues"][0].contains("re"));
  CHECK(j["eigenvalues"][0].contains("im"));
  CHECK(j["stability"] == "HyperbolicSink");
  CHECK(std::abs(j["extras"]["det_j"].get<double>() - std::pow(1.6, 4) * std::pow(0.4, 4)) < 1e-12);
  CHECK(std::abs(j["extras"]["ecc_sq"].get<double>() - 0.36) < 1e-12);
  CHECK(j["extras"]["decay_a"].is_null());

  const auto none = to_json(critical_interior_equilibrium(make_params(1, 1, 0.7)));
  CHECK(none["exists"] == false);
}

TEST_CASE("outcome report JSON") {
  OutcomeReport rep;
  rep.params = make_params(0, 1, 0.1);
  rep.predicted = Regime::Circularizing;
  rep.ecc_sq_limit = std::numeric_limits<double>::quiet_NaN();
  rep.fits["x"] = {-1.0, 0.99, 2.0};
  rep.flags = {"escape"};
  const auto j = to_json(rep);
  CHECK(j["params"]["gamma"] == -1.0);
  CHECK(j["regime_predicted"] == "Circularizing");
  CHECK(j["regime_observed"] == "Undetermined");
  CHECK(j["ecc_sq_limit"].is_null());
  CHECK(j["omega"]["verdict"] == "Undetermined");
  CHECK(j["p_behavior"]["kind"] == "Undetermined");
  CHECK(j["fits"]["x"]["exponent"] == -1.0);
  CHECK(j["fits"]["x"]["r2"] == 0.99);
  CHECK(j["ecc_vector_limit"].is_null());
  CHECK(j["flags"][0] == "escape");

  rep.ecc_vector_limit = Vec2{0.5, -0.25};
  rep.p_behavior = {PKind::LimitValue, -1.5};
  const auto k = to_json(rep);
  CHECK(k["ecc_vector_limit"][1] == -0.25);
  CHECK(k["p_behavior"]["value"] == -1.5);
}
