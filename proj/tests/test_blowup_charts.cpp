#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "circkep/blowup_charts.h"
#include "circkep/core_model.h"
#include "circkep/integrator.h"
#include "doctest.h"
#include "test_support.h"

using namespace circkep;
using testing_support::d_ds;
using testing_support::rel_err;
using testing_support::Rng;

namespace {

struct Case {
  ChartId chart;
  DampingParams params;
};

std::vector<Case> chart_cases() {
  return {
      {ChartId::GammaPosA0, make_params(0, 2, 0.3)},        {ChartId::GammaPosA0, make_params(0, 1.7, 0.8)},
      {ChartId::GammaPosApos, make_params(1, 2, 0.5)},      {ChartId::GammaPosApos, make_params(0.5, 1.5, 0.4)},
      {ChartId::GammaPosApos, make_params(2.25, 0.75, 0.2)}, {ChartId::GammaNeg, make_params(0, 1, 0.1)},
      {ChartId::GammaNeg, make_params(1, 0.5, 0.2)},        {ChartId::GammaNeg, make_params(0.3, 0.8, 0.25)},
      {ChartId::Critical, make_params(1, 1, 0.3)},          {ChartId::Critical, make_params(0.5, 1.25, 0.6)},
      {ChartId::CriticalL2, make_params(1, 1, 0.3)},        {ChartId::CriticalL2, make_params(0.5, 1.25, 0.6)},
  };
}

ReducedState random_reduced(Rng& rng) {
  return {rng.uniform(0.05, 2.0), rng.uniform(-1.5, 1.5), rng.uniform(0.2, 1.5), rng.uniform(-3, 3),
          rng.uniform(0, 5)};
}

ChartState shifted(const ChartState& c, const ChartState& d, double e) {
  return {c.chart, c.c1 + e * d.c1, c.c2 + e * d.c2, c.c3 + e * d.c3, c.theta + e * d.theta, c.t + e * d.t};
}

}  // namespace

TEST_CASE("chart selection and names") {
  CHECK(select_chart(make_params(0, 1, 0.1)) == ChartId::GammaNeg);
  CHECK(select_chart(make_params(1, 2, 0.5)) == ChartId::GammaPosApos);
  CHECK(select_chart(make_params(0, 2, 0.5)) == ChartId::GammaPosA0);
  CHECK(select_chart(make_params(1, 1, 0.2)) == ChartId::Critical);
  for (ChartId id : {ChartId::GammaPosA0, ChartId::GammaPosApos, ChartId::GammaNeg, ChartId::Critical,
                     ChartId::CriticalL2}) {
    CHECK(chart_from_name(chart_name(id)) == id);
  }
  CHECK(chart_name(ChartId::GammaPosApos) == "gamma-pos");
  CHECK_FALSE(chart_from_name("bogus").has_value());
}

TEST_CASE("chart coordinate examples") {
  // gamma_tilde = 2
  const auto neg = chart_from_reduced(ChartId::GammaNeg, make_params(0, 0.5, 0.1), {0.08, 1.0, 0.2, 0, 0});
  CHECK(neg.c1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(neg.c2 == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(neg.c3 == doctest::Approx(0.04).epsilon(1e-14));

  const auto pos = chart_from_reduced(ChartId::GammaPosApos, make_params(1, 2, 0.5), {0.25, -1, 0.5, 0, 0});
  CHECK(pos.c1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pos.c2 == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(pos.c3 == doctest::Approx(2.0).epsilon(1e-14));

  const auto a0 = chart_from_reduced(ChartId::GammaPosA0, make_params(0, 2, 0.5), {0.01, 2, 0.03, 0, 0});
  CHECK(a0.c1 == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(a0.c2 == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(a0.c3 == doctest::Approx(0.3).epsilon(1e-14));

  // gamma_tilde = 1 keeps x = l
  const auto neg1 = chart_from_reduced(ChartId::GammaNeg, make_params(0, 1, 0.1), {0.08, 1.0, 0.2, 0, 0});
  CHECK(neg1.c3 == doctest::Approx(0.2).epsilon(1e-14));

  const auto back = reduced_from_chart(make_params(0, 0.5, 0.1), {ChartId::GammaNeg, 2.0, 0.2, 0.04, 0.5, 1.5});
  CHECK(back.r == doctest::Approx(0.08).epsilon(1e-14));
  CHECK(back.p == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(back.l == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(back.theta == 0.5);
  CHECK(back.t == 1.5);
}

TEST_CASE("chart maps reject invalid input") {
  const auto crit = make_params(1, 1, 0.3);
  CHECK_THROWS_AS(chart_from_reduced(ChartId::Critical, crit, {1, 0, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(chart_from_reduced(ChartId::Critical, crit, {0, 0, 1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(chart_from_reduced(ChartId::GammaNeg, crit, {1, 0, 1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(chart_from_reduced(ChartId::GammaPosA0, make_params(1, 2, 0.5), {1, 0, 1, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(reduced_from_chart(crit, {ChartId::Critical, 1, 0, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(reduced_from_chart(make_params(1, 2, 0.5), {ChartId::GammaPosApos, 0, -1, 0, 0, 0}),
                  std::invalid_argument);
}

TEST_CASE("chart round trips") {
  Rng rng;
  for (const Case& cs : chart_cases()) {
    for (int i = 0; i < 25; ++i) {
      const ReducedState s = random_reduced(rng);
      const ReducedState b = reduced_from_chart(cs.params, chart_from_reduced(cs.chart, cs.params, s));
      CHECK(rel_err(b.r, s.r) < 1e-12);
      CHECK(rel_err(b.p, s.p) < 1e-12);
      CHECK(rel_err(b.l, s.l) < 1e-12);
      CHECK(b.theta == s.theta);
      CHECK(b.t == s.t);
    }
  }
}

TEST_CASE("critical charts agree through r1 = 1/mu1^2") {
  Rng rng;
  const auto params = make_params(1, 1, 0.3);
  for (int i = 0; i < 25; ++i) {
    const ReducedState s = random_reduced(rng);
    const ChartState c1 = chart_from_reduced(ChartId::Critical, params, s);
    const ChartState c2 = chart_from_reduced(ChartId::CriticalL2, params, s);
    const double mu1 = c2.c2;
    CHECK(rel_err(c1.c1, 1.0 / (mu1 * mu1)) < 1e-12);
    CHECK(rel_err(c1.c2, mu1 * c2.c1) < 1e-12);
    CHECK(rel_err(c1.c3, mu1 * c2.c3) < 1e-12);
  }
}

TEST_CASE("chart fields push forward to the reduced field") {
  Rng rng;
  for (const Case& cs : chart_cases()) {
    for (int i = 0; i < 20; ++i) {
      const ReducedState s = random_reduced(rng);
      const ChartState c = chart_from_reduced(cs.chart, cs.params, s);
      const ChartState f = chart_rhs(cs.params, c);
      const ReducedState want = reduced_rhs(cs.params, s);
      const double lambda = f.t;  // dt/dtau
      CHECK(lambda > 0.0);
      // keep the probe small against every coordinate
      double h = 1e-3;
      for (auto [x, dx] : {std::pair{c.c1, f.c1}, std::pair{c.c2, f.c2}, std::pair{c.c3, f.c3}}) {
        if (dx != 0.0 && x != 0.0) h = std::min(h, 1e-3 * std::abs(x / dx));
      }
      auto along = [&](auto get) {
        return d_ds([&](double e) { return get(reduced_from_chart(cs.params, shifted(c, f, e))); }, h);
      };
      const double dr = along([](const ReducedState& x) { return x.r; });
      const double dp = along([](const ReducedState& x) { return x.p; });
      const double dl = along([](const ReducedState& x) { return x.l; });
      const double dth = along([](const ReducedState& x) { return x.theta; });
      INFO("chart " << chart_name(cs.chart) << " state r=" << s.r << " p=" << s.p << " l=" << s.l);
      const double scale = std::max({1.0, std::abs(want.r), std::abs(want.p), std::abs(want.l)}) * lambda;
      CHECK(std::abs(dr - lambda * want.r) < 1e-6 * scale);
      CHECK(std::abs(dp - lambda * want.p) < 1e-6 * scale);
      CHECK(std::abs(dl - lambda * want.l) < 1e-6 * scale);
      CHECK(std::abs(dth - lambda * want.theta) < 1e-6 * std::max(1.0, std::abs(want.theta)) * lambda);
    }
  }
}

TEST_CASE("chart eccentricity matches the Cartesian observable") {
  Rng rng;
  for (const Case& cs : chart_cases()) {
    for (int i = 0; i < 25; ++i) {
      const ReducedState s = random_reduced(rng);
      const ChartState c = chart_from_reduced(cs.chart, cs.params, s);
      const double want = observables(cartesian_from_reduced(s)).ecc_sq;
      CHECK(std::abs(chart_ecc_sq(cs.params, c) - want) <= 1e-10 * std::max(1.0, want));
    }
  }
}

TEST_CASE("chart eccentricity boundary values and Hamiltonian") {
  const auto a0 = make_params(0, 2, 0.3);
  CHECK(chart_ecc_sq(a0, {ChartId::GammaPosA0, 0.4, 0, 0, 0, 0}) == 1.0);
  CHECK(chart_ecc_sq(make_params(0, 1, 0.1), {ChartId::GammaNeg, 1, 0, 0.3, 0, 0}) == 0.0);
  CHECK(hamiltonian(1, 0).h == 0.0);
  CHECK(hamiltonian(2, 0.2).h == doctest::Approx(0.145).epsilon(1e-14));
  const double e = observables(cartesian_from_reduced({0.08, 1.0, 0.2, 0, 0})).ecc_sq;
  CHECK(e == doctest::Approx(0.29).epsilon(1e-12));
  CHECK(e == doctest::Approx(2 * hamiltonian(2, 0.2).h).epsilon(1e-12));
}

TEST_CASE("boundary restrictions of the chart fields") {
  const auto params = make_params(0, 1, 0.1);
  Rng rng;
  for (int i = 0; i < 10; ++i) {
    const double r1 = rng.uniform(0.3, 3.0);
    const double v = rng.uniform(-1.0, 1.0);
    const auto f = chart_field(ChartId::GammaNeg, params, {r1, v, 0.0});
    CHECK(f[0] == v);
    CHECK(f[1] == doctest::Approx(-(r1 - 1) / (r1 * r1 * r1)).epsilon(1e-15));
    CHECK(f[2] == 0.0);
  }
  for (double d : {0.5, 2.0, 4.0}) {
    for (double a : {0.5, 1.0, 2.0}) {
      const auto p = make_params(a, 2, d);
      const auto f = chart_field(ChartId::GammaPosApos, p, {0.0, -std::pow(d, -1.0 / (a + 1.0)), 0.0});
      CHECK(std::abs(f[0]) < 1e-15);
      CHECK(std::abs(f[1]) < 1e-14);
      CHECK(std::abs(f[2]) < 1e-15);
    }
  }
  // negative radial coordinate and r1 <= 0 are outside the domain
  const auto bad = chart_rhs(params, {ChartId::GammaNeg, 1.0, 0.0, -0.1, 0, 0});
  CHECK(std::isnan(bad.c1));
  const auto bad_r1 = chart_rhs(params, {ChartId::GammaNeg, 0.0, 0.0, 0.1, 0, 0});
  CHECK(std::isnan(bad_r1.c1));
}

TEST_CASE("Hamiltonian is conserved on the collision slice") {
  const auto params = make_params(0, 1, 0.1);
  auto field = [&](double, const State<3>& y) { return chart_field(ChartId::GammaNeg, params, y); };
  IntegrationConfig cfg;
  cfg.rtol = 1e-12;
  cfg.atol = 1e-14;
  cfg.stop_time = 100.0;
  for (auto y0 : {State<3>{1.5, 0.3, 0.0}, State<3>{0.7, -0.2, 0.0}, State<3>{2.5, 0.1, 0.0}}) {
    const auto tr = integrate<3>(field, 0.0, y0, cfg);
    REQUIRE(tr.termination == Termination::StopTime);
    const double h0 = hamiltonian(y0[0], y0[1]).h;
    double drift = 0.0;
    for (const auto& smp : tr.samples) drift = std::max(drift, std::abs(hamiltonian(smp.y[0], smp.y[1]).h - h0));
    CHECK(drift < 1e-8);
    CHECK(tr.back().y[2] == 0.0);
  }
}

TEST_CASE("critical l2 divergence identity") {
  // div(mu1 W) in (v1, mu1) equals mu1^-2 times the planar (r1, v) divergence at r1 = 1/mu1^2, v = mu1 v1
  Rng rng;
  for (const auto& params : {make_params(1, 1, 0.3), make_params(0, 1.5, 0.2), make_params(2, 0.5, 0.7)}) {
    for (int i = 0; i < 20; ++i) {
      const double v1 = rng.uniform(-2.0, 2.0);
      const double mu1 = rng.uniform(0.2, 1.5);
      auto g = [&](double a, double b, int k) { return b * chart_field(ChartId::CriticalL2, params, {a, b, 0.0})[k]; };
      const double h = 1e-3;
      const double div_l2 = d_ds([&](double e) { return g(v1 + e, mu1, 0); }, h) +
                            d_ds([&](double e) { return g(v1, mu1 + e, 1); }, h);
      const double r1 = 1.0 / (mu1 * mu1);
      const double v = mu1 * v1;
      auto f = [&](double a, double b, int k) { return chart_field(ChartId::Critical, params, {a, b, 0.0})[k]; };
      const double div_1 = d_ds([&](double e) { return f(r1 + e, v, 0); }, h) +
                           d_ds([&](double e) { return f(r1, v + e, 1); }, h);
      CHECK(div_1 < 0.0);
      CHECK(std::abs(div_l2 - div_1 / (mu1 * mu1)) < 1e-8 * std::max(1.0, std::abs(div_l2)));
    }
  }
}
