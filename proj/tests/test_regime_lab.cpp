#include <cmath>
#include <random>
#include <stdexcept>

#include "circkep/regime_lab.h"
#include "doctest.h"
#include "test_support.h"

using namespace circkep;

namespace {

std::vector<std::pair<double, double>> log_samples(double lo, double hi, int n, double (*f)(double)) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) {
    const double tau = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    out.emplace_back(tau, f(tau));
  }
  return out;
}

bool has_flag(const OutcomeReport& r, const std::string& f) {
  return std::find(r.flags.begin(), r.flags.end(), f) != r.flags.end();
}

}  // namespace

TEST_CASE("predicted regime") {
  CHECK(predicted_regime(make_params(0, 1, 0.1)) == Regime::Circularizing);
  CHECK(predicted_regime(make_params(0, 1, 3.0)) == Regime::Circularizing);
  CHECK(predicted_regime(make_params(0, 4, 0.1)) == Regime::EccToOneInfiniteTime);
  CHECK(predicted_regime(make_params(2, 2, 0.5)) == Regime::EccToOneFiniteTime);
  CHECK(predicted_regime(make_params(1, 1, 0.2)) == Regime::CriticalSubHalf);
  CHECK(predicted_regime(make_params(1, 1, 0.5)) == Regime::CriticalSuperHalf);
  CHECK(predicted_regime(make_params(1, 1, 0.7)) == Regime::CriticalSuperHalf);
  // alpha - beta + 3 = 0 is the infinite-time side
  CHECK(predicted_regime(make_params(1, 4, 0.3)) == Regime::EccToOneInfiniteTime);

  // the gamma-sign branch never depends on delta
  for (double d : {0.01, 0.2, 0.5, 0.9, 5.0}) {
    CHECK(predicted_regime(make_params(0.5, 0.5, d)) == Regime::Circularizing);
    CHECK(predicted_regime(make_params(2, 1.5, d)) == Regime::EccToOneFiniteTime);
  }

  for (Regime r : {Regime::Circularizing, Regime::EccToOneFiniteTime, Regime::EccToOneInfiniteTime,
                   Regime::CriticalSubHalf, Regime::CriticalSuperHalf}) {
    CHECK(regime_from_name(regime_name(r)) == r);
  }
  CHECK(!regime_from_name("Spiral"));
}

TEST_CASE("power-law fits") {
  const auto exact = fit_power_law(log_samples(1, 1e3, 200, [](double t) { return 3 * std::pow(t, -1.7); }));
  CHECK(std::abs(exact.exponent + 1.7) < 1e-6);
  CHECK(exact.r_squared > 0.999999);
  CHECK(std::abs(exact.prefactor - 3) < 1e-6);

  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> noise(0.0, 0.01);
  auto noisy = log_samples(1, 1e4, 400, [](double t) { return 5 / t; });
  for (auto& [t, s] : noisy) s *= 1 + noise(rng);
  CHECK(std::abs(fit_power_law(noisy).exponent + 1) < 0.05);

  const auto flat = fit_power_law(log_samples(1, 1e2, 50, [](double) { return 7.0; }));
  CHECK(std::abs(flat.exponent) < 1e-9);

  // only the trailing decade counts
  const auto broken = fit_power_law(
      log_samples(1, 1e4, 400, [](double t) { return t < 1e3 ? std::pow(t, -3.0) : 1e-9 * 1e3 / t; }));
  CHECK(std::abs(broken.exponent + 1) < 1e-9);

  auto neg = log_samples(1, 1e2, 50, [](double t) { return 1 / t; });
  neg[10].second = -1;
  CHECK_THROWS_AS(fit_power_law(neg), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law(log_samples(1, 5, 50, [](double t) { return t; })), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law(log_samples(1, 1e3, 15, [](double t) { return t; })), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law({}), std::invalid_argument);
}

TEST_CASE("collision-time verdict on synthetic clocks") {
  const auto fin = collision_time_verdict(log_samples(1e-2, 1e4, 2400, [](double t) { return 10 - 1 / t; }));
  CHECK(fin.kind == OmegaKind::Finite);
  CHECK(std::abs(fin.estimate - 10) < 1e-3);
  CHECK(std::abs(fin.exponent - 2) < 1e-3);

  const auto inf = collision_time_verdict(log_samples(1e-2, 1e4, 2400, [](double t) { return std::pow(t, 0.2); }));
  CHECK(inf.kind == OmegaKind::Infinite);
  CHECK(std::abs(inf.exponent - 0.8) < 1e-3);

  // logarithmic clock, c = 1: inside the margin
  CHECK(collision_time_verdict(log_samples(1e-2, 1e4, 2400, [](double t) { return std::log(t); })).kind ==
        OmegaKind::Undetermined);
  // c = 1.1 and 0.9 are still inside the default margin, outside a narrower one
  auto c11 = log_samples(1e-2, 1e4, 2400, [](double t) { return 5 - 10 * std::pow(t, -0.1); });
  CHECK(collision_time_verdict(c11).kind == OmegaKind::Undetermined);
  CHECK(collision_time_verdict(c11, 0.05).kind == OmegaKind::Finite);
  auto c09 = log_samples(1e-2, 1e4, 2400, [](double t) { return std::pow(t, 0.1); });
  CHECK(collision_time_verdict(c09).kind == OmegaKind::Undetermined);
  CHECK(collision_time_verdict(c09, 0.05).kind == OmegaKind::Infinite);

  // rough staircase: r^2 below 0.9
  auto stairs = log_samples(1, 1e4, 2400, [](double t) { return std::floor(std::log(t) * 3) + 0.01 * t; });
  CHECK(collision_time_verdict(stairs).kind == OmegaKind::Undetermined);

  // too short a record
  CHECK(collision_time_verdict(log_samples(1, 5, 100, [](double t) { return t; })).kind == OmegaKind::Undetermined);

  // exponentially converged clock
  const auto expo = collision_time_verdict(log_samples(1e-2, 1e3, 2000, [](double t) { return 3 - std::exp(-t); }));
  CHECK(expo.kind == OmegaKind::Finite);
  CHECK(expo.estimate == doctest::Approx(3).epsilon(1e-12));
}

TEST_CASE("radial velocity classification") {
  auto grow = log_samples(1, 1e6, 2000, [](double t) { return std::sqrt(t); });
  CHECK(classify_p(grow).kind == PKind::Unbounded);

  auto limit = log_samples(1, 1e6, 2000, [](double t) { return -1.5 + 1 / t; });
  const auto lv = classify_p(limit);
  CHECK(lv.kind == PKind::LimitValue);
  CHECK(std::abs(lv.value + 1.5) < 1e-5);

  auto slow = log_samples(1, 1e6, 2000, [](double t) { return -std::pow(t, -1.0 / 6); });
  CHECK(classify_p(slow).kind == PKind::ToZero);

  // oscillation with a decaying envelope
  auto osc = log_samples(1, 1e4, 4000, [](double t) { return std::sin(t) / t; });
  CHECK(classify_p(osc).kind == PKind::ToZero);

  // bounded oscillation without a limit
  auto bounded = log_samples(1, 1e4, 4000, [](double t) { return std::sin(t); });
  CHECK(classify_p(bounded).kind == PKind::Undetermined);
}

TEST_CASE("chart used for the asymptotic phase") {
  CHECK(run_chart(make_params(0, 1, 0.1)) == ChartId::GammaNeg);
  CHECK(run_chart(make_params(0, 4, 0.1)) == ChartId::GammaPosA0);
  CHECK(run_chart(make_params(1, 2, 0.5)) == ChartId::GammaPosApos);
  CHECK(run_chart(make_params(1, 1, 0.3)) == ChartId::Critical);
  CHECK(run_chart(make_params(1, 1, 0.5)) == ChartId::CriticalL2);
  CHECK(run_chart(make_params(1, 1, 0.7)) == ChartId::CriticalL2);
}

TEST_CASE("circularizing run") {
  const auto rep = simulate_outcome(make_params(0, 1, 0.1), standard_ic(), LabConfig{});
  CHECK(rep.chart == ChartId::GammaNeg);
  CHECK(rep.ecc_sq_limit < 1e-3);
  CHECK(rep.theta_diverged);
  CHECK(!rep.theta_converged);
  CHECK(rep.delta_theta > 40 * M_PI);
  CHECK(rep.omega.kind == OmegaKind::Finite);
  CHECK(rep.observed == Regime::Circularizing);
  REQUIRE(rep.fits.count("x") == 1);
  CHECK(std::abs(rep.fits.at("x").exponent + 1) < 0.05);
  REQUIRE(rep.fits.count("hopf_amplitude_sq") == 1);
  // within 15% of 2a = -2 (alpha + beta) / gamma_tilde
  CHECK(std::abs(rep.fits.at("hopf_amplitude_sq").exponent + 2) < 0.3);
  CHECK(!rep.ecc_vector_limit);
  // dt/dtau = x^(3/gamma_tilde) ~ tau^-3
  CHECK(std::abs(rep.omega.exponent - 3) < 0.15);
}

TEST_CASE("critical runs") {
  const auto sub = simulate_outcome(make_params(1, 1, 0.3), standard_ic(), LabConfig{});
  CHECK(std::abs(sub.ecc_sq_limit - 0.36) < 1e-4);
  CHECK(sub.observed == Regime::CriticalSubHalf);
  CHECK(sub.omega.kind == OmegaKind::Finite);

  const auto sup = simulate_outcome(make_params(1, 1, 0.7), standard_ic(), LabConfig{});
  CHECK(sup.chart == ChartId::CriticalL2);
  CHECK(std::abs(sup.ecc_sq_limit - 1) < 1e-3);
  CHECK(sup.observed == Regime::CriticalSuperHalf);
  CHECK(sup.theta_converged);
}

TEST_CASE("collision run with gamma > 0") {
  const auto rep = simulate_outcome(make_params(1, 2, 0.5), standard_ic(), LabConfig{});
  CHECK(rep.chart == ChartId::GammaPosApos);
  CHECK(std::abs(rep.ecc_sq_limit - 1) < 1e-3);
  CHECK(!rep.theta_diverged);
  CHECK(rep.theta_converged);
  CHECK(rep.omega.kind == OmegaKind::Finite);
  CHECK(rep.observed == Regime::EccToOneFiniteTime);
  CHECK(rep.p_behavior.kind == PKind::LimitValue);
  CHECK(std::abs(rep.p_behavior.value + 1 / std::sqrt(0.5)) < 0.01 / std::sqrt(0.5));
  REQUIRE(rep.ecc_vector_limit);
  const Vec2 minus_e{-std::cos(rep.theta_final), -std::sin(rep.theta_final)};
  CHECK((*rep.ecc_vector_limit - minus_e).norm() < 0.01);
}

TEST_CASE("escaping and short runs are undetermined") {
  // positive energy: p^2/2 + l^2/2 - 1 > 0 at r = 1
  const auto esc = simulate_outcome(make_params(0, 1, 0.01), {1, 2, 0.5, 0, 0}, LabConfig{});
  CHECK(!esc.observed);
  CHECK(has_flag(esc, "escape"));
  CHECK(std::isnan(esc.ecc_sq_limit));

  LabConfig few;
  few.integration.max_steps = 50;
  const auto cut = simulate_outcome(make_params(0, 1, 0.1), standard_ic(), few);
  CHECK(!cut.observed);
  CHECK(!cut.flags.empty());
}

TEST_CASE("starting inside the switch radius skips the reduced phase") {
  LabConfig cfg;
  const auto run = run_regime(make_params(1, 1, 0.3), {0.3, 0.0, 0.5, 1.0, 2.0}, cfg);
  CHECK(run.chart_phase);
  REQUIRE(run.reduced.samples.size() == 1);
  CHECK(run.chart_traj.samples.front().y[3] == 1.0);
  CHECK(run.chart_traj.samples.front().y[4] == 2.0);
}

TEST_CASE("sweep validation and ordering") {
  LabConfig cfg;
  CHECK_THROWS_AS(sweep({0.0, 1.0}, {0.0, 1.0}, 0.2, cfg), std::invalid_argument);
  CHECK_THROWS_AS(sweep({}, {1.0}, 0.2, cfg), std::invalid_argument);
  CHECK_THROWS_AS(sweep({1.0}, {1.0}, -0.2, cfg), std::invalid_argument);

  // cheap points: two critical, one circularizing
  const std::vector<double> alphas{1.0, 0.0};
  const std::vector<double> betas{1.0};
  cfg.tau_end = 1e3;
  const auto serial = sweep(alphas, betas, 0.3, cfg, 1);
  const auto parallel = sweep(alphas, betas, 0.3, cfg, 3);
  REQUIRE(serial.grid.size() == 2);
  REQUIRE(parallel.grid.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(serial.grid[i].alpha == alphas[i]);
    CHECK(parallel.grid[i].alpha == serial.grid[i].alpha);
    CHECK(parallel.grid[i].observed == serial.grid[i].observed);
    CHECK(parallel.grid[i].flags == serial.grid[i].flags);
  }
  CHECK(serial.grid[0].predicted == Regime::CriticalSubHalf);
  CHECK(serial.grid[0].agree);
  CHECK(serial.grid[1].predicted == Regime::Circularizing);
  CHECK(serial.grid[1].agree);
  // gamma = 0 lies inside the near-critical band, so only the (0, 1) point counts
  CHECK(serial.grid[0].flags == std::vector<std::string>{"near-critical"});
  CHECK(serial.determinate() == 2);
  CHECK(serial.agreement() == 1.0);
}
