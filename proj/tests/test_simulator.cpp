#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "cw/errors.hpp"
#include "cw/model.hpp"
#include "cw/rng.hpp"
#include "cw/simulator.hpp"

using namespace cw;

TEST_CASE("jump rates") {
  const auto p = ModelParams::curie_weiss(1.3);
  CHECK(jump_rates(ChainState{10, 10, 0}, p).up == 0.0);
  CHECK(jump_rates(ChainState{10, 0, 0}, p).down == 0.0);
  const auto r = jump_rates(ChainState::at(4, 0.5), ModelParams::curie_weiss(1.0));
  CHECK(r.up == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
  CHECK(r.down == doctest::Approx(3.0 * std::exp(-0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(ChainState::at(4, 0.3), DomainError);
}

TEST_CASE("zero horizon gives the initial state only") {
  const auto s = simulate_chain(ModelParams::curie_weiss(1.0), 10, 0.2, 0.0, 1);
  CHECK(s.events() == 0);
  CHECK(s.start == doctest::Approx(0.2));
}

TEST_CASE("single spin: first flip from +1 happens at rate e^{-U'(1)}") {
  const double beta = 0.8;
  const auto p = ModelParams::curie_weiss(beta);
  double sum = 0.0;
  const int reps = 4000;
  for (int i = 0; i < reps; ++i) {
    const auto s = simulate_chain(p, 1, 1.0, 40.0, replica_seed(3, i));
    REQUIRE(s.events() > 0);
    CHECK(s.values[0] == -1.0);
    sum += s.times[0];
  }
  const double mean = sum / reps, expected = std::exp(beta);
  CHECK(std::fabs(mean - expected) < 4.0 * expected / std::sqrt(reps));
}

TEST_CASE("paths stay on the lattice and never leave [-1, 1]") {
  const auto p = ModelParams::curie_weiss(2.0);
  const auto s = simulate_chain(p, 7, 1.0, 50.0, 11);
  REQUIRE(s.events() > 10);
  double prev_t = 0.0, prev_x = s.start;
  for (std::size_t i = 0; i < s.events(); ++i) {
    CHECK(s.times[i] > prev_t);
    CHECK(std::fabs(std::fabs(s.values[i] - prev_x) - 2.0 / 7) < 1e-12);
    CHECK(std::fabs(s.values[i]) <= 1.0 + 1e-12);
    CHECK_NOTHROW(ChainState::at(7, s.values[i]));
    prev_t = s.times[i];
    prev_x = s.values[i];
  }
}

TEST_CASE("rescaled paths move by exactly one lattice step") {
  const auto p = ModelParams::curie_weiss(0.5);
  const std::int64_t n = 10000;
  const auto mdp = ScalingRegime::mdp(0, BSequence::power(0.25), 0.0);
  const auto s = simulate_rescaled(p, mdp, n, 0.5, 0.2, 5);
  REQUIRE(s.events() > 100);
  double prev = s.start;
  for (double v : s.values) {
    CHECK(std::fabs(std::fabs(v - prev) - 2.0 * 10.0 / n) < 1e-12);
    prev = v;
  }
  const auto clt = ScalingRegime::clt(1, 0.0);
  const auto c = simulate_rescaled(ModelParams::curie_weiss(1.0), clt, n, 0.0, 0.01, 5);
  prev = c.start;
  for (double v : c.values) {
    CHECK(std::fabs(std::fabs(v - prev) - 2.0 * std::pow(n, -0.75)) < 1e-12);
    prev = v;
  }
}

TEST_CASE("determinism and replica seeding") {
  const auto p = ModelParams::curie_weiss(1.2);
  const auto regime = ScalingRegime::clt(0, positive_magnetization(p));
  const auto a = simulate_rescaled(p, regime, 500, 0.3, 1.0, 99);
  const auto b = simulate_rescaled(p, regime, 500, 0.3, 1.0, 99);
  CHECK(a.times == b.times);
  CHECK(a.values == b.values);
  const auto ens = simulate_ensemble_paths(p, regime, 500, 0.3, 1.0, 42, 8);
  const auto summaries = simulate_ensemble(p, regime, 500, 0.3, 1.0, 42, 8);
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto single = simulate_rescaled(p, regime, 500, 0.3, 1.0, replica_seed(42, i));
    CHECK(single.values == ens[i].values);
    CHECK(summaries[i].terminal == ens[i].terminal());
    CHECK(summaries[i].events == ens[i].events());
  }
}

TEST_CASE("degenerate rescaling reproduces the raw chain") {
  const auto p = ModelParams::curie_weiss(0.9);
  const auto raw = simulate_chain(p, 40, 0.5, 3.0, 17);
  const auto id = simulate_rescaled(p, ScalingRegime::ldp(), 40, 0.5, 3.0, 17);
  CHECK(raw.times == id.times);
  CHECK(raw.values == id.values);
}

TEST_CASE("initial rounding: nearest grid point, ties toward the center") {
  const auto clt = ScalingRegime::clt(0, 0.0);
  // n = 4: scale 2, y0 = 0.5 -> x0 = 0.25, halfway between 0 and 0.5.
  CHECK(clt.initial_up(4, 0.5) == 2);
  CHECK(clt.initial_up(4, -0.5) == 2);
  CHECK(clt.initial_up(4, 0.6) == 3);
  auto shifted = clt;
  shifted.center = 0.5;
  // x0 = 0.5 + 0.125 = 0.625, halfway between 0.5 and 0.75 at n = 8 (scale sqrt 8).
  CHECK(shifted.initial_up(8, 0.125 * std::sqrt(8.0)) == 6);
  CHECK_THROWS_AS(clt.initial_up(4, 10.0), DomainError);
}

TEST_CASE("admissibility") {
  CHECK(ScalingRegime::mdp(0, BSequence::power(0.25), 0.0).violations(10000).empty());
  CHECK_FALSE(ScalingRegime::mdp(0, BSequence::power(0.6), 0.0).violations(10000).empty());
  CHECK_FALSE(ScalingRegime::mdp(0, BSequence::fixed(1.5), 0.0).violations(10000).empty());
  CHECK_FALSE(ScalingRegime::temp_mdp(-1.0, BSequence::power(0.125)).violations(10000).empty());
  CHECK_THROWS_AS(simulate_rescaled(ModelParams::curie_weiss(0.5), ScalingRegime::mdp(0, BSequence::power(0.6), 0.0),
                                    10000, 0.0, 1.0, 1),
                  ConfigError);
}

TEST_CASE("event counts match the clock") {
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto p = ModelParams::curie_weiss(beta);
    const auto regime = ScalingRegime::mdp(1, BSequence::power(0.125), 0.0);
    const std::int64_t n = 4096;
    const double T = 0.5;
    const auto s = simulate_rescaled(p, regime, n, 0.0, T, 8);
    // Per-spin flip rate is e^{-beta sigma m}, of order one.
    const double expected = T * regime.time_dilation(n) * static_cast<double>(n);
    const double ratio = static_cast<double>(s.events()) / expected;
    CHECK(ratio > 0.1);
    CHECK(ratio < 10.0);
  }
}

TEST_CASE("law of large numbers: ensemble mean tracks the mean-field ODE") {
  const auto p = ModelParams::curie_weiss(0.5);
  const auto ode = meanfield_flow(p, 0.5, 1.0, 1e-3);
  double prev_err = 1e9;
  for (std::int64_t n : {1000, 10000}) {
    const std::size_t reps = 200;
    const auto ens = simulate_ensemble_paths(p, ScalingRegime::ldp(), n, 0.5, 1.0, 2024, reps);
    double sup_err = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.05 * i;
      double sum = 0.0, sq = 0.0;
      for (const auto& path : ens) {
        const double v = path.value_at(t);
        sum += v;
        sq += v * v;
      }
      const double mean = sum / reps;
      const double se = std::sqrt(std::max(0.0, sq / reps - mean * mean) / reps);
      const double err = std::fabs(mean - ode[static_cast<std::size_t>(i * 50)]);
      CHECK(err <= 3.0 * se + 2.0 / static_cast<double>(n) + 1e-12);
      sup_err = std::max(sup_err, err);
    }
    CHECK(sup_err < prev_err);
    prev_err = sup_err;
  }
}

TEST_CASE("moderate-deviation scaling relaxes like the zero-cost drift") {
  // Zero-cost velocity v = -2x(1 - beta): exponential decay at rate 1 for beta = 0.5.
  const auto p = ModelParams::curie_weiss(0.5);
  const auto regime = ScalingRegime::mdp(0, BSequence::power(0.25), 0.0);
  const auto ens = simulate_ensemble(p, regime, 10000, 2.0, 1.0, 77, 400);
  double mean = 0.0;
  for (const auto& s : ens) mean += s.terminal;
  mean /= static_cast<double>(ens.size());
  CHECK(mean == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(0.02));
}

TEST_CASE("fluctuations around m_beta approach the Ornstein-Uhlenbeck variance") {
  const auto p = ModelParams::curie_weiss(1.5);
  const double m = positive_magnetization(p);
  const double target = -g1(p, m) / g_derivative(p, GKind::G2, 1, m);
  const auto ens = simulate_ensemble(p, ScalingRegime::clt(0, m), 4000, 0.0, 4.0, 5, 2000);
  double s = 0.0, sq = 0.0;
  for (const auto& e : ens) {
    s += e.terminal;
    sq += e.terminal * e.terminal;
  }
  const double mean = s / ens.size(), var = sq / ens.size() - mean * mean;
  CHECK(var == doctest::Approx(target).epsilon(0.1));
}

TEST_CASE("exit-time diagnostic") {
  const auto p = ModelParams::curie_weiss(1.0);
  const auto regime = ScalingRegime::clt(1, 0.0);
  const std::int64_t n = 2000;
  const auto ens = simulate_ensemble(p, regime, n, 0.5, 1.0, 9, 200);
  const double cap = regime.space_scale(n) * 1.0 + 1.0;
  CHECK(exit_time_diagnostic(ens, cap) == 0.0);
  CHECK(exit_time_diagnostic(ens, 0.0) == 1.0);
  double prev = 1.0;
  for (double c = 0.5; c <= 6.0; c += 0.5) {
    const double prob = exit_time_diagnostic(ens, c);
    CHECK(prob <= prev);
    prev = prob;
  }
  const auto paths = simulate_ensemble_paths(p, regime, n, 0.5, 1.0, 9, 100);
  CHECK(exit_time_diagnostic(paths, 0.0, 1.0) == 1.0);
  CHECK(exit_time_diagnostic(paths, cap, 1.0) == 0.0);
  CHECK_THROWS_AS(exit_time_diagnostic(std::vector<PathSummary>(10), 1.0), DomainError);
}

TEST_CASE("transition law matches the matrix exponential") {
  const std::int64_t n = 20;
  const auto p = ModelParams::curie_weiss(1.4);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (std::int64_t j = 0; j <= n; ++j) {
    const auto r = jump_rates(ChainState{n, j, 0}, p);
    if (j < n) q(j, j + 1) = r.up;
    if (j > 0) q(j, j - 1) = r.down;
    q(j, j) = -r.total();
  }
  const double t = 0.7;
  const Eigen::MatrixXd pt = (q * t).exp();
  const auto law = transition_law(p, n, 14, t, 2000);
  double err = 0.0;
  for (std::int64_t j = 0; j <= n; ++j) err = std::max(err, std::fabs(law[j] - pt(14, j)));
  CHECK(err < 1e-6);
}

TEST_CASE("transition law agrees with event-driven sampling") {
  const auto p = ModelParams::curie_weiss(1.0);
  const auto regime = ScalingRegime::clt(1, 0.0);
  const std::int64_t n = 400;
  const auto law = rescaled_law(p, regime, n, 0.0, 1.0, 400);
  double lm = 0.0, lv = 0.0;
  for (std::size_t j = 0; j < law.support.size(); ++j) {
    lm += law.probability[j] * law.support[j];
    lv += law.probability[j] * law.support[j] * law.support[j];
  }
  const auto ens = simulate_ensemble(p, regime, n, 0.0, 1.0, 31, 4000);
  double s = 0.0, sq = 0.0;
  for (const auto& e : ens) {
    s += e.terminal;
    sq += e.terminal * e.terminal;
  }
  const double mean = s / ens.size(), second = sq / ens.size();
  CHECK(std::fabs(mean - lm) < 4.0 * std::sqrt(lv / ens.size()));
  CHECK(second == doctest::Approx(lv).epsilon(0.06));
  const auto draws = sample_law(law, 5000, 3);
  double ds = 0.0;
  for (double d : draws) ds += d * d;
  CHECK(ds / draws.size() == doctest::Approx(lv).epsilon(0.06));
}
