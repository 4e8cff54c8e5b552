#include <cmath>
#include <random>

#include "auditopt/core/strategy.hpp"
#include "auditopt/errors.hpp"
#include "auditopt/sim/sim.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace auditopt;
using namespace auditopt::sim;
using core::TestFunction;

namespace {

const VendorParams kFig{4.0, 1.0, 0.5};

}  // namespace

TEST_CASE("schedule construction") {
  CHECK_THROWS_AS(Schedule(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(Schedule(std::vector<double>{1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Schedule(std::vector<double>{-1.0}), std::invalid_argument);
  const Schedule s = Schedule::from_switches({{0, 1.0}, {3, 2.0}});
  CHECK(s.levels() == std::vector<double>{1.0, 1.0, 1.0, 2.0});
  CHECK(s.level(10) == 2.0);
  CHECK_THROWS_AS(Schedule::from_switches({{1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::from_switches({{0, 1.0}, {0, 2.0}}), std::invalid_argument);
}

TEST_CASE("evaluate schedule") {
  CHECK(evaluate_schedule(Schedule::constant(1.5), {{}, TestFunction::constant(1.0)}, kFig) == 4.0 - 1.5);
  CHECK(evaluate_schedule(Schedule::constant(4.0), {{}, TestFunction::linear(3.0)}, kFig) == 0.0);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const VendorParams p{0.5 + 5.0 * u(rng), 0.5 + u(rng), 0.05 + 0.9 * u(rng)};
    const TestFunction t = TestFunction::threshold(3.0 * u(rng), 0.1 + 2.0 * u(rng));
    const double x = 4.0 * u(rng);
    CHECK(std::abs(evaluate_schedule(Schedule::constant(x), {{}, t}, p) - core::g_value(t, p, x)) <= 1e-12);
  }

  // Term-by-term series for non-stationary schedules and audits.
  for (int i = 0; i < 50; ++i) {
    const VendorParams p{4.0, 1.0, 0.2 + 0.6 * u(rng)};
    multistep::Audit a{{TestFunction::threshold(1.0, 0.5), TestFunction::linear(0.5), TestFunction::constant(0.2)},
                       TestFunction::threshold(2.0 * u(rng), 1.0)};
    std::vector<double> levels{0.5 * u(rng)};
    for (int k = 0; k < 5; ++k) levels.push_back(levels.back() + 0.4 * u(rng));
    const auto pass = [&](std::size_t t, double x) { return a.test(t).pass_probability(x); };
    CHECK(std::abs(evaluate_schedule(Schedule(levels), a, p) - oracle::schedule_series(levels, pass, p.R, p.c, p.alpha)) <=
          1e-12);
  }
}

TEST_CASE("simulate") {
  SimOptions o;
  o.episodes = 2000;
  o.seed = 5;
  const auto sure = simulate(Schedule::constant(1.5), {{}, TestFunction::constant(1.0)}, kFig, o);
  CHECK(sure.mean == 2.5);
  CHECK(sure.std_error == 0.0);
  CHECK(sure.pass_time_histogram.size() == 1);
  CHECK(sure.pass_time_histogram.at(0) == 2000);

  const auto lin = simulate(Schedule::constant(4.0), {{}, TestFunction::linear(3.0)}, kFig, o);
  CHECK(lin.mean == 0.0);
  CHECK(lin.pass_time_histogram.at(0) == 2000);

  const TestFunction t = TestFunction::threshold(1.0, 1.0);
  const auto sol = core::optimal_strategy(t, kFig);
  SimOptions big;
  big.episodes = 100'000;
  big.seed = 99;
  const Schedule s = Schedule::constant(sol.maximizers.back());
  const auto r = simulate(s, {{}, t}, kFig, big);
  CHECK(std::abs(r.mean - sol.utility) <= 3.0 * r.std_error);
  CHECK(r.truncated_fraction == 0.0);

  const auto again = simulate(s, {{}, t}, kFig, big);
  CHECK(again.mean == r.mean);
  CHECK(again.std_error == r.std_error);
  CHECK(again.pass_time_histogram == r.pass_time_histogram);

  SimOptions never = o;
  CHECK_THROWS_AS(simulate(Schedule::constant(0.0), {{}, TestFunction::constant(0.0)}, kFig, never), PreconditionError);
  never.max_truncated_fraction = 1.0;
  const auto trunc = simulate(Schedule::constant(0.0), {{}, TestFunction::constant(0.0)}, kFig, never);
  CHECK(trunc.truncated_fraction == 1.0);
  CHECK(trunc.mean == 0.0);
  CHECK_THROWS_AS(simulate(s, {{}, t}, kFig, SimOptions{0, 1, -1.0, 0.05}), std::invalid_argument);
}

TEST_CASE("never-quit trail") {
  const TestFunction t = TestFunction::threshold(1.0, 1.0);
  const auto sol = core::optimal_strategy(t, kFig);
  const auto rows = never_quit_audit_trail({{}, t}, kFig, Schedule::constant(sol.maximizers.back()));
  REQUIRE(!rows.empty());
  for (const auto& r : rows) {
    CHECK(r.schedule_value >= 0.0);
    CHECK(r.optimal_value >= -1e-12);
  }
  CHECK(rows[0].schedule_value == doctest::Approx(sol.utility).epsilon(1e-12));
  CHECK(rows[0].optimal_value == doctest::Approx(sol.utility).epsilon(1e-6));

  const auto zero = never_quit_audit_trail({{}, TestFunction::constant(0.0)}, kFig, Schedule::constant(0.0));
  for (const auto& r : zero) {
    CHECK(r.schedule_value == 0.0);
    CHECK(r.optimal_value == 0.0);
  }

  const VendorParams mid{1.5, 1.0, 0.5};
  const double bbar = 1.5 + std::pow(std::sqrt(3.0) - 1.0, 2);
  const auto two = never_quit_audit_trail({{TestFunction::linear(0.5)}, TestFunction::linear(bbar)}, mid,
                                          Schedule::constant(1.5));
  for (const auto& r : two) {
    CHECK(r.schedule_value >= -1e-12);
    CHECK(r.optimal_value >= -1e-12);
  }
}
