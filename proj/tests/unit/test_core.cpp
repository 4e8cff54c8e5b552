#include <cmath>
#include <random>

#include "auditopt/core/maximize.hpp"
#include "auditopt/core/strategy.hpp"
#include "auditopt/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace auditopt;
using namespace auditopt::core;

namespace {

const VendorParams kFig{4.0, 1.0, 0.5};

}  // namespace

TEST_CASE("normal cdf against numerical integration") {
  for (double z = -8.0; z <= 8.0; z += 0.37) CHECK(normal_cdf(z) == doctest::Approx(oracle::phi_cdf(z)).epsilon(1e-12));
  CHECK(normal_cdf(0.0) == 0.5);
  // Lower tail keeps relative accuracy.
  CHECK(normal_cdf(-10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-10));
}

TEST_CASE("test function invariants") {
  const TestFunction th = TestFunction::threshold(1.3, 0.7);
  const TestFunction li = TestFunction::linear(2.0);
  const TestFunction co = TestFunction::constant(0.3);
  CHECK(th(1.3) == 0.5);
  for (const auto& t : {th, li, co}) {
    double prev = -1.0;
    for (double x = 0.0; x <= 6.0; x += 0.01) {
      const double p = t(x);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      CHECK(p >= prev);
      CHECK(t.fail_probability(x) == doctest::Approx(1.0 - p).epsilon(1e-15));
      prev = p;
    }
  }
  CHECK(li(1.5) == 0.0);
  CHECK(li(2.25) == 0.25);
  CHECK(li(3.0) == 1.0);
  for (double x = 0.0; x < 3.0; x += 0.05) CHECK((th(x) >= 0.5) == (x >= 1.3));
  CHECK_THROWS_AS(TestFunction::threshold(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::linear(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::constant(1.5), std::invalid_argument);
}

TEST_CASE("params and grid") {
  CHECK_THROWS_AS((VendorParams{0.0, 1.0, 0.5}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((VendorParams{1.0, 1.0, 1.0}.validate()), std::invalid_argument);
  const GridSpec g = GridSpec::for_params(kFig);
  CHECK(g.x_max == 5.0);
  CHECK(g.size() == 5001);
  CHECK(g.point(g.size() - 1) == 5.0);
  CHECK(g.point(0) == 0.0);
  CHECK_THROWS_AS((GridSpec{3.0, 1e-3}.validate(kFig)), std::invalid_argument);
  const GridSpec odd{1.05, 0.1};
  CHECK(odd.size() == 12);
  CHECK(odd.points().back() == 1.05);
}

TEST_CASE("g_value examples") {
  CHECK(g_value(TestFunction::constant(1.0), kFig, 0.0) == 4.0);
  CHECK(g_value(TestFunction::constant(0.0), VendorParams{7.0, 1.0, 0.3}, 2.0) == -2.0);
  CHECK_THROWS_AS(g_value(TestFunction::constant(1.0), kFig, -0.1), DomainError);

  // Threshold(1, 1): interior maximum on [0, 8].
  const TestFunction t = TestFunction::threshold(1.0, 1.0);
  const auto f = [&](double x) { return g_value(t, kFig, x); };
  const oracle::Max m = oracle::dense_max(f, 0.0, 8.0, 1e-3);
  CHECK(m.x > 0.0);
  CHECK(m.x < 8.0);
  for (double x = 0.0; x <= 8.0; x += 0.1) {
    const double p = oracle::phi_cdf(x - 1.0);
    CHECK(f(x) == doctest::Approx(oracle::g(p, 4.0, 1.0, 0.5, x)).epsilon(1e-11));
  }
}

TEST_CASE("waiver_cost examples") {
  CHECK(waiver_cost(TestFunction::constant(0.0), kFig, 1.0) == 4.0);
  CHECK(waiver_cost(TestFunction::constant(1.0), kFig, 1.0) == 0.0);
  CHECK(waiver_cost(TestFunction::constant(0.5), VendorParams{3.0, 1.0, 0.5}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(waiver_cost(TestFunction::constant(1.0), kFig, -1.0), DomainError);
  const TestFunction t = TestFunction::threshold(2.0, 0.8);
  double prev = 5.0;
  for (double x = 0.0; x <= 6.0; x += 0.01) {
    const double w = waiver_cost(t, kFig, x);
    CHECK(w >= 0.0);
    CHECK(w <= 4.0);
    CHECK(w <= prev);
    prev = w;
  }
}

TEST_CASE("identity G + C_A + c x = R") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const VendorParams p{0.1 + 10.0 * u(rng), 0.1 + 3.0 * u(rng), 0.01 + 0.98 * u(rng)};
    const TestFunction t = TestFunction::threshold(5.0 * u(rng) - 1.0, 0.05 + 3.0 * u(rng));
    const double x = 8.0 * u(rng);
    CHECK(std::abs(g_value(t, p, x) + waiver_cost(t, p, x) + p.c * x - p.R) <= 1e-12 * std::max(1.0, p.R));
  }
}

TEST_CASE("optimal_strategy examples") {
  const auto one = optimal_strategy(TestFunction::constant(1.0), kFig);
  CHECK(one.utility == 4.0);
  REQUIRE(one.maximizers.size() == 1);
  CHECK(one.maximizers[0] == 0.0);

  const auto lin = optimal_strategy(TestFunction::linear(3.0), kFig);
  CHECK(lin.maximizers.back() == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(lin.utility == doctest::Approx(0.0).epsilon(1e-9));

  const TestFunction t = TestFunction::threshold(1.0, 1.0);
  const auto th = optimal_strategy(t, kFig);
  const GridSpec grid = GridSpec::for_params(kFig);
  const auto vi = value_iteration_oracle(t, kFig, grid, 1e-10);
  CHECK(std::abs(th.utility - vi.value[0]) <= 1e-4);
  const oracle::Max m = oracle::dense_max([&](double x) { return oracle::g(oracle::phi_cdf(x - 1.0), 4, 1, 0.5, x); },
                                          0.0, 5.0, 1e-3);
  CHECK(th.maximizers.back() == doctest::Approx(m.x).epsilon(1e-6));
  CHECK(th.utility == doctest::Approx(m.value).epsilon(1e-9));
  CHECK(th.utility >= 0.0);
}

TEST_CASE("find_maxima reports a flat maximum as a continuum") {
  const auto f = [](double x) { return x < 1.0 ? x : (x < 2.0 ? 1.0 : 3.0 - x); };
  const MaximaSet m = find_maxima(f, 0.0, 3.0, 0.01, 1e-9);
  CHECK(m.continuum);
  REQUIRE(m.maximizers.size() == 2);
  CHECK(m.maximizers.front() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m.maximizers.back() == doctest::Approx(2.0).epsilon(1e-6));

  const auto two = [](double x) { return -std::pow((x - 1.0) * (x - 3.0), 2); };
  const MaximaSet t = find_maxima(two, 0.0, 4.0, 1e-3, 1e-9);
  CHECK_FALSE(t.continuum);
  REQUIRE(t.maximizers.size() == 2);
  CHECK(t.maximizers[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.maximizers[1] == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("enumerate_schedules") {
  const StrategySolution single{1.0, {2.5}, false};
  const auto s1 = enumerate_schedules(single, 4);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].kind == StrategyClass::OneAndDone);
  CHECK(s1[0].levels == std::vector<double>(4, 2.5));

  const StrategySolution pair{1.0, {1.0, 2.0}, false};
  ScheduleOptions opts;
  opts.switch_times = {2};
  const auto s2 = enumerate_schedules(pair, 5, opts);
  REQUIRE(s2.size() == 3);
  CHECK(s2[0].levels == std::vector<double>(5, 1.0));
  CHECK(s2[1].levels == std::vector<double>(5, 2.0));
  CHECK(s2[2].kind == StrategyClass::Incremental);
  CHECK(s2[2].levels == std::vector<double>{1.0, 1.0, 2.0, 2.0, 2.0});
  for (const auto& s : s2) CHECK(std::is_sorted(s.levels.begin(), s.levels.end()));

  CHECK_THROWS_AS(enumerate_schedules(pair, 0), std::invalid_argument);
  opts.switch_times = {5};
  CHECK_THROWS_AS(enumerate_schedules(pair, 5, opts), std::invalid_argument);
}

TEST_CASE("value iteration oracle") {
  const GridSpec grid = GridSpec::for_params(kFig, 1e-2);
  const auto one = value_iteration_oracle(TestFunction::constant(1.0), kFig, grid, 1e-12);
  for (std::size_t i = 0; i < one.x.size(); ++i) CHECK(one.value[i] - one.x[i] == doctest::Approx(4.0 - one.x[i]));

  for (const auto& t : {TestFunction::threshold(1.0, 1.0), TestFunction::threshold(3.0, 0.3), TestFunction::linear(1.5),
                        TestFunction::constant(0.2)}) {
    const auto vi = value_iteration_oracle(t, kFig, grid, 1e-10);
    CHECK(vi.min_continuation >= -1e-9);
    for (std::size_t i = 1; i < vi.x.size(); ++i)
      CHECK(vi.value[i] - kFig.c * vi.x[i] <= vi.value[i - 1] - kFig.c * vi.x[i - 1] + 1e-12);
    const auto sol = optimal_strategy(t, kFig, grid, default_tie_tol(kFig));
    CHECK(std::abs(sol.utility - vi.value[0]) <= 1e-10 + lipschitz_bound(t, kFig) * grid.step);
  }
  CHECK_THROWS_AS(value_iteration_oracle(TestFunction::constant(1.0), kFig, grid, 0.0), std::invalid_argument);
}
