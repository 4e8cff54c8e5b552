#include "auditopt/core/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "auditopt/core/maximize.hpp"
#include "auditopt/errors.hpp"

namespace auditopt::core {

namespace {

void require_nonnegative(double x) {
  if (!(x >= 0.0)) throw DomainError("effort must be non-negative, got " + std::to_string(x));
}

}  // namespace

double g_value(const TestFunction& test, const VendorParams& params, double x) {
  require_nonnegative(x);
  const double p = test.pass_probability(x);
  const double q = test.fail_probability(x);
  // 1 - alpha + alpha p written through q so that p = 1 gives a denominator of exactly 1.
  return -params.c * x + p * params.R / (1.0 - params.alpha * q);
}

double waiver_cost(const TestFunction& test, const VendorParams& params, double x) {
  require_nonnegative(x);
  const double q = test.fail_probability(x);
  return (1.0 - params.alpha) * q * params.R / (1.0 - params.alpha * q);
}

double lipschitz_bound(const TestFunction& test, const VendorParams& params) {
  // d/dp [pR / (1 - a + a p)] = (1 - a) R / (1 - a + a p)^2 <= R / (1 - a).
  return params.c + test.max_slope() * params.R / (1.0 - params.alpha);
}

const char* to_string(StrategyClass k) {
  return k == StrategyClass::OneAndDone ? "one-and-done" : "incremental";
}

StrategySolution optimal_strategy(const TestFunction& test, const VendorParams& params,
                                  const GridSpec& grid, double tie_tol) {
  params.validate();
  grid.validate(params);
  const auto G = [&](double x) { return g_value(test, params, x); };
  const MaximaSet m = find_maxima(G, 0.0, grid.x_max, grid.step, tie_tol);
  return StrategySolution{m.value, m.maximizers, m.continuum};
}

StrategySolution optimal_strategy(const TestFunction& test, const VendorParams& params) {
  return optimal_strategy(test, params, GridSpec::for_params(params), default_tie_tol(params));
}

std::vector<InvestmentSchedule> enumerate_schedules(const StrategySolution& solution,
                                                    std::size_t horizon,
                                                    const ScheduleOptions& options) {
  if (horizon < 1) throw std::invalid_argument("schedule horizon must be at least 1");
  if (solution.maximizers.empty()) throw std::invalid_argument("solution has no maximizers");

  std::vector<double> levels = solution.maximizers;
  std::sort(levels.begin(), levels.end());

  std::vector<InvestmentSchedule> out;
  for (double x : levels) out.push_back({std::vector<double>(horizon, x), StrategyClass::OneAndDone});

  const std::size_t n = levels.size();
  if (n < 2) return out;
  if (n > options.max_subset_source)
    throw std::invalid_argument("too many optimal levels to enumerate incremental schedules");

  auto switch_time = [&](std::size_t k) -> std::size_t {
    if (options.switch_times.empty()) return k + 1;
    if (k >= options.switch_times.size())
      throw std::invalid_argument("not enough switch times for an incremental schedule");
    return options.switch_times[k];
  };
  for (std::size_t k = 1; k < options.switch_times.size(); ++k)
    if (options.switch_times[k] <= options.switch_times[k - 1])
      throw std::invalid_argument("switch times must be strictly increasing");
  if (!options.switch_times.empty() && options.switch_times.front() < 1)
    throw std::invalid_argument("the first switch must happen at t >= 1");

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<double> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) subset.push_back(levels[i]);
    if (subset.size() < 2) continue;

    InvestmentSchedule s{std::vector<double>(horizon, subset.front()), StrategyClass::Incremental};
    for (std::size_t k = 1; k < subset.size(); ++k) {
      const std::size_t t = switch_time(k - 1);
      if (t >= horizon) throw std::invalid_argument("switch time beyond the schedule horizon");
      std::fill(s.levels.begin() + static_cast<std::ptrdiff_t>(t), s.levels.end(), subset[k]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

ValueFunction value_iteration_oracle(const TestFunction& test, const VendorParams& params,
                                     const GridSpec& grid, double tol, std::size_t max_iterations) {
  params.validate();
  grid.validate(params);
  if (!(tol > 0.0)) throw std::invalid_argument("value iteration tolerance must be positive");

  const double R = params.R;
  const double c = params.c;
  const double a = params.alpha;

  ValueFunction out;
  out.x = grid.points();
  const std::size_t n = out.x.size();
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = test.pass_probability(out.x[i]);

  std::vector<double> v(n, 0.0);
  std::vector<double> next(n);
  const double stop = tol * (1.0 - a);
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    // V(x) = max{0, c x + max_{y >= x} [-c y + p(y) R + a (1 - p(y)) V(y)]}, inner max right to left.
    double running = -std::numeric_limits<double>::infinity();
    double change = 0.0;
    double min_cont = std::numeric_limits<double>::infinity();
    for (std::size_t k = n; k-- > 0;) {
      running = std::max(running, -c * out.x[k] + p[k] * R + a * (1.0 - p[k]) * v[k]);
      const double cont = c * out.x[k] + running;
      min_cont = std::min(min_cont, cont);
      next[k] = std::max(0.0, cont);
      change = std::max(change, std::abs(next[k] - v[k]));
    }
    v.swap(next);
    if (change < stop) {
      out.value = std::move(v);
      out.iterations = it;
      out.min_continuation = min_cont;
      return out;
    }
  }
  throw ConvergenceError("value iteration did not converge within " + std::to_string(max_iterations) +
                         " sweeps");
}

}  // namespace auditopt::core
