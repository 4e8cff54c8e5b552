#include "auditopt/sim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "auditopt/errors.hpp"

namespace auditopt::sim {

namespace {

constexpr double kSeriesResidual = 1e-12;
constexpr std::size_t kMaxSteps = 10'000'000;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Schedule::Schedule(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("schedule needs at least one level");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!(levels_[i] >= 0.0)) throw std::invalid_argument("schedule levels must be non-negative");
    if (i > 0 && levels_[i] < levels_[i - 1])
      throw std::invalid_argument("schedule levels must be non-decreasing");
  }
}

Schedule Schedule::from_switches(const std::vector<std::pair<std::size_t, double>>& switches) {
  if (switches.empty()) throw std::invalid_argument("schedule needs at least one switch");
  if (switches.front().first != 0) throw std::invalid_argument("schedule must start at step 0");
  std::vector<double> levels;
  for (std::size_t i = 0; i < switches.size(); ++i) {
    if (i > 0 && switches[i].first <= switches[i - 1].first)
      throw std::invalid_argument("schedule switch steps must increase");
    levels.resize(switches[i].first, levels.empty() ? 0.0 : levels.back());
    levels.push_back(switches[i].second);
  }
  return Schedule(std::move(levels));
}

double evaluate_schedule_from(const Schedule& schedule, const Audit& audit, const VendorParams& params,
                              std::size_t start) {
  params.validate();
  const double a = params.alpha;
  const std::size_t stationary = std::max(schedule.levels().size() - 1, audit.prefix.size());
  double prev = start > 0 ? schedule.level(start - 1) : 0.0;
  double survive = 1.0;  // S_t times a^(t - start)
  double total = 0.0;
  for (std::size_t t = start; t < kMaxSteps; ++t) {
    const double x = schedule.level(t);
    const auto& test = audit.test(t);
    const double p = test.pass_probability(x);
    const double q = test.fail_probability(x);
    if (t >= stationary) {
      // No further cost; the pass reward repeats geometrically.
      return total - survive * params.c * (x - prev) + survive * p * params.R / (1.0 - a * q);
    }
    total += survive * (p * params.R - params.c * (x - prev));
    survive *= a * q;
    prev = x;
    if (survive * params.R / (1.0 - a) < kSeriesResidual && t + 1 >= schedule.levels().size()) break;
  }
  return total;
}

double evaluate_schedule(const Schedule& schedule, const Audit& audit, const VendorParams& params) {
  return evaluate_schedule_from(schedule, audit, params, 0);
}

SimResult simulate(const Schedule& schedule, const Audit& audit, const VendorParams& params,
                   const SimOptions& options) {
  params.validate();
  if (options.episodes < 1) throw std::invalid_argument("episodes must be at least 1");
  const double eps = options.horizon_eps < 0.0 ? 1e-9 * params.R : options.horizon_eps;
  if (!(eps > 0.0)) throw std::invalid_argument("horizon_eps must be positive");

  const double a = params.alpha;
  const auto lo = static_cast<std::uint32_t>(options.seed);
  const auto hi = static_cast<std::uint32_t>(options.seed >> 32);

  SimResult r;
  r.episodes = options.episodes;
  std::size_t truncated = 0;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < options.episodes; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    std::seed_seq seq{lo, hi, static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
    std::mt19937_64 rng(seq);

    double utility = 0.0;
    double discount = 1.0;
    double prev = 0.0;
    for (std::size_t t = 0;; ++t) {
      if (discount * params.R / (1.0 - a) < eps) {
        ++truncated;
        break;
      }
      const double x = schedule.level(t);
      utility -= discount * params.c * (x - prev);
      prev = x;
      if (uniform01(rng) < audit.test(t).pass_probability(x)) {
        utility += discount * params.R;
        ++r.pass_time_histogram[t];
        break;
      }
      discount *= a;
    }

    const double d = utility - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (utility - mean);
  }

  const auto n = static_cast<double>(options.episodes);
  r.mean = mean;
  r.std_error = options.episodes > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
  r.truncated_fraction = static_cast<double>(truncated) / n;
  if (r.truncated_fraction > options.max_truncated_fraction)
    throw PreconditionError("truncated fraction " + std::to_string(r.truncated_fraction) +
                            " exceeds the cap " + std::to_string(options.max_truncated_fraction));
  return r;
}

std::vector<TrailRow> never_quit_audit_trail(const Audit& audit, const VendorParams& params,
                                             const Schedule& schedule, double grid_step) {
  params.validate();
  const double top = *std::max_element(schedule.levels().begin(), schedule.levels().end());
  const core::GridSpec grid{std::max(params.rosi() + 1.0, top), grid_step};
  const multistep::AuditValuation v(audit, params, grid);

  const std::size_t steps = std::max(schedule.levels().size(), audit.prefix.size()) + 1;
  std::vector<TrailRow> rows;
  for (std::size_t t = 0; t < steps; ++t) {
    TrailRow row;
    row.t = t;
    row.level = schedule.level(t);
    row.schedule_value = evaluate_schedule_from(schedule, audit, params, t);
    const double sunk = t > 0 ? schedule.level(t - 1) : 0.0;
    row.optimal_value = params.c * sunk + v.value(t, sunk);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace auditopt::sim
