#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "auditopt/core/strategy.hpp"
#include "auditopt/multistep/audit.hpp"

namespace auditopt::sim {

using core::VendorParams;
using multistep::Audit;

/// Cumulative effort by step; the last level repeats forever.
class Schedule {
 public:
  /// Throws std::invalid_argument unless levels is non-empty, non-negative and non-decreasing.
  explicit Schedule(std::vector<double> levels);
  explicit Schedule(const core::InvestmentSchedule& s) : Schedule(s.levels) {}
  /// From (switch step, level) pairs; the first step must be 0 and steps must increase.
  static Schedule from_switches(const std::vector<std::pair<std::size_t, double>>& switches);
  static Schedule constant(double x) { return Schedule(std::vector<double>{x}); }

  double level(std::size_t t) const { return t < levels_.size() ? levels_[t] : levels_.back(); }
  const std::vector<double>& levels() const noexcept { return levels_; }

 private:
  std::vector<double> levels_;
};

/// Expected discounted utility of following the schedule until passing:
///   sum_t S_t a^t (p_t(x_t) R - c (x_t - x_{t-1})),  S_t = prod_{s<t} (1 - p_s(x_s)),  x_{-1} = 0.
/// Once both the schedule and the audit are stationary the remaining geometric tail is added in closed
/// form, so a one-and-done schedule under a static audit gives G(x).
double evaluate_schedule(const Schedule& schedule, const Audit& audit, const VendorParams& params);

/// The same sum started at step `start` after `start` failures, with x_{start-1} already sunk.
double evaluate_schedule_from(const Schedule& schedule, const Audit& audit, const VendorParams& params,
                              std::size_t start);

struct SimOptions {
  std::size_t episodes = 100'000;
  std::uint64_t seed = 0;
  double horizon_eps = -1.0;        ///< negative means 1e-9 R
  double max_truncated_fraction = 0.05;
};

struct SimResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t episodes = 0;
  double truncated_fraction = 0.0;
  std::map<std::size_t, std::size_t> pass_time_histogram;  ///< step at which the product passed
};

/// Monte Carlo over episodes; episode i draws from its own stream seeded by (seed, i).
/// Throws PreconditionError if more than `max_truncated_fraction` of the episodes hit the horizon.
SimResult simulate(const Schedule& schedule, const Audit& audit, const VendorParams& params,
                   const SimOptions& options = {});

struct TrailRow {
  std::size_t t = 0;
  double level = 0.0;
  double schedule_value = 0.0;  ///< reward-to-go of following the schedule from t, cost so far sunk
  double optimal_value = 0.0;   ///< c x_{t-1} + U*_t(x_{t-1}): best continuation from the sunk effort
};

/// Continuation values along a schedule for steps 0 .. max(schedule length, prefix length).
std::vector<TrailRow> never_quit_audit_trail(const Audit& audit, const VendorParams& params,
                                             const Schedule& schedule, double grid_step = 1e-3);

}  // namespace auditopt::sim
