#pragma once

#include <cstddef>
#include <vector>

#include "auditopt/core/params.hpp"
#include "auditopt/core/test_function.hpp"

namespace auditopt::core {

/// G(x) = -c x + p(x) R / (1 - alpha + alpha p(x)): utility of investing x once and waiting to pass.
double g_value(const TestFunction& test, const VendorParams& params, double x);

/// C_A(x; p) = (1 - alpha)(1 - p(x)) R / (1 - alpha + alpha p(x)), the waiver-for-fee equivalent.
double waiver_cost(const TestFunction& test, const VendorParams& params, double x);

/// Upper bound of |G'| on x >= 0.
double lipschitz_bound(const TestFunction& test, const VendorParams& params);

enum class StrategyClass { OneAndDone, Incremental };

const char* to_string(StrategyClass k);

struct StrategySolution {
  double utility = 0.0;
  std::vector<double> maximizers;  ///< the optimal level set, ascending
  bool continuum = false;          ///< G is flat at its maximum; maximizers hold the bracket ends
};

inline double default_tie_tol(const VendorParams& params) { return 1e-6 * params.R; }

/// max_x G(x) over the grid, refined by golden-section search around every grid local maximum.
StrategySolution optimal_strategy(const TestFunction& test, const VendorParams& params,
                                  const GridSpec& grid, double tie_tol);
StrategySolution optimal_strategy(const TestFunction& test, const VendorParams& params);

/// Cumulative investment levels by step; the last level repeats indefinitely.
struct InvestmentSchedule {
  std::vector<double> levels;
  StrategyClass kind = StrategyClass::OneAndDone;
};

struct ScheduleOptions {
  /// Steps at which an incremental schedule moves to its next level. Empty means 1, 2, 3, ...
  std::vector<std::size_t> switch_times;
  /// Largest maximizer set whose ascending subsets are enumerated.
  std::size_t max_subset_source = 12;
};

/// One one-and-done schedule per optimal level, plus one incremental schedule per ascending
/// subset of two or more optimal levels. Each schedule has `horizon` entries.
std::vector<InvestmentSchedule> enumerate_schedules(const StrategySolution& solution,
                                                    std::size_t horizon,
                                                    const ScheduleOptions& options = {});

struct ValueFunction {
  std::vector<double> x;
  std::vector<double> value;  ///< V(x) on the grid
  std::size_t iterations = 0;
  /// Smallest continuation value c x + max_{y >= x}[...] seen at the fixed point (>= 0 means quitting
  /// never binds strictly).
  double min_continuation = 0.0;
};

/// Value iteration on the Bellman equation with quitting, restricted to the grid.
ValueFunction value_iteration_oracle(const TestFunction& test, const VendorParams& params,
                                     const GridSpec& grid, double tol,
                                     std::size_t max_iterations = 1'000'000);

}  // namespace auditopt::core
