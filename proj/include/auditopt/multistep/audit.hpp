#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "auditopt/core/params.hpp"
#include "auditopt/core/test_function.hpp"

namespace auditopt::multistep {

using core::GridSpec;
using core::TestFunction;
using core::VendorParams;

/// Tests administered after 0, 1, 2, ... failures: the prefix in order, then the tail forever.
struct Audit {
  std::vector<TestFunction> prefix;
  TestFunction tail = TestFunction::constant(1.0);

  bool is_static() const noexcept { return prefix.empty(); }
  /// Test faced at step n (0-based).
  const TestFunction& test(std::size_t n) const { return n < prefix.size() ? prefix[n] : tail; }
};

/// Net value of an audit on a grid, all steps. Level n holds
///   U_n(x) = -(1 - a + a p_n(x)) c x + p_n(x) R + a (1 - p_n(x)) U*_{n+1}(x),   U*_n(x) = max_{y >= x} U_n(y),
/// with the tail level U_K = G of the tail test. Running maxima include golden-refined peaks between
/// grid points, so off-grid evaluation stays accurate.
class AuditValuation {
 public:
  AuditValuation(Audit audit, const VendorParams& params, const GridSpec& grid);

  std::size_t levels() const noexcept { return net_.size(); }  ///< prefix length + 1
  const std::vector<double>& x() const noexcept { return x_; }
  const GridSpec& grid() const noexcept { return grid_; }
  /// U_n on the grid (n beyond the prefix maps to the tail level).
  const std::vector<double>& net_values(std::size_t n) const { return net_.at(level(n)); }
  /// U*_n on the grid.
  const std::vector<double>& values(std::size_t n) const { return star_.at(level(n)); }
  /// U_n(x) for any x in [0, x_max].
  double net_value(std::size_t n, double x) const;
  /// U*_n(x) for any x in [0, x_max].
  double value(std::size_t n, double x) const;

 private:
  struct Peak {
    double x;
    double value;
  };
  std::size_t level(std::size_t n) const { return n < net_.size() ? n : net_.size() - 1; }
  void build_level(std::size_t n);

  Audit audit_;
  VendorParams params_;
  GridSpec grid_;
  std::vector<double> x_;
  std::vector<std::vector<double>> net_;
  std::vector<std::vector<double>> star_;
  std::vector<std::vector<Peak>> peaks_;
};

struct NetValueFunction {
  GridSpec grid;
  std::vector<double> x;
  std::vector<double> values;      ///< U*_0 on the grid, non-increasing
  std::vector<double> net_values;  ///< U_0 on the grid
  std::vector<double> maximizers;  ///< optimal efforts of U_0, ascending
  double maximizer = 0.0;          ///< the largest of them
  double max_value = 0.0;
};

NetValueFunction backward_induction(const Audit& audit, const VendorParams& params, const GridSpec& grid,
                                    double tie_tol = -1.0);

struct PerturbationResult {
  double delta_value = 0.0;  ///< U*_0(0) of the perturbed audit minus the original
  double realized = 0.0;     ///< |delta_value|
  double bound = 0.0;        ///< alpha^m * sup|q_m - p_m| * R
  double test_distance = 0.0;
  int ordering = 0;          ///< +1 if q_m >= p_m on the grid, -1 if <=, 0 otherwise
};

/// Replace prefix test m by q_m and compare the optimal values. Throws PreconditionError if m is not a
/// prefix index and std::logic_error if the bound or the sign rule is violated.
PerturbationResult perturb_one_test(const Audit& audit, std::size_t m, const TestFunction& q_m,
                                    const VendorParams& params, const GridSpec& grid);

/// First k prefix tests, then prefix[k] (or the tail when k equals the length) repeated.
Audit truncate(const Audit& audit, std::size_t k);

struct ApproximationRow {
  std::size_t k = 0;
  double measured_error = 0.0;  ///< sup over the grid of |U_0 reference - U_0 truncated|
  double bound = 0.0;           ///< alpha^(k+1) R / (1 - alpha)
  std::optional<double> stated_bound;  ///< alpha^2 R / (1 - alpha), reported for k = 2
  double maximizer = 0.0;
  bool unique_maximizer = true;
  bool within_bound = true;     ///< measured <= bound + reference residual + 1e-9
};

struct ApproximationStudy {
  std::vector<ApproximationRow> rows;
  double reference_residual = 0.0;  ///< alpha^(K+1) R / (1 - alpha) for prefix length K
  double reference_maximizer = 0.0;
  bool reference_unique = true;
};

/// Truncation errors against the full prefix as reference. Throws PreconditionError when some k exceeds
/// the prefix length or the reference residual is not below a tenth of the smallest bound with k < K.
ApproximationStudy approximation_study(const Audit& audit, const VendorParams& params, const GridSpec& grid,
                                       const std::vector<std::size_t>& k_list);

struct BddReport {
  bool ok = true;
  double min_total = 0.0;  ///< min over the grid of c x + U*_0(x)
  double max_total = 0.0;
  std::size_t violations = 0;
};

/// Checks 0 <= c x + U*_0(x) <= R at every grid point with 1e-9 slack.
BddReport bdd_check(const Audit& audit, const VendorParams& params, const GridSpec& grid);

}  // namespace auditopt::multistep
