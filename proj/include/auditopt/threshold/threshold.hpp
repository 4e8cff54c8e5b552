#pragma once

#include <vector>

#include "auditopt/core/params.hpp"
#include "auditopt/core/test_function.hpp"

namespace auditopt::threshold {

using core::GridSpec;
using core::TestFunction;
using core::VendorParams;

/// Normal liability loss Z(x) with mean mu0 / x and standard deviation s0 / x, priced through
/// exponential utility with risk aversion gamma.
struct LiabilityModel {
  double gamma = 0.0;
  double mu0 = 1.0;
  double s0 = 1.5;

  void validate() const;
  double loss_mean(double x) const { return mu0 / x; }
  double loss_sd(double x) const { return s0 / x; }
};

/// Exponents above this saturate C_L to +inf.
inline constexpr double kOverflowExponent = 700.0;

/// C_L(gamma, x) = exp(gamma mu_Z(x) + gamma^2 sigma_Z(x)^2 / 2). +inf once the exponent passes 700.
double liability_loss(const LiabilityModel& model, double x);

/// R - c x - C_L(gamma, x); -inf when C_L saturates.
double opt_out_utility(const LiabilityModel& model, const VendorParams& params, double x);

struct OptOutSearch {
  double x_max = 0.0;   ///< 0 selects R/c + 1
  double step = 1e-2;
};

struct OptOutOptimum {
  double utility = 0.0;
  double x_star = 0.0;
  bool supremum_only = false;  ///< gamma = 0: the value R - 1 is approached as x -> 0 but not attained
};

OptOutOptimum max_opt_out_utility(const LiabilityModel& model, const VendorParams& params,
                                  const OptOutSearch& search = {});

struct GammaBarOptions {
  double gamma_cap = 1e6;
  double rel_tol = 1e-9;
  double grid_step = 1e-3;  ///< opt-in grid
  OptOutSearch opt_out{};
};

/// Risk aversion at which the vendor is indifferent between the threshold audit and staying out.
/// 0 when the audit beats the opt-out supremum R - 1; +inf if no gamma up to the cap makes it.
double gamma_bar(const TestFunction& test, double mu0, double s0, const VendorParams& params,
                 const GammaBarOptions& options = {});

struct CoverageCell {
  double delta = 0.0;
  double sigma = 0.0;
  double gamma_bar = 0.0;
};

/// gamma_bar on every (delta, sigma) pair, delta-major.
std::vector<CoverageCell> coverage_grid(const std::vector<double>& deltas,
                                        const std::vector<double>& sigmas, double mu0, double s0,
                                        const VendorParams& params,
                                        const GammaBarOptions& options = {});

enum class CurvatureChange { ConcaveToConvex, ConvexToConcave };

struct CurvatureTransition {
  double x = 0.0;  ///< midpoint between the last grid point of one sign and the first of the other
  CurvatureChange kind = CurvatureChange::ConcaveToConvex;
};

struct ShapeReport {
  std::vector<double> x;
  std::vector<double> waiver;             ///< C_A on the grid
  std::vector<double> second_difference;  ///< at interior points, 0 where below rounding noise
  std::vector<CurvatureTransition> transitions;
};

/// Second finite differences of the waiver cost C_A on the grid and where their sign flips.
ShapeReport ca_shape_report(const TestFunction& test, const VendorParams& params, const GridSpec& grid);

}  // namespace auditopt::threshold
