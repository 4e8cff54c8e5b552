#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "auditopt/core/maximize.hpp"
#include "auditopt/core/params.hpp"

namespace auditopt::linear {

using core::GridSpec;
using core::VendorParams;

/// Partition of R/c against [1 - alpha, 1 / (1 - alpha)).
enum class RosiCase { LowROSI, MidROSI, HighROSI };

RosiCase classify(const VendorParams& params);
/// "i", "ii" or "iii".
const char* case_label(RosiCase k);

/// Static-audit net utility under the slope-one test with entrance value b.
double g_linear(double b, const VendorParams& params, double x);

struct LinearDesign {
  RosiCase rosi_case = RosiCase::LowROSI;
  double b = 0.0;                         ///< tail (repeated) test entrance value
  std::optional<double> b_prime;          ///< first-step test, dynamic designs only
  double incentivizable_x = 0.0;
  double vendor_utility = 0.0;
  bool verified = false;                  ///< numerical re-check of IC and VP passed
  std::string branch;                     ///< which closed form produced the design

  /// Harder-first only: the entrance values and effort given by the uncorrected closed form.
  std::optional<double> stated_b;
  std::optional<double> stated_b_prime;
  std::optional<double> stated_x;
};

/// Entrance value maximizing the effort a static linear audit can incentivize (IC + VP).
/// Cases ii and iii are re-checked against core::optimal_strategy.
LinearDesign design_static(const VendorParams& params);

struct CapacityGap {
  double bound = 0.0;  ///< 1/(4 alpha) for alpha >= 1/2, 1 - alpha otherwise
  double gap = 0.0;    ///< R/c - x(b*)
};

/// Throws RegimeError outside the mid-ROSI band, std::logic_error if the gap exceeds the bound.
CapacityGap capacity_gap_bound(const VendorParams& params);

/// Function of effort assembled from half-open segments [breakpoints[i-1], breakpoints[i]).
class PiecewiseUtility {
 public:
  PiecewiseUtility(std::vector<double> breakpoints, std::vector<std::function<double(double)>> segments);

  double operator()(double x) const;
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  std::size_t segment_index(double x) const;
  /// Evaluates segment i regardless of where x falls (for continuity checks).
  double segment(std::size_t i, double x) const { return segments_.at(i)(x); }

 private:
  std::vector<double> breakpoints_;
  std::vector<std::function<double(double)>> segments_;
};

/// U^{b,*}(x) = max_{y >= x} G^b(y) in four pieces S1..S4. Mid-ROSI band only (RegimeError otherwise).
PiecewiseUtility tail_value_pieces(double b, const VendorParams& params);
double tail_value(double b, const VendorParams& params, double x);

/// The same running maximum from the monotone structure of G^b: decreasing below b and above b + 1,
/// concave in between. Valid for every ROSI case.
double tail_value_numeric(double b, const VendorParams& params, double x);

/// Two-step audit utility: first test Linear(b_prime), then Linear(b) repeated.
/// Uses the closed-form tail inside the mid-ROSI band and the numeric tail outside it.
double two_step_value(double b_prime, double b, const VendorParams& params, double x);

/// Four-piece closed form of the two-step utility on the S1..S4 partition (mid-ROSI band only).
PiecewiseUtility two_step_pieces(double b_prime, double b, const VendorParams& params);

struct TwoStepResponse {
  double value = 0.0;
  double x = 0.0;  ///< largest optimal effort, the IC tie-break toward more investment
  std::vector<double> maximizers;
};

/// The vendor's best response to the two-step audit (b_prime, b).
TwoStepResponse two_step_response(double b_prime, double b, const VendorParams& params,
                                  double step = 1e-3, double tie_tol = -1.0);

/// Easy first test then a harder repeated test: induces the full capacity R/c.
/// Requires 1 < R/c < 1/(1 - alpha).
LinearDesign design_dynamic_easier_first(const VendorParams& params);

/// Hard first test then an easier repeated one, with b + epsilon <= b' <= b + 1.
/// Requires epsilon > 0 and 1 - alpha < R/c < 1/(1 - alpha).
LinearDesign design_dynamic_harder_first(const VendorParams& params, double epsilon = 1e-2);

/// Helpers g and h of the two-step analysis and their stationary points.
double aux_g(double b_prime, double b, const VendorParams& params, double x);
double aux_h(double b_prime, double b, const VendorParams& params, double x);

struct AuxiliaryCurves {
  double x_g = 0.0;
  double x_h = 0.0;
  double h_max = 0.0;
};

AuxiliaryCurves auxiliary_curves(double b_prime, double b, const VendorParams& params);

}  // namespace auditopt::linear
