#pragma once

#include <cstddef>
#include <vector>

namespace auditopt::core {

/// Economic primitives shared by every formula: revenue on passing, marginal effort cost, discount.
struct VendorParams {
  double R = 4.0;
  double c = 1.0;
  double alpha = 0.5;

  /// Throws std::invalid_argument unless R > 0, c > 0 and 0 < alpha < 1.
  void validate() const;

  /// Investment capacity R/c.
  double capacity() const noexcept { return R / c; }
  double rosi() const noexcept { return R / c; }
};

/// Uniform effort grid on [0, x_max]. The last point is exactly x_max.
struct GridSpec {
  double x_max = 0.0;
  double step = 1e-3;

  /// Default grid for the given parameters: [0, R/c + 1] at step 1e-3.
  static GridSpec for_params(const VendorParams& params, double step = 1e-3);

  /// Throws std::invalid_argument unless step > 0 and x_max >= R/c.
  void validate(const VendorParams& params) const;

  std::size_t size() const;
  double point(std::size_t i) const;
  std::vector<double> points() const;
};

}  // namespace auditopt::core
