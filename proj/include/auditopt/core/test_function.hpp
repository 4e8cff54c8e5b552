#pragma once

#include <variant>

namespace auditopt::core {

/// Normal-noise threshold test: pass iff x + N(0, sigma^2) >= delta.
struct ThresholdTest {
  double delta = 0.0;
  double sigma = 1.0;
  bool operator==(const ThresholdTest&) const = default;
};

/// Truncated slope-one test: 0 below the entrance value b, 1 from b + 1 on.
struct LinearTest {
  double b = 0.0;
  bool operator==(const LinearTest&) const = default;
};

struct ConstantTest {
  double p = 1.0;
  bool operator==(const ConstantTest&) const = default;
};

/// Standard normal CDF, accurate in both tails.
double normal_cdf(double z);

/// A monotone map from cumulative effort to pass probability.
class TestFunction {
 public:
  using Variant = std::variant<ThresholdTest, LinearTest, ConstantTest>;

  TestFunction(ThresholdTest t);
  TestFunction(LinearTest t);
  TestFunction(ConstantTest t);

  static TestFunction threshold(double delta, double sigma) { return ThresholdTest{delta, sigma}; }
  static TestFunction linear(double b) { return LinearTest{b}; }
  static TestFunction constant(double p) { return ConstantTest{p}; }

  /// Pass probability p(x).
  double pass_probability(double x) const;

  /// 1 - p(x), computed without cancellation where p(x) is close to 1.
  double fail_probability(double x) const;

  double operator()(double x) const { return pass_probability(x); }

  /// Steepest slope of p over x >= 0 (used for Lipschitz bounds of G).
  double max_slope() const;

  const Variant& variant() const noexcept { return v_; }
  bool is_threshold() const noexcept { return std::holds_alternative<ThresholdTest>(v_); }
  bool is_linear() const noexcept { return std::holds_alternative<LinearTest>(v_); }
  bool is_constant() const noexcept { return std::holds_alternative<ConstantTest>(v_); }

  bool operator==(const TestFunction&) const = default;

 private:
  Variant v_;
};

}  // namespace auditopt::core
