#include "auditopt/linear/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "auditopt/core/strategy.hpp"
#include "auditopt/core/test_function.hpp"
#include "auditopt/errors.hpp"

namespace auditopt::linear {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kArgTol = 1e-6;
constexpr double kUtilityTol = 1e-9;

// Quantities that recur in every closed form of this family.
struct Shape {
  double ab;        // (1 - alpha) / alpha
  double offset;    // sqrt((1 - alpha) R / (alpha^2 c)), middle-branch maximizer minus (b - ab)
  double b_static;  // (sqrt(R / (alpha c)) - sqrt(ab))^2
};

Shape shape(const VendorParams& p) {
  const double ab = (1.0 - p.alpha) / p.alpha;
  const double offset = std::sqrt(ab * p.R / (p.alpha * p.c));
  const double d = std::sqrt(p.R / (p.alpha * p.c)) - std::sqrt(ab);
  return {ab, offset, d * d};
}

void require_band(const VendorParams& params, const char* what) {
  const RosiCase k = classify(params);
  if (k != RosiCase::MidROSI) throw RegimeError(case_label(k), what);
}

void require_entrance(double b) {
  if (!(b >= 0.0)) throw DomainError("entrance value must be non-negative");
}

double fail_linear(double b, double x) { return core::TestFunction::linear(b).fail_probability(x); }
double pass_linear(double b, double x) { return core::TestFunction::linear(b).pass_probability(x); }

}  // namespace

RosiCase classify(const VendorParams& params) {
  params.validate();
  const double r = params.rosi();
  if (r < 1.0 - params.alpha) return RosiCase::LowROSI;
  if (r < 1.0 / (1.0 - params.alpha)) return RosiCase::MidROSI;
  return RosiCase::HighROSI;
}

const char* case_label(RosiCase k) {
  switch (k) {
    case RosiCase::LowROSI: return "i";
    case RosiCase::MidROSI: return "ii";
    case RosiCase::HighROSI: return "iii";
  }
  return "?";
}

double g_linear(double b, const VendorParams& params, double x) {
  require_entrance(b);
  if (!(x >= 0.0)) throw DomainError("effort must be non-negative");
  if (x < b) return -params.c * x;
  if (x >= b + 1.0) return -params.c * x + params.R;
  const double u = x - b;
  return -params.c * x + u * params.R / (1.0 - params.alpha * (1.0 - u));
}

LinearDesign design_static(const VendorParams& params) {
  LinearDesign d;
  d.rosi_case = classify(params);
  d.branch = "static";
  const double r = params.rosi();
  switch (d.rosi_case) {
    case RosiCase::LowROSI:
      d.b = 0.0;
      d.incentivizable_x = 0.0;
      break;
    case RosiCase::MidROSI: {
      const double s = std::sqrt(params.R) - std::sqrt((1.0 - params.alpha) * params.c);
      d.b = s * s / (params.alpha * params.c);
      d.incentivizable_x =
          (params.R - std::sqrt((1.0 - params.alpha) * params.R * params.c)) / (params.alpha * params.c);
      break;
    }
    case RosiCase::HighROSI:
      d.b = r - 1.0;
      d.incentivizable_x = r;
      break;
  }
  d.vendor_utility = g_linear(d.b, params, d.incentivizable_x);

  const auto sol = core::optimal_strategy(core::TestFunction::linear(d.b), params);
  d.verified = !sol.maximizers.empty() &&
               std::abs(sol.maximizers.back() - d.incentivizable_x) <= kArgTol &&
               d.vendor_utility >= -kUtilityTol;
  return d;
}

CapacityGap capacity_gap_bound(const VendorParams& params) {
  require_band(params, "capacity gap bound needs mid-ROSI parameters");
  CapacityGap out;
  out.bound = params.alpha >= 0.5 ? 1.0 / (4.0 * params.alpha) : 1.0 - params.alpha;
  out.gap = params.rosi() - design_static(params).incentivizable_x;
  if (out.gap > out.bound + 1e-12)
    throw std::logic_error("capacity gap " + std::to_string(out.gap) + " exceeds bound " +
                           std::to_string(out.bound));
  return out;
}

PiecewiseUtility::PiecewiseUtility(std::vector<double> breakpoints,
                                   std::vector<std::function<double(double)>> segments)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
  if (segments_.size() != breakpoints_.size() + 1)
    throw std::invalid_argument("need one more segment than breakpoints");
  if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end()))
    throw std::invalid_argument("breakpoints must be ascending");
}

std::size_t PiecewiseUtility::segment_index(double x) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
                                  breakpoints_.begin());
}

double PiecewiseUtility::operator()(double x) const { return segments_[segment_index(x)](x); }

PiecewiseUtility tail_value_pieces(double b, const VendorParams& params) {
  require_entrance(b);
  require_band(params, "closed-form running maximum holds only for 1 - alpha <= R/c < 1/(1 - alpha)");
  const Shape s = shape(params);
  const double c = params.c;
  const double R = params.R;
  const double a = params.alpha;
  const double root = std::sqrt(R / a) - std::sqrt(s.ab * c);
  const double plateau = root * root - b * c;

  std::vector<double> bps{b - s.b_static, b - s.ab + s.offset, b + 1.0};
  std::vector<std::function<double(double)>> segs{
      [c](double x) { return -c * x; },
      [plateau](double) { return plateau; },
      [b, params](double x) { return g_linear(b, params, x); },
      [c, R](double x) { return R - c * x; },
  };
  return PiecewiseUtility(std::move(bps), std::move(segs));
}

double tail_value(double b, const VendorParams& params, double x) {
  if (!(x >= 0.0)) throw DomainError("effort must be non-negative");
  return tail_value_pieces(b, params)(x);
}

double tail_value_numeric(double b, const VendorParams& params, double x) {
  require_entrance(b);
  if (!(x >= 0.0)) throw DomainError("effort must be non-negative");
  if (x >= b + 1.0) return params.R - params.c * x;
  const double below = x < b ? -params.c * x : kNegInf;
  const auto middle = [&](double y) { return g_linear(b, params, y); };
  const core::Extremum m = core::golden_section_max(middle, std::max(x, b), b + 1.0, 1e-11);
  return std::max(below, m.value);
}

double two_step_value(double b_prime, double b, const VendorParams& params, double x) {
  require_entrance(b_prime);
  require_entrance(b);
  if (!(x >= 0.0)) throw DomainError("effort must be non-negative");
  const double w = classify(params) == RosiCase::MidROSI ? tail_value(b, params, x)
                                                         : tail_value_numeric(b, params, x);
  const double p = pass_linear(b_prime, x);
  const double q = fail_linear(b_prime, x);
  const double a = params.alpha;
  return -(1.0 - a * q) * params.c * x + p * params.R + a * q * w;
}

PiecewiseUtility two_step_pieces(double b_prime, double b, const VendorParams& params) {
  require_entrance(b_prime);
  const PiecewiseUtility tail = tail_value_pieces(b, params);
  const double c = params.c;
  const double R = params.R;
  const double a = params.alpha;
  const double k = (1.0 - a) * c - 2.0 * std::sqrt((1.0 - a) * R * c) - a * b * c;

  std::vector<std::function<double(double)>> segs{
      [=](double x) { return -c * x + R * pass_linear(b_prime, x); },
      [=](double x) { return -c * x + R + fail_linear(b_prime, x) * (a * c * x + k); },
      [=](double x) {
        const double u = x - b;
        return -c * x + ((1.0 - a) * pass_linear(b_prime, x) + a * u) * R / (1.0 - a + a * u);
      },
      [=](double x) { return -c * x + (a + (1.0 - a) * pass_linear(b_prime, x)) * R; },
  };
  return PiecewiseUtility(tail.breakpoints(), std::move(segs));
}

TwoStepResponse two_step_response(double b_prime, double b, const VendorParams& params, double step,
                                  double tie_tol) {
  if (tie_tol < 0.0) tie_tol = core::default_tie_tol(params);
  const auto f = [&](double x) { return two_step_value(b_prime, b, params, x); };
  const double hi = std::max({params.rosi(), b_prime, b}) + 1.0;
  const core::MaximaSet m = core::find_maxima(f, 0.0, hi, step, tie_tol);
  return {m.value, m.maximizers.back(), m.maximizers};
}

LinearDesign design_dynamic_easier_first(const VendorParams& params) {
  const RosiCase k = classify(params);
  const double r = params.rosi();
  if (k != RosiCase::MidROSI)
    throw RegimeError(case_label(k), "two-step audits cannot improve on the static design here");
  if (!(r > 1.0))
    throw RegimeError(case_label(k), "easier-first design needs R/c > 1; use the static design");

  LinearDesign d;
  d.rosi_case = k;
  d.branch = "easier-first";
  d.b = r + shape(params).b_static;
  d.b_prime = r - 1.0;
  d.incentivizable_x = r;
  d.vendor_utility = two_step_value(*d.b_prime, d.b, params, r);

  const TwoStepResponse resp = two_step_response(*d.b_prime, d.b, params);
  d.verified = std::abs(resp.x - r) <= kArgTol && d.vendor_utility >= -kUtilityTol;
  return d;
}

LinearDesign design_dynamic_harder_first(const VendorParams& params, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  const RosiCase k = classify(params);
  const double r = params.rosi();
  if (k != RosiCase::MidROSI || !(r > 1.0 - params.alpha))
    throw RegimeError(case_label(k), "harder-first design needs 1 - alpha < R/c < 1/(1 - alpha)");

  const double c = params.c;
  const double R = params.R;
  const double a = params.alpha;
  const Shape s = shape(params);
  const double X = s.ab * R / (a * c);
  const double Y = s.ab * R / c;
  const auto sq = [&](double delta) { return std::sqrt(X + Y * delta); };
  const double delta0 = c / (a * (1.0 - a) * R) - 1.0 / a;
  const double x_static = (R - std::sqrt((1.0 - a) * R * c)) / (a * c);

  // The vendor can always stop at x = 0 and still collect alpha times the tail plateau, which is
  // positive whenever b < b_static; both branches below keep the chosen effort at least that good.
  struct Candidate {
    double b, b_prime, x;
    const char* branch;
  };
  std::vector<Candidate> candidates;

  // Interior optimum of the middle branch, first-step gap exactly epsilon.
  if (epsilon <= 1.0 && epsilon <= delta0 && epsilon <= sq(epsilon) - s.ab) {
    const double b = s.b_static - 2.0 * (sq(epsilon) - sq(0.0)) / (1.0 - a);
    if (b >= 0.0) candidates.push_back({b, b + epsilon, b - s.ab + sq(epsilon), "bar"});
  }
  // Optimum at the tail ceiling b + 1.
  if (const double delta = std::max(epsilon, delta0); delta <= 1.0) {
    const double v = r * (1.0 - (1.0 - a) * delta);
    double b = v - 1.0;
    if (b < s.b_static) b = (v - 1.0 - a * s.b_static) / (1.0 - a);
    if (b >= 0.0) candidates.push_back({b, b + delta, b + 1.0, "tilde"});
  }
  if (candidates.empty())
    throw RegimeError(case_label(k), "no harder-first design is feasible for these parameters");

  const Candidate best = *std::max_element(
      candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& rr) { return l.x < rr.x; });

  LinearDesign d;
  d.rosi_case = k;
  d.branch = best.branch;
  d.b = best.b;
  d.b_prime = best.b_prime;
  d.incentivizable_x = best.x;
  d.vendor_utility = two_step_value(best.b_prime, best.b, params, best.x);

  if (std::string(best.branch) == "bar") {
    const double b = s.ab + R / (a * c) - 2.0 * sq(epsilon);
    d.stated_b = b;
    d.stated_b_prime = b + epsilon;
    d.stated_x = b - s.ab + sq(epsilon);
  } else {
    d.stated_b = (R - (1.0 + a) * c) / (a * c);
    d.stated_b_prime = R / (a * c) + c / (a * (1.0 - a) * R) - (2.0 + a) / a;
    d.stated_x = (R - c) / (a * c);
  }

  if (!(d.incentivizable_x < x_static))
    throw std::logic_error("harder-first design does not stay below the static investment");

  const TwoStepResponse resp = two_step_response(best.b_prime, best.b, params);
  d.verified = std::abs(resp.x - d.incentivizable_x) <= kArgTol && d.vendor_utility >= -kUtilityTol;
  return d;
}

double aux_g(double b_prime, double b, const VendorParams& params, double x) {
  const double c = params.c;
  const double a = params.alpha;
  const double k = (1.0 - a) * c - 2.0 * std::sqrt((1.0 - a) * params.R * c) - a * b * c;
  return -c * x + params.R + (1.0 + b_prime - x) * (a * c * x + k);
}

double aux_h(double b_prime, double b, const VendorParams& params, double x) {
  const double a = params.alpha;
  return -params.c * x + (x - (1.0 - a) * b_prime - a * b) * params.R / (1.0 - a + a * (x - b));
}

AuxiliaryCurves auxiliary_curves(double b_prime, double b, const VendorParams& params) {
  params.validate();
  const Shape s = shape(params);
  const double a = params.alpha;
  const double root =
      std::sqrt(s.offset * s.offset + (1.0 - a) * params.R * (b_prime - b) / (a * params.c));
  AuxiliaryCurves out;
  out.x_g = 0.5 * (b_prime + b) - s.ab + s.offset;
  out.x_h = b - s.ab + root;
  out.h_max = -params.c * (b - s.ab - params.R / (a * params.c) + 2.0 * root);
  return out;
}

}  // namespace auditopt::linear
