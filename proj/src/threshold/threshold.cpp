#include "auditopt/threshold/threshold.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "auditopt/core/maximize.hpp"
#include "auditopt/core/strategy.hpp"
#include "auditopt/errors.hpp"

namespace auditopt::threshold {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void LiabilityModel::validate() const {
  if (!(gamma >= 0.0)) throw std::invalid_argument("risk aversion gamma must be non-negative");
  if (!(mu0 > 0.0)) throw std::invalid_argument("mu0 must be positive");
  if (!(s0 > 0.0)) throw std::invalid_argument("s0 must be positive");
}

double liability_loss(const LiabilityModel& model, double x) {
  if (!(x > 0.0)) throw DomainError("liability loss diverges at x <= 0, got " + std::to_string(x));
  const double mean = model.loss_mean(x);
  const double sd = model.loss_sd(x);
  const double exponent = model.gamma * mean + 0.5 * model.gamma * model.gamma * sd * sd;
  if (!(exponent <= kOverflowExponent)) return kInf;
  return std::exp(exponent);
}

double opt_out_utility(const LiabilityModel& model, const VendorParams& params, double x) {
  const double loss = liability_loss(model, x);
  if (std::isinf(loss)) return -kInf;
  return params.R - params.c * x - loss;
}

OptOutOptimum max_opt_out_utility(const LiabilityModel& model, const VendorParams& params,
                                  const OptOutSearch& search) {
  model.validate();
  params.validate();
  if (model.gamma == 0.0) return {params.R - 1.0, 0.0, true};

  const double x_max = search.x_max > 0.0 ? search.x_max : params.capacity() + 1.0;
  const auto f = [&](double x) { return x > 0.0 ? opt_out_utility(model, params, x) : -kInf; };
  OptOutOptimum best{-kInf, x_max, false};
  for (const core::Extremum& e : core::local_maxima(f, 0.0, x_max, search.step)) {
    if (e.value > best.utility) best = {e.value, e.x, false};
  }
  return best;
}

double gamma_bar(const TestFunction& test, double mu0, double s0, const VendorParams& params,
                 const GammaBarOptions& options) {
  params.validate();
  const core::StrategySolution in = core::optimal_strategy(
      test, params, core::GridSpec::for_params(params, options.grid_step), core::default_tie_tol(params));
  const double u_in = in.utility;
  if (u_in >= params.R - 1.0) return 0.0;

  // F(gamma) = U_out*(gamma) - U_in*, positive at gamma = 0 and non-increasing.
  const auto F = [&](double gamma) {
    return max_opt_out_utility(LiabilityModel{gamma, mu0, s0}, params, options.opt_out).utility - u_in;
  };

  double lo = 0.0;
  double hi = 1.0;
  while (F(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > options.gamma_cap) return kInf;
  }
  while (hi - lo > options.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<CoverageCell> coverage_grid(const std::vector<double>& deltas,
                                        const std::vector<double>& sigmas, double mu0, double s0,
                                        const VendorParams& params, const GammaBarOptions& options) {
  if (deltas.empty() || sigmas.empty()) throw std::invalid_argument("coverage ranges must be non-empty");
  for (double s : sigmas)
    if (!(s > 0.0)) throw std::invalid_argument("coverage sigma values must be positive");

  std::vector<CoverageCell> cells;
  cells.reserve(deltas.size() * sigmas.size());
  for (double d : deltas)
    for (double s : sigmas)
      cells.push_back({d, s, gamma_bar(TestFunction::threshold(d, s), mu0, s0, params, options)});
  return cells;
}

ShapeReport ca_shape_report(const TestFunction& test, const VendorParams& params, const GridSpec& grid) {
  params.validate();
  grid.validate(params);
  ShapeReport out;
  out.x = grid.points();
  const std::size_t n = out.x.size();
  out.waiver.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.waiver[i] = core::waiver_cost(test, params, out.x[i]);

  out.second_difference.assign(n, 0.0);
  constexpr double kNoise = 64.0 * std::numeric_limits<double>::epsilon();
  int last_sign = 0;
  std::size_t last_index = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double l = out.waiver[i - 1];
    const double m = out.waiver[i];
    const double r = out.waiver[i + 1];
    double d2 = l - 2.0 * m + r;
    if (std::abs(d2) <= kNoise * (std::abs(l) + 2.0 * std::abs(m) + std::abs(r))) d2 = 0.0;
    out.second_difference[i] = d2;
    if (d2 == 0.0) continue;
    const int sign = d2 > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) {
      out.transitions.push_back({0.5 * (out.x[last_index] + out.x[i]),
                                 sign > 0 ? CurvatureChange::ConcaveToConvex
                                          : CurvatureChange::ConvexToConcave});
    }
    last_sign = sign;
    last_index = i;
  }
  return out;
}

}  // namespace auditopt::threshold
