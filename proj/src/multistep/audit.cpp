#include "auditopt/multistep/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "auditopt/core/maximize.hpp"
#include "auditopt/core/strategy.hpp"
#include "auditopt/errors.hpp"

namespace auditopt::multistep {

namespace {

// U_n from the pass and fail probabilities and the next running maximum.
double recurse(double p, double q, double w, const VendorParams& params, double x) {
  const double a = params.alpha;
  return -(1.0 - a * q) * params.c * x + p * params.R + a * q * w;
}

}  // namespace

AuditValuation::AuditValuation(Audit audit, const VendorParams& params, const GridSpec& grid)
    : audit_(std::move(audit)), params_(params), grid_(grid) {
  params_.validate();
  grid_.validate(params_);
  x_ = grid_.points();
  const std::size_t n_levels = audit_.prefix.size() + 1;
  net_.resize(n_levels);
  star_.resize(n_levels);
  peaks_.resize(n_levels);
  for (std::size_t n = n_levels; n-- > 0;) build_level(n);
}

double AuditValuation::net_value(std::size_t n, double x) const {
  const std::size_t l = level(n);
  if (l + 1 == net_.size()) return core::g_value(audit_.tail, params_, x);
  const TestFunction& t = audit_.prefix[l];
  return recurse(t.pass_probability(x), t.fail_probability(x), value(l + 1, x), params_, x);
}

double AuditValuation::value(std::size_t n, double x) const {
  const std::size_t l = level(n);
  const double here = net_value(l, x);
  const auto j = static_cast<std::size_t>(std::lower_bound(x_.begin(), x_.end(), x) - x_.begin());
  if (j == x_.size()) return here;
  double best = std::max(here, star_[l][j]);
  const auto& pk = peaks_[l];
  auto it = std::lower_bound(pk.begin(), pk.end(), x, [](const Peak& p, double v) { return p.x < v; });
  for (; it != pk.end() && it->x < x_[j]; ++it) best = std::max(best, it->value);
  return best;
}

void AuditValuation::build_level(std::size_t n) {
  const std::size_t m = x_.size();
  auto& u = net_[n];
  u.resize(m);
  const bool tail = n + 1 == net_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double x = x_[i];
    if (tail) {
      u[i] = core::g_value(audit_.tail, params_, x);
    } else {
      const TestFunction& t = audit_.prefix[n];
      u[i] = recurse(t.pass_probability(x), t.fail_probability(x), star_[n + 1][i], params_, x);
    }
  }

  auto& peaks = peaks_[n];
  peaks.clear();
  const auto f = [&](double x) { return net_value(n, x); };
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (u[i] < u[i - 1] || u[i] < u[i + 1]) continue;
    if (u[i] == u[i - 1] && u[i] == u[i + 1]) continue;
    const core::Extremum e = core::golden_section_max(f, x_[i - 1], x_[i + 1], 1e-10);
    if (e.value > u[i]) peaks.push_back({e.x, e.value});
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& l, const Peak& r) { return l.x < r.x; });

  auto& s = star_[n];
  s.resize(m);
  double run = -std::numeric_limits<double>::infinity();
  auto pk = peaks.rbegin();
  for (std::size_t i = m; i-- > 0;) {
    for (; pk != peaks.rend() && pk->x >= x_[i]; ++pk) run = std::max(run, pk->value);
    run = std::max(run, u[i]);
    s[i] = run;
  }
}

NetValueFunction backward_induction(const Audit& audit, const VendorParams& params, const GridSpec& grid,
                                    double tie_tol) {
  if (tie_tol < 0.0) tie_tol = core::default_tie_tol(params);
  const AuditValuation v(audit, params, grid);
  NetValueFunction out;
  out.grid = grid;
  out.x = v.x();
  out.values = v.values(0);
  out.net_values = v.net_values(0);
  const core::MaximaSet m =
      core::find_maxima([&](double x) { return v.net_value(0, x); }, 0.0, grid.x_max, grid.step, tie_tol);
  out.maximizers = m.maximizers;
  out.maximizer = m.maximizers.back();
  out.max_value = std::max(out.values.front(), m.value);
  return out;
}

PerturbationResult perturb_one_test(const Audit& audit, std::size_t m, const TestFunction& q_m,
                                    const VendorParams& params, const GridSpec& grid) {
  if (m >= audit.prefix.size())
    throw PreconditionError("perturbed index " + std::to_string(m) + " is not in the prefix of length " +
                            std::to_string(audit.prefix.size()));
  Audit b = audit;
  b.prefix[m] = q_m;
  const TestFunction& p_m = audit.prefix[m];

  PerturbationResult r;
  bool geq = true;
  bool leq = true;
  std::size_t worst = 0;
  const std::vector<double> xs = grid.points();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = q_m.pass_probability(xs[i]) - p_m.pass_probability(xs[i]);
    geq = geq && d >= 0.0;
    leq = leq && d <= 0.0;
    if (std::abs(d) > r.test_distance) {
      r.test_distance = std::abs(d);
      worst = i;
    }
  }
  if (r.test_distance > 0.0) {
    const double lo = xs[worst > 0 ? worst - 1 : 0];
    const double hi = xs[std::min(worst + 1, xs.size() - 1)];
    const auto gap = [&](double x) { return std::abs(q_m.pass_probability(x) - p_m.pass_probability(x)); };
    r.test_distance = std::max(r.test_distance, core::golden_section_max(gap, lo, hi, 1e-12).value);
  }
  r.ordering = geq && !leq ? 1 : (leq && !geq ? -1 : 0);
  r.bound = std::pow(params.alpha, static_cast<double>(m)) * r.test_distance * params.R;

  const AuditValuation va(audit, params, grid);
  const AuditValuation vb(b, params, grid);
  r.delta_value = vb.values(0).front() - va.values(0).front();
  r.realized = std::abs(r.delta_value);

  if (r.realized > r.bound + 1e-9) throw std::logic_error("one-test perturbation exceeds its bound");
  if ((r.ordering > 0 && r.delta_value < -1e-9) || (r.ordering < 0 && r.delta_value > 1e-9))
    throw std::logic_error("one-test perturbation moved the value against the test ordering");
  return r;
}

Audit truncate(const Audit& audit, std::size_t k) {
  const std::size_t n = audit.prefix.size();
  if (k > n)
    throw PreconditionError("truncation index " + std::to_string(k) + " exceeds prefix length " +
                            std::to_string(n));
  Audit out;
  out.prefix.assign(audit.prefix.begin(), audit.prefix.begin() + static_cast<std::ptrdiff_t>(k));
  out.tail = k < n ? audit.prefix[k] : audit.tail;
  return out;
}

ApproximationStudy approximation_study(const Audit& audit, const VendorParams& params, const GridSpec& grid,
                                       const std::vector<std::size_t>& k_list) {
  params.validate();
  if (k_list.empty()) throw PreconditionError("k list is empty");
  const std::size_t K = audit.prefix.size();
  const double a = params.alpha;
  const auto geo = [&](std::size_t j) { return std::pow(a, static_cast<double>(j)) * params.R / (1.0 - a); };

  ApproximationStudy out;
  out.reference_residual = geo(K + 1);
  std::optional<std::size_t> largest_below;
  for (std::size_t k : k_list) {
    if (k > K)
      throw PreconditionError("k = " + std::to_string(k) + " exceeds the reference prefix length " +
                              std::to_string(K));
    if (k < K) largest_below = std::max(largest_below.value_or(0), k);
  }
  if (largest_below && !(out.reference_residual < 0.1 * geo(*largest_below + 1)))
    throw PreconditionError("reference prefix too short: residual " + std::to_string(out.reference_residual) +
                            " is not below a tenth of the smallest bound");

  const NetValueFunction ref = backward_induction(audit, params, grid);
  out.reference_maximizer = ref.maximizer;
  out.reference_unique = ref.maximizers.size() == 1;

  for (std::size_t k : k_list) {
    const NetValueFunction v = backward_induction(truncate(audit, k), params, grid);
    ApproximationRow row;
    row.k = k;
    for (std::size_t i = 0; i < v.net_values.size(); ++i)
      row.measured_error = std::max(row.measured_error, std::abs(v.net_values[i] - ref.net_values[i]));
    row.bound = geo(k + 1);
    if (k == 2) row.stated_bound = geo(2);
    row.maximizer = v.maximizer;
    row.unique_maximizer = v.maximizers.size() == 1;
    row.within_bound = row.measured_error <= row.bound + out.reference_residual + 1e-9;
    out.rows.push_back(row);
  }
  return out;
}

BddReport bdd_check(const Audit& audit, const VendorParams& params, const GridSpec& grid) {
  const AuditValuation v(audit, params, grid);
  const auto& xs = v.x();
  const auto& u = v.values(0);
  BddReport r;
  r.min_total = std::numeric_limits<double>::infinity();
  r.max_total = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double total = params.c * xs[i] + u[i];
    r.min_total = std::min(r.min_total, total);
    r.max_total = std::max(r.max_total, total);
    if (total < -1e-9 || total > params.R + 1e-9) ++r.violations;
  }
  r.ok = r.violations == 0;
  return r;
}

}  // namespace auditopt::multistep
