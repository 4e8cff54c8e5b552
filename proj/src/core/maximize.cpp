#include "auditopt/core/maximize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace auditopt::core {

namespace {

// A NaN never wins a comparison.
bool better(double a, double b) { return a > b || (std::isnan(b) && !std::isnan(a)); }

}  // namespace

Extremum golden_section_max(const ScalarFn& f, double lo, double hi, double x_tol) {
  Extremum best{lo, f(lo)};
  if (hi <= lo) return best;
  if (const double fh = f(hi); better(fh, best.value)) best = {hi, fh};

  const double inv_phi = 1.0 / std::numbers::phi;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > x_tol) {
    if (better(f2, f1)) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  if (better(f1, best.value)) best = {x1, f1};
  if (better(f2, best.value)) best = {x2, f2};
  return best;
}

std::vector<Extremum> local_maxima(const ScalarFn& f, double lo, double hi, double step,
                                   double x_tol) {
  const double cells = std::max(std::ceil((hi - lo) / step - 1e-9), 1.0);
  const auto n = static_cast<std::size_t>(cells) + 1;
  auto point = [&](std::size_t i) { return i + 1 >= n ? hi : lo + static_cast<double>(i) * step; };

  std::vector<double> fx(n);
  for (std::size_t i = 0; i < n; ++i) fx[i] = f(point(i));

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<Extremum> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? fx[i - 1] : kNegInf;
    const double right = i + 1 < n ? fx[i + 1] : kNegInf;
    if (std::isnan(fx[i]) || fx[i] < left || fx[i] < right) continue;
    if (fx[i] == kNegInf) continue;
    const double a = i > 0 ? point(i - 1) : point(i);
    const double b = i + 1 < n ? point(i + 1) : point(i);
    Extremum e = golden_section_max(f, a, b, x_tol);
    if (!better(e.value, fx[i])) e = {point(i), fx[i]};
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const Extremum& l, const Extremum& r) { return l.x < r.x; });
  return out;
}

MaximaSet find_maxima(const ScalarFn& f, double lo, double hi, double step, double tie_tol,
                      double x_tol) {
  const std::vector<Extremum> cands = local_maxima(f, lo, hi, step, x_tol);
  MaximaSet out;
  if (cands.empty()) {
    out.value = f(lo);
    out.maximizers = {lo};
    return out;
  }
  out.value = std::max_element(cands.begin(), cands.end(), [](const Extremum& l, const Extremum& r) {
                return better(r.value, l.value);
              })->value;

  // Group tied candidates whose neighbours are within two grid steps of each other.
  std::vector<std::vector<Extremum>> runs;
  for (const Extremum& e : cands) {
    if (!(e.value >= out.value - tie_tol)) continue;
    if (!runs.empty() && e.x - runs.back().back().x <= 2.0 * step + x_tol) {
      runs.back().push_back(e);
    } else {
      runs.push_back({e});
    }
  }
  for (const auto& run : runs) {
    if (run.size() >= 3) {
      out.continuum = true;
      out.maximizers.push_back(run.front().x);
      out.maximizers.push_back(run.back().x);
      continue;
    }
    const auto best = std::max_element(run.begin(), run.end(), [](const Extremum& l, const Extremum& r) {
      return better(r.value, l.value);
    });
    out.maximizers.push_back(best->x);
  }
  return out;
}

}  // namespace auditopt::core
