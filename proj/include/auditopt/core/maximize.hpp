#pragma once

#include <functional>
#include <vector>

namespace auditopt::core {

using ScalarFn = std::function<double(double)>;

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization on [lo, hi] until the bracket is narrower than x_tol.
/// The bracket endpoints are candidates too, so a monotone f returns the better endpoint exactly.
Extremum golden_section_max(const ScalarFn& f, double lo, double hi, double x_tol = 1e-9);

/// Every grid local maximum of f on [lo, hi] (grid at `step`, last point exactly hi), each refined by
/// golden-section search on the two neighbouring cells. Sorted by x.
std::vector<Extremum> local_maxima(const ScalarFn& f, double lo, double hi, double step,
                                   double x_tol = 1e-9);

struct MaximaSet {
  double value = 0.0;
  std::vector<double> maximizers;  ///< ascending; all within tie_tol of value
  bool continuum = false;          ///< a run of adjacent tied grid points was found (flat f)
};

/// Global maximum of f with its tie set. Tied local maxima closer than two grid steps are merged;
/// a flat run reports its two endpoints and sets `continuum`.
MaximaSet find_maxima(const ScalarFn& f, double lo, double hi, double step, double tie_tol,
                      double x_tol = 1e-9);

}  // namespace auditopt::core
