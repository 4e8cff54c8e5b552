#include "auditopt/core/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace auditopt::core {

void VendorParams::validate() const {
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive, got " + std::to_string(R));
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be positive, got " + std::to_string(c));
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
}

GridSpec GridSpec::for_params(const VendorParams& params, double step) {
  return GridSpec{params.capacity() + 1.0, step};
}

void GridSpec::validate(const VendorParams& params) const {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("grid step must be positive");
  if (!(x_max >= params.capacity()))
    throw std::invalid_argument("grid x_max must be at least R/c = " + std::to_string(params.capacity()));
}

std::size_t GridSpec::size() const {
  // Tolerate x_max being a float multiple of step.
  const double cells = std::ceil(x_max / step - 1e-9);
  return static_cast<std::size_t>(std::max(cells, 0.0)) + 1;
}

double GridSpec::point(std::size_t i) const {
  const std::size_t n = size();
  if (i + 1 >= n) return x_max;
  return static_cast<double>(i) * step;
}

std::vector<double> GridSpec::points() const {
  std::vector<double> xs(size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = point(i);
  return xs;
}

}  // namespace auditopt::core
