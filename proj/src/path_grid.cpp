#include "cw/path_grid.hpp"

#include "cw/errors.hpp"

namespace cw {

PathGrid::PathGrid(double horizon, std::vector<double> values)
    : horizon_(horizon), values_(std::move(values)) {
  if (!(horizon_ > 0.0)) throw DomainError("path horizon must be positive");
  if (values_.size() < 3) throw DomainError("path mesh needs at least two intervals");
}

std::vector<double> PathGrid::velocity() const {
  const std::size_t n = values_.size();
  const double h = step();
  std::vector<double> v(n);
  for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (values_[i + 1] - values_[i - 1]) / (2.0 * h);
  v[0] = (-3.0 * values_[0] + 4.0 * values_[1] - values_[2]) / (2.0 * h);
  v[n - 1] = (3.0 * values_[n - 1] - 4.0 * values_[n - 2] + values_[n - 3]) / (2.0 * h);
  return v;
}

}  // namespace cw
