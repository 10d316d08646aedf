#pragma once

#include <cstddef>
#include <vector>

namespace cw {

// Curve sampled on a uniform time mesh 0 = t_0 < ... < t_M = T.
class PathGrid {
 public:
  PathGrid() = default;
  // Throws DomainError unless M >= 2 and T > 0.
  PathGrid(double horizon, std::vector<double> values);

  std::size_t intervals() const { return values_.size() - 1; }
  std::size_t size() const { return values_.size(); }
  double horizon() const { return horizon_; }
  double step() const { return horizon_ / static_cast<double>(intervals()); }
  double time(std::size_t i) const { return step() * static_cast<double>(i); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  // Central differences inside, second-order one-sided at the ends.
  std::vector<double> velocity() const;

 private:
  double horizon_ = 0.0;
  std::vector<double> values_;
};

}  // namespace cw
