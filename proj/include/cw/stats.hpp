#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cw {

// Sorted finite sample.
class EmpiricalDistribution {
 public:
  // Throws DomainError on an empty sample or a non-finite value.
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const { return v_.size(); }
  const std::vector<double>& values() const { return v_; }
  double min() const { return v_.front(); }
  double max() const { return v_.back(); }
  // Fraction of samples <= x.
  double cdf(double x) const;
  // Linear interpolation between order statistics, u in [0, 1].
  double quantile(double u) const;

 private:
  std::vector<double> v_;
};

// sup_x |F_a(x) - F_b(x)|.
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
// c sqrt((n1 + n2)/(n1 n2)); c = 1.36 is the 5% level.
double ks_threshold(std::size_t n1, std::size_t n2, double c = 1.36);

// Integral of |F_a - F_b|, which equals the L1 distance of the quantile
// functions.
double wasserstein1(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> rates;      // -log p / r per kept rung
  std::vector<std::size_t> kept;  // indices of the rungs used
  std::vector<std::string> warnings;
};

// Least squares of -log p_n against r(n) with intercept. Rungs with p = 0 are
// dropped with a warning; DomainError if fewer than 3 usable rungs remain or
// any probability is outside [0, 1].
DecayFit decay_rate_fit(const std::vector<double>& probabilities, const std::vector<double>& speeds);

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  // Standard error of the mean.
  double sem() const;
};

Moments moments(const std::vector<double>& samples);

struct Histogram {
  double lo = 0.0, hi = 0.0;
  std::vector<double> counts;
  double below = 0.0, above = 0.0;
  double total = 0.0;

  std::size_t bins() const { return counts.size(); }
  double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  double edge(std::size_t i) const { return lo + width() * static_cast<double>(i); }
  double center(std::size_t i) const { return edge(i) + 0.5 * width(); }
  double mass(std::size_t i) const { return counts[i] / total; }
  double density(std::size_t i) const { return mass(i) / width(); }
};

Histogram make_histogram(const std::vector<double>& samples, double lo, double hi, std::size_t bins);

}  // namespace cw
