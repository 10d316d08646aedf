#include "cw/stats.hpp"

#include <algorithm>
#include <cmath>

#include "cw/errors.hpp"

namespace cw {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : v_(std::move(samples)) {
  if (v_.empty()) throw DomainError("empirical distribution needs at least one sample");
  for (double x : v_)
    if (!std::isfinite(x)) throw DomainError("empirical distribution got a non-finite sample");
  std::sort(v_.begin(), v_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  auto it = std::upper_bound(v_.begin(), v_.end(), x);
  return static_cast<double>(it - v_.begin()) / static_cast<double>(v_.size());
}

double EmpiricalDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  double pos = u * static_cast<double>(v_.size() - 1);
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v_.size()) return v_.back();
  double t = pos - static_cast<double>(i);
  return v_[i] + t * (v_[i + 1] - v_[i]);
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& x = a.values();
  const auto& y = b.values();
  double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_threshold(std::size_t n1, std::size_t n2, double c) {
  if (n1 == 0 || n2 == 0) throw DomainError("KS threshold needs nonempty samples");
  double a = static_cast<double>(n1), b = static_cast<double>(n2);
  return c * std::sqrt((a + b) / (a * b));
}

double wasserstein1(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& x = a.values();
  const auto& y = b.values();
  double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double prev = std::min(x.front(), y.front());
  double fa = 0.0, fb = 0.0, sum = 0.0;
  while (i < x.size() || j < y.size()) {
    double t;
    if (j >= y.size() || (i < x.size() && x[i] <= y[j]))
      t = x[i];
    else
      t = y[j];
    sum += std::abs(fa - fb) * (t - prev);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    fa = static_cast<double>(i) / na;
    fb = static_cast<double>(j) / nb;
    prev = t;
  }
  return sum;
}

DecayFit decay_rate_fit(const std::vector<double>& probabilities, const std::vector<double>& speeds) {
  if (probabilities.size() != speeds.size()) throw DomainError("decay fit: one speed per probability");
  DecayFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    double p = probabilities[i], r = speeds[i];
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("decay fit: probabilities must lie in [0, 1]");
    if (!(r > 0.0)) throw DomainError("decay fit: speeds must be positive");
    if (p == 0.0) {
      fit.warnings.push_back("rung " + std::to_string(i) + " dropped: zero empirical probability");
      continue;
    }
    fit.kept.push_back(i);
    fit.rates.push_back(-std::log(p) / r);
    xs.push_back(r);
    ys.push_back(-std::log(p));
  }
  if (xs.size() < 3) throw DomainError("decay fit needs at least 3 rungs with positive probability");
  double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / k;
    my += ys[i] / k;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("decay fit needs distinct speeds");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double Moments::sem() const { return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0; }

Moments moments(const std::vector<double>& samples) {
  if (samples.size() < 2) throw DomainError("moments need at least two samples");
  Moments m;
  m.count = samples.size();
  double n = static_cast<double>(samples.size());
  for (double x : samples) m.mean += x;
  m.mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    double d = x - m.mean, d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m.variance = m2 / (n - 1.0);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

Histogram make_histogram(const std::vector<double>& samples, double lo, double hi, std::size_t bins) {
  if (!(hi > lo) || bins == 0) throw DomainError("histogram needs hi > lo and at least one bin");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0.0);
  double w = (hi - lo) / static_cast<double>(bins);
  for (double x : samples) {
    if (!std::isfinite(x)) throw DomainError("histogram got a non-finite sample");
    if (x < lo) {
      h.below += 1.0;
    } else if (x >= hi) {
      h.above += 1.0;
    } else {
      auto i = std::min(bins - 1, static_cast<std::size_t>((x - lo) / w));
      h.counts[i] += 1.0;
    }
  }
  h.total = static_cast<double>(samples.size());
  return h;
}

}  // namespace cw
