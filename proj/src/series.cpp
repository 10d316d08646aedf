#include "cw/series.hpp"

#include <algorithm>
#include <cmath>

#include "cw/errors.hpp"

namespace cw {

Series Series::variable(double x0, std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  c[0] = x0;
  if (order >= 1) c[1] = 1.0;
  return Series(std::move(c));
}

Series Series::constant(double value, std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  c[0] = value;
  return Series(std::move(c));
}

double Series::derivative(std::size_t l) const {
  double fact = 1.0;
  for (std::size_t i = 2; i <= l; ++i) fact *= static_cast<double>(i);
  return (*this)[l] * fact;
}

Series& Series::operator+=(const Series& o) {
  const std::size_t n = std::min(c_.size(), o.c_.size());
  c_.resize(n);
  for (std::size_t i = 0; i < n; ++i) c_[i] += o.c_[i];
  return *this;
}

Series& Series::operator-=(const Series& o) {
  const std::size_t n = std::min(c_.size(), o.c_.size());
  c_.resize(n);
  for (std::size_t i = 0; i < n; ++i) c_[i] -= o.c_[i];
  return *this;
}

Series& Series::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Series& Series::operator+=(double s) {
  if (c_.empty()) c_.push_back(0.0);
  c_[0] += s;
  return *this;
}

Series operator*(const Series& a, const Series& b) {
  const std::size_t n = std::min(a.c_.size(), b.c_.size());
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + i < n; ++j) out[i + j] += a.c_[i] * b.c_[j];
  return Series(std::move(out));
}

Series operator/(const Series& a, const Series& b) {
  const std::size_t n = std::min(a.c_.size(), b.c_.size());
  if (n == 0) return Series();
  if (b.c_[0] == 0.0) throw DomainError("series division by a series vanishing at the expansion point");
  std::vector<double> q(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = a.c_[i];
    for (std::size_t j = 1; j <= i; ++j) acc -= b.c_[j] * q[i - j];
    q[i] = acc / b.c_[0];
  }
  return Series(std::move(q));
}

Series exp(const Series& a) {
  const std::size_t n = a.coeffs().size();
  std::vector<double> e(n, 0.0);
  if (n == 0) return Series();
  e[0] = std::exp(a[0]);
  // k e_k = sum_{j=1}^{k} j a_j e_{k-j}
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a[j] * e[k - j];
    e[k] = acc / static_cast<double>(k);
  }
  return Series(std::move(e));
}

void sinh_cosh(const Series& a, Series& s, Series& c) {
  const std::size_t n = a.coeffs().size();
  std::vector<double> sv(n, 0.0), cv(n, 0.0);
  if (n > 0) {
    sv[0] = std::sinh(a[0]);
    cv[0] = std::cosh(a[0]);
  }
  for (std::size_t k = 1; k < n; ++k) {
    double as = 0.0, ac = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      as += static_cast<double>(j) * a[j] * cv[k - j];
      ac += static_cast<double>(j) * a[j] * sv[k - j];
    }
    sv[k] = as / static_cast<double>(k);
    cv[k] = ac / static_cast<double>(k);
  }
  s = Series(std::move(sv));
  c = Series(std::move(cv));
}

}  // namespace cw
