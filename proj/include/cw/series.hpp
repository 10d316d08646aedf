#pragma once

#include <cstddef>
#include <vector>

namespace cw {

// Truncated Taylor series a_0 + a_1 e + ... + a_N e^N around an expansion
// point. Arithmetic keeps the order of the shorter operand, so derivatives of
// composite expressions up to order N fall out of coefficient l times l!.
class Series {
 public:
  Series() = default;
  explicit Series(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  // The identity map x0 + e, truncated at `order`.
  static Series variable(double x0, std::size_t order);
  static Series constant(double value, std::size_t order);

  std::size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
  double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
  double& operator[](std::size_t i) { return c_[i]; }
  const std::vector<double>& coeffs() const { return c_; }

  // l-th derivative at the expansion point.
  double derivative(std::size_t l) const;

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(double s);
  Series& operator+=(double s);

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, double s) { return a *= s; }
  friend Series operator*(double s, Series a) { return a *= s; }
  friend Series operator+(Series a, double s) { return a += s; }
  friend Series operator-(Series a, double s) { return a += -s; }
  friend Series operator-(Series a) { return a *= -1.0; }
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator/(const Series& a, const Series& b);

 private:
  std::vector<double> c_;
};

Series exp(const Series& a);
// sinh and cosh share one recurrence; computing them together halves the work.
void sinh_cosh(const Series& a, Series& s, Series& c);

}  // namespace cw
