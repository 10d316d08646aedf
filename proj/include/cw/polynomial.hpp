#pragma once

#include <string>
#include <vector>

namespace cw {

// Real polynomial sum_i c_i x^i with ascending coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  // c * x^power
  static Polynomial monomial(double c, int power);

  double operator()(double x) const;
  Polynomial derivative() const;
  // Antiderivative vanishing at 0.
  Polynomial antiderivative() const;

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0.0; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }
  bool is_zero() const { return c_.empty(); }
  bool is_odd() const;
  const std::vector<double>& coeffs() const { return c_; }

  Polynomial operator*(double s) const;
  Polynomial operator+(const Polynomial& o) const;

  // Human-readable form, e.g. "-0.6666666667*x^3 + 2*x".
  std::string to_string() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> c_;
};

// Real roots of odd multiplicity, plus exact zeros met by the scan, found by
// a sign scan over the Cauchy bound and bisection to a few ulps.
std::vector<double> real_roots(const Polynomial& q);

}  // namespace cw
