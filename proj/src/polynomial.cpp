#include "cw/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cw {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(double c, int power) {
  std::vector<double> v(static_cast<std::size_t>(power) + 1, 0.0);
  v.back() = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (c_.empty()) return Polynomial();
  std::vector<double> a(c_.size() + 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<double>(i + 1);
  return Polynomial(std::move(a));
}

bool Polynomial::is_odd() const {
  for (std::size_t i = 0; i < c_.size(); i += 2)
    if (c_[i] != 0.0) return false;
  return true;
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> v = c_;
  for (double& x : v) x *= s;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> v(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return Polynomial(std::move(v));
}

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  char buf[64];
  for (int i = degree(); i >= 0; --i) {
    const double c = c_[static_cast<std::size_t>(i)];
    if (c == 0.0) continue;
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    std::snprintf(buf, sizeof buf, "%.10g", c < 0 ? -c : c);
    out += buf;
    if (i == 1) out += "*x";
    else if (i > 1) out += "*x^" + std::to_string(i);
  }
  return out;
}

std::vector<double> real_roots(const Polynomial& q) {
  std::vector<double> roots;
  if (q.is_zero() || q.degree() < 1) return roots;
  double bound = 1.0;
  for (int i = 0; i < q.degree(); ++i) bound = std::max(bound, 1.0 + std::abs(q.coeff(i) / q.leading()));
  const std::size_t points = 20000;
  double prev_x = -bound, prev_f = q(prev_x);
  if (prev_f == 0.0) roots.push_back(prev_x);
  for (std::size_t i = 1; i <= points; ++i) {
    double x = -bound + 2.0 * bound * static_cast<double>(i) / static_cast<double>(points);
    double f = q(x);
    if (f == 0.0) {
      roots.push_back(x);
    } else if (prev_f != 0.0 && (f > 0.0) != (prev_f > 0.0)) {
      double a = prev_x, b = x, fa = prev_f;
      while (b - a > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a))) {
        double mid = 0.5 * (a + b);
        double fm = q(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = f;
  }
  return roots;
}


}  // namespace cw
