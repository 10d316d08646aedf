#include "cw/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cw/errors.hpp"

namespace cw {

ModelParams ModelParams::curie_weiss(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  ModelParams p;
  p.kind_ = PotentialKind::CurieWeiss;
  p.beta_ = beta;
  return p;
}

ModelParams ModelParams::curie_weiss_field(double beta, double field) {
  ModelParams p = curie_weiss(beta);
  if (!std::isfinite(field)) throw DomainError("field must be finite");
  p.kind_ = PotentialKind::CurieWeissField;
  p.field_ = field;
  return p;
}

ModelParams ModelParams::temp_rescaled(double kappa, double coupling) {
  if (!(kappa >= 0.0)) throw DomainError("kappa must be nonnegative");
  if (!(coupling > 0.0)) throw DomainError("temperature coupling must be positive");
  ModelParams p;
  p.kind_ = PotentialKind::TempRescaled;
  p.kappa_ = kappa;
  p.coupling_ = coupling;
  p.beta_ = 1.0 + kappa / (coupling * coupling);
  return p;
}

ModelParams ModelParams::general_polynomial(std::vector<double> coeffs) {
  for (double c : coeffs)
    if (!std::isfinite(c)) throw DomainError("potential coefficients must be finite");
  ModelParams p;
  p.kind_ = PotentialKind::GeneralPolynomial;
  p.coeffs_ = std::move(coeffs);
  p.beta_ = p.coeffs_.size() > 2 ? 2.0 * p.coeffs_[2] : 0.0;
  return p;
}

double ModelParams::potential(double x) const {
  if (affine_force()) return 0.5 * beta_ * x * x + field_ * x;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double ModelParams::force(double x) const {
  if (affine_force()) return beta_ * x + field_;
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * coeffs_[i];
  return acc;
}

Series ModelParams::force(const Series& x) const {
  if (affine_force()) return x * beta_ + field_;
  Series acc = Series::constant(0.0, x.order());
  for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * coeffs_[i];
  return acc;
}

double eval_g(const ModelParams& params, GKind which, double x) {
  if (!std::isfinite(x)) throw DomainError("G evaluated at a non-finite point");
  const double a = params.force(x);
  const double v = which == GKind::G1 ? std::cosh(a) - x * std::sinh(a) : std::sinh(a) - x * std::cosh(a);
  if (!std::isfinite(v)) throw DomainError("G is not finite at x = " + std::to_string(x));
  return v;
}

void g_series(const ModelParams& params, double x, std::size_t order, Series& g1s, Series& g2s) {
  const Series xs = Series::variable(x, order);
  Series s, c;
  sinh_cosh(params.force(xs), s, c);
  g1s = c - xs * s;
  g2s = s - xs * c;
}

namespace {

// h^(l)(a) for h = sinh or cosh: the parity of l picks the function.
double hyper(bool start_sinh, int l, double a) {
  const bool is_sinh = (l % 2 == 0) == start_sinh;
  return is_sinh ? std::sinh(a) : std::cosh(a);
}

}  // namespace

double g_derivative(const ModelParams& params, GKind which, int order, double x) {
  if (order < 0) throw DomainError("derivative order must be nonnegative");
  if (order > kMaxDerivativeOrder)
    throw UnsupportedError("derivative order " + std::to_string(order) + " exceeds the supported maximum");
  if (order == 0) return eval_g(params, which, x);
  double v;
  if (params.affine_force()) {
    const double b = params.beta();
    const double a = params.force(x);
    // G1 = cosh(a) - x sinh(a); G2 = sinh(a) - x cosh(a).
    const bool lead_sinh = which == GKind::G2;
    const double bl = std::pow(b, order);
    v = bl * hyper(lead_sinh, order, a) - x * bl * hyper(!lead_sinh, order, a) -
        order * std::pow(b, order - 1) * hyper(!lead_sinh, order - 1, a);
  } else {
    Series s1, s2;
    g_series(params, x, static_cast<std::size_t>(order), s1, s2);
    v = (which == GKind::G1 ? s1 : s2).derivative(static_cast<std::size_t>(order));
  }
  if (!std::isfinite(v)) throw DomainError("G derivative is not finite");
  return v;
}

FixedPoint classify_point(const ModelParams& params, double m) {
  constexpr int kOrders = 9;
  FixedPoint fp;
  fp.m = m;
  std::vector<double> d(kOrders + 2);
  for (int l = 0; l <= kOrders + 1; ++l) d[l] = g_derivative(params, GKind::G2, l, m);
  fp.residual = std::fabs(d[0]);
  if (fp.residual > 1e-9) {
    fp.flatness_order = -1;
    fp.leading_derivative = d[0];
    fp.stability = Stability::Degenerate;
    return fp;
  }
  // A derivative counts as zero when it sits below the finite-difference
  // noise floor relative to the next one.
  int flat = 0;
  for (int l = 1; l <= kOrders; ++l) {
    const double tol = 1e-7 * (1.0 + std::fabs(d[l + 1]));
    bool all_zero = true;
    for (int j = 1; j <= l; ++j)
      if (std::fabs(d[j]) >= tol) all_zero = false;
    if (all_zero) flat = l;
  }
  fp.flatness_order = flat;
  const int lead = flat + 1;
  fp.leading_derivative = d[lead];
  if (lead % 2 == 1)
    fp.stability = fp.leading_derivative < 0.0 ? Stability::Stable : Stability::Unstable;
  else
    fp.stability = Stability::Degenerate;
  return fp;
}

FixedPointReport find_fixed_points(const ModelParams& params, std::size_t scan_points) {
  if (scan_points < 2) throw DomainError("scan needs at least two intervals");
  const auto grid = [&](std::size_t i) { return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(scan_points); };
  std::vector<double> values(scan_points + 1);
  for (std::size_t i = 0; i <= scan_points; ++i) values[i] = g2(params, grid(i));

  std::vector<double> roots;
  for (std::size_t i = 0; i <= scan_points; ++i) {
    if (values[i] == 0.0) {
      roots.push_back(grid(i));
      continue;
    }
    if (i == scan_points || values[i + 1] == 0.0 || (values[i] > 0.0) == (values[i + 1] > 0.0)) continue;
    double lo = grid(i), hi = grid(i + 1);
    double glo = values[i];
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (lo + hi);
      const double gm = g2(params, mid);
      if (gm == 0.0) break;
      if ((gm > 0.0) == (glo > 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon()) break;
    }
    roots.push_back(mid);
  }
  FixedPointReport report;
  for (double m : roots) report.roots.push_back(classify_point(params, m));
  return report;
}

double positive_magnetization(const ModelParams& params) {
  const auto report = find_fixed_points(params);
  for (auto it = report.roots.rbegin(); it != report.roots.rend(); ++it)
    if (it->m > 1e-8) return it->m;
  throw DomainError("no positive fixed point of the mean-field flow");
}

PathGrid meanfield_flow(const ModelParams& params, double m0, double horizon, double dt) {
  if (!(m0 >= -1.0 && m0 <= 1.0)) throw DomainError("initial magnetization outside [-1, 1]");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const auto steps = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9)));
  const double h = horizon / static_cast<double>(steps);
  const auto rhs = [&](double m) { return 2.0 * g2(params, m); };
  std::vector<double> path(steps + 1);
  path[0] = m0;
  double m = m0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double k1 = rhs(m);
    const double k2 = rhs(m + 0.5 * h * k1);
    const double k3 = rhs(m + 0.5 * h * k2);
    const double k4 = rhs(m + h * k3);
    m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (std::fabs(m) > 1.0 + 1e-6) throw NumericError("mean-field step left [-1, 1]; reduce dt");
    path[i] = m;
  }
  return PathGrid(horizon, std::move(path));
}

}  // namespace cw
