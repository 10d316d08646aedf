#include "cw/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace cw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMomentumBound = 20.0;

double factorial(int l) {
  double f = 1.0;
  for (int i = 2; i <= l; ++i) f *= i;
  return f;
}

struct GJet {
  double g1 = 0.0, g2 = 0.0;
  double g1x = 0.0, g2x = 0.0;
  double g1xx = 0.0, g2xx = 0.0;
};

GJet g_jet(const ModelParams& p, double x, int order) {
  GJet j;
  j.g1 = g1(p, x);
  j.g2 = g2(p, x);
  if (order >= 1) {
    j.g1x = g_derivative(p, GKind::G1, 1, x);
    j.g2x = g_derivative(p, GKind::G2, 1, x);
  }
  if (order >= 2) {
    j.g1xx = g_derivative(p, GKind::G1, 2, x);
    j.g2xx = g_derivative(p, GKind::G2, 2, x);
  }
  return j;
}

void require_finite_path(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericError(std::string(what) + ": path left the finite range");
}

}  // namespace

HamiltonianSpec HamiltonianSpec::quadratic(Polynomial drift, double diffusion) {
  if (!(diffusion > 0.0) || !std::isfinite(diffusion)) throw DomainError("quadratic Hamiltonian needs D > 0");
  HamiltonianSpec s;
  s.family_ = HamiltonianFamily::Quadratic;
  s.drift_ = std::move(drift);
  s.diffusion_ = diffusion;
  return s;
}

HamiltonianSpec HamiltonianSpec::full_ldp(const ModelParams& params) {
  HamiltonianSpec s;
  s.family_ = HamiltonianFamily::FullLDP;
  s.params_ = params;
  return s;
}

std::string HamiltonianSpec::describe() const {
  std::ostringstream os;
  os.precision(10);
  if (family_ == HamiltonianFamily::Quadratic)
    os << "H(x,p) = b(x) p + D p^2 with b(x) = " << drift_.to_string() << ", D = " << diffusion_;
  else
    os << "H(x,p) = [cosh(2p) - 1] G1(x) + sinh(2p) G2(x), beta = " << params_.beta();
  return os.str();
}

double HamiltonianSpec::operator()(double x, double p) const {
  if (family_ == HamiltonianFamily::Quadratic) return drift_(x) * p + diffusion_ * p * p;
  // cosh(2p) - 1 = 2 sinh(p)^2 keeps small p accurate.
  double s = std::sinh(p);
  return 2.0 * s * s * g1(params_, x) + std::sinh(2.0 * p) * g2(params_, x);
}

double HamiltonianSpec::dp(double x, double p) const {
  if (family_ == HamiltonianFamily::Quadratic) return drift_(x) + 2.0 * diffusion_ * p;
  return 2.0 * std::sinh(2.0 * p) * g1(params_, x) + 2.0 * std::cosh(2.0 * p) * g2(params_, x);
}

double HamiltonianSpec::dx(double x, double p) const {
  if (family_ == HamiltonianFamily::Quadratic) return drift_.derivative()(x) * p;
  GJet j = g_jet(params_, x, 1);
  double s = std::sinh(p);
  return 2.0 * s * s * j.g1x + std::sinh(2.0 * p) * j.g2x;
}

double HamiltonianSpec::dpp(double x, double p) const {
  if (family_ == HamiltonianFamily::Quadratic) return 2.0 * diffusion_;
  return 4.0 * std::cosh(2.0 * p) * g1(params_, x) + 4.0 * std::sinh(2.0 * p) * g2(params_, x);
}

double HamiltonianSpec::dxp(double x, double p) const {
  if (family_ == HamiltonianFamily::Quadratic) return drift_.derivative()(x);
  GJet j = g_jet(params_, x, 1);
  return 2.0 * std::sinh(2.0 * p) * j.g1x + 2.0 * std::cosh(2.0 * p) * j.g2x;
}

double HamiltonianSpec::dxx(double x, double p) const {
  if (family_ == HamiltonianFamily::Quadratic) return drift_.derivative().derivative()(x) * p;
  GJet j = g_jet(params_, x, 2);
  double s = std::sinh(p);
  return 2.0 * s * s * j.g1xx + std::sinh(2.0 * p) * j.g2xx;
}

HamiltonianSpec make_hamiltonian(const ModelParams& params, const ScalingRegime& regime) {
  if (regime.kind == RegimeKind::LDP) return HamiltonianSpec::full_ldp(params);

  if (regime.temperature_rescaled()) {
    bool critical_base = params.kind() == PotentialKind::TempRescaled ||
                         (params.kind() == PotentialKind::CurieWeiss && params.beta() == 1.0);
    if (!critical_base) throw RegimeError("temperature rescaling is defined around the critical model beta = 1");
    if (regime.center != 0.0) throw RegimeError("temperature rescaling is centered at m = 0");
    double kappa = regime.kappa;
    return HamiltonianSpec::quadratic(Polynomial({0.0, 2.0 * kappa, 0.0, -2.0 / 3.0}), 2.0);
  }

  int k = regime.k;
  if (k < 0) throw RegimeError("flatness index k must be nonnegative");
  if (2 * k + 1 > kMaxDerivativeOrder) throw UnsupportedError("flatness index too large for the derivative budget");
  double m = regime.center;
  if (!(m > -1.0 && m < 1.0)) throw RegimeError("centering point must lie in (-1, 1)");

  double lead = g_derivative(params, GKind::G2, 2 * k + 1, m);
  double tol = 1e-7 * (1.0 + std::abs(lead));
  for (int l = 0; l <= 2 * k; ++l) {
    double d = g_derivative(params, GKind::G2, l, m);
    if (std::abs(d) > tol) {
      std::ostringstream os;
      os << "flatness mismatch at m = " << m << ": G2^(" << l << ")(m) = " << d << " is nonzero for k = " << k;
      throw RegimeError(os.str());
    }
  }
  if (std::abs(lead) <= tol) {
    std::ostringstream os;
    os << "flatness mismatch at m = " << m << ": G2^(" << 2 * k + 1 << ")(m) vanishes, k is too small";
    throw RegimeError(os.str());
  }
  if (k > 0 && lead > 0.0) throw RegimeError("G2^(2k+1)(m) > 0: the centering point is unstable");

  double diffusion = 2.0 * g1(params, m);
  Polynomial drift = Polynomial::monomial(2.0 * lead / factorial(2 * k + 1), 2 * k + 1);
  return HamiltonianSpec::quadratic(std::move(drift), diffusion);
}

LagrangianValue lagrangian(const HamiltonianSpec& spec, double x, double v) {
  if (!std::isfinite(x) || !std::isfinite(v)) throw DomainError("lagrangian: non-finite argument");
  LagrangianValue out;
  if (spec.family() == HamiltonianFamily::Quadratic) {
    double r = v - spec.drift()(x);
    double d = spec.diffusion();
    out.value = r * r / (4.0 * d);
    out.momentum = r / (2.0 * d);
    return out;
  }

  if (std::abs(x) > 1.0) throw DomainError("FullLDP Lagrangian is defined for |x| <= 1");
  double lo = -kMomentumBound, hi = kMomentumBound;
  if (spec.dp(x, lo) > v) return {kInf, lo, false};
  if (spec.dp(x, hi) < v) return {kInf, hi, false};

  double p = std::clamp(std::asinh(v / 4.0), lo, hi);
  bool converged = false;
  for (int it = 0; it < 300; ++it) {
    double f = spec.dp(x, p) - v;
    if (f == 0.0) {
      converged = true;
      break;
    }
    if (f > 0.0)
      hi = p;
    else
      lo = p;
    double next = p - f / spec.dpp(x, p);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double step = std::abs(next - p);
    p = next;
    if (step <= 1e-15 * (1.0 + std::abs(p)) || hi - lo <= 1e-15 * (1.0 + std::abs(p))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericError("FullLDP Lagrangian: Newton iteration did not converge");
  out.momentum = p;
  out.value = std::max(0.0, p * v - spec(x, p));
  return out;
}

double legendre_roundtrip(const HamiltonianSpec& spec, double x, double p) {
  auto mismatch = [&](double v) { return lagrangian(spec, x, v).momentum - p; };
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 200 && mismatch(lo) > 0.0; ++i) lo *= 2.0;
  for (int i = 0; i < 200 && mismatch(hi) < 0.0; ++i) hi *= 2.0;
  if (mismatch(lo) > 0.0 || mismatch(hi) < 0.0) throw NumericError("legendre_roundtrip: no bracket for the maximizer");
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(mismatch, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  double v = 0.5 * (r.first + r.second);
  LagrangianValue l = lagrangian(spec, x, v);
  if (!l.finite) throw NumericError("legendre_roundtrip: maximizer out of reach");
  return p * v - l.value;
}

ActionValue action(const HamiltonianSpec& spec, const PathGrid& path, double initial_cost) {
  std::vector<double> vel = path.velocity();
  double h = path.step();
  double sum = 0.0;
  ActionValue out;
  out.intervals = path.intervals();
  for (std::size_t i = 0; i < path.size(); ++i) {
    LagrangianValue l = lagrangian(spec, path[i], vel[i]);
    if (!l.finite || !std::isfinite(l.value)) {
      out.value = kInf;
      out.finite = false;
      return out;
    }
    double w = (i == 0 || i + 1 == path.size()) ? 0.5 : 1.0;
    sum += w * l.value;
  }
  out.value = initial_cost + h * sum;
  out.finite = std::isfinite(out.value);
  return out;
}

ActionValue action(const HamiltonianSpec& spec, const std::function<double(double)>& gamma,
                   const std::function<double(double)>& velocity, double horizon, double initial_cost,
                   double rel_tol) {
  if (!(horizon > 0.0)) throw DomainError("action: horizon must be positive");
  auto integrand = [&](double t) {
    LagrangianValue l = lagrangian(spec, gamma(t), velocity(t));
    return l.finite ? l.value : kInf;
  };
  std::size_t m = 64;
  double h = horizon / static_cast<double>(m);
  double sum = 0.5 * (integrand(0.0) + integrand(horizon));
  for (std::size_t i = 1; i < m; ++i) sum += integrand(h * static_cast<double>(i));
  double prev = h * sum;
  if (!std::isfinite(prev)) return {kInf, false, m};
  constexpr std::size_t kMaxIntervals = std::size_t{1} << 22;
  while (m < kMaxIntervals) {
    for (std::size_t i = 0; i < m; ++i) sum += integrand(h * (static_cast<double>(i) + 0.5));
    m *= 2;
    h *= 0.5;
    double cur = h * sum;
    if (!std::isfinite(cur)) return {kInf, false, m};
    double change = std::abs(cur - prev);
    prev = cur;
    if (change <= rel_tol * std::abs(cur) || change <= 1e-15) break;
  }
  return {initial_cost + prev, true, m};
}

PathGrid relaxation_path(const HamiltonianSpec& spec, double x0, double horizon, std::size_t intervals,
                         bool reversed) {
  if (!(horizon > 0.0)) throw DomainError("relaxation_path: horizon must be positive");
  if (intervals < 2) throw DomainError("relaxation_path: need at least 2 intervals");
  double sign = reversed ? -1.0 : 1.0;
  auto f = [&](double x) { return sign * spec.zero_cost_velocity(x); };
  double h = horizon / static_cast<double>(intervals);
  std::vector<double> xs(intervals + 1);
  xs[0] = x0;
  for (std::size_t i = 0; i < intervals; ++i) {
    double x = xs[i];
    double k1 = f(x);
    double k2 = f(x + 0.5 * h * k1);
    double k3 = f(x + 0.5 * h * k2);
    double k4 = f(x + h * k3);
    xs[i + 1] = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  require_finite_path(xs, "relaxation_path");
  return PathGrid(horizon, std::move(xs));
}

PathGrid reversed_relaxation_to(const HamiltonianSpec& spec, double target, double horizon, std::size_t intervals) {
  PathGrid fwd = relaxation_path(spec, target, horizon, intervals, false);
  std::vector<double> xs(fwd.values().rbegin(), fwd.values().rend());
  return PathGrid(horizon, std::move(xs));
}

double relaxation_rate(const HamiltonianSpec& spec, double a) {
  double slope = std::abs(spec.dxp(0.0, 0.0));
  if (slope > 1e-12) return slope;
  if (a == 0.0) throw DomainError("relaxation_rate: degenerate linearization needs a != 0");
  return std::abs(spec.zero_cost_velocity(a) / a);
}

namespace {

struct ShotState {
  double x, p, dx, dp, a;
};

ShotState shot_rhs(const HamiltonianSpec& s, const ShotState& y) {
  double hp = s.dp(y.x, y.p);
  double hpp = s.dpp(y.x, y.p);
  double hxp = s.dxp(y.x, y.p);
  double hxx = s.dxx(y.x, y.p);
  return {hp, -s.dx(y.x, y.p), hxp * y.dx + hpp * y.dp, -hxx * y.dx - hxp * y.dp, y.p * hp - s(y.x, y.p)};
}

ShotState axpy(const ShotState& y, double h, const ShotState& k) {
  return {y.x + h * k.x, y.p + h * k.p, y.dx + h * k.dx, y.dp + h * k.dp, y.a + h * k.a};
}

struct Shot {
  std::vector<double> xs, ps;
  double dx_end = 0.0;
  double action = 0.0;
  bool finite = true;
};

Shot integrate_shot(const HamiltonianSpec& s, double x0, double p0, double horizon, std::size_t m) {
  Shot out;
  out.xs.resize(m + 1);
  out.ps.resize(m + 1);
  double h = horizon / static_cast<double>(m);
  ShotState y{x0, p0, 0.0, 1.0, 0.0};
  out.xs[0] = x0;
  out.ps[0] = p0;
  for (std::size_t i = 0; i < m; ++i) {
    ShotState k1 = shot_rhs(s, y);
    ShotState k2 = shot_rhs(s, axpy(y, 0.5 * h, k1));
    ShotState k3 = shot_rhs(s, axpy(y, 0.5 * h, k2));
    ShotState k4 = shot_rhs(s, axpy(y, h, k3));
    y.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    y.p += h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    y.dx += h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    y.dp += h / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
    y.a += h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
    if (!std::isfinite(y.x) || !std::isfinite(y.p) || !std::isfinite(y.dx) ||
        (s.family() == HamiltonianFamily::FullLDP && std::abs(y.x) > 1.0)) {
      out.finite = false;
      return out;
    }
    out.xs[i + 1] = y.x;
    out.ps[i + 1] = y.p;
  }
  out.dx_end = y.dx;
  out.action = y.a;
  return out;
}

void check_path_request(double horizon, std::size_t intervals) {
  if (!(horizon > 0.0)) throw DomainError("optimal path: horizon must be positive");
  if (intervals < 64) throw DomainError("optimal path: mesh needs at least 64 intervals");
}

}  // namespace

OptimalPath shoot_optimal_path(const HamiltonianSpec& spec, double x_start, double x_end, double horizon,
                               std::size_t intervals) {
  check_path_request(horizon, intervals);
  double tol = 1e-12 * std::max(1.0, std::abs(x_end));
  double p0 = 0.0;
  double lo = -kInf, hi = kInf;  // bracket on p0 with F(lo) < 0 < F(hi)
  Shot best;
  double best_p0 = 0.0;
  double best_miss = kInf;
  double prev_p0 = 0.0;
  bool have_prev = false;
  for (int it = 1; it <= 200; ++it) {
    Shot shot = integrate_shot(spec, x_start, p0, horizon, intervals);
    if (!shot.finite) {
      if (!have_prev) break;
      // Overshoot: retreat toward the last finite shot.
      if (p0 > prev_p0) hi = std::min(hi, p0);
      else lo = std::max(lo, p0);
      p0 = 0.5 * (p0 + prev_p0);
      continue;
    }
    double miss = shot.xs.back() - x_end;
    if (std::abs(miss) < best_miss) {
      best_miss = std::abs(miss);
      best = shot;
      best_p0 = p0;
    }
    if (std::abs(miss) <= tol) {
      OptimalPath out;
      out.path = PathGrid(horizon, std::move(shot.xs));
      out.momentum = std::move(shot.ps);
      out.action = shot.action;
      out.method = "shooting";
      out.iterations = it;
      return out;
    }
    if (miss < 0.0) lo = std::max(lo, p0);
    else hi = std::min(hi, p0);
    double next = shot.dx_end != 0.0 ? p0 - miss / shot.dx_end : kInf;
    bool bracketed = std::isfinite(lo) && std::isfinite(hi);
    if (!std::isfinite(next) || !(next > lo && next < hi)) {
      if (bracketed)
        next = 0.5 * (lo + hi);
      else
        next = p0 + (miss < 0.0 ? 1.0 : -1.0) * std::max(1.0, 2.0 * std::abs(p0));
    }
    if (bracketed && hi - lo <= 1e-16 * (1.0 + std::abs(p0))) break;
    prev_p0 = p0;
    have_prev = true;
    p0 = next;
  }
  OptimalPath out;
  out.method = "shooting";
  if (!best.xs.empty() && std::isfinite(best_miss)) {
    out.path = PathGrid(horizon, best.xs);
    out.momentum = best.ps;
    out.action = best.action;
  }
  std::ostringstream os;
  os << "shooting did not hit x_end: best mismatch " << best_miss << " at p(0) = " << best_p0;
  throw OptimizationError(os.str(), out);
}

namespace {

struct LagrangianJet {
  double value, lx, lv, lxx, lxv, lvv;
  bool finite;
};

LagrangianJet lagrangian_jet(const HamiltonianSpec& s, double x, double v) {
  LagrangianValue l = lagrangian(s, x, v);
  if (!l.finite) return {kInf, 0, 0, 0, 0, 0, false};
  double p = l.momentum;
  double hpp = s.dpp(x, p);
  double hxp = s.dxp(x, p);
  return {l.value, -s.dx(x, p), p, -s.dxx(x, p) + hxp * hxp / hpp, -hxp / hpp, 1.0 / hpp, true};
}

double discrete_action(const HamiltonianSpec& s, const std::vector<double>& xs, double h) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    LagrangianValue l = lagrangian(s, 0.5 * (xs[i] + xs[i + 1]), (xs[i + 1] - xs[i]) / h);
    if (!l.finite) return kInf;
    sum += l.value;
  }
  return h * sum;
}

// Solves the symmetric tridiagonal system (diag, off) d = rhs in place of rhs.
// Returns false when a pivot is not positive.
bool solve_spd_tridiagonal(std::vector<double> diag, const std::vector<double>& off, std::vector<double>& rhs) {
  std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (!(diag[i - 1] > 0.0)) return false;
    double w = off[i - 1] / diag[i - 1];
    diag[i] -= w * off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (!(diag[n - 1] > 0.0)) return false;
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
  return true;
}

}  // namespace

OptimalPath minimize_action(const HamiltonianSpec& spec, double x_start, double x_end, double horizon,
                            std::size_t intervals) {
  check_path_request(horizon, intervals);
  std::size_t m = intervals;
  double h = horizon / static_cast<double>(m);
  std::vector<double> xs(m + 1);
  for (std::size_t i = 0; i <= m; ++i) xs[i] = x_start + (x_end - x_start) * static_cast<double>(i) / static_cast<double>(m);
  double value = discrete_action(spec, xs, h);
  if (!std::isfinite(value)) throw OptimizationError("direct minimization: initial guess has infinite action", {});

  std::size_t n = m - 1;
  std::vector<double> grad(n), diag(n), off(n > 0 ? n - 1 : 0), step(n);
  int it = 0;
  bool converged = false;
  for (it = 1; it <= 200; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(diag.begin(), diag.end(), 0.0);
    std::fill(off.begin(), off.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      LagrangianJet j = lagrangian_jet(spec, 0.5 * (xs[i] + xs[i + 1]), (xs[i + 1] - xs[i]) / h);
      if (!j.finite) throw NumericError("direct minimization: infinite Lagrangian on the iterate");
      // d/dx_i and d/dx_{i+1} of h L(xbar, v): xbar weights 1/2, v weights -1/h and 1/h.
      double g_left = h * (0.5 * j.lx) - j.lv;
      double g_right = h * (0.5 * j.lx) + j.lv;
      double a_ll = h * 0.25 * j.lxx - j.lxv + j.lvv / h;
      double a_rr = h * 0.25 * j.lxx + j.lxv + j.lvv / h;
      double a_lr = h * 0.25 * j.lxx - j.lvv / h;
      if (i >= 1) {
        grad[i - 1] += g_left;
        diag[i - 1] += a_ll;
      }
      if (i + 1 <= n) {
        grad[i] += g_right;
        diag[i] += a_rr;
      }
      if (i >= 1 && i + 1 <= n) off[i - 1] += a_lr;
    }
    double gnorm = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gnorm = std::max(gnorm, std::abs(grad[i]));
      scale = std::max(scale, std::abs(diag[i]));
    }
    if (gnorm == 0.0) {
      converged = true;
      break;
    }
    double lambda = 0.0;
    bool solved = false;
    for (int tries = 0; tries < 60; ++tries) {
      std::vector<double> d(diag);
      for (double& v : d) v += lambda;
      for (std::size_t i = 0; i < n; ++i) step[i] = -grad[i];
      if (solve_spd_tridiagonal(d, off, step)) {
        solved = true;
        break;
      }
      lambda = lambda == 0.0 ? 1e-8 * std::max(scale, 1.0) : 4.0 * lambda;
    }
    if (!solved) throw NumericError("direct minimization: Hessian regularization failed");

    double slope = 0.0, smax = 0.0, xmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      slope += grad[i] * step[i];
      smax = std::max(smax, std::abs(step[i]));
      xmax = std::max(xmax, std::abs(xs[i + 1]));
    }
    double t = 1.0;
    std::vector<double> trial(xs);
    double trial_value = kInf;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) trial[i + 1] = xs[i + 1] + t * step[i];
      trial_value = discrete_action(spec, trial, h);
      if (std::isfinite(trial_value) && trial_value <= value + 1e-4 * t * slope) break;
      t *= 0.5;
    }
    if (!std::isfinite(trial_value) || trial_value > value) {
      converged = smax <= 1e-10 * (1.0 + xmax);
      break;
    }
    xs.swap(trial);
    double change = value - trial_value;
    value = trial_value;
    if (t * smax <= 1e-13 * (1.0 + xmax) || change <= 1e-16 * std::max(1.0, value)) {
      converged = true;
      break;
    }
  }
  OptimalPath out;
  out.path = PathGrid(horizon, xs);
  out.action = value;
  out.method = "direct";
  out.iterations = it;
  if (!converged) throw OptimizationError("direct minimization did not converge", out);
  return out;
}

OptimalPath optimal_path(const HamiltonianSpec& spec, double x_start, double x_end, double horizon,
                         std::size_t intervals) {
  check_path_request(horizon, intervals);
  try {
    return shoot_optimal_path(spec, x_start, x_end, horizon, intervals);
  } catch (const NumericError&) {
  }
  return minimize_action(spec, x_start, x_end, horizon, intervals);
}


QuasiPotential::QuasiPotential(const HamiltonianSpec& spec) : spec_(spec) {
  if (spec.family() != HamiltonianFamily::Quadratic)
    throw DomainError("quasi_potential: only the quadratic family has a closed form");
  slope_ = spec.drift() * (-1.0 / spec.diffusion());
  raw_ = slope_.antiderivative();
  std::vector<double> crit = real_roots(spec.drift());
  if (!crit.empty()) {
    offset_ = kInf;
    for (double c : crit) offset_ = std::min(offset_, raw_(c));
  }
}

double QuasiPotential::stationarity_residual(double radius, std::size_t points) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    double x = -radius + 2.0 * radius * static_cast<double>(i) / static_cast<double>(points - 1);
    worst = std::max(worst, std::abs(spec_(x, slope_(x))));
  }
  return worst;
}

QuasiPotential quasi_potential(const HamiltonianSpec& spec) { return QuasiPotential(spec); }

EllisConstant ellis_constant_check(double beta) {
  if (!(beta > 1.0)) throw DomainError("ellis_constant_check needs beta > 1");
  ModelParams p = ModelParams::curie_weiss(beta);
  EllisConstant out;
  out.m = positive_magnetization(p);
  double t = std::tanh(beta * out.m);
  out.lhs = 1.0 / (1.0 - t * t) - beta;
  out.rhs = -g_derivative(p, GKind::G2, 1, out.m) / g1(p, out.m);
  return out;
}

}  // namespace cw
