#include "cw/genconv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cw/errors.hpp"
#include "cw/parallel.hpp"

namespace cw {

namespace {

// exp(-1/s) vanishes to double precision below this.
constexpr double kFlatEdge = 1.0 / 700.0;
constexpr double kLogSpaceExponent = 500.0;

Series flat_exp(const Series& s, std::size_t order) {
  Series neg_inv = Series::constant(-1.0, order) / s;
  return exp(neg_inv);
}

}  // namespace

TestFunction TestFunction::smooth_bump(double center, double width, double height) {
  if (!(width > 0.0) || !std::isfinite(center) || !std::isfinite(height))
    throw DomainError("smooth bump needs a finite center, height and positive width");
  TestFunction f;
  f.kind_ = TestFunctionKind::SmoothBump;
  f.center_ = center;
  f.width_ = width;
  f.height_ = height;
  return f;
}

TestFunction TestFunction::polynomial_capped(Polynomial poly, double cap_radius) {
  if (!(cap_radius > 0.0)) throw DomainError("polynomial cap radius must be positive");
  TestFunction f;
  f.kind_ = TestFunctionKind::PolynomialCapped;
  f.poly_ = std::move(poly);
  f.cap_ = cap_radius;
  return f;
}

TestFunction TestFunction::constant(double value) {
  TestFunction f;
  f.kind_ = TestFunctionKind::Constant;
  f.height_ = value;
  return f;
}

double TestFunction::operator()(double x) const {
  switch (kind_) {
    case TestFunctionKind::Constant: return height_;
    case TestFunctionKind::SmoothBump: {
      double u = (x - center_) / width_;
      double q = 1.0 - u * u;
      if (q <= kFlatEdge) return 0.0;
      return height_ * std::exp(1.0 - 1.0 / q);
    }
    case TestFunctionKind::PolynomialCapped: return jet(x, 0)[0];
  }
  return 0.0;
}

Series TestFunction::jet(double x, std::size_t order) const {
  switch (kind_) {
    case TestFunctionKind::Constant: return Series::constant(height_, order);
    case TestFunctionKind::SmoothBump: {
      Series u = (Series::variable(x, order) - center_) * (1.0 / width_);
      Series q = Series::constant(1.0, order) - u * u;
      if (q[0] <= kFlatEdge) return Series::constant(0.0, order);
      return exp(Series::constant(1.0, order) - Series::constant(1.0, order) / q) * height_;
    }
    case TestFunctionKind::PolynomialCapped: {
      Series v = Series::variable(x, order);
      Series p = Series::constant(0.0, order);
      for (int i = poly_.degree(); i >= 0; --i) p = p * v + poly_.coeff(i);
      double ax = std::abs(x);
      if (ax <= cap_) return p;
      if (ax >= 2.0 * cap_) return Series::constant(0.0, order);
      Series a = x < 0.0 ? -v : v;
      Series t = (a - cap_) * (1.0 / cap_);
      if (t[0] < kFlatEdge) return p;
      Series s = Series::constant(1.0, order) - t;
      if (s[0] < kFlatEdge) return Series::constant(0.0, order);
      Series left = flat_exp(s, order);
      Series right = flat_exp(t, order);
      return p * (left / (left + right));
    }
  }
  return Series::constant(0.0, order);
}

double TestFunction::support_radius() const {
  switch (kind_) {
    case TestFunctionKind::Constant: return 0.0;
    case TestFunctionKind::SmoothBump: return std::abs(center_) + width_;
    case TestFunctionKind::PolynomialCapped: return 2.0 * cap_;
  }
  return 0.0;
}

std::vector<TestFunction> witness_bumps() {
  return {TestFunction::smooth_bump(0.0, 2.0, 1.0), TestFunction::smooth_bump(0.5, 1.5, 0.7),
          TestFunction::smooth_bump(-1.0, 1.8, 1.3)};
}

namespace {

struct Weights {
  double up, down, y;
};

Weights jump_weights(const ModelParams& p, double center, double scale, double x) {
  double y = center + x / scale;
  if (!(y >= -1.0 - 1e-12 && y <= 1.0 + 1e-12)) throw DomainError("rescaled point maps outside [-1, 1]");
  y = std::clamp(y, -1.0, 1.0);
  double u = p.force(y);
  return {0.5 * (1.0 - y) * std::exp(u), 0.5 * (1.0 + y) * std::exp(-u), y};
}

// pre * w * expm1(e), with log-space assembly for large e.
double scaled_expm1(double pre, double w, double e) {
  if (w == 0.0) return 0.0;
  if (e <= kLogSpaceExponent) return pre * w * std::expm1(e);
  double log_term = std::log(pre) + std::log(w) + e + std::log1p(-std::exp(-e));
  if (log_term > std::log(std::numeric_limits<double>::max()))
    throw NumericError("nonlinear generator overflows the double range");
  return std::exp(log_term);
}

}  // namespace

double nonlinear_generator(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                           const TestFunction& f, double x) {
  if (regime.fluctuation()) throw ConfigError("nonlinear generator needs an MDP or LDP regime");
  if (n < 1) throw DomainError("n must be positive");
  ModelParams chain = regime.chain_params(params, n);
  double b = regime.space_scale(n);
  int k = regime.kind == RegimeKind::LDP ? 0 : regime.k;
  double r = regime.speed(n);
  double pre = std::pow(b, 4.0 * k + 2.0);
  double h = 2.0 * b / static_cast<double>(n);
  Weights w = jump_weights(chain, regime.center, b, x);
  double f0 = f(x);
  double out = scaled_expm1(pre, w.up, r * (f(x + h) - f0)) + scaled_expm1(pre, w.down, r * (f(x - h) - f0));
  if (!std::isfinite(out)) throw NumericError("nonlinear generator is not finite");
  return out;
}

double linear_generator_clt(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                            const TestFunction& f, double x) {
  if (!regime.fluctuation()) throw ConfigError("linear generator needs a CLT regime");
  if (n < 1) throw DomainError("n must be positive");
  ModelParams chain = regime.chain_params(params, n);
  double s = regime.space_scale(n);
  double pre = regime.time_dilation(n) * static_cast<double>(n);
  double h = 2.0 * s / static_cast<double>(n);
  Weights w = jump_weights(chain, regime.center, s, x);
  double f0 = f(x);
  double out = pre * (w.up * (f(x + h) - f0) + w.down * (f(x - h) - f0));
  if (!std::isfinite(out)) throw NumericError("linear generator is not finite");
  return out;
}

double nonlinear_limit(const HamiltonianSpec& spec, const TestFunction& f, double x) { return spec(x, f.d1(x)); }

double linear_limit(const HamiltonianSpec& spec, const TestFunction& f, double x) {
  Series j = f.jet(x, 2);
  return spec.zero_cost_velocity(x) * j.derivative(1) + 0.5 * spec.dpp(x, 0.0) * j.derivative(2);
}

std::vector<double> rescaled_window(const ScalingRegime& regime, std::int64_t n, double radius) {
  double s = regime.space_scale(n);
  double nd = static_cast<double>(n);
  auto lo = static_cast<std::int64_t>(std::ceil((regime.center - radius / s + 1.0) * nd / 2.0 - 1e-9));
  auto hi = static_cast<std::int64_t>(std::floor((regime.center + radius / s + 1.0) * nd / 2.0 + 1e-9));
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min<std::int64_t>(hi, n);
  std::vector<double> xs;
  for (std::int64_t j = lo; j <= hi; ++j) {
    double x = regime.rescale(n, j);
    if (std::abs(x) <= radius) xs.push_back(x);
  }
  return xs;
}

double GeneratorProfile::sup_error() const {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(prelimit[i] - limit[i]));
  return e;
}

GeneratorProfile generator_profile(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                                   const TestFunction& f, double radius) {
  HamiltonianSpec spec = make_hamiltonian(params, regime);
  GeneratorProfile out;
  out.n = n;
  out.x = rescaled_window(regime, n, radius);
  out.prelimit.resize(out.x.size());
  out.limit.resize(out.x.size());
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    double x = out.x[i];
    if (regime.fluctuation()) {
      out.prelimit[i] = linear_generator_clt(params, regime, n, f, x);
      out.limit[i] = linear_limit(spec, f, x);
    } else {
      out.prelimit[i] = nonlinear_generator(params, regime, n, f, x);
      out.limit[i] = nonlinear_limit(spec, f, x);
    }
  }
  return out;
}

double ConvergenceReport::final_over_first() const {
  if (errors.empty() || errors.front() == 0.0) return 0.0;
  return errors.back() / errors.front();
}

ConvergenceReport convergence_ladder(const ModelParams& params, const ScalingRegime& regime, const TestFunction& f,
                                     double radius, const std::vector<std::int64_t>& ladder) {
  if (ladder.empty()) throw ConfigError("convergence ladder is empty");
  if (!(radius > 0.0)) throw ConfigError("window radius must be positive");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] <= ladder[i - 1]) throw ConfigError("ladder must be strictly increasing");
  for (std::int64_t n : ladder) {
    regime.require_admissible(n);
    if (rescaled_window(regime, n, radius).empty())
      throw ConfigError("no grid point in the window at n = " + std::to_string(n));
  }
  make_hamiltonian(params, regime);

  ConvergenceReport rep;
  rep.regime = regime;
  rep.radius = radius;
  rep.ladder = ladder;
  rep.errors.assign(ladder.size(), 0.0);
  rep.argmax.assign(ladder.size(), 0.0);
  rep.points.assign(ladder.size(), 0);
  parallel_for(ladder.size(), [&](std::size_t i) {
    GeneratorProfile prof = generator_profile(params, regime, ladder[i], f, radius);
    double e = 0.0, at = 0.0;
    for (std::size_t j = 0; j < prof.x.size(); ++j) {
      double d = std::abs(prof.prelimit[j] - prof.limit[j]);
      if (!std::isfinite(d)) throw NumericError("non-finite generator error");
      if (d > e) {
        e = d;
        at = prof.x[j];
      }
    }
    rep.errors[i] = e;
    rep.argmax[i] = at;
    rep.points[i] = prof.x.size();
  });
  for (std::size_t i = 1; i < rep.errors.size(); ++i)
    if (!(rep.errors[i] < rep.errors[i - 1])) rep.non_monotone = true;
  return rep;
}

std::vector<double> containment_grid(double radius) {
  std::vector<double> g;
  double inner = std::min(10.0, radius);
  const std::size_t fine = 200000;
  for (std::size_t i = 0; i <= fine; ++i) g.push_back(-inner + 2.0 * inner * static_cast<double>(i) / fine);
  if (radius > inner) {
    const std::size_t coarse = 2000;
    double ratio = std::pow(radius / inner, 1.0 / coarse);
    double x = inner;
    for (std::size_t i = 0; i < coarse; ++i) {
      x = i + 1 == coarse ? radius : x * ratio;
      g.push_back(x);
      g.push_back(-x);
    }
  }
  std::sort(g.begin(), g.end());
  return g;
}

ContainmentReport containment_bound(const HamiltonianSpec& spec, const std::vector<double>& grid) {
  if (spec.family() != HamiltonianFamily::Quadratic)
    throw DomainError("containment bound needs a quadratic Hamiltonian");
  if (grid.empty()) throw DomainError("containment grid is empty");
  const Polynomial& b = spec.drift();
  if (b.coeff(0) != 0.0) throw DomainError("containment bound assumes b(0) = 0");

  // sup of b' over the line: constant, or attained at a critical point when
  // b' has even degree and negative leading coefficient.
  Polynomial slope = b.derivative();
  double sup_slope;
  if (slope.degree() <= 0) {
    sup_slope = slope.coeff(0);
  } else if (slope.degree() % 2 == 0 && slope.leading() < 0.0) {
    sup_slope = -std::numeric_limits<double>::infinity();
    for (double c : real_roots(slope.derivative())) sup_slope = std::max(sup_slope, slope(c));
  } else {
    throw DomainError("drift is not one-sided Lipschitz");
  }

  ContainmentReport rep;
  rep.one_sided_lipschitz = std::max(0.0, sup_slope);
  rep.diffusion = spec.diffusion();
  rep.analytic_bound = 4.0 * (rep.one_sided_lipschitz + rep.diffusion);
  rep.grid_sup = -std::numeric_limits<double>::infinity();
  for (double x : grid) {
    double v = spec(x, x / (1.0 + 0.5 * x * x));
    if (v > rep.grid_sup) {
      rep.grid_sup = v;
      rep.argmax = x;
    }
  }
  return rep;
}

}  // namespace cw
