#pragma once

#include <cstdint>
#include <vector>

#include "cw/hamiltonian.hpp"
#include "cw/polynomial.hpp"
#include "cw/series.hpp"
#include "cw/simulator.hpp"

namespace cw {

enum class TestFunctionKind { SmoothBump, PolynomialCapped, Constant };

// C^2 (in fact C^infinity) test function, constant outside a compact set.
//   SmoothBump:       h exp(1 - 1/(1 - u^2)), u = (x - c)/w, zero for |u| >= 1
//   PolynomialCapped: P(x) psi(|x|), psi = 1 on [0, R], smooth step to 0 on [R, 2R]
class TestFunction {
 public:
  static TestFunction smooth_bump(double center, double width, double height);
  static TestFunction polynomial_capped(Polynomial poly, double cap_radius);
  static TestFunction constant(double value);

  TestFunctionKind kind() const { return kind_; }
  double operator()(double x) const;
  double d1(double x) const { return jet(x, 1).derivative(1); }
  double d2(double x) const { return jet(x, 2).derivative(2); }
  double d3(double x) const { return jet(x, 3).derivative(3); }
  // Taylor jet around x up to `order`.
  Series jet(double x, std::size_t order) const;
  // f is constant on |x| >= support_radius().
  double support_radius() const;

  double center() const { return center_; }
  double width() const { return width_; }
  double height() const { return height_; }

 private:
  TestFunctionKind kind_ = TestFunctionKind::Constant;
  double center_ = 0.0, width_ = 1.0, height_ = 0.0;
  Polynomial poly_;
  double cap_ = 0.0;
};

// The three witness bumps used by the convergence diagnostics.
std::vector<TestFunction> witness_bumps();

// Exact prelimit nonlinear generator of an MDP-type regime (MDP, TempRescaledMDP,
// or LDP with b = 1) at the rescaled point x, y = m + x/b_n, r = n b_n^{-2(k+1)}:
//   H_n f(x) = b^{4k+2} sum_{+-} (1 -+ y)/2 e^{+-U'(y)} expm1(r [f(x +- 2b/n) - f(x)])
// Terms whose exponent passes 500 are assembled in log space; NumericError if
// the result still overflows. DomainError when y is outside [-1, 1].
double nonlinear_generator(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                           const TestFunction& f, double x);

// Exact prelimit linear generator of a fluctuation regime (CLT, TempRescaledCLT):
//   A_n f(x) = n^{(2k+1)/(k+1)} sum_{+-} (1 -+ y)/2 e^{+-U'(y)} [f(x +- 2 n^{-(2k+1)/(2k+2)}) - f(x)]
double linear_generator_clt(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                            const TestFunction& f, double x);

// Limits: H f(x) = H(x, f'(x)) and A f(x) = b(x) f'(x) + D f''(x).
double nonlinear_limit(const HamiltonianSpec& spec, const TestFunction& f, double x);
double linear_limit(const HamiltonianSpec& spec, const TestFunction& f, double x);

// Rescaled grid points m + x/s in E_n with |x| <= radius, ascending.
std::vector<double> rescaled_window(const ScalingRegime& regime, std::int64_t n, double radius);

struct GeneratorProfile {
  std::int64_t n = 0;
  std::vector<double> x, prelimit, limit;
  double sup_error() const;
};

// Prelimit and limit generator on the window; nonlinear for MDP-type regimes,
// linear for fluctuation regimes.
GeneratorProfile generator_profile(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                                   const TestFunction& f, double radius);

struct ConvergenceReport {
  ScalingRegime regime;
  double radius = 0.0;
  std::vector<std::int64_t> ladder;
  std::vector<double> errors;
  std::vector<double> argmax;
  std::vector<std::size_t> points;
  bool non_monotone = false;

  bool strictly_decreasing() const { return !non_monotone; }
  double final_over_first() const;
};

// sup-errors per rung. ConfigError for an unordered ladder, an inadmissible
// rung, or an empty window.
ConvergenceReport convergence_ladder(const ModelParams& params, const ScalingRegime& regime, const TestFunction& f,
                                     double radius, const std::vector<std::int64_t>& ladder);

struct ContainmentReport {
  double grid_sup = 0.0;
  double argmax = 0.0;
  double one_sided_lipschitz = 0.0;  // M = max(0, sup b')
  double diffusion = 0.0;
  double analytic_bound = 0.0;  // 4 (M + D)
  bool within_bound() const { return grid_sup <= analytic_bound + 1e-9; }
};

// Fine uniform mesh on [-10, 10] joined with a geometric mesh out to radius.
std::vector<double> containment_grid(double radius = 1e6);

// sup over the grid of H(x, Y'(x)) with Y(x) = log(1 + x^2/2). Needs a
// quadratic Hamiltonian with b(0) = 0 and b' bounded above.
ContainmentReport containment_bound(const HamiltonianSpec& spec, const std::vector<double>& grid);

}  // namespace cw
