#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cw/errors.hpp"
#include "cw/model.hpp"
#include "cw/path_grid.hpp"
#include "cw/polynomial.hpp"
#include "cw/simulator.hpp"

namespace cw {

enum class HamiltonianFamily { Quadratic, FullLDP };

// Limiting Hamiltonian of one regime.
//   Quadratic: H(x, p) = b(x) p + D p^2 with polynomial drift b and D > 0
//   FullLDP:   H(x, p) = [cosh(2p) - 1] G1(x) + sinh(2p) G2(x)
class HamiltonianSpec {
 public:
  static HamiltonianSpec quadratic(Polynomial drift, double diffusion);
  static HamiltonianSpec full_ldp(const ModelParams& params);

  HamiltonianFamily family() const { return family_; }
  const Polynomial& drift() const { return drift_; }
  double diffusion() const { return diffusion_; }
  const ModelParams& params() const { return params_; }
  std::string describe() const;

  double operator()(double x, double p) const;
  double dp(double x, double p) const;
  double dx(double x, double p) const;
  double dpp(double x, double p) const;
  double dxp(double x, double p) const;
  double dxx(double x, double p) const;
  // Zero-cost velocity dH/dp(x, 0).
  double zero_cost_velocity(double x) const { return dp(x, 0.0); }

 private:
  HamiltonianFamily family_ = HamiltonianFamily::Quadratic;
  Polynomial drift_;
  double diffusion_ = 0.0;
  ModelParams params_;
};

// Closed-form Hamiltonian of `regime` around regime.center:
//   MDP(k)/CLT(k):  b(x) = 2 x^{2k+1} G2^{(2k+1)}(m)/(2k+1)!,  D = 2 G1(m)
//   temperature-rescaled: b(x) = 2(kappa x - x^3/3), D = 2
//   LDP: the full cosh/sinh Hamiltonian.
// Throws RegimeError when G2^{(l)}(m) != 0 for some l <= 2k, or when
// G2^{(2k+1)}(m) > 0 with k > 0.
HamiltonianSpec make_hamiltonian(const ModelParams& params, const ScalingRegime& regime);

struct LagrangianValue {
  double value = 0.0;
  double momentum = 0.0;  // maximizing p, equal to dL/dv
  bool finite = true;
};

// L(x, v) = sup_p [p v - H(x, p)]. Quadratic family in closed form
// (v - b(x))^2 / (4D); FullLDP by safeguarded Newton on p in [-20, 20],
// returning +inf with finite = false when v is out of reach.
LagrangianValue lagrangian(const HamiltonianSpec& spec, double x, double v);

// sup_v [p v - L(x, v)] computed numerically from the Lagrangian alone.
double legendre_roundtrip(const HamiltonianSpec& spec, double x, double p);

struct ActionValue {
  double value = 0.0;
  bool finite = true;
  std::size_t intervals = 0;
};

// I0 + composite trapezoid of L(gamma, gamma') on the path mesh.
ActionValue action(const HamiltonianSpec& spec, const PathGrid& path, double initial_cost = 0.0);
// Analytic path: trapezoid with mesh doubling from 64 intervals until the
// relative change drops below rel_tol.
ActionValue action(const HamiltonianSpec& spec, const std::function<double(double)>& gamma,
                   const std::function<double(double)>& velocity, double horizon, double initial_cost = 0.0,
                   double rel_tol = 1e-6);

// RK4 solution of x' = b(x) (forward) or x' = -b(x) (reversed) from x0.
PathGrid relaxation_path(const HamiltonianSpec& spec, double x0, double horizon, std::size_t intervals,
                         bool reversed = false);
// Time reversal of the relaxation from `target` over [0, T]: starts where the
// relaxation ends and arrives at `target` at time T with zero-drift-cost
// velocity -b. Its action is S(target) - S(start).
PathGrid reversed_relaxation_to(const HamiltonianSpec& spec, double target, double horizon, std::size_t intervals);
// |b'(0)| if nonzero, else |b(a)/a|: the relaxation-rate proxy used to
// truncate infinite horizons at T = 20 / rate.
double relaxation_rate(const HamiltonianSpec& spec, double a);

struct OptimalPath {
  PathGrid path;
  std::vector<double> momentum;  // empty for the direct method
  double action = 0.0;
  std::string method;  // "shooting" or "direct"
  int iterations = 0;
};

class OptimizationError : public NumericError {
 public:
  OptimizationError(const std::string& what, OptimalPath best) : NumericError(what), best_(std::move(best)) {}
  const OptimalPath& best() const { return best_; }

 private:
  OptimalPath best_;
};

// Hamiltonian shooting x' = dH/dp, p' = -dH/dx on p(0), Newton on the
// terminal mismatch with variational derivatives.
OptimalPath shoot_optimal_path(const HamiltonianSpec& spec, double x_start, double x_end, double horizon,
                               std::size_t intervals);
// Direct minimization of the midpoint-discretized action over the interior
// nodes: damped Newton steps on the tridiagonal Hessian with backtracking.
OptimalPath minimize_action(const HamiltonianSpec& spec, double x_start, double x_end, double horizon,
                            std::size_t intervals);
// Shooting first, direct minimization as fallback; throws OptimizationError
// carrying the best path when both fail. Needs intervals >= 64.
OptimalPath optimal_path(const HamiltonianSpec& spec, double x_start, double x_end, double horizon,
                         std::size_t intervals);

// Stationary rate function: S'(x) = -b(x)/D, the nonzero root of H(x, p) = 0.
class QuasiPotential {
 public:
  explicit QuasiPotential(const HamiltonianSpec& spec);

  // S normalized so that its minimum over the stable points is 0.
  double operator()(double x) const { return raw_(x) - offset_; }
  double derivative(double x) const { return slope_(x); }
  const Polynomial& raw() const { return raw_; }
  double offset() const { return offset_; }
  // max |H(x, S'(x))| over a uniform grid on [-radius, radius].
  double stationarity_residual(double radius = 3.0, std::size_t points = 6001) const;

 private:
  HamiltonianSpec spec_;
  Polynomial slope_;
  Polynomial raw_;
  double offset_ = 0.0;
};

QuasiPotential quasi_potential(const HamiltonianSpec& spec);

struct EllisConstant {
  double m = 0.0;
  double lhs = 0.0;  // 1/phi''(beta m) - beta with phi = log cosh
  double rhs = 0.0;  // -G2'(m)/G1(m)
};

// Both expressions of the supercritical curvature c, computed independently
// at m = +m_beta. Needs beta > 1.
EllisConstant ellis_constant_check(double beta);

}  // namespace cw
