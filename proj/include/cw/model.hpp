#pragma once

#include <cstddef>
#include <vector>

#include "cw/path_grid.hpp"
#include "cw/series.hpp"

namespace cw {

enum class PotentialKind { CurieWeiss, CurieWeissField, TempRescaled, GeneralPolynomial };

// Interaction potential U of the magnetization chain. The chain only sees U',
// which is affine for the Curie-Weiss family (U'(x) = beta x + B).
class ModelParams {
 public:
  static ModelParams curie_weiss(double beta);
  static ModelParams curie_weiss_field(double beta, double field);
  // Inverse temperature 1 + kappa / coupling^2, where coupling is b_n for the
  // moderate-deviation scaling and n^{1/4} for the fluctuation scaling.
  static ModelParams temp_rescaled(double kappa, double coupling);
  // U(x) = sum_i c_i x^i.
  static ModelParams general_polynomial(std::vector<double> coeffs);

  PotentialKind kind() const { return kind_; }
  // Effective inverse temperature (the slope of U' for affine kinds).
  double beta() const { return beta_; }
  double field() const { return field_; }
  double kappa() const { return kappa_; }
  double coupling() const { return coupling_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  bool affine_force() const { return kind_ != PotentialKind::GeneralPolynomial; }

  double potential(double x) const;
  double force(double x) const;  // U'(x)
  Series force(const Series& x) const;

 private:
  PotentialKind kind_ = PotentialKind::CurieWeiss;
  double beta_ = 1.0;
  double field_ = 0.0;
  double kappa_ = 0.0;
  double coupling_ = 1.0;
  std::vector<double> coeffs_;
};

enum class GKind { G1, G2 };

// G1(x) = cosh(U'(x)) - x sinh(U'(x)),  G2(x) = sinh(U'(x)) - x cosh(U'(x)).
double eval_g(const ModelParams& params, GKind which, double x);
inline double g1(const ModelParams& p, double x) { return eval_g(p, GKind::G1, x); }
inline double g2(const ModelParams& p, double x) { return eval_g(p, GKind::G2, x); }

// Highest derivative order g_derivative accepts.
inline constexpr int kMaxDerivativeOrder = 15;

// order-th derivative of G1 or G2. Affine forces use the closed form
// d^l/dx^l [x h(beta x + B)] = x beta^l h^(l) + l beta^(l-1) h^(l-1);
// polynomial potentials propagate a truncated Taylor series, exact up to
// rounding. Throws UnsupportedError for order > kMaxDerivativeOrder.
double g_derivative(const ModelParams& params, GKind which, int order, double x);

// Taylor coefficients of G1 and G2 around x (derivative l is coeff l times l!).
void g_series(const ModelParams& params, double x, std::size_t order, Series& g1s, Series& g2s);

enum class Stability { Stable, Unstable, Degenerate };

struct FixedPoint {
  double m = 0.0;
  double residual = 0.0;  // |G2(m)|
  Stability stability = Stability::Degenerate;
  // Largest l with G2^(j)(m) = 0 for all j <= l (j = 0 is the root itself).
  int flatness_order = 0;
  // G2^(flatness_order + 1)(m): sets the limiting drift.
  double leading_derivative = 0.0;
};

struct FixedPointReport {
  std::vector<FixedPoint> roots;  // ascending in m
};

// Roots of G2 on [-1, 1]: sign scan on a uniform grid, bisection to
// |G2| <= 1e-12, then flatness and stability per root.
FixedPointReport find_fixed_points(const ModelParams& params, std::size_t scan_points = 10000);

// Flatness of an arbitrary centering point; same zero threshold as above.
FixedPoint classify_point(const ModelParams& params, double m);

// Positive symmetric-phase root m_beta (throws DomainError if there is none).
double positive_magnetization(const ModelParams& params);

// RK4 integration of m' = 2 G2(m) from m0 over [0, T].
PathGrid meanfield_flow(const ModelParams& params, double m0, double horizon, double dt = 1e-3);

}  // namespace cw
