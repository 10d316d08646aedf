#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cw/hamiltonian.hpp"
#include "cw/polynomial.hpp"
#include "cw/stats.hpp"

namespace cw {

// dY = b(Y) dt + sigma dW with polynomial drift.
class DiffusionSpec {
 public:
  // Limit of the fluctuation regime CLT(k) at m:
  //   b(y) = 2 y^{2k+1} G2^{(2k+1)}(m)/(2k+1)!,  sigma = 2 sqrt(G1(m)).
  static DiffusionSpec from_clt(const ModelParams& params, int k, double m);
  // b(y) = 2(kappa y - y^3/3), sigma = 2.
  static DiffusionSpec temp_rescaled(double kappa);
  static DiffusionSpec brownian(double sigma);
  static DiffusionSpec custom(Polynomial drift, double sigma, std::string label = "custom");

  const Polynomial& drift() const { return drift_; }
  double sigma() const { return sigma_; }
  int k() const { return k_; }
  double center() const { return center_; }
  double kappa() const { return kappa_; }
  const std::string& label() const { return label_; }
  double drift_at(double y) const { return drift_(y); }
  // Odd leading power with a negative coefficient.
  bool confining() const;
  // |b'(0)| if nonzero, else |b(1)|.
  double relaxation_rate() const;
  // Generator b f' + (sigma^2/2) f'' as a quadratic Hamiltonian.
  HamiltonianSpec hamiltonian() const;

 private:
  Polynomial drift_;
  double sigma_ = 1.0;
  int k_ = 0;
  double center_ = 0.0;
  double kappa_ = 0.0;
  std::string label_;
};

struct EnsembleSummary {
  std::uint64_t seed = 0;
  double horizon = 0.0;
  double dt = 0.0;
  double start = 0.0;
  std::vector<double> terminal;        // one value per path
  std::vector<std::uint8_t> diverged;  // |Y| passed 1e6; terminal holds the last value
  std::size_t diverged_count = 0;
  // Optional paths sampled at `record_times`; paths[i][j] is path i at time j.
  std::vector<double> record_times;
  std::vector<std::vector<double>> paths;

  std::size_t count() const { return terminal.size(); }
  // Terminal values of the paths that did not diverge.
  std::vector<double> finite_terminal() const;
  Moments terminal_moments() const { return moments(finite_terminal()); }
};

struct SdeOptions {
  double dt = 1e-3;
  // Record every path at multiples of this interval (0: terminal only).
  double record_every = 0.0;
};

// Euler-Maruyama; path i draws from replica_seed(seed, i).
EnsembleSummary integrate_sde(const DiffusionSpec& spec, double y0, double horizon, std::size_t n_paths,
                              std::uint64_t seed, const SdeOptions& options = {});

// rho(y) proportional to exp(phi(y)), phi(y) = int_0^y 2 b / sigma^2.
class StationaryDensity {
 public:
  double operator()(double y) const;
  double log_density(double y) const { return exponent_(y) - log_norm_; }
  // Mass of [a, b] by adaptive Gauss-Kronrod.
  double mass(double a, double b) const;
  const Polynomial& exponent() const { return exponent_; }
  double window() const { return window_; }
  double log_norm() const { return log_norm_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

 private:
  friend StationaryDensity stationary_density(const DiffusionSpec&, std::size_t);
  Polynomial exponent_;
  double window_ = 0.0;
  double log_norm_ = 0.0;
  std::vector<double> grid_, values_;
};

// DomainError unless the drift is confining. The window [-L, L] satisfies
// |b(L)| L > 40 sigma^2 and leaves tail mass below 1e-8.
StationaryDensity stationary_density(const DiffusionSpec& spec, std::size_t points = 2001);

struct HistogramCheck {
  Histogram histogram;
  std::vector<double> reference_mass;  // per bin, from the density
  double l1 = 0.0;                     // includes the mass outside the bins
  std::size_t samples = 0;
  double burn_in = 0.0;
};

// Pools the ensemble at every unit time in [burn_in, T_long] and compares bin
// masses with the stationary density. burn_in <= 0 selects 10 / relaxation rate.
HistogramCheck long_run_histogram_check(const DiffusionSpec& spec, double t_long, double burn_in, std::size_t n_paths,
                                        std::size_t bins, std::uint64_t seed, double dt = 1e-3);

// Coefficient of y^{2k+2} in -log rho: the displayed closed form
// c/(2k+2)! with c = 4|G2^{(2k+1)}(m)| against the Fokker-Planck value.
struct DensityConstantReport {
  int k = 0;
  double g2_lead = 0.0;
  double displayed_constant = 0.0;     // c
  double displayed_coefficient = 0.0;  // c/(2k+2)!
  double fokker_planck_coefficient = 0.0;
  double ratio = 0.0;  // displayed / Fokker-Planck
};

DensityConstantReport density_constant_report(const ModelParams& params, int k, double m);

}  // namespace cw
