#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cw/model.hpp"

namespace cw {

// Magnetization chain state. The grid point is stored as the number of +1
// spins so that membership in E_n = {-1, -1 + 2/n, ..., 1} is exact.
struct ChainState {
  std::int64_t n = 1;
  std::int64_t up = 0;
  double t = 0.0;

  double x() const { return 2.0 * static_cast<double>(up) / static_cast<double>(n) - 1.0; }
  // Throws DomainError unless x lies on E_n (to 1e-9 in grid units).
  static ChainState at(std::int64_t n, double x);
};

struct JumpRates {
  double up = 0.0;
  double down = 0.0;
  double total() const { return up + down; }
};

// rate_up = n (1 - x)/2 e^{U'(x)}, rate_down = n (1 + x)/2 e^{-U'(x)}.
JumpRates jump_rates(const ChainState& state, const ModelParams& params);

// b_n = scale * n^exponent.
struct BSequence {
  double scale = 1.0;
  double exponent = 0.0;
  double operator()(std::int64_t n) const;
  static BSequence fixed(double b) { return {b, 0.0}; }
  static BSequence power(double exponent, double scale = 1.0) { return {scale, exponent}; }
};

enum class RegimeKind { LDP, MDP, CLT, TempRescaledMDP, TempRescaledCLT };

std::string to_string(RegimeKind kind);

// Space/time rescaling of the chain around a centering point m.
//   MDP(k):  Y = b_n (m_n(b_n^{2k} t) - m),               speed n b_n^{-2(k+1)}
//   CLT(k):  Y = n^{1/(2k+2)} (m_n(n^{k/(k+1)} t) - m)
//   TempRescaledMDP: MDP(1) at m = 0 with beta = 1 + kappa b_n^{-2}
//   TempRescaledCLT: CLT(1) at m = 0 with beta = 1 + kappa n^{-1/2}
//   LDP: no rescaling, speed n.
struct ScalingRegime {
  RegimeKind kind = RegimeKind::LDP;
  int k = 0;
  BSequence b;
  double center = 0.0;
  double kappa = 0.0;

  static ScalingRegime ldp();
  static ScalingRegime mdp(int k, BSequence b, double center);
  static ScalingRegime clt(int k, double center);
  static ScalingRegime temp_mdp(double kappa, BSequence b);
  static ScalingRegime temp_clt(double kappa);

  bool moderate() const { return kind == RegimeKind::MDP || kind == RegimeKind::TempRescaledMDP; }
  bool fluctuation() const { return kind == RegimeKind::CLT || kind == RegimeKind::TempRescaledCLT; }
  bool temperature_rescaled() const {
    return kind == RegimeKind::TempRescaledMDP || kind == RegimeKind::TempRescaledCLT;
  }

  double space_scale(std::int64_t n) const;
  double time_dilation(std::int64_t n) const;
  // Large-deviation speed r(n); 0 for the fluctuation regimes.
  double speed(std::int64_t n) const;
  // Size of one chain jump in rescaled units.
  double lattice_step(std::int64_t n) const { return 2.0 * space_scale(n) / static_cast<double>(n); }

  // Admissibility proxies for b_n -> infinity and b_n^{2(k+1)}/n -> 0:
  // b_n >= 2 and b_n^{2(k+1)}/n <= 0.1. Also kappa >= 0.
  std::vector<std::string> violations(std::int64_t n) const;
  // Throws ConfigError listing every violation.
  void require_admissible(std::int64_t n) const;

  // Parameters the chain actually runs with (temperature rescaling applied).
  ModelParams chain_params(const ModelParams& base, std::int64_t n) const;

  // Nearest grid point to m + y0 / scale, ties toward m (as a +1 spin count).
  std::int64_t initial_up(std::int64_t n, double y0) const;
  double rescale(std::int64_t n, std::int64_t up) const;
};

// One realized rescaled path: start value plus (jump time, post-jump value).
struct TrajectorySample {
  ScalingRegime regime;
  std::int64_t n = 1;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  double start = 0.0;
  std::vector<double> times;
  std::vector<double> values;

  std::size_t events() const { return times.size(); }
  double terminal() const { return values.empty() ? start : values.back(); }
  // Value at time t (cadlag).
  double value_at(double t) const;
};

// Per-state rate tables shared by every replica of one (params, n) pair.
class ChainKernel {
 public:
  ChainKernel(const ModelParams& params, std::int64_t n);
  std::int64_t n() const { return n_; }
  double rate_up(std::int64_t up) const { return up_[static_cast<std::size_t>(up)]; }
  double rate_down(std::int64_t up) const { return down_[static_cast<std::size_t>(up)]; }

  // Exact event-driven run over chain time [0, horizon]. visit(t, up) is
  // called after every jump.
  template <class Visit>
  void run(std::int64_t up, double horizon, std::uint64_t seed, Visit&& visit) const;

 private:
  std::int64_t n_;
  std::vector<double> up_, down_, total_;
};

// Unrescaled chain m_n(t) started at x0 in E_n.
TrajectorySample simulate_chain(const ModelParams& params, std::int64_t n, double x0, double horizon,
                                std::uint64_t seed);

// Rescaled path Y(t), t in [0, T]: the raw chain runs to time_dilation * T and
// times are relabelled. Throws ConfigError for inadmissible regimes.
TrajectorySample simulate_rescaled(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                                   double y0, double horizon, std::uint64_t seed);

struct PathSummary {
  double terminal = 0.0;
  double sup_abs = 0.0;  // sup_{t <= T} |Y(t)|
  std::size_t events = 0;
};

// Independent replicas, replica i seeded with replica_seed(master_seed, i).
// Output is ordered by replica index regardless of scheduling.
std::vector<PathSummary> simulate_ensemble(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                                           double y0, double horizon, std::uint64_t master_seed,
                                           std::size_t replicas);
std::vector<TrajectorySample> simulate_ensemble_paths(const ModelParams& params, const ScalingRegime& regime,
                                                      std::int64_t n, double y0, double horizon,
                                                      std::uint64_t master_seed, std::size_t replicas);

// Fraction of replicas whose path reaches |Y| >= level on [0, T].
// Needs at least 100 replicas.
double exit_time_diagnostic(const std::vector<TrajectorySample>& ensemble, double level, double horizon);
double exit_time_diagnostic(const std::vector<PathSummary>& ensemble, double level);

// Law of the chain at a fixed chain time, from the forward equation
// p' = p Q solved with BDF2 (backward-Euler start). Entry j is P(up = j).
std::vector<double> transition_law(const ModelParams& params, std::int64_t n, std::int64_t up0, double chain_time,
                                   std::size_t steps);

// Law of the rescaled chain Y(T) on its lattice.
struct RescaledLaw {
  std::vector<double> support;  // ascending rescaled values
  std::vector<double> probability;
};
RescaledLaw rescaled_law(const ModelParams& params, const ScalingRegime& regime, std::int64_t n, double y0,
                         double horizon, std::size_t steps);
// Inverse-CDF draws; draw i uses replica_seed(seed, i).
std::vector<double> sample_law(const RescaledLaw& law, std::size_t count, std::uint64_t seed);

}  // namespace cw

#include "cw/rng.hpp"

namespace cw {

template <class Visit>
void ChainKernel::run(std::int64_t up, double horizon, std::uint64_t seed, Visit&& visit) const {
  Stream rng(seed);
  double t = 0.0;
  for (;;) {
    const double total = total_[static_cast<std::size_t>(up)];
    if (!(total > 0.0)) return;  // absorbing corner: hold to the horizon
    t += rng.exponential() / total;
    if (t > horizon) return;
    up += rng.uniform() * total < up_[static_cast<std::size_t>(up)] ? 1 : -1;
    visit(t, up);
  }
}

}  // namespace cw
