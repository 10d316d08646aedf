#include "cw/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "cw/errors.hpp"
#include "cw/parallel.hpp"

namespace cw {

ChainState ChainState::at(std::int64_t n, double x) {
  if (n < 1) throw DomainError("spin count must be positive");
  const double j = (x + 1.0) * static_cast<double>(n) / 2.0;
  const double r = std::round(j);
  if (std::fabs(j - r) > 1e-9 || r < 0.0 || r > static_cast<double>(n))
    throw DomainError("magnetization is not a point of E_n");
  return ChainState{n, static_cast<std::int64_t>(r), 0.0};
}

JumpRates jump_rates(const ChainState& s, const ModelParams& params) {
  const double a = params.force(s.x());
  return {static_cast<double>(s.n - s.up) * std::exp(a), static_cast<double>(s.up) * std::exp(-a)};
}

double BSequence::operator()(std::int64_t n) const {
  return exponent == 0.0 ? scale : scale * std::pow(static_cast<double>(n), exponent);
}

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::LDP: return "ldp";
    case RegimeKind::MDP: return "mdp";
    case RegimeKind::CLT: return "clt";
    case RegimeKind::TempRescaledMDP: return "temp-mdp";
    case RegimeKind::TempRescaledCLT: return "temp-clt";
  }
  return "unknown";
}

ScalingRegime ScalingRegime::ldp() { return {}; }

ScalingRegime ScalingRegime::mdp(int k, BSequence b, double center) {
  ScalingRegime r;
  r.kind = RegimeKind::MDP;
  r.k = k;
  r.b = b;
  r.center = center;
  return r;
}

ScalingRegime ScalingRegime::clt(int k, double center) {
  ScalingRegime r;
  r.kind = RegimeKind::CLT;
  r.k = k;
  r.center = center;
  return r;
}

ScalingRegime ScalingRegime::temp_mdp(double kappa, BSequence b) {
  ScalingRegime r;
  r.kind = RegimeKind::TempRescaledMDP;
  r.k = 1;
  r.b = b;
  r.kappa = kappa;
  return r;
}

ScalingRegime ScalingRegime::temp_clt(double kappa) {
  ScalingRegime r;
  r.kind = RegimeKind::TempRescaledCLT;
  r.k = 1;
  r.kappa = kappa;
  return r;
}

double ScalingRegime::space_scale(std::int64_t n) const {
  switch (kind) {
    case RegimeKind::LDP: return 1.0;
    case RegimeKind::MDP:
    case RegimeKind::TempRescaledMDP: return b(n);
    case RegimeKind::CLT:
    case RegimeKind::TempRescaledCLT: return std::pow(static_cast<double>(n), 1.0 / (2.0 * k + 2.0));
  }
  return 1.0;
}

double ScalingRegime::time_dilation(std::int64_t n) const {
  switch (kind) {
    case RegimeKind::LDP: return 1.0;
    case RegimeKind::MDP:
    case RegimeKind::TempRescaledMDP: return std::pow(b(n), 2.0 * k);
    case RegimeKind::CLT:
    case RegimeKind::TempRescaledCLT: return std::pow(static_cast<double>(n), static_cast<double>(k) / (k + 1.0));
  }
  return 1.0;
}

double ScalingRegime::speed(std::int64_t n) const {
  if (kind == RegimeKind::LDP) return static_cast<double>(n);
  if (moderate()) return static_cast<double>(n) * std::pow(b(n), -2.0 * (k + 1));
  return 0.0;
}

std::vector<std::string> ScalingRegime::violations(std::int64_t n) const {
  std::vector<std::string> out;
  if (n < 1) out.push_back("n must be positive");
  if (k < 0) out.push_back("flatness order k must be nonnegative");
  if (temperature_rescaled() && !(kappa >= 0.0)) out.push_back("kappa must be nonnegative");
  if (moderate() && n >= 1 && k >= 0) {
    const double bn = b(n);
    if (!(bn >= 2.0)) out.push_back("b_n = " + std::to_string(bn) + " is below the proxy b_n >= 2");
    const double ratio = std::pow(bn, 2.0 * (k + 1)) / static_cast<double>(n);
    if (!(ratio <= 0.1 * (1.0 + 1e-12)))
      out.push_back("b_n^{2(k+1)}/n = " + std::to_string(ratio) + " exceeds the proxy bound 0.1");
  }
  return out;
}

void ScalingRegime::require_admissible(std::int64_t n) const {
  const auto v = violations(n);
  if (v.empty()) return;
  std::string msg = "inadmissible " + to_string(kind) + " regime at n = " + std::to_string(n) + ":";
  for (const auto& s : v) msg += " " + s + ";";
  throw ConfigError(msg);
}

ModelParams ScalingRegime::chain_params(const ModelParams& base, std::int64_t n) const {
  if (kind == RegimeKind::TempRescaledMDP) return ModelParams::temp_rescaled(kappa, b(n));
  if (kind == RegimeKind::TempRescaledCLT) return ModelParams::temp_rescaled(kappa, std::pow(static_cast<double>(n), 0.25));
  return base;
}

std::int64_t ScalingRegime::initial_up(std::int64_t n, double y0) const {
  const double nd = static_cast<double>(n);
  const double x0 = center + y0 / space_scale(n);
  const double j = (x0 + 1.0) * nd / 2.0;
  const double jm = (center + 1.0) * nd / 2.0;
  const double lo = std::floor(j), hi = std::ceil(j);
  double pick;
  if (j - lo < hi - j) pick = lo;
  else if (hi - j < j - lo) pick = hi;
  else pick = std::fabs(lo - jm) <= std::fabs(hi - jm) ? lo : hi;
  if (pick < 0.0 || pick > nd) throw DomainError("initial point lies outside [-1, 1]");
  return static_cast<std::int64_t>(pick);
}

double ScalingRegime::rescale(std::int64_t n, std::int64_t up) const {
  const double x = 2.0 * static_cast<double>(up) / static_cast<double>(n) - 1.0;
  return space_scale(n) * (x - center);
}

double TrajectorySample::value_at(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return start;
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

ChainKernel::ChainKernel(const ModelParams& params, std::int64_t n) : n_(n) {
  if (n < 1) throw DomainError("spin count must be positive");
  const auto size = static_cast<std::size_t>(n) + 1;
  up_.resize(size);
  down_.resize(size);
  total_.resize(size);
  for (std::int64_t j = 0; j <= n; ++j) {
    const auto r = jump_rates(ChainState{n, j, 0.0}, params);
    if (!std::isfinite(r.up) || !std::isfinite(r.down)) throw NumericError("jump rate overflow");
    up_[static_cast<std::size_t>(j)] = r.up;
    down_[static_cast<std::size_t>(j)] = r.down;
    total_[static_cast<std::size_t>(j)] = r.up + r.down;
  }
}

namespace {

TrajectorySample run_path(const ChainKernel& kernel, const ScalingRegime& regime, std::int64_t up0, double horizon,
                          std::uint64_t seed) {
  const std::int64_t n = kernel.n();
  TrajectorySample s;
  s.regime = regime;
  s.n = n;
  s.seed = seed;
  s.horizon = horizon;
  s.start = regime.rescale(n, up0);
  const double dilation = regime.time_dilation(n);
  kernel.run(up0, dilation * horizon, seed, [&](double t, std::int64_t up) {
    s.times.push_back(t / dilation);
    s.values.push_back(regime.rescale(n, up));
  });
  return s;
}

void check_horizon(double horizon) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be finite and nonnegative");
}

}  // namespace

TrajectorySample simulate_chain(const ModelParams& params, std::int64_t n, double x0, double horizon,
                                std::uint64_t seed) {
  check_horizon(horizon);
  const auto state = ChainState::at(n, x0);
  const ChainKernel kernel(params, n);
  return run_path(kernel, ScalingRegime::ldp(), state.up, horizon, seed);
}

TrajectorySample simulate_rescaled(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                                   double y0, double horizon, std::uint64_t seed) {
  check_horizon(horizon);
  regime.require_admissible(n);
  const ChainKernel kernel(regime.chain_params(params, n), n);
  return run_path(kernel, regime, regime.initial_up(n, y0), horizon, seed);
}

std::vector<PathSummary> simulate_ensemble(const ModelParams& params, const ScalingRegime& regime, std::int64_t n,
                                           double y0, double horizon, std::uint64_t master_seed,
                                           std::size_t replicas) {
  check_horizon(horizon);
  regime.require_admissible(n);
  const ChainKernel kernel(regime.chain_params(params, n), n);
  const std::int64_t up0 = regime.initial_up(n, y0);
  const double dilation = regime.time_dilation(n);
  std::vector<PathSummary> out(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    PathSummary summary;
    std::int64_t lo = up0, hi = up0, last = up0;
    kernel.run(up0, dilation * horizon, replica_seed(master_seed, i), [&](double, std::int64_t up) {
      lo = std::min(lo, up);
      hi = std::max(hi, up);
      last = up;
      ++summary.events;
    });
    summary.terminal = regime.rescale(n, last);
    summary.sup_abs = std::max(std::fabs(regime.rescale(n, lo)), std::fabs(regime.rescale(n, hi)));
    out[i] = summary;
  });
  return out;
}

std::vector<TrajectorySample> simulate_ensemble_paths(const ModelParams& params, const ScalingRegime& regime,
                                                      std::int64_t n, double y0, double horizon,
                                                      std::uint64_t master_seed, std::size_t replicas) {
  check_horizon(horizon);
  regime.require_admissible(n);
  const ChainKernel kernel(regime.chain_params(params, n), n);
  const std::int64_t up0 = regime.initial_up(n, y0);
  std::vector<TrajectorySample> out(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    out[i] = run_path(kernel, regime, up0, horizon, replica_seed(master_seed, i));
  });
  return out;
}

double exit_time_diagnostic(const std::vector<TrajectorySample>& ensemble, double level, double horizon) {
  if (ensemble.size() < 100) throw DomainError("exit-time diagnostic needs at least 100 replicas");
  std::size_t hits = 0;
  for (const auto& path : ensemble) {
    bool hit = std::fabs(path.start) >= level;
    for (std::size_t i = 0; i < path.times.size() && !hit && path.times[i] <= horizon; ++i)
      hit = std::fabs(path.values[i]) >= level;
    hits += hit ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(ensemble.size());
}

double exit_time_diagnostic(const std::vector<PathSummary>& ensemble, double level) {
  if (ensemble.size() < 100) throw DomainError("exit-time diagnostic needs at least 100 replicas");
  std::size_t hits = 0;
  for (const auto& s : ensemble) hits += s.sup_abs >= level ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(ensemble.size());
}

std::vector<double> transition_law(const ModelParams& params, std::int64_t n, std::int64_t up0, double chain_time,
                                   std::size_t steps) {
  if (up0 < 0 || up0 > n) throw DomainError("initial state outside E_n");
  if (!(chain_time >= 0.0)) throw DomainError("chain time must be nonnegative");
  const ChainKernel kernel(params, n);
  const auto size = static_cast<std::size_t>(n) + 1;
  std::vector<double> p(size, 0.0), prev, rhs(size), sub(size), diag(size), sup(size), work(size);
  p[static_cast<std::size_t>(up0)] = 1.0;
  if (chain_time == 0.0) return p;
  steps = std::max<std::size_t>(steps, 8);

  // Solves (I - c Q^T) out = rhs with the Thomas algorithm; the matrix is
  // column diagonally dominant so no pivoting is needed.
  const auto implicit_solve = [&](double c, std::vector<double>& out) {
    for (std::size_t j = 0; j < size; ++j) {
      const auto js = static_cast<std::int64_t>(j);
      diag[j] = 1.0 + c * (kernel.rate_up(js) + kernel.rate_down(js));
      sub[j] = j > 0 ? -c * kernel.rate_up(js - 1) : 0.0;
      sup[j] = j + 1 < size ? -c * kernel.rate_down(js + 1) : 0.0;
    }
    work[0] = sup[0] / diag[0];
    out[0] = rhs[0] / diag[0];
    for (std::size_t j = 1; j < size; ++j) {
      const double denom = diag[j] - sub[j] * work[j - 1];
      work[j] = sup[j] / denom;
      out[j] = (rhs[j] - sub[j] * out[j - 1]) / denom;
    }
    for (std::size_t j = size - 1; j-- > 0;) out[j] -= work[j] * out[j + 1];
  };

  // Backward-Euler over the first two steps (four substeps each) damps the
  // point-mass transient; BDF2 afterwards.
  const double dt = chain_time / static_cast<double>(steps);
  constexpr int kStartSubsteps = 4;
  const auto euler_step = [&] {
    for (int s = 0; s < kStartSubsteps; ++s) {
      rhs = p;
      implicit_solve(dt / kStartSubsteps, p);
    }
  };
  euler_step();
  prev = p;
  euler_step();
  std::vector<double> next(size);
  for (std::size_t step = 2; step < steps; ++step) {
    for (std::size_t j = 0; j < size; ++j) rhs[j] = (4.0 * p[j] - prev[j]) / 3.0;
    implicit_solve(2.0 * dt / 3.0, next);
    prev.swap(p);
    p.swap(next);
  }
  double total = 0.0;
  for (double& v : p) {
    if (v < 0.0) v = 0.0;
    total += v;
  }
  if (!(std::fabs(total - 1.0) < 1e-6)) throw NumericError("transition law lost normalization");
  for (double& v : p) v /= total;
  return p;
}

RescaledLaw rescaled_law(const ModelParams& params, const ScalingRegime& regime, std::int64_t n, double y0,
                         double horizon, std::size_t steps) {
  regime.require_admissible(n);
  const auto up0 = regime.initial_up(n, y0);
  const auto law = transition_law(regime.chain_params(params, n), n, up0, regime.time_dilation(n) * horizon, steps);
  RescaledLaw out;
  out.support.reserve(law.size());
  for (std::int64_t j = 0; j <= n; ++j) out.support.push_back(regime.rescale(n, j));
  out.probability = law;
  return out;
}

std::vector<double> sample_law(const RescaledLaw& law, std::size_t count, std::uint64_t seed) {
  std::vector<double> cdf(law.probability.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < cdf.size(); ++j) cdf[j] = acc += law.probability[j];
  Stream rng(seed);
  std::vector<double> out(count);
  for (auto& v : out) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    v = law.support[static_cast<std::size_t>(it - cdf.begin())];
  }
  return out;
}

}  // namespace cw
