#include "cw/sdelimit.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cw/errors.hpp"
#include "cw/parallel.hpp"
#include "cw/rng.hpp"

namespace cw {

namespace {

constexpr double kDivergence = 1e6;

double integrate_exp(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  const int pieces = 16;
  double h = (b - a) / pieces, sum = 0.0;
  for (int i = 0; i < pieces; ++i) {
    double lo = a + h * i, hi = i + 1 == pieces ? b : a + h * (i + 1);
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 4, 1e-12);
  }
  return sum;
}

}  // namespace

DiffusionSpec DiffusionSpec::from_clt(const ModelParams& params, int k, double m) {
  HamiltonianSpec h = make_hamiltonian(params, ScalingRegime::clt(k, m));
  DiffusionSpec s;
  s.drift_ = h.drift();
  s.sigma_ = std::sqrt(2.0 * h.diffusion());
  s.k_ = k;
  s.center_ = m;
  s.label_ = "clt-k" + std::to_string(k);
  return s;
}

DiffusionSpec DiffusionSpec::temp_rescaled(double kappa) {
  if (!(kappa >= 0.0)) throw DomainError("kappa must be nonnegative");
  DiffusionSpec s;
  s.drift_ = Polynomial({0.0, 2.0 * kappa, 0.0, -2.0 / 3.0});
  s.sigma_ = 2.0;
  s.k_ = 1;
  s.kappa_ = kappa;
  s.label_ = "temp-rescaled";
  return s;
}

DiffusionSpec DiffusionSpec::brownian(double sigma) { return custom(Polynomial(), sigma, "brownian"); }

DiffusionSpec DiffusionSpec::custom(Polynomial drift, double sigma, std::string label) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("diffusion constant must be positive");
  DiffusionSpec s;
  s.drift_ = std::move(drift);
  s.sigma_ = sigma;
  s.label_ = std::move(label);
  return s;
}

bool DiffusionSpec::confining() const { return drift_.degree() >= 1 && drift_.degree() % 2 == 1 && drift_.leading() < 0.0; }

double DiffusionSpec::relaxation_rate() const {
  double slope = std::abs(drift_.coeff(1));
  if (slope > 1e-12) return slope;
  return std::abs(drift_(1.0));
}

HamiltonianSpec DiffusionSpec::hamiltonian() const { return HamiltonianSpec::quadratic(drift_, 0.5 * sigma_ * sigma_); }

std::vector<double> EnsembleSummary::finite_terminal() const {
  std::vector<double> out;
  out.reserve(terminal.size());
  for (std::size_t i = 0; i < terminal.size(); ++i)
    if (!diverged[i]) out.push_back(terminal[i]);
  return out;
}

EnsembleSummary integrate_sde(const DiffusionSpec& spec, double y0, double horizon, std::size_t n_paths,
                              std::uint64_t seed, const SdeOptions& options) {
  if (!(options.dt > 0.0)) throw DomainError("integrate_sde: dt must be positive");
  if (!(horizon >= 0.0)) throw DomainError("integrate_sde: horizon must be nonnegative");
  if (n_paths < 1) throw DomainError("integrate_sde: need at least one path");
  if (!std::isfinite(y0)) throw DomainError("integrate_sde: non-finite start");

  auto steps = static_cast<std::size_t>(std::ceil(horizon / options.dt - 1e-9));
  double h = steps > 0 ? horizon / static_cast<double>(steps) : 0.0;
  double sq = std::sqrt(h);
  double sigma = spec.sigma();
  const Polynomial& drift = spec.drift();

  EnsembleSummary out;
  out.seed = seed;
  out.horizon = horizon;
  out.dt = h;
  out.start = y0;
  out.terminal.assign(n_paths, y0);
  out.diverged.assign(n_paths, 0);

  std::vector<std::size_t> record_steps;
  if (options.record_every > 0.0 && steps > 0) {
    for (double t = 0.0; t <= horizon * (1.0 + 1e-12); t += options.record_every) {
      out.record_times.push_back(t);
      record_steps.push_back(static_cast<std::size_t>(std::llround(t / h)));
    }
    out.paths.assign(n_paths, std::vector<double>(record_steps.size(), y0));
  }

  parallel_for(n_paths, [&](std::size_t i) {
    Stream rng(replica_seed(seed, i));
    double y = y0;
    std::size_t next = 0;
    auto record = [&](std::size_t step) {
      while (next < record_steps.size() && record_steps[next] == step) out.paths[i][next++] = y;
    };
    record(0);
    for (std::size_t s = 1; s <= steps; ++s) {
      y += drift(y) * h + sigma * sq * rng.normal();
      if (!(std::abs(y) <= kDivergence)) {
        out.diverged[i] = 1;
        break;
      }
      record(s);
    }
    if (out.diverged[i]) {
      double last = std::isfinite(y) ? y : std::copysign(kDivergence, y);
      while (next < record_steps.size()) out.paths[i][next++] = last;
      y = last;
    }
    out.terminal[i] = y;
  });
  out.diverged_count = static_cast<std::size_t>(std::count(out.diverged.begin(), out.diverged.end(), 1));
  return out;
}

double StationaryDensity::operator()(double y) const {
  if (std::abs(y) > window_) return 0.0;
  return std::exp(log_density(y));
}

double StationaryDensity::mass(double a, double b) const {
  a = std::max(a, -window_);
  b = std::min(b, window_);
  return integrate_exp([this](double y) { return std::exp(log_density(y)); }, a, b);
}

StationaryDensity stationary_density(const DiffusionSpec& spec, std::size_t points) {
  if (!spec.confining()) throw DomainError("stationary density needs a confining drift");
  if (points < 3) throw DomainError("stationary density grid needs at least 3 points");
  StationaryDensity d;
  double s2 = spec.sigma() * spec.sigma();
  d.exponent_ = spec.drift().antiderivative() * (2.0 / s2);

  double top = d.exponent_(0.0);
  for (double c : real_roots(spec.drift())) top = std::max(top, d.exponent_(c));

  const Polynomial& b = spec.drift();
  double L = 1.0;
  auto enough = [&](double x) {
    return std::abs(b(x)) * x > 40.0 * s2 && std::abs(b(-x)) * x > 40.0 * s2 && d.exponent_(x) - top < -40.0 &&
           d.exponent_(-x) - top < -40.0;
  };
  for (int i = 0; i < 2000 && !enough(L); ++i) L *= 1.05;
  if (!enough(L)) throw NumericError("stationary density: no truncation window found");
  d.window_ = L;

  double z = integrate_exp([&](double y) { return std::exp(d.exponent_(y) - top); }, -L, L);
  d.log_norm_ = top + std::log(z);

  d.grid_.resize(points);
  d.values_.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    double y = -L + 2.0 * L * static_cast<double>(i) / static_cast<double>(points - 1);
    d.grid_[i] = y;
    d.values_[i] = d(y);
  }
  return d;
}

HistogramCheck long_run_histogram_check(const DiffusionSpec& spec, double t_long, double burn_in, std::size_t n_paths,
                                        std::size_t bins, std::uint64_t seed, double dt) {
  StationaryDensity rho = stationary_density(spec);
  if (burn_in <= 0.0) burn_in = 10.0 / spec.relaxation_rate();
  if (!(t_long >= burn_in)) throw DomainError("histogram check: T_long must not be shorter than the burn-in");
  if (bins < 1) throw DomainError("histogram check needs at least one bin");

  SdeOptions opt;
  opt.dt = dt;
  opt.record_every = 1.0;
  EnsembleSummary ens = integrate_sde(spec, 0.0, t_long, n_paths, seed, opt);

  std::vector<double> pooled;
  for (std::size_t i = 0; i < ens.count(); ++i) {
    if (ens.diverged[i]) continue;
    for (std::size_t j = 0; j < ens.record_times.size(); ++j)
      if (ens.record_times[j] >= burn_in - 1e-9) pooled.push_back(ens.paths[i][j]);
  }
  if (pooled.empty()) throw NumericError("histogram check: every path diverged");

  // Symmetric range holding all but 1e-4 of the reference mass.
  double R = 0.5;
  while (R < rho.window() && rho.mass(-rho.window(), -R) + rho.mass(R, rho.window()) > 1e-4) R *= 1.05;
  R = std::min(R, rho.window());

  HistogramCheck out;
  out.burn_in = burn_in;
  out.samples = pooled.size();
  out.histogram = make_histogram(pooled, -R, R, bins);
  const Histogram& h = out.histogram;
  double l1 = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    double ref = rho.mass(h.edge(i), h.edge(i + 1));
    out.reference_mass.push_back(ref);
    l1 += std::abs(h.mass(i) - ref);
  }
  l1 += std::abs(h.below / h.total - rho.mass(-rho.window(), -R));
  l1 += std::abs(h.above / h.total - rho.mass(R, rho.window()));
  out.l1 = l1;
  return out;
}

DensityConstantReport density_constant_report(const ModelParams& params, int k, double m) {
  DiffusionSpec spec = DiffusionSpec::from_clt(params, k, m);
  StationaryDensity rho = stationary_density(spec);
  DensityConstantReport r;
  r.k = k;
  r.g2_lead = g_derivative(params, GKind::G2, 2 * k + 1, m);
  r.displayed_constant = 4.0 * std::abs(r.g2_lead);
  double f = 1.0;
  for (int i = 2; i <= 2 * k + 2; ++i) f *= i;
  r.displayed_coefficient = r.displayed_constant / f;
  r.fokker_planck_coefficient = -rho.exponent().coeff(2 * k + 2);
  r.ratio = r.displayed_coefficient / r.fokker_planck_coefficient;
  return r;
}

}  // namespace cw
