#include "experiments.hpp"

#include <algorithm>
#include <cmath>

#include "cw/errors.hpp"
#include "cw/genconv.hpp"
#include "cw/hamiltonian.hpp"
#include "cw/rng.hpp"
#include "cw/sdelimit.hpp"
#include "cw/simulator.hpp"
#include "cw/stats.hpp"

namespace cw::detail {

namespace {

std::size_t count_of(ConfigReader& r, const std::string& key, std::int64_t fallback, std::int64_t min = 1) {
  std::int64_t v = r.integer(key, fallback);
  if (v < min) throw ConfigError(key + " must be at least " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

double positive(ConfigReader& r, const std::string& key, std::optional<double> fallback = std::nullopt) {
  double v = r.number(key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + " must be positive and finite");
  return v;
}

json moments_json(const Moments& m) {
  return {{"count", m.count},
          {"mean", m.mean},
          {"variance", m.variance},
          {"skewness", m.skewness},
          {"excess_kurtosis", m.excess_kurtosis}};
}

json regime_json(const ScalingRegime& r) {
  json j = {{"kind", to_string(r.kind)}, {"k", r.k}, {"center", r.center}};
  if (r.moderate()) j["b"] = {{"scale", r.b.scale}, {"exponent", r.b.exponent}};
  if (r.temperature_rescaled()) j["kappa"] = r.kappa;
  return j;
}

json spec_json(const HamiltonianSpec& h) {
  json j = {{"description", h.describe()}};
  if (h.family() == HamiltonianFamily::Quadratic) {
    j["drift"] = h.drift().coeffs();
    j["diffusion"] = h.diffusion();
  }
  return j;
}

TestFunction read_function(ConfigReader r) {
  std::string kind = r.text("kind");
  TestFunction f;
  if (kind == "bump") {
    f = TestFunction::smooth_bump(r.number("center", 0.0), positive(r, "width"), r.number("height", 1.0));
  } else if (kind == "polynomial") {
    f = TestFunction::polynomial_capped(Polynomial(r.numbers("coefficients")), positive(r, "cap_radius"));
  } else if (kind == "constant") {
    f = TestFunction::constant(r.number("value"));
  } else {
    throw ConfigError("function kind must be bump, polynomial or constant, got '" + kind + "'");
  }
  r.finish();
  return f;
}

}  // namespace

json run_simulate(ConfigReader& top, const RunConfig& cfg, Outputs& out) {
  ModelParams p = read_model(top);
  ScalingRegime reg = read_regime(top, p);
  std::int64_t n = top.integer("n");
  double y0 = top.number("y0", 0.0);
  double horizon = positive(top, "horizon");
  std::size_t replicas = count_of(top, "replicas", 100);
  std::size_t written = count_of(top, "paths_written", 5, 0);
  if (written > replicas) throw ConfigError("paths_written exceeds replicas");

  auto ens = simulate_ensemble(p, reg, n, y0, horizon, cfg.seed, replicas);
  CsvWriter csv(out.add("ensemble.csv"), {"replica", "terminal", "sup_abs", "events"});
  std::vector<double> terminal;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    csv.cell(i).cell(ens[i].terminal).cell(ens[i].sup_abs).cell(ens[i].events);
    csv.end_row();
    terminal.push_back(ens[i].terminal);
  }
  if (written > 0) {
    auto paths = simulate_ensemble_paths(p, reg, n, y0, horizon, cfg.seed, written);
    CsvWriter pc(out.add("paths.csv"), {"replica", "t", "y"});
    for (std::size_t i = 0; i < paths.size(); ++i) {
      pc.cell(i).cell(0.0).cell(paths[i].start);
      pc.end_row();
      for (std::size_t j = 0; j < paths[i].times.size(); ++j) {
        pc.cell(i).cell(paths[i].times[j]).cell(paths[i].values[j]);
        pc.end_row();
      }
    }
  }
  return {{"regime", regime_json(reg)},
          {"n", n},
          {"horizon", horizon},
          {"replicas", replicas},
          {"terminal", moments_json(moments(terminal))}};
}

json run_genconv(ConfigReader& top, const RunConfig&, Outputs& out) {
  ModelParams p = read_model(top);
  ScalingRegime reg = read_regime(top, p);
  double radius = positive(top, "radius", 3.0);
  std::vector<std::int64_t> ladder;
  for (double v : top.numbers("ladder")) {
    if (v != std::floor(v) || v < 1) throw ConfigError("ladder entries must be positive integers");
    ladder.push_back(static_cast<std::int64_t>(v));
  }
  std::vector<TestFunction> fs;
  const json& list = top.raw("functions");
  if (!list.is_array() || list.empty()) throw ConfigError("functions must be a nonempty list");
  for (std::size_t i = 0; i < list.size(); ++i)
    fs.push_back(read_function(ConfigReader(list[i], "config.functions[" + std::to_string(i) + "]")));
  std::int64_t profile = top.integer("profile_function", 0);
  if (profile >= static_cast<std::int64_t>(fs.size())) throw ConfigError("profile_function out of range");

  CsvWriter csv(out.add("ladder.csv"), {"function", "n", "sup_error", "argmax", "points"});
  json per = json::array();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto rep = convergence_ladder(p, reg, fs[i], radius, ladder);
    for (std::size_t j = 0; j < rep.ladder.size(); ++j) {
      csv.cell(i).cell(rep.ladder[j]).cell(rep.errors[j]).cell(rep.argmax[j]).cell(rep.points[j]);
      csv.end_row();
    }
    per.push_back({{"function", i},
                   {"errors", rep.errors},
                   {"strictly_decreasing", rep.strictly_decreasing()},
                   {"final_over_first", rep.final_over_first()}});
  }
  if (profile >= 0) {
    const auto& f = fs[static_cast<std::size_t>(profile)];
    for (std::int64_t n : ladder) {
      auto prof = generator_profile(p, reg, n, f, radius);
      CsvWriter pc(out.add("profile_f" + std::to_string(profile) + "_n" + std::to_string(n) + ".csv"),
                   {"x", "prelimit", "limit", "error"});
      for (std::size_t j = 0; j < prof.x.size(); ++j) {
        pc.cell(prof.x[j]).cell(prof.prelimit[j]).cell(prof.limit[j]).cell(prof.prelimit[j] - prof.limit[j]);
        pc.end_row();
      }
    }
  }
  return {{"regime", regime_json(reg)},
          {"hamiltonian", spec_json(make_hamiltonian(p, reg))},
          {"radius", radius},
          {"ladder", ladder},
          {"functions", per}};
}

json run_clt_compare(ConfigReader& top, const RunConfig& cfg, Outputs& out) {
  ModelParams p = read_model(top);
  ScalingRegime reg = read_regime(top, p);
  if (!reg.fluctuation()) throw ConfigError("clt-compare needs a clt or temp-clt regime");
  std::int64_t n = top.integer("n");
  double y0 = top.number("y0", 0.0);
  double horizon = positive(top, "horizon");
  std::size_t replicas = count_of(top, "replicas", 10000);
  std::string method = top.text("method", "event");
  std::size_t law_steps = count_of(top, "law_steps", 4000);
  SdeOptions opts;
  opts.dt = positive(top, "sde_dt", 1e-3);
  reg.require_admissible(n);

  std::vector<double> chain;
  if (method == "event") {
    for (const auto& s : simulate_ensemble(p, reg, n, y0, horizon, cfg.seed, replicas)) chain.push_back(s.terminal);
  } else if (method == "law") {
    chain = sample_law(rescaled_law(p, reg, n, y0, horizon, law_steps), replicas, cfg.seed);
  } else {
    throw ConfigError("method must be event or law");
  }
  DiffusionSpec sde = reg.temperature_rescaled() ? DiffusionSpec::temp_rescaled(reg.kappa)
                                                 : DiffusionSpec::from_clt(p, reg.k, reg.center);
  double start = reg.rescale(n, reg.initial_up(n, y0));
  auto ens = integrate_sde(sde, start, horizon, replicas, mix64(cfg.seed ^ 0x5deULL), opts);
  auto sde_samples = ens.finite_terminal();

  CsvWriter csv(out.add("samples.csv"), {"index", "chain", "sde"});
  for (std::size_t i = 0; i < replicas; ++i) {
    csv.cell(i).cell(chain[i]).cell(ens.terminal[i]);
    csv.end_row();
  }
  EmpiricalDistribution a(chain), b(sde_samples);
  double ks = ks_distance(a, b);
  double thr = ks_threshold(a.size(), b.size());
  return {{"regime", regime_json(reg)},
          {"n", n},
          {"horizon", horizon},
          {"start", start},
          {"method", method},
          {"sde", {{"label", sde.label()}, {"drift", sde.drift().coeffs()}, {"sigma", sde.sigma()}}},
          {"ks", ks},
          {"ks_threshold", thr},
          {"ks_below_threshold", ks < thr},
          {"wasserstein1", wasserstein1(a, b)},
          {"sde_diverged", ens.diverged_count},
          {"chain_moments", moments_json(moments(chain))},
          {"sde_moments", moments_json(moments(sde_samples))}};
}

json run_action(ConfigReader& top, const RunConfig&, Outputs& out) {
  ModelParams p = read_model(top);
  ScalingRegime reg = read_regime(top, p);
  HamiltonianSpec h = make_hamiltonian(p, reg);
  ConfigReader pr = top.child("path");
  double i0 = top.number("initial_cost", 0.0);
  std::string kind = pr.text("kind");
  std::size_t m = count_of(pr, "intervals", 20000, 2);
  PathGrid path;
  json info = {{"kind", kind}};
  if (kind == "reversed-relaxation") {
    double target = pr.number("target");
    double horizon;
    const json& hz = pr.has("horizon") ? pr.raw("horizon") : json("auto");
    if (hz.is_string() && hz.get<std::string>() == "auto") {
      horizon = 20.0 / relaxation_rate(h, target);
    } else if (hz.is_number() && hz.get<double>() > 0) {
      horizon = hz.get<double>();
    } else {
      throw ConfigError("path.horizon must be \"auto\" or a positive number");
    }
    path = reversed_relaxation_to(h, target, horizon, m);
    info["target"] = target;
    info["horizon"] = horizon;
    if (h.family() == HamiltonianFamily::Quadratic) {
      QuasiPotential s(h);
      info["quasi_potential_target"] = s(target);
      info["quasi_potential_start"] = s(path.front());
    }
  } else if (kind == "constant") {
    double value = pr.number("value");
    double horizon = positive(pr, "horizon");
    path = PathGrid(horizon, std::vector<double>(m + 1, value));
    info["value"] = value;
    info["horizon"] = horizon;
  } else {
    throw ConfigError("path.kind must be reversed-relaxation or constant");
  }
  pr.finish();
  ActionValue a = action(h, path, i0);
  auto vel = path.velocity();
  CsvWriter csv(out.add("action_profile.csv"), {"t", "gamma", "velocity", "lagrangian"});
  for (std::size_t i = 0; i < path.size(); ++i) {
    csv.cell(path.time(i)).cell(path[i]).cell(vel[i]).cell(lagrangian(h, path[i], vel[i]).value);
    csv.end_row();
  }
  info["start"] = path.front();
  info["end"] = path.back();
  return {{"hamiltonian", spec_json(h)}, {"path", info}, {"action", a.value}, {"finite", a.finite}};
}

json run_optimal_path(ConfigReader& top, const RunConfig&, Outputs& out) {
  ModelParams p = read_model(top);
  ScalingRegime reg = read_regime(top, p);
  HamiltonianSpec h = make_hamiltonian(p, reg);
  double xs = top.number("x_start"), xe = top.number("x_end");
  double horizon = positive(top, "horizon");
  std::size_t m = count_of(top, "intervals", 2000, 64);
  std::string method = top.text("method", "auto");
  OptimalPath op;
  if (method == "auto") op = optimal_path(h, xs, xe, horizon, m);
  else if (method == "shooting") op = shoot_optimal_path(h, xs, xe, horizon, m);
  else if (method == "direct") op = minimize_action(h, xs, xe, horizon, m);
  else throw ConfigError("method must be auto, shooting or direct");

  bool with_p = !op.momentum.empty();
  std::vector<std::string> header{"t", "x"};
  if (with_p) header.push_back("p");
  CsvWriter csv(out.add("path.csv"), header);
  for (std::size_t i = 0; i < op.path.size(); ++i) {
    csv.cell(op.path.time(i)).cell(op.path[i]);
    if (with_p) csv.cell(op.momentum[i]);
    csv.end_row();
  }
  json r = {{"hamiltonian", spec_json(h)},
            {"x_start", xs},
            {"x_end", xe},
            {"horizon", horizon},
            {"intervals", m},
            {"method", op.method},
            {"iterations", op.iterations},
            {"action", op.action}};
  if (h.family() == HamiltonianFamily::Quadratic) {
    QuasiPotential s(h);
    r["quasi_potential_difference"] = s(xe) - s(xs);
  }
  return r;
}

json run_quasipotential(ConfigReader& top, const RunConfig&, Outputs& out) {
  ModelParams p = read_model(top);
  ScalingRegime reg = read_regime(top, p);
  HamiltonianSpec h = make_hamiltonian(p, reg);
  double radius = positive(top, "radius", 3.0);
  std::size_t points = count_of(top, "points", 601, 2);
  QuasiPotential s(h);
  CsvWriter csv(out.add("quasipotential.csv"), {"x", "S", "dS", "H"});
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    double x = -radius + 2.0 * radius * static_cast<double>(i) / static_cast<double>(points - 1);
    double hv = h(x, s.derivative(x));
    worst = std::max(worst, std::fabs(hv));
    csv.cell(x).cell(s(x)).cell(s.derivative(x)).cell(hv);
    csv.end_row();
  }
  json r = {{"hamiltonian", spec_json(h)},
            {"antiderivative", s.raw().coeffs()},
            {"offset", s.offset()},
            {"max_abs_residual", worst}};
  if (p.kind() == PotentialKind::CurieWeiss && p.beta() > 1.0 && p.field() == 0.0) {
    auto e = ellis_constant_check(p.beta());
    r["curvature_check"] = {{"m", e.m}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"difference", e.lhs - e.rhs}};
  }
  return r;
}

json run_sde(ConfigReader& top, const RunConfig& cfg, Outputs& out) {
  DiffusionSpec spec = read_diffusion(top);
  double y0 = top.number("y0", 0.0);
  double horizon = positive(top, "horizon");
  std::size_t paths = count_of(top, "paths", 1000);
  SdeOptions opts;
  opts.dt = positive(top, "dt", 1e-3);
  opts.record_every = top.number("record_every", 0.0);
  if (opts.record_every < 0) throw ConfigError("record_every must be nonnegative");
  auto ens = integrate_sde(spec, y0, horizon, paths, cfg.seed, opts);
  CsvWriter csv(out.add("terminal.csv"), {"path", "terminal", "diverged"});
  for (std::size_t i = 0; i < ens.count(); ++i) {
    csv.cell(i).cell(ens.terminal[i]).cell(static_cast<int>(ens.diverged[i]));
    csv.end_row();
  }
  if (!ens.record_times.empty()) {
    CsvWriter pc(out.add("paths.csv"), {"path", "t", "y"});
    for (std::size_t i = 0; i < ens.paths.size(); ++i)
      for (std::size_t j = 0; j < ens.record_times.size(); ++j) {
        pc.cell(i).cell(ens.record_times[j]).cell(ens.paths[i][j]);
        pc.end_row();
      }
  }
  return {{"sde", {{"label", spec.label()}, {"drift", spec.drift().coeffs()}, {"sigma", spec.sigma()}}},
          {"y0", y0},
          {"horizon", horizon},
          {"dt", opts.dt},
          {"paths", paths},
          {"diverged", ens.diverged_count},
          {"terminal", moments_json(ens.terminal_moments())}};
}

json run_stationary(ConfigReader& top, const RunConfig& cfg, Outputs& out) {
  std::optional<ModelParams> params;
  std::optional<ScalingRegime> reg;
  if (top.has("model") && top.has("regime")) {
    params = read_model(top);
    reg = read_regime(top, *params);
  }
  DiffusionSpec spec = read_diffusion(top);
  std::size_t points = count_of(top, "points", 2001, 2);
  auto rho = stationary_density(spec, points);
  CsvWriter csv(out.add("density.csv"), {"y", "density", "log_density"});
  for (std::size_t i = 0; i < rho.grid().size(); ++i) {
    csv.cell(rho.grid()[i]).cell(rho.values()[i]).cell(rho.log_density(rho.grid()[i]));
    csv.end_row();
  }
  json r = {{"sde", {{"label", spec.label()}, {"drift", spec.drift().coeffs()}, {"sigma", spec.sigma()}}},
            {"exponent", rho.exponent().coeffs()},
            {"window", rho.window()},
            {"log_norm", rho.log_norm()}};
  if (top.has("histogram")) {
    ConfigReader hr = top.child("histogram");
    double t_long = positive(hr, "t_long", 50.0);
    double burn = hr.number("burn_in", 0.0);
    std::size_t paths = count_of(hr, "paths", 2000);
    std::size_t bins = count_of(hr, "bins", 40);
    double dt = positive(hr, "dt", 1e-3);
    hr.finish();
    auto chk = long_run_histogram_check(spec, t_long, burn, paths, bins, cfg.seed, dt);
    CsvWriter hc(out.add("histogram.csv"), {"bin_lo", "bin_hi", "empirical_mass", "reference_mass"});
    for (std::size_t i = 0; i < chk.histogram.bins(); ++i) {
      hc.cell(chk.histogram.edge(i)).cell(chk.histogram.edge(i + 1)).cell(chk.histogram.mass(i));
      hc.cell(chk.reference_mass[i]);
      hc.end_row();
    }
    r["histogram"] = {{"l1", chk.l1}, {"samples", chk.samples}, {"burn_in", chk.burn_in}, {"t_long", t_long}};
  }
  if (params && reg && !reg->temperature_rescaled() && params->kind() == PotentialKind::CurieWeiss) {
    auto d = density_constant_report(*params, reg->k, reg->center);
    r["density_constant"] = {{"k", d.k},
                             {"g2_lead", d.g2_lead},
                             {"displayed_constant", d.displayed_constant},
                             {"displayed_coefficient", d.displayed_coefficient},
                             {"fokker_planck_coefficient", d.fokker_planck_coefficient},
                             {"ratio", d.ratio}};
  }
  return r;
}

json run_containment(ConfigReader& top, const RunConfig&, Outputs& out) {
  ModelParams p = read_model(top);
  ScalingRegime reg = read_regime(top, p);
  HamiltonianSpec h = make_hamiltonian(p, reg);
  double radius = positive(top, "radius", 1e6);
  auto grid = containment_grid(radius);
  auto rep = containment_bound(h, grid);
  CsvWriter csv(out.add("containment.csv"), {"x", "H"});
  for (std::size_t i = 0; i < grid.size(); i += 100) {
    double x = grid[i];
    csv.cell(x).cell(h(x, x / (1.0 + 0.5 * x * x)));
    csv.end_row();
  }
  return {{"hamiltonian", spec_json(h)},
          {"radius", radius},
          {"grid_points", grid.size()},
          {"grid_sup", rep.grid_sup},
          {"argmax", rep.argmax},
          {"one_sided_lipschitz", rep.one_sided_lipschitz},
          {"diffusion", rep.diffusion},
          {"analytic_bound", rep.analytic_bound},
          {"within_bound", rep.within_bound()}};
}

json run_table1(ConfigReader& top, const RunConfig&, Outputs& out) {
  double bsub = top.number("beta_subcritical", 0.5);
  double bsup = top.number("beta_supercritical", 1.5);
  double kappa = top.number("kappa", 1.0);
  if (!(bsub < 1.0) || !(bsup > 1.0)) throw ConfigError("need beta_subcritical < 1 < beta_supercritical");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be nonnegative");
  auto sub = ModelParams::curie_weiss(bsub);
  auto sup = ModelParams::curie_weiss(bsup);
  auto crit = ModelParams::curie_weiss(1.0);
  double mb = positive_magnetization(sup);

  struct Row {
    std::string alpha, temperature, process, kind, speed;
    ModelParams params;
    ScalingRegime regime;
  };
  const auto mdp = [](int k, double m) { return ScalingRegime::mdp(k, BSequence::power(0.0), m); };
  std::vector<Row> rows{
      {"0", "any", "m_n(t)", "large deviations", "1", sub, ScalingRegime::ldp()},
      {"(0,1/2)", "any", "n^a m_n(t)", "moderate deviations", "1-2a", sub, mdp(0, 0.0)},
      {"(0,1/2)", "beta>1", "n^a (m_n(t) -+ m_beta)", "moderate deviations", "1-2a", sup, mdp(0, mb)},
      {"1/2", "any", "n^(1/2) m_n(t)", "Gaussian diffusion", "-", sub, ScalingRegime::clt(0, 0.0)},
      {"1/2", "beta>1", "n^(1/2) (m_n(t) -+ m_beta)", "Gaussian diffusion", "-", sup, ScalingRegime::clt(0, mb)},
      {"(0,1/4)", "beta=1", "n^a m_n(n^(2a) t)", "moderate deviations", "1-4a", crit, mdp(1, 0.0)},
      {"(0,1/4)", "beta=1+kappa n^(-2a)", "n^a m_n(n^(2a) t)", "moderate deviations", "1-4a", crit,
       ScalingRegime::temp_mdp(kappa, BSequence::power(0.0))},
      {"1/4", "beta=1", "n^(1/4) m_n(n^(1/2) t)", "non-Gaussian diffusion", "-", crit, ScalingRegime::clt(1, 0.0)},
      {"1/4", "beta=1+kappa n^(-1/2)", "n^(1/4) m_n(n^(1/2) t)", "non-Gaussian diffusion", "-", crit,
       ScalingRegime::temp_clt(kappa)},
  };
  CsvWriter csv(out.add("table1.csv"), {"alpha", "temperature", "rescaled_process", "limit_kind", "speed_exponent",
                                        "limit_object", "drift", "diffusion"});
  json arr = json::array();
  for (const auto& row : rows) {
    HamiltonianSpec h = make_hamiltonian(row.params, row.regime);
    std::string object, drift, diffusion;
    if (h.family() == HamiltonianFamily::FullLDP) {
      object = "H(x,p) = (cosh 2p - 1) G1(x) + sinh(2p) G2(x)";
      drift = "2 G2(x)";
    } else {
      drift = h.drift().to_string();
      diffusion = format_number(h.diffusion());
      object = row.speed == "-" ? "dY = b(Y) dt + sqrt(2D) dW" : "L(x,v) = (v - b(x))^2 / (4D)";
    }
    csv.cell(row.alpha).cell(row.temperature).cell(row.process).cell(row.kind).cell(row.speed);
    csv.cell(object).cell(drift).cell(diffusion);
    csv.end_row();
    arr.push_back({{"alpha", row.alpha},
                   {"temperature", row.temperature},
                   {"regime", to_string(row.regime.kind)},
                   {"limit_object", object},
                   {"drift", drift},
                   {"diffusion", diffusion}});
  }
  return {{"beta_subcritical", bsub}, {"beta_supercritical", bsup}, {"kappa", kappa}, {"rows", arr}};
}

}  // namespace cw::detail
