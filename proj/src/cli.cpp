#include "cw/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cw/errors.hpp"
#include "experiments.hpp"

#ifndef CW_VERSION
#define CW_VERSION "0.0.0"
#endif

namespace cw {

std::string version() { return CW_VERSION; }

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"simulate",       "genconv",        "clt-compare", "action",
                                              "optimal-path",   "quasipotential", "sde",         "stationary",
                                              "containment",    "table1"};
  return names;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

// ---------------------------------------------------------------- config reading

ConfigReader::ConfigReader(const json& j, std::string where) : j_(&j), where_(std::move(where)) {
  if (!j.is_object()) throw ConfigError(where_ + " must be a JSON object");
}

bool ConfigReader::has(const std::string& key) const { return j_->contains(key); }

const json& ConfigReader::raw(const std::string& key) {
  if (!has(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
  used_.insert(key);
  return (*j_)[key];
}

double ConfigReader::number(const std::string& key, std::optional<double> fallback) {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where_ + ": missing number '" + key + "'");
  }
  const json& v = raw(key);
  if (!v.is_number()) throw ConfigError(where_ + "." + key + " must be a number");
  return v.get<double>();
}

std::int64_t ConfigReader::integer(const std::string& key, std::optional<std::int64_t> fallback) {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where_ + ": missing integer '" + key + "'");
  }
  const json& v = raw(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  throw ConfigError(where_ + "." + key + " must be an integer");
}

std::string ConfigReader::text(const std::string& key, std::optional<std::string> fallback) {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where_ + ": missing string '" + key + "'");
  }
  const json& v = raw(key);
  if (!v.is_string()) throw ConfigError(where_ + "." + key + " must be a string");
  return v.get<std::string>();
}

bool ConfigReader::flag(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const json& v = raw(key);
  if (!v.is_boolean()) throw ConfigError(where_ + "." + key + " must be true or false");
  return v.get<bool>();
}

std::vector<double> ConfigReader::numbers(const std::string& key, std::optional<std::vector<double>> fallback) {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where_ + ": missing list '" + key + "'");
  }
  const json& v = raw(key);
  if (!v.is_array()) throw ConfigError(where_ + "." + key + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where_ + "." + key + " must be a list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

ConfigReader ConfigReader::child(const std::string& key) { return ConfigReader(raw(key), where_ + "." + key); }

void ConfigReader::finish() const {
  std::string unknown;
  for (const auto& [k, v] : j_->items())
    if (!used_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
  if (!unknown.empty()) throw ConfigError(where_ + ": unknown key(s) " + unknown);
}

ModelParams read_model(ConfigReader& top) {
  ConfigReader r = top.child("model");
  std::string kind = r.text("potential", "curie-weiss");
  ModelParams p;
  if (kind == "curie-weiss") {
    double beta = r.number("beta");
    double field = r.number("field", 0.0);
    p = field == 0.0 ? ModelParams::curie_weiss(beta) : ModelParams::curie_weiss_field(beta, field);
  } else if (kind == "general-polynomial") {
    auto c = r.numbers("coefficients");
    p = ModelParams::general_polynomial(c);
  } else {
    throw ConfigError("model.potential must be curie-weiss or general-polynomial, got '" + kind + "'");
  }
  r.finish();
  return p;
}

namespace {

double read_center(ConfigReader& r, const ModelParams& params) {
  if (!r.has("center")) return 0.0;
  const json& c = r.raw("center");
  if (c.is_number()) return c.get<double>();
  if (c.is_string()) {
    std::string s = c.get<std::string>();
    if (s == "m_beta") return positive_magnetization(params);
    if (s == "-m_beta") return -positive_magnetization(params);
  }
  throw ConfigError("regime.center must be a number, \"m_beta\" or \"-m_beta\"");
}

}  // namespace

ScalingRegime read_regime(ConfigReader& top, const ModelParams& params) {
  ConfigReader r = top.child("regime");
  std::string kind = r.text("kind");
  ScalingRegime out;
  if (kind == "ldp") {
    out = ScalingRegime::ldp();
  } else if (kind == "mdp") {
    auto k = static_cast<int>(r.integer("k", 0));
    BSequence b = BSequence::power(r.number("b_exponent"), r.number("b_scale", 1.0));
    out = ScalingRegime::mdp(k, b, read_center(r, params));
  } else if (kind == "clt") {
    auto k = static_cast<int>(r.integer("k", 0));
    out = ScalingRegime::clt(k, read_center(r, params));
  } else if (kind == "temp-mdp") {
    BSequence b = BSequence::power(r.number("b_exponent"), r.number("b_scale", 1.0));
    out = ScalingRegime::temp_mdp(r.number("kappa"), b);
  } else if (kind == "temp-clt") {
    out = ScalingRegime::temp_clt(r.number("kappa"));
  } else {
    throw ConfigError("regime.kind must be ldp, mdp, clt, temp-mdp or temp-clt, got '" + kind + "'");
  }
  r.finish();
  return out;
}

DiffusionSpec read_diffusion(ConfigReader& top) {
  ConfigReader d = top.child("diffusion");
  std::string kind = d.text("kind", "from-regime");
  DiffusionSpec spec;
  if (kind == "from-regime") {
    ModelParams p = read_model(top);
    ScalingRegime reg = read_regime(top, p);
    if (reg.kind == RegimeKind::TempRescaledCLT || reg.kind == RegimeKind::TempRescaledMDP)
      spec = DiffusionSpec::temp_rescaled(reg.kappa);
    else if (reg.kind == RegimeKind::CLT || reg.kind == RegimeKind::MDP)
      spec = DiffusionSpec::from_clt(p, reg.k, reg.center);
    else
      throw ConfigError("diffusion from-regime needs a clt, mdp or temperature-rescaled regime");
  } else if (kind == "temp-rescaled") {
    spec = DiffusionSpec::temp_rescaled(d.number("kappa"));
  } else if (kind == "brownian") {
    spec = DiffusionSpec::brownian(d.number("sigma", 2.0));
  } else if (kind == "custom") {
    spec = DiffusionSpec::custom(Polynomial(d.numbers("drift")), d.number("sigma"));
  } else {
    throw ConfigError("diffusion.kind must be from-regime, temp-rescaled, brownian or custom");
  }
  d.finish();
  return spec;
}

// ---------------------------------------------------------------- CSV

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : os_(path, std::ios::binary | std::ios::trunc) {
  if (!os_) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::sep() {
  if (!first_) line_ += ',';
  first_ = false;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  line_ += format_number(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t v) {
  sep();
  line_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  sep();
  if (v.find_first_of(",\"\n") == std::string::npos) {
    line_ += v;
  } else {
    line_ += '"';
    for (char c : v) {
      if (c == '"') line_ += '"';
      line_ += c;
    }
    line_ += '"';
  }
  return *this;
}

void CsvWriter::end_row() {
  line_ += '\n';
  os_ << line_;
  line_.clear();
  first_ = true;
  if (!os_) throw Error("CSV write failed");
}

// ---------------------------------------------------------------- defaults

json default_config(const std::string& experiment) {
  json cw1 = {{"potential", "curie-weiss"}, {"beta", 1.0}};
  json sub = {{"potential", "curie-weiss"}, {"beta", 0.5}};
  json sup = {{"potential", "curie-weiss"}, {"beta", 1.5}};
  json c;
  if (experiment == "simulate") {
    c = {{"model", sup},
         {"regime", {{"kind", "clt"}, {"k", 0}, {"center", "m_beta"}}},
         {"n", 1000},
         {"y0", 0.0},
         {"horizon", 1.0},
         {"replicas", 200},
         {"paths_written", 5}};
  } else if (experiment == "genconv") {
    c = {{"model", sub},
         {"regime", {{"kind", "mdp"}, {"k", 0}, {"b_exponent", 0.25}, {"center", 0.0}}},
         {"radius", 3.0},
         {"ladder", {1000, 10000, 100000, 1000000}},
         {"functions",
          {{{"kind", "bump"}, {"center", 0.0}, {"width", 2.0}, {"height", 1.0}},
           {{"kind", "bump"}, {"center", 0.5}, {"width", 1.5}, {"height", 0.7}},
           {{"kind", "bump"}, {"center", -1.0}, {"width", 1.8}, {"height", 1.3}}}},
         {"profile_function", 0}};
  } else if (experiment == "clt-compare") {
    c = {{"model", sup},
         {"regime", {{"kind", "clt"}, {"k", 0}, {"center", "m_beta"}}},
         {"n", 10000},
         {"y0", 0.0},
         {"horizon", 1.0},
         {"replicas", 10000},
         {"method", "event"},
         {"law_steps", 4000},
         {"sde_dt", 1e-3}};
  } else if (experiment == "action") {
    c = {{"model", sub},
         {"regime", {{"kind", "mdp"}, {"k", 0}, {"b_exponent", 0.25}, {"center", 0.0}}},
         {"path", {{"kind", "reversed-relaxation"}, {"target", 1.0}, {"horizon", "auto"}, {"intervals", 20000}}},
         {"initial_cost", 0.0}};
  } else if (experiment == "optimal-path") {
    c = {{"model", sub},
         {"regime", {{"kind", "mdp"}, {"k", 0}, {"b_exponent", 0.25}, {"center", 0.0}}},
         {"x_start", 0.0},
         {"x_end", 1.0},
         {"horizon", 20.0},
         {"intervals", 2000},
         {"method", "auto"}};
  } else if (experiment == "quasipotential") {
    c = {{"model", cw1},
         {"regime", {{"kind", "mdp"}, {"k", 1}, {"b_exponent", 1.0 / 6.0}, {"center", 0.0}}},
         {"radius", 3.0},
         {"points", 601}};
  } else if (experiment == "sde") {
    c = {{"model", cw1},
         {"regime", {{"kind", "clt"}, {"k", 1}, {"center", 0.0}}},
         {"diffusion", {{"kind", "from-regime"}}},
         {"y0", 0.0},
         {"horizon", 5.0},
         {"paths", 2000},
         {"dt", 1e-3},
         {"record_every", 0.0}};
  } else if (experiment == "stationary") {
    c = {{"model", cw1},
         {"regime", {{"kind", "clt"}, {"k", 1}, {"center", 0.0}}},
         {"diffusion", {{"kind", "from-regime"}}},
         {"points", 2001},
         {"histogram", {{"t_long", 50.0}, {"burn_in", 0.0}, {"paths", 2000}, {"bins", 40}, {"dt", 1e-3}}}};
  } else if (experiment == "containment") {
    c = {{"model", cw1},
         {"regime", {{"kind", "mdp"}, {"k", 1}, {"b_exponent", 1.0 / 6.0}, {"center", 0.0}}},
         {"radius", 1e6}};
  } else if (experiment == "table1") {
    c = {{"beta_subcritical", 0.5}, {"beta_supercritical", 1.5}, {"kappa", 1.0}};
  } else {
    throw UsageError("unknown experiment '" + experiment + "'");
  }
  c["experiment"] = experiment;
  c["seed"] = 12345;
  return c;
}

// ---------------------------------------------------------------- run config

RunConfig make_run_config(const std::string& experiment, const json& doc, std::optional<std::uint64_t> seed_flag,
                          const std::filesystem::path& out_dir) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw UsageError("unknown experiment '" + experiment + "'");
  if (doc.is_null() || (doc.is_object() && doc.empty())) throw UsageError("empty config");
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (doc.contains("experiment")) {
    if (!doc["experiment"].is_string() || doc["experiment"].get<std::string>() != experiment)
      throw ConfigError("config names a different experiment than the command line");
  }
  RunConfig cfg;
  cfg.experiment = experiment;
  cfg.doc = doc;
  cfg.out_dir = out_dir;
  const char* env = std::getenv("CW_SEED");
  if (seed_flag) {
    cfg.seed = *seed_flag;
    cfg.seed_source = "flag";
  } else if (env && *env) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used, 0);
      if (env[used] != '\0') throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError(std::string("CW_SEED is not a 64-bit unsigned integer: ") + env);
    }
    cfg.seed_source = "env";
  } else if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      throw ConfigError("seed must be a nonnegative integer");
    if (doc["seed"].is_number_integer() && doc["seed"].get<std::int64_t>() < 0)
      throw ConfigError("seed must be a nonnegative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
    cfg.seed_source = "config";
  } else {
    std::random_device rd;
    cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    cfg.seed_source = "random";
  }
  return cfg;
}

std::vector<std::string> validate(const RunConfig& config) {
  std::vector<std::string> out;
  const json& d = config.doc;
  auto note = [&](const std::exception& e) { out.emplace_back(e.what()); };
  if (!d.contains("model") || !d.contains("regime")) return out;
  try {
    const json blocks = {{"model", d["model"]}, {"regime", d["regime"]}};
    ConfigReader top(blocks, "config");
    ModelParams p = read_model(top);
    ScalingRegime reg = read_regime(top, p);
    if (reg.temperature_rescaled() && !(reg.kappa >= 0.0)) out.push_back("kappa must be nonnegative");
    std::vector<std::int64_t> ns;
    if (d.contains("n") && d["n"].is_number()) ns.push_back(d["n"].get<std::int64_t>());
    if (d.contains("ladder") && d["ladder"].is_array())
      for (const auto& e : d["ladder"])
        if (e.is_number()) ns.push_back(e.get<std::int64_t>());
    for (std::int64_t n : ns)
      for (const auto& v : reg.violations(n)) out.push_back("n = " + std::to_string(n) + ": " + v);
    if (reg.kind != RegimeKind::LDP) {
      try {
        make_hamiltonian(p, reg);
      } catch (const RegimeError& e) {
        note(e);
      }
    }
  } catch (const Error& e) {
    note(e);
  }
  std::vector<std::string> unique;
  for (auto& s : out)
    if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(std::move(s));
  return unique;
}

// ---------------------------------------------------------------- run

RunResult run(const RunConfig& config) {
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  auto problems = validate(config);
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ConfigError(msg);
  }
  std::filesystem::create_directories(config.out_dir);

  ConfigReader top(config.doc, "config");
  if (top.has("experiment")) top.raw("experiment");
  if (top.has("seed")) top.raw("seed");
  detail::Outputs out{config.out_dir, {}};
  json report;
  const std::string& e = config.experiment;
  if (e == "simulate") report = detail::run_simulate(top, config, out);
  else if (e == "genconv") report = detail::run_genconv(top, config, out);
  else if (e == "clt-compare") report = detail::run_clt_compare(top, config, out);
  else if (e == "action") report = detail::run_action(top, config, out);
  else if (e == "optimal-path") report = detail::run_optimal_path(top, config, out);
  else if (e == "quasipotential") report = detail::run_quasipotential(top, config, out);
  else if (e == "sde") report = detail::run_sde(top, config, out);
  else if (e == "stationary") report = detail::run_stationary(top, config, out);
  else if (e == "containment") report = detail::run_containment(top, config, out);
  else if (e == "table1") report = detail::run_table1(top, config, out);
  else throw UsageError("unknown experiment '" + e + "'");
  top.finish();

  {
    std::ofstream os(out.add("report.json"), std::ios::binary | std::ios::trunc);
    os << report.dump(2) << '\n';
  }
  double wall = std::chrono::duration<double>(clock::now() - start).count();
  json manifest = {{"tool", "cw"},
                   {"version", version()},
                   {"experiment", e},
                   {"seed", config.seed},
                   {"seed_source", config.seed_source},
                   {"config", config.doc},
                   {"files", out.files},
                   {"wall_time_seconds", wall}};
  std::ofstream os(config.out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
  os << manifest.dump(2) << '\n';
  if (!os) throw Error("cannot write manifest.json");
  return {out.files, report};
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Curie-Weiss fluctuation experiments"};
  std::string experiment, config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool print_default = false, check_only = false;
  app.add_option("experiment", experiment, "one of: simulate genconv clt-compare action optimal-path quasipotential "
                                           "sde stationary containment table1")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "64-bit seed (overrides CW_SEED and the config)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--print-default", print_default, "print a default configuration and exit");
  app.add_flag("--check", check_only, "validate the configuration and exit");
  app.add_flag_function("--version", [](std::int64_t) {
    std::cout << "cw " << version() << '\n';
    std::exit(0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e);
      return 0;
    }
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (print_default) {
      std::cout << default_config(experiment).dump(2) << '\n';
      return 0;
    }
    if (config_path.empty()) throw UsageError("--config is required");
    std::ifstream is(config_path, std::ios::binary);
    if (!is) throw UsageError("cannot read config file " + config_path);
    std::stringstream buf;
    buf << is.rdbuf();
    std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw UsageError("empty config");
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg = make_run_config(experiment, doc, seed, out_dir);
    if (check_only) {
      auto v = validate(cfg);
      for (const auto& s : v) std::cout << s << '\n';
      return v.empty() ? 0 : 3;
    }
    RunResult r = run(cfg);
    std::cout << r.report.dump(2) << '\n';
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cw
