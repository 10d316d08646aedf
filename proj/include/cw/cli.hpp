#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cw/model.hpp"
#include "cw/sdelimit.hpp"
#include "cw/simulator.hpp"

namespace cw {

using json = nlohmann::json;

std::string version();
const std::vector<std::string>& experiment_names();

// A valid configuration for `experiment` with every default spelled out.
json default_config(const std::string& experiment);

struct RunConfig {
  std::string experiment;
  json doc;  // the configuration document as given
  std::uint64_t seed = 0;
  std::string seed_source;  // "flag", "env", "config" or "random"
  std::filesystem::path out_dir = "out";
};

// Seed precedence: flag, then CW_SEED, then the config's "seed", then a
// recorded random value. UsageError for an empty document or an unknown
// experiment, ConfigError for a malformed one.
RunConfig make_run_config(const std::string& experiment, const json& doc, std::optional<std::uint64_t> seed_flag,
                          const std::filesystem::path& out_dir);

// Admissibility, flatness and kappa violations; empty when the config is fine.
std::vector<std::string> validate(const RunConfig& config);

struct RunResult {
  std::vector<std::string> files;  // relative to out_dir, manifest excluded
  json report;
};

// Runs the experiment, writes its files and manifest.json into out_dir.
RunResult run(const RunConfig& config);

// `cw <experiment> --config <file> [--seed S] [--out DIR]`; returns the exit
// status (0 ok, 2 usage, 3 config, 4 numeric, 1 other).
int main_entry(int argc, char** argv);

class UsageError : public Error {
 public:
  using Error::Error;
};

// Reads keys from one JSON object and rejects the ones nobody asked for.
class ConfigReader {
 public:
  ConfigReader(const json& j, std::string where);

  bool has(const std::string& key) const;
  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt);
  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt);
  bool flag(const std::string& key, bool fallback);
  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt);
  const json& raw(const std::string& key);
  ConfigReader child(const std::string& key);
  // ConfigError naming every key that was never read.
  void finish() const;

 private:
  const json* j_;
  std::string where_;
  std::set<std::string> used_;
};

ModelParams read_model(ConfigReader& r);
// Center may be a number or "m_beta" / "-m_beta".
ScalingRegime read_regime(ConfigReader& r, const ModelParams& params);
// Diffusion from {"kind": "from-regime" | "temp-rescaled" | "brownian" | "custom"}.
DiffusionSpec read_diffusion(ConfigReader& top);

// LF-terminated CSV with a header row; numbers printed with %.17g.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  CsvWriter& cell(double v);
  CsvWriter& cell(std::int64_t v);
  CsvWriter& cell(std::size_t v) { return cell(static_cast<std::int64_t>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  void sep();
  std::ofstream os_;
  std::string line_;
  bool first_ = true;
};

std::string format_number(double v);

}  // namespace cw
