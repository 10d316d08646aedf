#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cw/cli.hpp"

namespace cw::detail {

struct Outputs {
  std::filesystem::path dir;
  std::vector<std::string> files;
  std::filesystem::path add(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }
};

json run_simulate(ConfigReader& top, const RunConfig& cfg, Outputs& out);
json run_genconv(ConfigReader& top, const RunConfig& cfg, Outputs& out);
json run_clt_compare(ConfigReader& top, const RunConfig& cfg, Outputs& out);
json run_action(ConfigReader& top, const RunConfig& cfg, Outputs& out);
json run_optimal_path(ConfigReader& top, const RunConfig& cfg, Outputs& out);
json run_quasipotential(ConfigReader& top, const RunConfig& cfg, Outputs& out);
json run_sde(ConfigReader& top, const RunConfig& cfg, Outputs& out);
json run_stationary(ConfigReader& top, const RunConfig& cfg, Outputs& out);
json run_containment(ConfigReader& top, const RunConfig& cfg, Outputs& out);
json run_table1(ConfigReader& top, const RunConfig& cfg, Outputs& out);

}  // namespace cw::detail
