#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace conespec::cli {

struct RunConfig {
  std::string command;
  int dim = 2;
  std::string beta_text = "0.5pi";
  double beta = 0.0;
  double eps = 0.0;
  int count = 5;
  std::optional<double> l;
  std::optional<double> nu;
  int k = 1;
  bool raw_mode = false;
  int nodes = 0;  // 0: command default
  int angular_nodes = 128;
  bool richardson = false;
  bool polar = false;
  int points = 8;
  double eps_max = 0.05;
  std::optional<double> synthetic_power;
  std::int64_t samples = 100000;
  std::uint64_t seed = 12345;
  double tol_match = 0.02;
  std::string format = "json";
  std::string out_file;
};

/// Accepts radians or multiples of pi: "pi", "0.75pi", "3pi/4", "pi/2".
double parse_beta(std::string_view text);

/// Rebuilds a config from the "command" and "inputs" fields of a JSON payload.
RunConfig config_from_payload(const nlohmann::json& payload);

/// Argument vector (without program name) that reproduces `cfg`.
std::vector<std::string> to_args(const RunConfig& cfg);

/// Runs one command. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conespec::cli
