#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cutofflab/io.hpp"

namespace cutofflab {

/// Everything a run depends on. Serializes to JSON; running a stored
/// config reproduces the output bytes.
struct RunConfig {
  std::string command;

  /// Chain source: a chain file, or a family member.
  std::string chain;
  std::string family;
  std::size_t size = 0;
  std::vector<std::size_t> sizes;
  std::optional<double> laziness;
  unsigned degree = 3;
  double density = 0.3;
  std::uint64_t seed = 0;
  std::string edges;

  /// Empty lists take the per-command defaults.
  std::vector<double> epsilons;
  std::vector<double> times;
  std::vector<double> shifts;
  std::vector<double> thetas;
  std::vector<double> window_epsilons;
  std::vector<std::size_t> origins;

  std::optional<double> heat_tol;
  std::optional<double> t_tol;
  std::optional<double> slack_tol;
  std::size_t dense_limit = kDefaultDenseLimit;

  /// 0 defers to CUTOFFLAB_THREADS, then hardware concurrency.
  std::size_t threads = 0;
  bool renormalize = false;
  bool strict = false;
  OutputFormat format = OutputFormat::Table;
  std::string output;
  std::string plot_data;
};

std::string config_to_json(const RunConfig& config);
/// Throws LabError(ParseError) on malformed input.
RunConfig config_from_json(const std::string& text);

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitCheck = 2, kExitNumerical = 3 };

/// Executes one configured run.
int run_config(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and runs them.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cutofflab
