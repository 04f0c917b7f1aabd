#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sis/data_gen.hpp"
#include "sis/exp_family.hpp"

namespace sis::cli {

enum class Subcommand { screen, simulate, bench, eigen, tstat };

enum class MethodChoice { mmle, mlr, both };

enum class OutputFormat { csv, jsonl };

/// Fully resolved invocation. Built by parse_command_line; the cmd_*
/// functions consume it.
struct RunConfig {
  Subcommand subcommand = Subcommand::screen;
  std::filesystem::path input;
  /// Empty means stdout for screen; required for simulate.
  std::filesystem::path out;
  Family family = Family::gaussian;
  MethodChoice method = MethodChoice::mmle;
  std::string response;
  std::optional<double> threshold;
  std::optional<std::size_t> top_d;
  bool standardize = true;
  OutputFormat format = OutputFormat::csv;

  SimSetting setting;
  std::optional<std::string> table;
  bool restandardize = false;
  std::size_t n_reps = 200;
  std::uint64_t base_seed = 1;
  int workers = 0;
  bool timing = true;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitArgument = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

/// Parses argv into a RunConfig. Returns std::nullopt after printing help
/// (exit 0). Throws ArgumentError for bad flags or values.
std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args,
                                            std::ostream& out);

int cmd_screen(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eigen(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_tstat(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses, dispatches and maps errors to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Path of the JSON sidecar written next to `path`: stem + suffix.
std::filesystem::path sidecar_path(const std::filesystem::path& path,
                                   std::string_view suffix);

}  // namespace sis::cli
