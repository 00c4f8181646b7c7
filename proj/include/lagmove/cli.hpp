#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lagmove/diagnostics.hpp"
#include "lagmove/scenarios.hpp"

namespace lagmove::cli {

enum class Subcommand { Run, Sweep, Validate };

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitRuntime = 2,
  kExitValidation = 3,
};

struct CliConfig {
  Subcommand subcommand = Subcommand::Run;
  std::string scenario = "rotation";
  MoverKind mover;
  double dt = 0.05;
  std::vector<double> dts;
  std::optional<double> t_end;
  GradientMode gradient_mode = GradientMode::Analytic;
  double radius_factor = 1.0;
  std::string out;      // empty: stdout
  std::string summary;  // empty: no JSON summary
  int stride = 1;
  std::uint64_t seed = 0;
};

/// Parses argv (without the program name). Throws UsageError naming the
/// offending flag.
CliConfig parse_args(const std::vector<std::string>& argv);

std::string usage();

/// Scenario and run configuration described by a parsed command line.
Scenario scenario_for(const CliConfig& config);
RunConfig run_config_for(const CliConfig& config);

/// Diagnostics CSV: header, then one row per record, reals with 17
/// significant digits, LF line ends.
std::string format_csv(const std::vector<DiagnosticsRecord>& records);

/// Writes format_csv(records) to `path`. Throws StructuralError on an empty
/// record list (no file is created) and IoError on I/O failure.
void write_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path);

/// Parses a file written by write_csv.
std::vector<DiagnosticsRecord> read_csv(const std::string& path);

std::string format_sweep_csv(const std::vector<SweepRow>& rows);

/// Worker count for sweeps: hardware concurrency capped by LAGMOVE_THREADS.
int thread_budget();

/// Full command-line entry point; returns the process exit code.
int main_entry(const std::vector<std::string>& argv);

}  // namespace lagmove::cli
