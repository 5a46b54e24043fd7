#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gramlab {

enum class Command { zeros, gram, classify, moments, report };
enum class OutputFormat { csv, json };

struct JobConfig {
  Command command = Command::zeros;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::optional<double> step;
  std::optional<double> h;
  std::optional<int> m;
  /// h = c0 / log(t_lo) when --h is absent.
  double c0 = 12.0;
  std::string cache_path = "gramlab-cache";
  OutputFormat format = OutputFormat::csv;
  /// 0 keeps the OpenMP default.
  int threads = 0;
  /// Output file; empty writes to stdout.
  std::string out_path;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitArgument = 2,
  kExitAudit = 3,
  kExitCache = 4,
};

/// Parses argv (program name first). Throws ArgumentError on bad input.
/// Returns nullopt after printing help to out.
std::optional<JobConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Runs one job. Exceptions propagate; see run_main for the exit code map.
void run(const JobConfig& config, std::ostream& out, std::ostream& log);

/// parse_args + run with errors mapped to exit codes and reported on err.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gramlab
