#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>

namespace voltstab::cli {

/// Process exit codes. Every command maps each outcome onto exactly one.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,           ///< I/O or unexpected internal error
  kExitConfigError = 2,       ///< bad arguments or invalid scenario
  kExitTerminatedNoRoot = 3,  ///< simulation lost its real positive voltage
};

/// Global --dt / --duration overrides applied after parsing a scenario.
struct Overrides {
  std::optional<double> dt;
  std::optional<double> duration;
};

int cmd_simulate(const std::filesystem::path& scenario_path,
                 const std::filesystem::path& output_path, const Overrides& overrides,
                 std::ostream& err);

/// Prints equilibrium voltages (and stability for the benchmark) to `out`.
int cmd_equilibria(const std::filesystem::path& scenario_path, const Overrides& overrides,
                   std::ostream& out, std::ostream& err);

struct PvCurveOptions {
  double k = 1.0;
  double p_max = 1.0;
  std::size_t n = 101;
};

int cmd_pv_curve(const std::filesystem::path& scenario_path, const PvCurveOptions& options,
                 const std::filesystem::path& output_path, const Overrides& overrides,
                 std::ostream& err);

struct RegionScanOptions {
  double x_max = 3.0;
  double y_max = 3.0;
  std::size_t resolution = 101;
  std::size_t jobs = 1;
};

int cmd_region_scan(const std::filesystem::path& scenario_path,
                    const RegionScanOptions& options,
                    const std::filesystem::path& output_path, const Overrides& overrides,
                    std::ostream& err);

/// Parses the command line and dispatches to one of the commands above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace voltstab::cli
