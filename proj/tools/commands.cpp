#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "voltstab/csv.hpp"
#include "voltstab/dynload.hpp"
#include "voltstab/errors.hpp"
#include "voltstab/powerflow.hpp"
#include "voltstab/scenario_file.hpp"
#include "voltstab/simulation.hpp"
#include "voltstab/tunnel_diode.hpp"

namespace voltstab::cli {

namespace {

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

sim::Scenario load(const std::filesystem::path& path, const Overrides& overrides) {
  sim::Scenario scenario = io::load_scenario(path);
  if (overrides.dt) scenario.dt = *overrides.dt;
  if (overrides.duration) scenario.duration = *overrides.duration;
  if (overrides.dt || overrides.duration) sim::validate(scenario);
  return scenario;
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open output file '" + path.string() + "'");
  writer(out);
  out.flush();
  if (!out) throw OutputError("failed writing '" + path.string() + "'");
}

// Runs a command body and maps exceptions onto exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InvalidNetwork& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

std::string six_digits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string_view stability_name(tunnel_diode::Stability s) {
  switch (s) {
    case tunnel_diode::Stability::Stable: return "Stable";
    case tunnel_diode::Stability::Unstable: return "Unstable";
    case tunnel_diode::Stability::Marginal: return "Marginal";
  }
  return "?";
}

void require_dynamic_load(const sim::Scenario& scenario, std::string_view command) {
  if (scenario.params.model != sim::ModelKind::DynamicLoad) {
    throw ConfigError(std::string(command) + " needs a dynamic_load scenario");
  }
}

}  // namespace

int cmd_simulate(const std::filesystem::path& scenario_path,
                 const std::filesystem::path& output_path, const Overrides& overrides,
                 std::ostream& err) {
  return guarded(err, [&] {
    const auto scenario = load(scenario_path, overrides);
    const auto outcome = sim::run_simulation(scenario);
    write_file(output_path, [&](std::ostream& out) {
      io::write_trajectory_csv(out, outcome, scenario.params.model);
    });
    if (outcome.status == sim::Status::TerminatedNoRoot) {
      err << "simulation terminated at t=" << io::format_number(outcome.terminated_at)
          << ": no real positive voltage solution\n";
      return static_cast<int>(kExitTerminatedNoRoot);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_equilibria(const std::filesystem::path& scenario_path, const Overrides& overrides,
                   std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto scenario = load(scenario_path, overrides);
    if (scenario.params.model == sim::ModelKind::DynamicLoad) {
      const auto eq = dynload::dl_equilibria(scenario.params.load, scenario.params.network);
      out << "v2\n";
      for (double v : eq) out << six_digits(v) << '\n';
    } else {
      const auto eq = tunnel_diode::benchmark_equilibria(scenario.params.bench);
      out << "v2          stability\n";
      for (const auto& e : eq) {
        std::string v = six_digits(e.v_eq);
        v.resize(std::max<std::size_t>(v.size() + 1, 12), ' ');
        out << v << stability_name(e.classification) << '\n';
      }
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_pv_curve(const std::filesystem::path& scenario_path, const PvCurveOptions& options,
                 const std::filesystem::path& output_path, const Overrides& overrides,
                 std::ostream& err) {
  return guarded(err, [&] {
    if (options.n < 2) throw ConfigError("pv-curve: -n must be at least 2");
    if (!(options.p_max >= 0.0)) throw ConfigError("pv-curve: --p-max must be nonnegative");
    const auto scenario = load(scenario_path, overrides);
    require_dynamic_load(scenario, "pv-curve");
    std::vector<double> p2(options.n);
    for (std::size_t i = 0; i < options.n; ++i) {
      p2[i] = options.p_max * static_cast<double>(i) / static_cast<double>(options.n - 1);
    }
    const auto curve = powerflow::pv_curve(scenario.params.network, options.k, p2);
    write_file(output_path, [&](std::ostream& out) { io::write_pv_csv(out, curve); });
    return static_cast<int>(kExitOk);
  });
}

int cmd_region_scan(const std::filesystem::path& scenario_path,
                    const RegionScanOptions& options,
                    const std::filesystem::path& output_path, const Overrides& overrides,
                    std::ostream& err) {
  return guarded(err, [&] {
    if (options.resolution < 2) throw ConfigError("region-scan: --resolution must be >= 2");
    if (!(options.x_max > 0.0) || !(options.y_max > 0.0)) {
      throw ConfigError("region-scan: --x-max and --y-max must be positive");
    }
    const auto scenario = load(scenario_path, overrides);
    require_dynamic_load(scenario, "region-scan");
    const auto grid = dynload::valid_region_scan(
        scenario.params.load, scenario.params.network, {0.0, options.x_max},
        {0.0, options.y_max}, options.resolution, options.jobs);
    write_file(output_path, [&](std::ostream& out) { io::write_region_csv(out, grid); });
    return static_cast<int>(kExitOk);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voltage stability toolkit for a two-node circuit with load dynamics"};
  app.require_subcommand(1);

  Overrides overrides;
  double dt = 0.0;
  double duration = 0.0;
  auto* dt_opt = app.add_option("--dt", dt, "Override the scenario timestep (s)");
  auto* duration_opt =
      app.add_option("--duration", duration, "Override the scenario duration (s)");
  std::size_t jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for region scans")
      ->check(CLI::PositiveNumber);

  std::string scenario_path;
  std::string output_path;

  auto* simulate = app.add_subcommand("simulate", "Run a time-domain simulation");
  simulate->add_option("file", scenario_path, "Scenario file")->required();
  simulate->add_option("-o,--output", output_path, "Output CSV")->required();

  auto* equilibria = app.add_subcommand("equilibria", "List equilibrium voltages");
  equilibria->add_option("file", scenario_path, "Scenario file")->required();

  PvCurveOptions pv;
  auto* pv_cmd = app.add_subcommand("pv-curve", "Sample the P-V curve at fixed Q/P ratio");
  pv_cmd->add_option("file", scenario_path, "Scenario file")->required();
  pv_cmd->add_option("--k", pv.k, "Reactive/real power ratio Q2/P2")->required();
  pv_cmd->add_option("--p-max", pv.p_max, "Largest P2 sample")->required();
  pv_cmd->add_option("-n", pv.n, "Number of P2 samples")->required();
  pv_cmd->add_option("-o,--output", output_path, "Output CSV")->required();

  RegionScanOptions region;
  auto* region_cmd =
      app.add_subcommand("region-scan", "Classify load states by admissible voltage count");
  region_cmd->add_option("file", scenario_path, "Scenario file")->required();
  region_cmd->add_option("--x-max", region.x_max, "Upper bound of the x axis")
      ->capture_default_str();
  region_cmd->add_option("--y-max", region.y_max, "Upper bound of the y axis")
      ->capture_default_str();
  region_cmd->add_option("--resolution", region.resolution, "Grid points per axis")
      ->capture_default_str();
  region_cmd->add_option("-o,--output", output_path, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitConfigError);
  }

  if (*dt_opt) overrides.dt = dt;
  if (*duration_opt) overrides.duration = duration;
  region.jobs = jobs;

  if (*simulate) return cmd_simulate(scenario_path, output_path, overrides, err);
  if (*equilibria) return cmd_equilibria(scenario_path, overrides, out, err);
  if (*pv_cmd) return cmd_pv_curve(scenario_path, pv, output_path, overrides, err);
  return cmd_region_scan(scenario_path, region, output_path, overrides, err);
}

}  // namespace voltstab::cli
