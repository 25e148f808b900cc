#pragma once

// Fixed-step time-domain simulation of the recovery-load and tunnel-diode
// models with timed parameter steps.

#include <array>
#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "voltstab/dynload.hpp"
#include "voltstab/powerflow.hpp"
#include "voltstab/tunnel_diode.hpp"

namespace voltstab::sim {

using dynload::DlLoadParams;
using dynload::LoadState;
using dynload::RootPolicy;
using powerflow::NetworkParams;
using tunnel_diode::BenchmarkParams;

enum class ModelKind { DynamicLoad, Benchmark };

enum class DisturbanceTarget { P0, Q0, V1, R, X, C };

std::string_view to_string(DisturbanceTarget target);
/// Throws UnknownTarget for names other than p0, q0, v1, r, x, c.
DisturbanceTarget parse_target(std::string_view name);

/// Additive step applied to one parameter at `at_time`.
struct Disturbance {
  double at_time = 0.0;
  DisturbanceTarget target = DisturbanceTarget::P0;
  double delta = 0.0;

  friend bool operator==(const Disturbance&, const Disturbance&) = default;
};

/// Parameters of whichever model a scenario runs. Only the block matching
/// `model` is meaningful.
struct ModelParams {
  ModelKind model = ModelKind::DynamicLoad;
  NetworkParams network;
  DlLoadParams load;
  BenchmarkParams bench;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Returns `params` with the disturbance's target incremented by its delta.
/// Throws UnknownTarget if the target does not belong to params.model
/// (p0, q0, x are load-model only; c is benchmark only).
ModelParams apply_disturbance(ModelParams params, const Disturbance& disturbance);

struct InitialVoltage {
  double v2 = 0.0;
  friend bool operator==(const InitialVoltage&, const InitialVoltage&) = default;
};

/// Load state chosen so the load is stationary at `v2`.
struct SteadyStateAt {
  double v2 = 0.0;
  friend bool operator==(const SteadyStateAt&, const SteadyStateAt&) = default;
};

/// LoadState and SteadyStateAt apply to the load model, InitialVoltage to the
/// benchmark.
using InitialCondition = std::variant<LoadState, InitialVoltage, SteadyStateAt>;

struct Scenario {
  ModelParams params;
  RootPolicy policy = RootPolicy::Maximum;
  InitialCondition initial = SteadyStateAt{1.0};
  double duration = 1.0;
  double dt = 1e-3;
  std::size_t output_stride = 10;
  std::vector<Disturbance> disturbances;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ConfigError if the scenario is inconsistent: non-positive duration
/// or dt, dt > duration, unsorted disturbances, a target or initial
/// condition that does not fit the model, or parameters that become invalid
/// after any disturbance.
void validate(const Scenario& scenario);

/// Load-model fields (delta2, x, y) are zero for benchmark samples; there p2
/// is the DC power delivered to node 2 and q2 is zero.
struct TrajectorySample {
  double t = 0.0;
  double v2 = 0.0;
  double delta2 = 0.0;
  double p2 = 0.0;
  double q2 = 0.0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

enum class Status { Completed, TerminatedNoRoot };

struct SimulationOutcome {
  Status status = Status::Completed;
  /// Time of the last completed state when status is TerminatedNoRoot.
  double terminated_at = 0.0;
  std::vector<TrajectorySample> samples;
};

template <std::size_t N>
using StateVector = std::array<double, N>;

/// Classical fourth-order Runge-Kutta step with a precomputed first stage.
/// `f(t, state)` returns the state derivative; whatever it throws propagates.
template <std::size_t N, class F>
StateVector<N> rk4_step(F&& f, const StateVector<N>& state, double t, double dt,
                        const StateVector<N>& k1) {
  const auto axpy = [](const StateVector<N>& s, double h, const StateVector<N>& k) {
    StateVector<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = s[i] + h * k[i];
    return out;
  };
  const StateVector<N> k2 = f(t + 0.5 * dt, axpy(state, 0.5 * dt, k1));
  const StateVector<N> k3 = f(t + 0.5 * dt, axpy(state, 0.5 * dt, k2));
  const StateVector<N> k4 = f(t + dt, axpy(state, dt, k3));
  StateVector<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

template <std::size_t N, class F>
StateVector<N> rk4_step(F&& f, const StateVector<N>& state, double t, double dt) {
  return rk4_step<N>(f, state, t, dt, f(t, state));
}

/// Load-model right-hand side: re-solves the coupled voltage at the given
/// state under `policy`. Throws NoRealPositiveRoot.
StateVector<2> dl_rhs(const ModelParams& params, RootPolicy policy,
                      const StateVector<2>& state);

StateVector<1> benchmark_rhs(const ModelParams& params, const StateVector<1>& state);

/// Runs the scenario from t = 0 to duration. Disturbances take effect at the
/// first step boundary at or after their time. A sample is recorded every
/// output_stride steps, plus the initial and final states. If the coupled
/// voltage cannot be solved at any RK stage or at the end state of a step,
/// that step is discarded and the run ends with TerminatedNoRoot.
///
/// Throws ConfigError for invalid scenarios, including an initial load state
/// with no real positive voltage.
SimulationOutcome run_simulation(const Scenario& scenario);

}  // namespace voltstab::sim
