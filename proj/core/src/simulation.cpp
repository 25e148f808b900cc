#include "voltstab/simulation.hpp"

#include <cmath>
#include <string>

#include "voltstab/errors.hpp"

namespace voltstab::sim {

namespace {

// Guards ceil() against representation error in t / dt.
constexpr double kStepSlack = 1e-9;

std::size_t step_index(double time, double dt) {
  return static_cast<std::size_t>(std::ceil(time / dt - kStepSlack));
}

bool target_fits(ModelKind model, DisturbanceTarget target) {
  switch (target) {
    case DisturbanceTarget::V1:
    case DisturbanceTarget::R:
      return true;
    case DisturbanceTarget::P0:
    case DisturbanceTarget::Q0:
    case DisturbanceTarget::X:
      return model == ModelKind::DynamicLoad;
    case DisturbanceTarget::C:
      return model == ModelKind::Benchmark;
  }
  return false;
}

void validate_params(const ModelParams& params) {
  if (params.model == ModelKind::DynamicLoad) {
    powerflow::require_equal_rx(params.network);
    dynload::validate(params.load);
  } else {
    tunnel_diode::validate(params.bench);
  }
}

struct Evaluation {
  StateVector<2> derivative{};
  double v2 = 0.0;
};

// Stage-1 evaluation; also yields the algebraic voltage for recording.
Evaluation evaluate(const ModelParams& params, RootPolicy policy,
                    const StateVector<2>& s) {
  if (params.model == ModelKind::Benchmark) {
    return {{tunnel_diode::benchmark_derivative(params.bench, s[0]), 0.0}, s[0]};
  }
  const LoadState state{s[0], s[1]};
  const double v2 = dynload::coupled_voltage(params.load, params.network, state, policy);
  const auto d = dynload::state_derivative(params.load, state, v2);
  return {{d.dx, d.dy}, v2};
}

TrajectorySample make_sample(const ModelParams& params, double t,
                             const StateVector<2>& s, double v2) {
  TrajectorySample sample;
  sample.t = t;
  sample.v2 = v2;
  if (params.model == ModelKind::Benchmark) {
    sample.p2 = v2 * (params.bench.v1 - v2) / params.bench.r;
    return sample;
  }
  const LoadState state{s[0], s[1]};
  const auto power = dynload::load_power(params.load, state, v2);
  sample.p2 = power.p2;
  sample.q2 = power.q2;
  sample.delta2 = powerflow::voltage_angle(params.network, power.p2, v2);
  sample.x = state.x;
  sample.y = state.y;
  return sample;
}

StateVector<2> initial_state(const Scenario& scenario, const ModelParams& params) {
  return std::visit(
      [&](const auto& init) -> StateVector<2> {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, LoadState>) {
          return {init.x, init.y};
        } else if constexpr (std::is_same_v<T, InitialVoltage>) {
          return {init.v2, 0.0};
        } else {
          const auto s = dynload::steady_state_at(params.load, init.v2);
          return {s.x, s.y};
        }
      },
      scenario.initial);
}

}  // namespace

std::string_view to_string(DisturbanceTarget target) {
  switch (target) {
    case DisturbanceTarget::P0: return "p0";
    case DisturbanceTarget::Q0: return "q0";
    case DisturbanceTarget::V1: return "v1";
    case DisturbanceTarget::R: return "r";
    case DisturbanceTarget::X: return "x";
    case DisturbanceTarget::C: return "c";
  }
  return "?";
}

DisturbanceTarget parse_target(std::string_view name) {
  for (auto t : {DisturbanceTarget::P0, DisturbanceTarget::Q0, DisturbanceTarget::V1,
                 DisturbanceTarget::R, DisturbanceTarget::X, DisturbanceTarget::C}) {
    if (to_string(t) == name) return t;
  }
  throw UnknownTarget("unknown disturbance target '" + std::string(name) +
                      "' (expected one of p0, q0, v1, r, x, c)");
}

ModelParams apply_disturbance(ModelParams params, const Disturbance& disturbance) {
  if (!target_fits(params.model, disturbance.target)) {
    throw UnknownTarget("disturbance target '" +
                        std::string(to_string(disturbance.target)) +
                        "' does not apply to the " +
                        (params.model == ModelKind::Benchmark ? "benchmark" : "dynamic_load") +
                        " model");
  }
  const bool bench = params.model == ModelKind::Benchmark;
  switch (disturbance.target) {
    case DisturbanceTarget::P0: params.load.p0 += disturbance.delta; break;
    case DisturbanceTarget::Q0: params.load.q0 += disturbance.delta; break;
    case DisturbanceTarget::X: params.network.x += disturbance.delta; break;
    case DisturbanceTarget::C: params.bench.c += disturbance.delta; break;
    case DisturbanceTarget::V1:
      (bench ? params.bench.v1 : params.network.v1) += disturbance.delta;
      break;
    case DisturbanceTarget::R:
      (bench ? params.bench.r : params.network.r) += disturbance.delta;
      break;
  }
  return params;
}

void validate(const Scenario& scenario) {
  if (!(scenario.duration > 0.0) || !std::isfinite(scenario.duration)) {
    throw ConfigError("simulation.duration must be positive and finite");
  }
  if (!(scenario.dt > 0.0) || !std::isfinite(scenario.dt)) {
    throw ConfigError("simulation.dt must be positive and finite");
  }
  if (scenario.dt > scenario.duration) {
    throw ConfigError("simulation.dt must not exceed simulation.duration");
  }
  if (scenario.output_stride == 0) {
    throw ConfigError("simulation.output_stride must be at least 1");
  }

  const bool dl = scenario.params.model == ModelKind::DynamicLoad;
  const bool init_ok = std::visit(
      [dl](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        return std::is_same_v<T, InitialVoltage> ? !dl : dl;
      },
      scenario.initial);
  if (!init_ok) {
    throw ConfigError(dl ? "dynamic_load scenarios need initial_x/initial_y or steady_state_at"
                         : "benchmark scenarios need initial_v2");
  }
  if (const auto* v = std::get_if<SteadyStateAt>(&scenario.initial); v && !(v->v2 >= 0.0)) {
    throw ConfigError("simulation.steady_state_at must be nonnegative");
  }

  ModelParams params = scenario.params;
  try {
    validate_params(params);
    double previous = 0.0;
    for (const auto& d : scenario.disturbances) {
      if (!(d.at_time >= 0.0) || !std::isfinite(d.delta)) {
        throw ConfigError("disturbance at_time must be >= 0 and delta finite");
      }
      if (d.at_time < previous) {
        throw ConfigError("disturbances must be sorted by at_time");
      }
      previous = d.at_time;
      params = apply_disturbance(params, d);
      validate_params(params);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

StateVector<2> dl_rhs(const ModelParams& params, RootPolicy policy,
                      const StateVector<2>& state) {
  const LoadState s{state[0], state[1]};
  const double v2 = dynload::coupled_voltage(params.load, params.network, s, policy);
  const auto d = dynload::state_derivative(params.load, s, v2);
  return {d.dx, d.dy};
}

StateVector<1> benchmark_rhs(const ModelParams& params, const StateVector<1>& state) {
  return {tunnel_diode::benchmark_derivative(params.bench, state[0])};
}

SimulationOutcome run_simulation(const Scenario& scenario) {
  validate(scenario);

  const double dt = scenario.dt;
  const std::size_t steps = step_index(scenario.duration, dt);
  std::vector<std::size_t> due;
  due.reserve(scenario.disturbances.size());
  for (const auto& d : scenario.disturbances) due.push_back(step_index(d.at_time, dt));

  ModelParams params = scenario.params;
  std::size_t next = 0;
  const auto apply_due = [&](ModelParams& p, std::size_t& cursor, std::size_t k) {
    while (cursor < due.size() && due[cursor] <= k) {
      p = apply_disturbance(p, scenario.disturbances[cursor]);
      ++cursor;
    }
  };
  apply_due(params, next, 0);

  StateVector<2> state;
  Evaluation eval;
  try {
    state = initial_state(scenario, params);
    eval = evaluate(params, scenario.policy, state);
  } catch (const Error& e) {
    throw ConfigError(std::string("initial state: ") + e.what());
  }

  SimulationOutcome outcome;
  outcome.samples.reserve(steps / scenario.output_stride + 2);
  outcome.samples.push_back(make_sample(params, 0.0, state, eval.v2));
  std::size_t last_recorded = 0;

  const bool dl = params.model == ModelKind::DynamicLoad;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    StateVector<2> next_state;
    ModelParams next_params = params;
    std::size_t next_cursor = next;
    Evaluation next_eval;
    try {
      if (dl) {
        next_state = rk4_step<2>(
            [&](double, const StateVector<2>& s) { return dl_rhs(params, scenario.policy, s); },
            state, t, dt, eval.derivative);
      } else {
        const auto v = rk4_step<1>(
            [&](double, const StateVector<1>& s) { return benchmark_rhs(params, s); },
            StateVector<1>{state[0]}, t, dt, StateVector<1>{eval.derivative[0]});
        next_state = {v[0], 0.0};
      }
      apply_due(next_params, next_cursor, k + 1);
      next_eval = evaluate(next_params, scenario.policy, next_state);
    } catch (const NoRealPositiveRoot&) {
      outcome.status = Status::TerminatedNoRoot;
      outcome.terminated_at = t;
      if (last_recorded != k) outcome.samples.push_back(make_sample(params, t, state, eval.v2));
      return outcome;
    }

    params = next_params;
    next = next_cursor;
    state = next_state;
    eval = next_eval;
    if ((k + 1) % scenario.output_stride == 0 || k + 1 == steps) {
      outcome.samples.push_back(
          make_sample(params, static_cast<double>(k + 1) * dt, state, eval.v2));
      last_recorded = k + 1;
    }
  }
  return outcome;
}

}  // namespace voltstab::sim
