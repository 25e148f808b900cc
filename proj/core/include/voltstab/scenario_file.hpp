#pragma once

// Scenario files: a TOML-style document with sections
//
//   [model]        kind = "dynamic_load" | "benchmark", policy = "maximum" | "minimum"
//   [network]      v1, r, x                          (dynamic_load)
//   [load]         p0, q0, a, b, tp, tq, pt_coeffs, qt_coeffs
//   [benchmark]    v1, r, c, h_coeffs                (benchmark)
//   [simulation]   duration, dt, output_stride, and one initial condition:
//                  initial_v2 | initial_x + initial_y | steady_state_at
//   [[disturbance]] at_time, target, delta            (repeatable)
//
// Unknown sections or keys, duplicates and type mismatches are errors that
// carry the offending line number. See scenarios/SCHEMA.md.

#include <filesystem>
#include <string>
#include <string_view>

#include "voltstab/simulation.hpp"

namespace voltstab::io {

/// Throws ConfigError (with line number where one applies).
sim::Scenario parse_scenario(std::string_view text);

/// Reads and parses a file. Throws ConfigError, including for I/O failures.
sim::Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const sim::Scenario& scenario);

}  // namespace voltstab::io
