#pragma once

#include <ostream>
#include <span>
#include <string>

#include "voltstab/dynload.hpp"
#include "voltstab/powerflow.hpp"
#include "voltstab/simulation.hpp"

namespace voltstab::io {

/// 12 significant digits, shortest form ("%.12g").
std::string format_number(double value);

/// "# status=Completed" or "# status=TerminatedNoRoot t=<time>".
std::string status_comment(const sim::SimulationOutcome& outcome);

/// Columns t,v2,delta2,p2,q2,x,y for the load model; t,v2 for the benchmark.
void write_trajectory_csv(std::ostream& out, const sim::SimulationOutcome& outcome,
                          sim::ModelKind model);

/// Columns p2,v_upper,v_lower; samples past the nose are omitted.
void write_pv_csv(std::ostream& out, std::span<const powerflow::PvSample> samples);

/// Columns x,y,valid with valid = 1 for TwoRoots.
void write_region_csv(std::ostream& out, const dynload::RegionGrid& grid);

}  // namespace voltstab::io
