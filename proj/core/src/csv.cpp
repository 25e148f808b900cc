#include "voltstab/csv.hpp"

#include <cstdio>

namespace voltstab::io {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string status_comment(const sim::SimulationOutcome& outcome) {
  if (outcome.status == sim::Status::Completed) return "# status=Completed";
  return "# status=TerminatedNoRoot t=" + format_number(outcome.terminated_at);
}

void write_trajectory_csv(std::ostream& out, const sim::SimulationOutcome& outcome,
                          sim::ModelKind model) {
  const bool dl = model == sim::ModelKind::DynamicLoad;
  out << (dl ? "t,v2,delta2,p2,q2,x,y\n" : "t,v2\n");
  for (const auto& s : outcome.samples) {
    out << format_number(s.t) << ',' << format_number(s.v2);
    if (dl) {
      out << ',' << format_number(s.delta2) << ',' << format_number(s.p2) << ','
          << format_number(s.q2) << ',' << format_number(s.x) << ','
          << format_number(s.y);
    }
    out << '\n';
  }
  out << status_comment(outcome) << '\n';
}

void write_pv_csv(std::ostream& out, std::span<const powerflow::PvSample> samples) {
  out << "p2,v_upper,v_lower\n";
  for (const auto& s : samples) {
    if (!s.present()) continue;
    out << format_number(s.p2) << ',' << format_number(*s.v_upper) << ','
        << format_number(*s.v_lower) << '\n';
  }
  out << "# status=Completed\n";
}

void write_region_csv(std::ostream& out, const dynload::RegionGrid& grid) {
  out << "x,y,valid\n";
  for (std::size_t i = 0; i < grid.xs.size(); ++i) {
    for (std::size_t j = 0; j < grid.ys.size(); ++j) {
      out << format_number(grid.xs[i]) << ',' << format_number(grid.ys[j]) << ','
          << (grid.at(i, j) == dynload::RegionClass::TwoRoots ? 1 : 0) << '\n';
    }
  }
  out << "# status=Completed\n";
}

}  // namespace voltstab::io
