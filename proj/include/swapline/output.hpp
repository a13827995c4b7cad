#pragma once

#include <iosfwd>
#include <string>

#include "swapline/feasibility.hpp"
#include "swapline/swap_sim.hpp"

namespace swapline {

// Normative CSV header of a feasibility map:
//   channels,sampling_rate_hz,verdict,timing,power_ok,swap_bytes,window_s,io_s,watts
// power_ok prints 1/0; error rows carry verdict "error" and empty numerics.
void write_map_csv(std::ostream& out, const FeasibilityMap& map);

// gnuplot heat-map grid: "channels sampling_rate_hz verdict_code" per line,
// codes 0 cacheable, 1 feasible, 2 latency_limited, 3 bandwidth_limited,
// 4 power_limited, 5 error.
void write_map_gnuplot(std::ostream& out, const FeasibilityMap& map);

// The SimReport as one JSON object.
std::string sim_report_to_json(const SimReport& report);

// Per-window trace: kernel,window,start_s,deadline_s,complete_s,io_s,missed
void write_sim_trace_csv(std::ostream& out, const SimResult& result);

}  // namespace swapline
