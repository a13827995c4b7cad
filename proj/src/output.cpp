#include "swapline/output.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace swapline {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

int verdict_code(const MapRow& row) {
    if (row.error) return 5;
    switch (verdict_of(row.report)) {
        case Verdict::cacheable: return 0;
        case Verdict::feasible: return 1;
        case Verdict::latency_limited: return 2;
        case Verdict::bandwidth_limited: return 3;
        case Verdict::power_limited: return 4;
    }
    return 5;
}

}  // namespace

void write_map_csv(std::ostream& out, const FeasibilityMap& map) {
    out << "channels,sampling_rate_hz,verdict,timing,power_ok,swap_bytes,"
           "window_s,io_s,watts\n";
    for (const MapRow& row : map.rows) {
        out << row.point.channels << ',' << num(row.point.sampling_rate_hz) << ',';
        if (row.error) {
            out << "error,,,,,,\n";
            continue;
        }
        const FeasibilityReport& r = row.report;
        out << verdict_name(verdict_of(r)) << ',' << timing_name(r.timing) << ','
            << (r.power_ok ? 1 : 0) << ',' << num(r.swap_bytes_per_window) << ','
            << num(r.window_s) << ',' << num(r.io_s) << ',' << num(r.total_power_w)
            << '\n';
    }
}

void write_map_gnuplot(std::ostream& out, const FeasibilityMap& map) {
    out << "# channels sampling_rate_hz verdict_code\n";
    for (const MapRow& row : map.rows)
        out << row.point.channels << ' ' << num(row.point.sampling_rate_hz) << ' '
            << verdict_code(row) << '\n';
}

std::string sim_report_to_json(const SimReport& report) {
    nlohmann::json j;
    j["windows_total"] = report.windows_total;
    j["deadline_misses"] = report.deadline_misses;
    j["worst_io_latency_s"] = report.worst_io_latency_s;
    j["mean_bus_utilization"] = report.mean_bus_utilization;
    j["energy_total_j"] = report.energy_total_j;
    j["mean_power_w"] = report.mean_power_w;
    j["peak_window_power_w"] = report.peak_window_power_w;
    return j.dump(2) + "\n";
}

void write_sim_trace_csv(std::ostream& out, const SimResult& result) {
    out << "kernel,window,start_s,deadline_s,complete_s,io_s,missed\n";
    for (const WindowRecord& w : result.windows) {
        const double start = static_cast<double>(w.start_ns) * 1e-9;
        const double complete = static_cast<double>(w.complete_ns) * 1e-9;
        out << w.kernel << ',' << w.window << ',' << num(start) << ','
            << num(static_cast<double>(w.deadline_ns) * 1e-9) << ','
            << num(complete) << ',' << num(complete - start) << ','
            << (w.missed ? 1 : 0) << '\n';
    }
}

}  // namespace swapline
