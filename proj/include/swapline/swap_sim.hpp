#pragma once

#include <cstdint>
#include <vector>

#include "swapline/scenario.hpp"

namespace swapline {

// ---------------------------------------------------------------------------
// Deterministic discrete-event simulation of windowed swap traffic over the
// shared flash bus. The clock is integer nanoseconds and ties are broken by
// a monotone event sequence number, so identical inputs give bit-identical
// reports. Per window each kernel issues a program plan (write-out) followed
// by a read plan (prefetch of the next window); array operations on distinct
// parallel units overlap, bus transfers serialize first-come-first-served.
// Uncontended, a window's I/O latency equals the analytic op_latency
// composition up to nanosecond rounding.
// ---------------------------------------------------------------------------

struct OpRecord {
    std::uint32_t kernel = 0;
    std::uint64_t window = 0;
    FlashOp op = FlashOp::read;
    std::uint64_t pages = 0;
    std::uint64_t parallelism = 1;
    std::uint64_t chips_active = 1;
    std::uint64_t start_ns = 0;  // first activity requested
    std::uint64_t end_ns = 0;    // last element finished
    double intrinsic_j = 0;      // per-page op energy + bus energy
    double premium_j = 0;        // active-over-idle chip power over the span
};

struct WindowRecord {
    std::uint32_t kernel = 0;
    std::uint64_t window = 0;
    std::uint64_t start_ns = 0;
    std::uint64_t deadline_ns = 0;
    std::uint64_t complete_ns = 0;  // == horizon when still unfinished
    bool completed = false;
    bool missed = false;
    double energy_j = 0;  // ops of this window + chip idle floor over the window
};

struct SimReport {
    std::uint64_t windows_total = 0;
    std::uint64_t deadline_misses = 0;
    double worst_io_latency_s = 0;
    double mean_bus_utilization = 0;
    double energy_total_j = 0;
    double mean_power_w = 0;
    double peak_window_power_w = 0;
    bool operator==(const SimReport&) const = default;
};

struct SimResult {
    SimReport report;
    std::vector<OpRecord> ops;          // issue order; drives the energy sum
    std::vector<WindowRecord> windows;  // (kernel, window) order
};

// Simulate every window whose full period fits in the horizon. The horizon
// must cover at least 10 windows of the slowest kernel.
// energy_total = sum over ops of (intrinsic + premium) + all-chips idle
// power integrated over the horizon, summed in op order.
SimResult simulate(const Scenario& scenario, const OperatingPoint& point,
                   double horizon_s);
SimResult simulate(const Scenario& scenario, const OperatingPoint& point,
                   double horizon_s, SwapMode mode);

struct ValidationStats {
    std::uint64_t points = 0;
    std::uint64_t matches = 0;
    std::uint64_t borderline = 0;         // demand within 5% of a timing boundary
    std::uint64_t matches_off_boundary = 0;
    std::uint64_t points_off_boundary = 0;
    double agreement = 1.0;
    double agreement_off_boundary = 1.0;
    std::vector<std::uint64_t> disagreeing_channels;
};

// Re-simulate every map point and compare (misses == 0) against the map's
// timing verdict. The map must carry this scenario's fingerprint. Horizon is
// given in windows of the slowest kernel so the check scales across a grid
// whose window lengths span orders of magnitude.
ValidationStats validate_map(const FeasibilityMap& map, const Scenario& scenario,
                             std::uint64_t windows_per_point = 12);

}  // namespace swapline
