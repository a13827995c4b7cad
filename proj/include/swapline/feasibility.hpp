#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swapline/accel_model.hpp"
#include "swapline/em_cost.hpp"
#include "swapline/flash_model.hpp"

namespace swapline {

// ---------------------------------------------------------------------------
// Fixed-total-data-rate operating points and their classification against
// the flash subsystem: can the per-window swap traffic meet its deadline and
// the power budget? Capacities of the accelerator SRAM and the storage
// controller SRAM pool into one cache; each kernel is sized against the pool.
// ---------------------------------------------------------------------------

struct SystemBudget {
    double total_data_rate_bits_per_s = 1;
    std::uint64_t sample_bits = 16;
    double power_budget_w = 1;
    double response_deadline_s = 3e-3;
    double sram_capacity_accel_bytes = 0;
    double sram_capacity_controller_bytes = 0;
    double controller_power_w = 0;

    double pooled_capacity_bytes() const {
        return sram_capacity_accel_bytes + sram_capacity_controller_bytes;
    }
    void validate() const;
    bool operator==(const SystemBudget&) const = default;
};

struct OperatingPoint {
    std::uint64_t channels = 1;
    double sampling_rate_hz = 1;
    bool operator==(const OperatingPoint&) const = default;
};

struct OperatingPointSet {
    std::vector<OperatingPoint> points;
    std::vector<std::uint64_t> degenerate_channels;  // dropped: rate under 1 Hz
};

// sampling_rate = total_data_rate / (channels * sample_bits), per channel
// count, preserving input order. Points that would sample below 1 Hz are
// excluded and reported in degenerate_channels.
OperatingPointSet operating_points(const SystemBudget& budget,
                                   const std::vector<std::uint64_t>& channels);

struct SwapTraffic {
    double write_bytes = 0;
    double read_bytes = 0;
    double window_s = 0;
};

// Per-window swap bytes for one kernel at one operating point. naive mode
// moves the raw overflow (writes scaled by dirty_fraction); em mode moves
// kernel_io_per_window counts times the block size.
SwapTraffic swap_traffic(const Kernel& kernel, const OperatingPoint& point,
                         double sram_capacity_bytes, const EmModel& em,
                         SwapMode mode);

enum class TimingVerdict { ok, latency_limited, bandwidth_limited };

struct FeasibilityReport {
    bool cacheable = false;
    TimingVerdict timing = TimingVerdict::ok;
    bool power_ok = true;
    bool overall = false;  // (cacheable or timing ok) and power ok
    // detail
    double swap_bytes_per_window = 0;  // write + read
    double window_s = 0;               // shortest kernel window
    double io_s = 0;                   // analytic program + read latency
    double achieved_bytes_per_s = 0;   // swap bytes / io time (0 when no I/O)
    double total_power_w = 0;
    bool operator==(const FeasibilityReport&) const = default;
};

enum class Verdict { cacheable, feasible, latency_limited, bandwidth_limited, power_limited };

const char* verdict_name(Verdict v);
const char* timing_name(TimingVerdict t);
// Timing failures take precedence; power_limited marks points that only the
// power budget blocks.
Verdict verdict_of(const FeasibilityReport& report);

// Classification steps, in order:
//  1. cacheable if every kernel's working set fits the pooled capacity.
//  2. else sum per-window swap bytes over kernels, turn them into page
//     counts, and serialize one program plan plus one read plan at the
//     parallelism the power share allows. Timing fails when that latency
//     exceeds min(window, response deadline); the failure is
//     bandwidth_limited when demanded bytes/deadline exceed the bus-limited
//     ceiling, latency_limited otherwise.
//  3. power: SRAM power on resident bytes plus per-window flash energy
//     (including idle chips) averaged over the window plus the controller
//     draw, against the budget.
FeasibilityReport classify(const OperatingPoint& point,
                           const std::vector<Kernel>& kernels,
                           const FlashDevice& flash, const SramModel& sram,
                           const SystemBudget& budget, const EmModel& em,
                           SwapMode mode);

struct MapRow {
    OperatingPoint point;
    FeasibilityReport report;
    bool error = false;
    std::string error_message;
};

struct FeasibilityMap {
    std::vector<MapRow> rows;
    SwapMode mode = SwapMode::naive;
    std::uint64_t scenario_fingerprint = 0;
};

// One report per point, input order preserved, per-point failures recorded
// in the row instead of aborting the sweep. Deterministic.
FeasibilityMap sweep(const std::vector<OperatingPoint>& points,
                     const std::vector<Kernel>& kernels, const FlashDevice& flash,
                     const SramModel& sram, const SystemBudget& budget,
                     const EmModel& em, SwapMode mode,
                     std::uint64_t scenario_fingerprint = 0);

// Smallest pooled SRAM capacity, in whole pages, that makes the point
// overall-feasible; nullopt when even caching the entire working set fails.
// Binary search; feasibility is monotone in capacity for any configuration
// where swapping a byte each window costs more energy than keeping it
// resident (the oracle tests pin this down).
std::optional<double> required_sram_bytes(const Kernel& kernel,
                                          const OperatingPoint& point,
                                          const FlashDevice& flash,
                                          const SramModel& sram,
                                          const SystemBudget& budget,
                                          const EmModel& em, SwapMode mode);

}  // namespace swapline
