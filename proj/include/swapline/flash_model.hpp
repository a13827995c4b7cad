#pragma once

#include <cstdint>

namespace swapline {

// ---------------------------------------------------------------------------
// Parametric NAND-Flash subsystem: chip/die/plane/block/page hierarchy on a
// single shared serial bus. All operations are pure functions of their
// arguments; latency uses a non-overlapped two-phase model (array op, then
// bus transfer), which is a conservative upper bound the event simulator
// reproduces exactly in the uncontended case.
// ---------------------------------------------------------------------------

struct FlashGeometry {
    std::uint64_t chips = 1;
    std::uint64_t dies_per_chip = 1;
    std::uint64_t planes_per_die = 1;
    std::uint64_t blocks_per_plane = 1;
    std::uint64_t pages_per_block = 1;
    std::uint64_t page_size_bytes = 1;

    std::uint64_t total_capacity_bytes() const;
    // maximum plane-level parallel units (chips * dies * planes)
    std::uint64_t plane_units() const;
    void validate() const;  // throws std::invalid_argument naming the field
    bool operator==(const FlashGeometry&) const = default;
};

struct FlashTiming {
    double t_read_s = 0;           // array read of one page into the register
    double t_program_s = 0;        // program one page from the register
    double t_erase_s = 0;          // erase one block
    double bus_bytes_per_s = 1;    // shared serial bus rate
    double t_cmd_s = 0;            // per-page command/addressing overhead

    void validate() const;
    bool operator==(const FlashTiming&) const = default;
};

struct FlashPower {
    double e_read_page_j = 0;
    double e_program_page_j = 0;
    double e_erase_block_j = 0;
    double e_bus_j_per_byte = 0;
    double p_chip_active_w = 0;
    double p_chip_idle_w = 0;      // must not exceed p_chip_active_w

    void validate() const;
    bool operator==(const FlashPower&) const = default;
};

struct FlashDevice {
    FlashGeometry geometry;
    FlashTiming timing;
    FlashPower power;

    void validate() const;
    bool operator==(const FlashDevice&) const = default;
};

enum class FlashOp { read, program, erase };

// One batched operation: n_units pages (read/program) or blocks (erase),
// issued across `parallelism` concurrently operating plane-level units on
// `chips_active` powered chips.
struct IoPlan {
    FlashOp op = FlashOp::read;
    std::uint64_t n_units = 0;
    std::uint64_t parallelism = 1;
    std::uint64_t chips_active = 1;

    void validate(const FlashGeometry& geometry) const;
    bool operator==(const IoPlan&) const = default;
};

// Bus time to move `bytes`: bytes/bus_rate plus the per-page command
// overhead on ceil(bytes/page) pages. Zero bytes move for free.
double transfer_time_s(std::uint64_t bytes, const FlashTiming& timing,
                       std::uint64_t page_size_bytes);

// Bus time of exactly one page (the t_x used throughout the latency model).
double page_transfer_time_s(const FlashGeometry& geometry, const FlashTiming& timing);

// Non-overlapped latency of a plan:
//   read    ceil(P/k)*t_read + P*t_x
//   program P*t_x + ceil(P/k)*t_program
//   erase   ceil(P/k)*t_erase            (no data on the bus)
double op_latency_s(const IoPlan& plan, const FlashGeometry& geometry,
                    const FlashTiming& timing);

// Energy of a plan held over `duration_s` (must cover the plan's latency):
// per-unit operation energy, bus energy on moved bytes, plus chip power
// split between active and idle chips for the whole duration.
double op_energy_j(const IoPlan& plan, double duration_s, const FlashDevice& device);

// Steady-state throughput of an endless stream of page ops at parallelism k:
// page_size / (t_array/k + t_x). Read and program differ whenever their
// array latencies do; this is where the write asymmetry shows up.
double sustained_bandwidth_bytes_per_s(FlashOp op, std::uint64_t parallelism,
                                       const FlashGeometry& geometry,
                                       const FlashTiming& timing);

// Bus-limited ceiling page_size/t_x: the k -> infinity limit of
// sustained_bandwidth for either op.
double bus_ceiling_bytes_per_s(const FlashGeometry& geometry, const FlashTiming& timing);

// Largest number of chips that can be held active inside a power share,
// with the remaining chips idling. Zero if even one active chip is too much.
std::uint64_t max_parallel_chips(double power_share_w, const FlashGeometry& geometry,
                                 const FlashPower& power);

}  // namespace swapline
