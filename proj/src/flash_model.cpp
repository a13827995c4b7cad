#include "swapline/flash_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace swapline {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
    return a == 0 ? 0 : (a - 1) / b + 1;
}

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

}  // namespace

std::uint64_t FlashGeometry::total_capacity_bytes() const {
    return chips * dies_per_chip * planes_per_die * blocks_per_plane *
           pages_per_block * page_size_bytes;
}

std::uint64_t FlashGeometry::plane_units() const {
    return chips * dies_per_chip * planes_per_die;
}

void FlashGeometry::validate() const {
    if (chips < 1) fail("flash.geometry.chips must be >= 1");
    if (dies_per_chip < 1) fail("flash.geometry.dies_per_chip must be >= 1");
    if (planes_per_die < 1) fail("flash.geometry.planes_per_die must be >= 1");
    if (blocks_per_plane < 1) fail("flash.geometry.blocks_per_plane must be >= 1");
    if (pages_per_block < 1) fail("flash.geometry.pages_per_block must be >= 1");
    if (page_size_bytes < 1) fail("flash.geometry.page_size_bytes must be >= 1");
}

void FlashTiming::validate() const {
    if (t_read_s < 0) fail("flash.timing.t_read_us must be >= 0");
    if (t_program_s < 0) fail("flash.timing.t_program_us must be >= 0");
    if (t_erase_s < 0) fail("flash.timing.t_erase_ms must be >= 0");
    if (!(bus_bytes_per_s > 0)) fail("flash.timing.bus_mb_per_s must be > 0");
    if (t_cmd_s < 0) fail("flash.timing.t_cmd_us must be >= 0");
}

void FlashPower::validate() const {
    if (e_read_page_j < 0) fail("flash.power.e_read_page_uj must be >= 0");
    if (e_program_page_j < 0) fail("flash.power.e_program_page_uj must be >= 0");
    if (e_erase_block_j < 0) fail("flash.power.e_erase_block_uj must be >= 0");
    if (e_bus_j_per_byte < 0) fail("flash.power.e_bus_pj_per_byte must be >= 0");
    if (p_chip_active_w < 0) fail("flash.power.p_chip_active_mw must be >= 0");
    if (p_chip_idle_w < 0) fail("flash.power.p_chip_idle_mw must be >= 0");
    if (p_chip_idle_w > p_chip_active_w)
        fail("flash.power.p_chip_idle_mw must not exceed p_chip_active_mw");
}

void FlashDevice::validate() const {
    geometry.validate();
    timing.validate();
    power.validate();
}

void IoPlan::validate(const FlashGeometry& geometry) const {
    if (chips_active < 1 || chips_active > geometry.chips)
        fail("plan.chips_active must be in [1, chips]");
    const std::uint64_t units =
        chips_active * geometry.dies_per_chip * geometry.planes_per_die;
    if (parallelism < 1 || parallelism > units)
        fail("plan.parallelism must be in [1, chips_active*dies*planes]");
}

double transfer_time_s(std::uint64_t bytes, const FlashTiming& timing,
                       std::uint64_t page_size_bytes) {
    if (bytes == 0) return 0.0;
    if (page_size_bytes == 0) fail("page_size_bytes must be >= 1");
    const double pages = static_cast<double>(ceil_div(bytes, page_size_bytes));
    return static_cast<double>(bytes) / timing.bus_bytes_per_s + timing.t_cmd_s * pages;
}

double page_transfer_time_s(const FlashGeometry& geometry, const FlashTiming& timing) {
    return transfer_time_s(geometry.page_size_bytes, timing, geometry.page_size_bytes);
}

double op_latency_s(const IoPlan& plan, const FlashGeometry& geometry,
                    const FlashTiming& timing) {
    plan.validate(geometry);
    if (plan.n_units == 0) return 0.0;
    const double batches =
        static_cast<double>(ceil_div(plan.n_units, plan.parallelism));
    const double units = static_cast<double>(plan.n_units);
    const double t_x = page_transfer_time_s(geometry, timing);
    switch (plan.op) {
        case FlashOp::read:
            return batches * timing.t_read_s + units * t_x;
        case FlashOp::program:
            return units * t_x + batches * timing.t_program_s;
        case FlashOp::erase:
            return batches * timing.t_erase_s;
    }
    fail("plan.op is not a known operation");
}

double op_energy_j(const IoPlan& plan, double duration_s, const FlashDevice& device) {
    plan.validate(device.geometry);
    const double latency = op_latency_s(plan, device.geometry, device.timing);
    // slack covers integer-nanosecond rounding by the event simulator
    if (duration_s < latency * (1.0 - 1e-5))
        fail("op_energy duration must cover the plan's latency");
    const double units = static_cast<double>(plan.n_units);
    double e_op = 0.0;
    double moved_bytes = 0.0;
    switch (plan.op) {
        case FlashOp::read:
            e_op = device.power.e_read_page_j;
            moved_bytes = units * static_cast<double>(device.geometry.page_size_bytes);
            break;
        case FlashOp::program:
            e_op = device.power.e_program_page_j;
            moved_bytes = units * static_cast<double>(device.geometry.page_size_bytes);
            break;
        case FlashOp::erase:
            e_op = device.power.e_erase_block_j;
            moved_bytes = 0.0;
            break;
    }
    const double active = static_cast<double>(plan.chips_active);
    const double idle = static_cast<double>(device.geometry.chips - plan.chips_active);
    return units * e_op + moved_bytes * device.power.e_bus_j_per_byte +
           duration_s * (active * device.power.p_chip_active_w +
                         idle * device.power.p_chip_idle_w);
}

double sustained_bandwidth_bytes_per_s(FlashOp op, std::uint64_t parallelism,
                                       const FlashGeometry& geometry,
                                       const FlashTiming& timing) {
    if (parallelism < 1) fail("parallelism must be >= 1");
    double t_array = 0.0;
    switch (op) {
        case FlashOp::read: t_array = timing.t_read_s; break;
        case FlashOp::program: t_array = timing.t_program_s; break;
        case FlashOp::erase: fail("sustained_bandwidth is defined for read/program");
    }
    const double t_x = page_transfer_time_s(geometry, timing);
    return static_cast<double>(geometry.page_size_bytes) /
           (t_array / static_cast<double>(parallelism) + t_x);
}

double bus_ceiling_bytes_per_s(const FlashGeometry& geometry, const FlashTiming& timing) {
    return static_cast<double>(geometry.page_size_bytes) /
           page_transfer_time_s(geometry, timing);
}

std::uint64_t max_parallel_chips(double power_share_w, const FlashGeometry& geometry,
                                 const FlashPower& power) {
    if (power_share_w < 0) fail("power_share_w must be >= 0");
    const double chips = static_cast<double>(geometry.chips);
    std::uint64_t best = 0;
    for (std::uint64_t k = 1; k <= geometry.chips; ++k) {
        const double draw = static_cast<double>(k) * power.p_chip_active_w +
                            (chips - static_cast<double>(k)) * power.p_chip_idle_w;
        if (draw <= power_share_w) best = k;
    }
    return best;
}

}  // namespace swapline
