#include "swapline/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swapline {

namespace {

std::uint64_t ceil_pages(double bytes, double page_bytes) {
    if (bytes <= 0) return 0;
    return static_cast<std::uint64_t>(std::ceil(bytes / page_bytes));
}

}  // namespace

void SystemBudget::validate() const {
    if (!(total_data_rate_bits_per_s > 0))
        throw std::invalid_argument("budget.total_data_rate_mbps must be > 0");
    if (sample_bits < 1)
        throw std::invalid_argument("budget.sample_bits must be >= 1");
    if (!(power_budget_w > 0))
        throw std::invalid_argument("budget.power_budget_mw must be > 0");
    if (!(response_deadline_s > 0))
        throw std::invalid_argument("budget.response_deadline_ms must be > 0");
    if (sram_capacity_accel_bytes < 0)
        throw std::invalid_argument("sram.capacity_accel_bytes must be >= 0");
    if (sram_capacity_controller_bytes < 0)
        throw std::invalid_argument("sram.capacity_controller_bytes must be >= 0");
    if (controller_power_w < 0)
        throw std::invalid_argument("sram.controller_power_mw must be >= 0");
}

OperatingPointSet operating_points(const SystemBudget& budget,
                                   const std::vector<std::uint64_t>& channels) {
    budget.validate();
    OperatingPointSet out;
    out.points.reserve(channels.size());
    for (std::uint64_t c : channels) {
        if (c < 1) throw std::invalid_argument("channel counts must be >= 1");
        const double rate = budget.total_data_rate_bits_per_s /
                            (static_cast<double>(c) *
                             static_cast<double>(budget.sample_bits));
        if (rate < 1.0) {
            out.degenerate_channels.push_back(c);
            continue;
        }
        out.points.push_back(OperatingPoint{c, rate});
    }
    return out;
}

SwapTraffic swap_traffic(const Kernel& kernel, const OperatingPoint& point,
                         double sram_capacity_bytes, const EmModel& em,
                         SwapMode mode) {
    SwapTraffic t;
    t.window_s = static_cast<double>(kernel.window_samples) / point.sampling_rate_hz;
    const double ws = working_set_bytes(kernel, point.channels);
    if (ws <= sram_capacity_bytes) return t;
    if (mode == SwapMode::naive) {
        const double overflow = ws - sram_capacity_bytes;
        t.write_bytes = kernel.dirty_fraction * overflow;
        t.read_bytes = overflow;
    } else {
        const IoCount io =
            kernel_io_per_window(kernel, point.channels, sram_capacity_bytes, em, mode);
        const double block_bytes = static_cast<double>(em.b_words) *
                                   static_cast<double>(em.word_bytes);
        t.write_bytes = static_cast<double>(io.writes) * block_bytes;
        t.read_bytes = static_cast<double>(io.reads) * block_bytes;
    }
    return t;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::cacheable: return "cacheable";
        case Verdict::feasible: return "feasible";
        case Verdict::latency_limited: return "latency_limited";
        case Verdict::bandwidth_limited: return "bandwidth_limited";
        case Verdict::power_limited: return "power_limited";
    }
    return "power_limited";
}

const char* timing_name(TimingVerdict t) {
    switch (t) {
        case TimingVerdict::ok: return "ok";
        case TimingVerdict::latency_limited: return "latency_limited";
        case TimingVerdict::bandwidth_limited: return "bandwidth_limited";
    }
    return "ok";
}

Verdict verdict_of(const FeasibilityReport& report) {
    if (report.timing == TimingVerdict::latency_limited)
        return Verdict::latency_limited;
    if (report.timing == TimingVerdict::bandwidth_limited)
        return Verdict::bandwidth_limited;
    if (!report.power_ok) return Verdict::power_limited;
    return report.cacheable ? Verdict::cacheable : Verdict::feasible;
}

FeasibilityReport classify(const OperatingPoint& point,
                           const std::vector<Kernel>& kernels,
                           const FlashDevice& flash, const SramModel& sram,
                           const SystemBudget& budget, const EmModel& em,
                           SwapMode mode) {
    if (kernels.empty())
        throw std::invalid_argument("classify requires at least one kernel");
    if (flash.geometry.page_size_bytes == 0)
        throw std::invalid_argument("flash.geometry.page_size_bytes must be >= 1");

    FeasibilityReport rep;
    const double capacity = budget.pooled_capacity_bytes();
    const double page_bytes = static_cast<double>(flash.geometry.page_size_bytes);

    // 1. cache check and per-window traffic
    rep.cacheable = true;
    double write_bytes = 0, read_bytes = 0, resident_bytes = 0;
    double window = std::numeric_limits<double>::infinity();
    for (const Kernel& k : kernels) {
        const SwapTraffic t = swap_traffic(k, point, capacity, em, mode);
        write_bytes += t.write_bytes;
        read_bytes += t.read_bytes;
        window = std::min(window, t.window_s);
        resident_bytes += std::min(working_set_bytes(k, point.channels), capacity);
        if (!fits_in_sram(k, point.channels, capacity)) rep.cacheable = false;
    }
    rep.window_s = window;
    rep.swap_bytes_per_window = write_bytes + read_bytes;
    const double deadline = std::min(window, budget.response_deadline_s);

    // power share left for the flash after the always-on consumers
    const double access_rate = budget.total_data_rate_bits_per_s / 8.0;
    const double sram_w = sram_power_w(resident_bytes, access_rate, sram);
    const double share =
        std::max(0.0, budget.power_budget_w - sram_w - budget.controller_power_w);
    const std::uint64_t k_par = max_parallel_chips(share, flash.geometry, flash.power);

    // 2. timing
    double energy_window = 0.0;
    const std::uint64_t pages_w = ceil_pages(write_bytes, page_bytes);
    const std::uint64_t pages_r = ceil_pages(read_bytes, page_bytes);
    if (pages_w == 0 && pages_r == 0) {
        rep.timing = TimingVerdict::ok;
        energy_window = static_cast<double>(flash.geometry.chips) *
                        flash.power.p_chip_idle_w * window;
    } else if (k_par == 0) {
        // no chip may power on: the transfer can never start
        rep.io_s = std::numeric_limits<double>::infinity();
        const double demand = (write_bytes + read_bytes) / deadline;
        rep.timing = demand > bus_ceiling_bytes_per_s(flash.geometry, flash.timing)
                         ? TimingVerdict::bandwidth_limited
                         : TimingVerdict::latency_limited;
        energy_window = std::numeric_limits<double>::infinity();
    } else {
        const std::uint64_t chips_active = std::min(k_par, flash.geometry.chips);
        const IoPlan program{FlashOp::program, pages_w, k_par, chips_active};
        const IoPlan read{FlashOp::read, pages_r, k_par, chips_active};
        const double lat_p = op_latency_s(program, flash.geometry, flash.timing);
        const double lat_r = op_latency_s(read, flash.geometry, flash.timing);
        rep.io_s = lat_p + lat_r;
        if (rep.io_s > 0)
            rep.achieved_bytes_per_s = (write_bytes + read_bytes) / rep.io_s;
        if (rep.io_s <= deadline) {
            rep.timing = TimingVerdict::ok;
        } else {
            const double demand = (write_bytes + read_bytes) / deadline;
            rep.timing = demand > bus_ceiling_bytes_per_s(flash.geometry, flash.timing)
                             ? TimingVerdict::bandwidth_limited
                             : TimingVerdict::latency_limited;
        }
        energy_window = op_energy_j(program, lat_p, flash) +
                        op_energy_j(read, lat_r, flash) +
                        static_cast<double>(flash.geometry.chips) *
                            flash.power.p_chip_idle_w *
                            std::max(0.0, window - lat_p - lat_r);
    }

    // 3. power
    rep.total_power_w =
        sram_w + budget.controller_power_w + energy_window / window;
    rep.power_ok = rep.total_power_w <= budget.power_budget_w;
    rep.overall = (rep.cacheable || rep.timing == TimingVerdict::ok) && rep.power_ok;
    return rep;
}

FeasibilityMap sweep(const std::vector<OperatingPoint>& points,
                     const std::vector<Kernel>& kernels, const FlashDevice& flash,
                     const SramModel& sram, const SystemBudget& budget,
                     const EmModel& em, SwapMode mode,
                     std::uint64_t scenario_fingerprint) {
    if (points.empty()) throw std::invalid_argument("sweep requires a non-empty grid");
    FeasibilityMap map;
    map.mode = mode;
    map.scenario_fingerprint = scenario_fingerprint;
    map.rows.reserve(points.size());
    for (const OperatingPoint& p : points) {
        MapRow row;
        row.point = p;
        try {
            row.report = classify(p, kernels, flash, sram, budget, em, mode);
        } catch (const std::exception& e) {
            row.error = true;
            row.error_message = e.what();
        }
        map.rows.push_back(std::move(row));
    }
    return map;
}

std::optional<double> required_sram_bytes(const Kernel& kernel,
                                          const OperatingPoint& point,
                                          const FlashDevice& flash,
                                          const SramModel& sram,
                                          const SystemBudget& budget,
                                          const EmModel& em, SwapMode mode) {
    const double page = static_cast<double>(flash.geometry.page_size_bytes);
    const std::vector<Kernel> one{kernel};
    const auto feasible_at = [&](std::uint64_t pages) {
        SystemBudget b = budget;
        b.sram_capacity_accel_bytes = static_cast<double>(pages) * page;
        b.sram_capacity_controller_bytes = 0;
        return classify(point, one, flash, sram, b, em, mode).overall;
    };
    const std::uint64_t max_pages =
        ceil_pages(working_set_bytes(kernel, point.channels), page);
    if (!feasible_at(max_pages)) return std::nullopt;
    std::uint64_t lo = 0, hi = max_pages;  // hi is always feasible
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (feasible_at(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return static_cast<double>(hi) * page;
}

}  // namespace swapline
