#include "swapline/swap_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>

namespace swapline {

namespace {

std::uint64_t ceil_pages(double bytes, double page_bytes) {
    if (bytes <= 0) return 0;
    return static_cast<std::uint64_t>(std::ceil(bytes / page_bytes));
}

std::uint64_t to_ns(double seconds) {
    return static_cast<std::uint64_t>(std::llround(seconds * 1e9));
}

enum class EvKind : std::uint8_t { window_start, io_issue, io_complete, sim_end };

struct Event {
    std::uint64_t t_ns = 0;
    std::uint64_t seq = 0;  // deterministic tie-break
    EvKind kind = EvKind::io_complete;
    std::uint32_t kernel = 0;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t_ns != b.t_ns) return a.t_ns > b.t_ns;
        return a.seq > b.seq;
    }
};

enum class Phase : std::uint8_t { program, read, done };

struct Job {
    std::uint64_t window = 0;
    std::uint64_t start_ns = 0;
    std::uint64_t deadline_ns = 0;
    bool started = false;
    Phase phase = Phase::program;
    std::uint64_t batch = 0;
    std::uint64_t done_in_batch = 0;
    bool in_array_wait = false;
    // accounting for the op currently in flight
    std::uint64_t op_start_ns = 0;
};

struct KernelSim {
    std::uint64_t window_ns = 1;
    std::uint64_t deadline_ns = 1;
    std::uint64_t pages_w = 0;
    std::uint64_t pages_r = 0;
    std::uint64_t n_windows = 0;
    std::uint64_t next_window = 0;
    std::deque<Job> queue;
};

struct Engine {
    const Scenario& scenario;
    std::uint64_t horizon_ns;
    std::uint64_t k_par = 1;
    std::uint64_t chips_active = 1;
    std::uint64_t t_x_ns = 0, t_read_ns = 0, t_prog_ns = 0;
    double page_bytes = 1;

    std::vector<KernelSim> kernels;
    std::priority_queue<Event, std::vector<Event>, EventAfter> events;
    std::uint64_t seq = 0;
    std::uint64_t bus_free_ns = 0;
    std::uint64_t bus_busy_ns = 0;

    SimResult result;
    std::vector<std::vector<WindowRecord>> window_records;

    explicit Engine(const Scenario& s, std::uint64_t horizon)
        : scenario(s), horizon_ns(horizon) {}

    void push(std::uint64_t t, EvKind kind, std::uint32_t kernel) {
        events.push(Event{t, seq++, kind, kernel});
    }

    std::uint64_t batches(std::uint64_t pages) const {
        return pages == 0 ? 0 : (pages - 1) / k_par + 1;
    }
    std::uint64_t batch_size(std::uint64_t pages, std::uint64_t batch) const {
        return std::min(k_par, pages - batch * k_par);
    }

    double op_intrinsic_j(FlashOp op, std::uint64_t pages) const {
        const FlashPower& p = scenario.flash.power;
        const double e_op =
            op == FlashOp::program ? p.e_program_page_j : p.e_read_page_j;
        const double n = static_cast<double>(pages);
        return n * e_op + n * page_bytes * p.e_bus_j_per_byte;
    }
    double op_premium_j(std::uint64_t span_ns) const {
        const FlashPower& p = scenario.flash.power;
        return static_cast<double>(chips_active) *
               (p.p_chip_active_w - p.p_chip_idle_w) *
               (static_cast<double>(span_ns) * 1e-9);
    }

    void record_op(std::uint32_t k, const Job& job, FlashOp op, std::uint64_t pages,
                   std::uint64_t end_ns) {
        OpRecord rec;
        rec.kernel = k;
        rec.window = job.window;
        rec.op = op;
        rec.pages = pages;
        rec.parallelism = k_par;
        rec.chips_active = chips_active;
        rec.start_ns = job.op_start_ns;
        rec.end_ns = end_ns;
        rec.intrinsic_j = op_intrinsic_j(op, pages);
        rec.premium_j = op_premium_j(end_ns - job.op_start_ns);
        result.ops.push_back(rec);
        window_records[k][job.window].energy_j += rec.intrinsic_j + rec.premium_j;
    }

    void bus_request(std::uint32_t k, std::uint64_t now) {
        const std::uint64_t grant = std::max(now, bus_free_ns);
        bus_free_ns = grant + t_x_ns;
        push(grant + t_x_ns, EvKind::io_complete, k);
    }

    void start_job(std::uint32_t k, std::uint64_t now) {
        KernelSim& ks = kernels[k];
        Job& job = ks.queue.front();
        job.started = true;
        if (ks.pages_w + ks.pages_r > 0 && k_par == 0) return;  // power-starved
        if (ks.pages_w > 0) {
            job.phase = Phase::program;
            job.op_start_ns = now;
            bus_request(k, now);  // program moves data to the register first
        } else if (ks.pages_r > 0) {
            begin_read_phase(k, job, now);
        } else {
            complete_job(k, now);
        }
    }

    void begin_read_phase(std::uint32_t k, Job& job, std::uint64_t now) {
        job.phase = Phase::read;
        job.batch = 0;
        job.done_in_batch = 0;
        job.in_array_wait = true;
        job.op_start_ns = now;
        push(now + t_read_ns, EvKind::io_complete, k);
    }

    void complete_job(std::uint32_t k, std::uint64_t now) {
        KernelSim& ks = kernels[k];
        const Job job = ks.queue.front();
        ks.queue.pop_front();
        WindowRecord& w = window_records[k][job.window];
        w.complete_ns = now;
        w.completed = true;
        w.missed = now > job.deadline_ns;
        if (!ks.queue.empty()) {
            push(now, EvKind::io_issue, k);  // next queued window begins
        }
    }

    void on_io_complete(std::uint32_t k, std::uint64_t now) {
        KernelSim& ks = kernels[k];
        if (ks.queue.empty()) return;
        Job& job = ks.queue.front();
        if (!job.started) return;

        if (job.phase == Phase::program) {
            if (job.in_array_wait) {
                // a batch finished programming
                job.in_array_wait = false;
                job.batch++;
                job.done_in_batch = 0;
                if (job.batch < batches(ks.pages_w)) {
                    bus_request(k, now);
                } else {
                    record_op(k, job, FlashOp::program, ks.pages_w, now);
                    if (ks.pages_r > 0)
                        begin_read_phase(k, job, now);
                    else
                        complete_job(k, now);
                }
            } else {
                // one page transfer landed in the registers
                bus_busy_ns += t_x_ns;
                job.done_in_batch++;
                if (job.done_in_batch < batch_size(ks.pages_w, job.batch)) {
                    bus_request(k, now);
                } else {
                    job.in_array_wait = true;
                    push(now + t_prog_ns, EvKind::io_complete, k);
                }
            }
        } else if (job.phase == Phase::read) {
            if (job.in_array_wait) {
                // array read of a batch finished; stream it over the bus
                job.in_array_wait = false;
                bus_request(k, now);
            } else {
                bus_busy_ns += t_x_ns;
                job.done_in_batch++;
                if (job.done_in_batch < batch_size(ks.pages_r, job.batch)) {
                    bus_request(k, now);
                } else {
                    job.batch++;
                    job.done_in_batch = 0;
                    if (job.batch < batches(ks.pages_r)) {
                        job.in_array_wait = true;
                        push(now + t_read_ns, EvKind::io_complete, k);
                    } else {
                        record_op(k, job, FlashOp::read, ks.pages_r, now);
                        complete_job(k, now);
                    }
                }
            }
        }
    }

    void on_window_start(std::uint32_t k, std::uint64_t now) {
        KernelSim& ks = kernels[k];
        const std::uint64_t w = ks.next_window++;
        Job job;
        job.window = w;
        job.start_ns = now;
        job.deadline_ns = now + ks.deadline_ns;
        ks.queue.push_back(job);
        WindowRecord rec;
        rec.kernel = k;
        rec.window = w;
        rec.start_ns = now;
        rec.deadline_ns = job.deadline_ns;
        rec.complete_ns = horizon_ns;
        window_records[k][w] = rec;
        if (ks.next_window < ks.n_windows)
            push(now + ks.window_ns, EvKind::window_start, k);
        if (ks.queue.size() == 1) start_job(k, now);
    }

    void on_io_issue(std::uint32_t k, std::uint64_t now) {
        KernelSim& ks = kernels[k];
        if (!ks.queue.empty() && !ks.queue.front().started) start_job(k, now);
    }

    void run() {
        // everything scheduled past the horizon stays unprocessed; an event
        // landing exactly on the horizon still counts
        push(horizon_ns, EvKind::sim_end, 0);
        while (!events.empty()) {
            const Event ev = events.top();
            if (ev.t_ns > horizon_ns) break;
            events.pop();
            switch (ev.kind) {
                case EvKind::window_start: on_window_start(ev.kernel, ev.t_ns); break;
                case EvKind::io_issue: on_io_issue(ev.kernel, ev.t_ns); break;
                case EvKind::io_complete: on_io_complete(ev.kernel, ev.t_ns); break;
                case EvKind::sim_end: break;
            }
        }
    }
};

}  // namespace

SimResult simulate(const Scenario& scenario, const OperatingPoint& point,
                   double horizon_s) {
    return simulate(scenario, point, horizon_s, scenario.mode);
}

SimResult simulate(const Scenario& scenario, const OperatingPoint& point,
                   double horizon_s, SwapMode mode) {
    if (scenario.kernels.empty())
        throw std::invalid_argument("simulate requires at least one kernel");
    if (!(horizon_s > 0)) throw std::invalid_argument("horizon must be > 0");

    Engine eng(scenario, to_ns(horizon_s));
    eng.page_bytes = static_cast<double>(scenario.flash.geometry.page_size_bytes);
    eng.t_x_ns =
        to_ns(page_transfer_time_s(scenario.flash.geometry, scenario.flash.timing));
    eng.t_read_ns = to_ns(scenario.flash.timing.t_read_s);
    eng.t_prog_ns = to_ns(scenario.flash.timing.t_program_s);

    // same power share rule as the analytic classification
    const double capacity = scenario.budget.pooled_capacity_bytes();
    double resident = 0;
    for (const Kernel& k : scenario.kernels)
        resident += std::min(working_set_bytes(k, point.channels), capacity);
    const double sram_w = sram_power_w(
        resident, scenario.budget.total_data_rate_bits_per_s / 8.0, scenario.sram);
    const double share = std::max(0.0, scenario.budget.power_budget_w - sram_w -
                                           scenario.budget.controller_power_w);
    eng.k_par = max_parallel_chips(share, scenario.flash.geometry, scenario.flash.power);
    eng.chips_active = std::min(std::max<std::uint64_t>(eng.k_par, 1),
                                scenario.flash.geometry.chips);

    std::uint64_t slowest_window_ns = 0;
    for (const Kernel& k : scenario.kernels) {
        const SwapTraffic t = swap_traffic(k, point, capacity, scenario.em, mode);
        KernelSim ks;
        ks.window_ns = std::max<std::uint64_t>(1, to_ns(t.window_s));
        ks.deadline_ns =
            std::min(ks.window_ns, to_ns(scenario.budget.response_deadline_s));
        ks.pages_w = ceil_pages(t.write_bytes, eng.page_bytes);
        ks.pages_r = ceil_pages(t.read_bytes, eng.page_bytes);
        ks.n_windows = eng.horizon_ns / ks.window_ns;
        slowest_window_ns = std::max(slowest_window_ns, ks.window_ns);
        eng.kernels.push_back(ks);
    }
    if (eng.horizon_ns / slowest_window_ns < 10)
        throw std::invalid_argument(
            "horizon must cover at least 10 windows of the slowest kernel");

    eng.window_records.resize(eng.kernels.size());
    for (std::size_t k = 0; k < eng.kernels.size(); ++k) {
        eng.window_records[k].resize(eng.kernels[k].n_windows);
        eng.push(0, EvKind::window_start, static_cast<std::uint32_t>(k));
    }

    eng.run();

    // finalize: unfinished windows are misses (their deadlines are inside
    // the horizon by construction)
    SimReport rep;
    double energy = 0.0;
    for (const OpRecord& op : eng.result.ops) energy += op.intrinsic_j + op.premium_j;
    const double horizon_sec = static_cast<double>(eng.horizon_ns) * 1e-9;
    energy += static_cast<double>(scenario.flash.geometry.chips) *
              scenario.flash.power.p_chip_idle_w * horizon_sec;

    double peak = 0.0;
    for (std::size_t k = 0; k < eng.window_records.size(); ++k) {
        const double window_sec =
            static_cast<double>(eng.kernels[k].window_ns) * 1e-9;
        for (WindowRecord& w : eng.window_records[k]) {
            if (!w.completed) w.missed = true;
            rep.windows_total++;
            if (w.missed) rep.deadline_misses++;
            const double latency =
                static_cast<double>(w.complete_ns - w.start_ns) * 1e-9;
            rep.worst_io_latency_s = std::max(rep.worst_io_latency_s, latency);
            w.energy_j += static_cast<double>(scenario.flash.geometry.chips) *
                          scenario.flash.power.p_chip_idle_w * window_sec;
            peak = std::max(peak, w.energy_j / window_sec);
            eng.result.windows.push_back(w);
        }
    }
    rep.mean_bus_utilization =
        static_cast<double>(eng.bus_busy_ns) / static_cast<double>(eng.horizon_ns);
    rep.energy_total_j = energy;
    rep.mean_power_w = energy / horizon_sec;
    rep.peak_window_power_w = peak;
    eng.result.report = rep;
    return std::move(eng.result);
}

ValidationStats validate_map(const FeasibilityMap& map, const Scenario& scenario,
                             std::uint64_t windows_per_point) {
    if (windows_per_point < 10)
        throw std::invalid_argument("validate needs at least 10 windows per point");
    if (map.scenario_fingerprint != scenario_fingerprint(scenario))
        throw std::invalid_argument("feasibility map does not match this scenario");

    const double ceiling =
        bus_ceiling_bytes_per_s(scenario.flash.geometry, scenario.flash.timing);
    ValidationStats stats;
    for (const MapRow& row : map.rows) {
        if (row.error) continue;
        double slowest_window_s = 0;
        for (const Kernel& k : scenario.kernels)
            slowest_window_s =
                std::max(slowest_window_s, static_cast<double>(k.window_samples) /
                                               row.point.sampling_rate_hz);
        const SimResult sim =
            simulate(scenario, row.point,
                     static_cast<double>(windows_per_point) * slowest_window_s,
                     map.mode);

        const bool sim_ok = sim.report.deadline_misses == 0;
        const bool map_ok = row.report.timing == TimingVerdict::ok;
        const bool agree = sim_ok == map_ok;

        const double deadline =
            std::min(row.report.window_s, scenario.budget.response_deadline_s);
        bool borderline = false;
        if (std::isfinite(row.report.io_s) && row.report.io_s > 0)
            borderline = std::fabs(row.report.io_s - deadline) <= 0.05 * deadline;
        if (!borderline && row.report.swap_bytes_per_window > 0) {
            const double demand = row.report.swap_bytes_per_window / deadline;
            borderline = std::fabs(demand - ceiling) <= 0.05 * ceiling;
        }

        stats.points++;
        if (agree) stats.matches++;
        if (borderline) {
            stats.borderline++;
        } else {
            stats.points_off_boundary++;
            if (agree) stats.matches_off_boundary++;
        }
        if (!agree) stats.disagreeing_channels.push_back(row.point.channels);
    }
    stats.agreement = stats.points == 0 ? 1.0
                                        : static_cast<double>(stats.matches) /
                                              static_cast<double>(stats.points);
    stats.agreement_off_boundary =
        stats.points_off_boundary == 0
            ? 1.0
            : static_cast<double>(stats.matches_off_boundary) /
                  static_cast<double>(stats.points_off_boundary);
    return stats;
}

}  // namespace swapline
