#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "swapline/feasibility.hpp"
#include "swapline/scenario.hpp"

using namespace swapline;

namespace {

Scenario default_scenario() {
    static const Scenario s =
        parse_scenario_file(std::string(SWAPLINE_SCENARIO_DIR) + "/default.json");
    return s;
}

OperatingPoint point_at(const Scenario& s, std::uint64_t channels) {
    const OperatingPointSet set = operating_points(s.budget, {channels});
    REQUIRE(set.points.size() == 1);
    return set.points.front();
}

// linear scan at one-page granularity: the independent oracle for the
// binary-searched required_sram_bytes
std::optional<double> required_sram_linear(const Kernel& kernel,
                                           const OperatingPoint& point,
                                           const Scenario& s) {
    const double page = static_cast<double>(s.flash.geometry.page_size_bytes);
    const double ws = working_set_bytes(kernel, point.channels);
    const std::uint64_t max_pages =
        ws <= 0 ? 0 : static_cast<std::uint64_t>(std::ceil(ws / page));
    for (std::uint64_t p = 0; p <= max_pages; ++p) {
        SystemBudget b = s.budget;
        b.sram_capacity_accel_bytes = static_cast<double>(p) * page;
        b.sram_capacity_controller_bytes = 0;
        if (classify(point, {kernel}, s.flash, s.sram, b, s.em, s.mode).overall)
            return static_cast<double>(p) * page;
    }
    return std::nullopt;
}

std::vector<std::uint64_t> log_grid(std::uint64_t points) {
    std::vector<std::uint64_t> grid;
    for (std::uint64_t i = 0; i < points; ++i) {
        const double x = 4.0 + static_cast<double>(i) * 20.0 /
                                   static_cast<double>(points - 1);
        grid.push_back(static_cast<std::uint64_t>(std::round(std::exp2(x))));
    }
    return grid;
}

}  // namespace

TEST_CASE("operating_points holds the total data rate fixed") {
    SystemBudget b;
    b.total_data_rate_bits_per_s = 144e6;
    b.sample_bits = 16;
    const OperatingPointSet set = operating_points(b, {1000});
    REQUIRE(set.points.size() == 1);
    CHECK(set.points[0].sampling_rate_hz == doctest::Approx(9000.0).epsilon(1e-12));

    // the defining identity, to one part in 1e6
    for (std::uint64_t c : {1ull, 17ull, 999ull, 1048576ull, 9000000ull}) {
        const OperatingPointSet one = operating_points(b, {c});
        REQUIRE(one.points.size() == 1);
        const double recovered = static_cast<double>(c) *
                                 one.points[0].sampling_rate_hz * 16.0;
        CHECK(std::abs(recovered / 144e6 - 1.0) <= 1e-6);
    }
}

TEST_CASE("operating_points drops sub-hertz points with a warning list") {
    SystemBudget b;
    b.total_data_rate_bits_per_s = 144e6;
    b.sample_bits = 16;
    const OperatingPointSet set = operating_points(b, {100, 9000000, 9000001});
    CHECK(set.points.size() == 2);  // 9e6 channels sits exactly on the 1 Hz boundary
    CHECK(set.points[1].sampling_rate_hz == 1.0);
    REQUIRE(set.degenerate_channels.size() == 1);
    CHECK(set.degenerate_channels[0] == 9000001);
}

TEST_CASE("swap_traffic: cache hit, naive overflow, em block rounding") {
    const Scenario s = default_scenario();
    const Kernel fft = make_default_kernel(KernelKind::fft, 128, 0);
    const OperatingPoint p{1000, 9000.0};

    SUBCASE("fits") {
        const SwapTraffic t = swap_traffic(fft, p, 2 << 20, s.em, SwapMode::naive);
        CHECK(t.write_bytes == 0.0);
        CHECK(t.read_bytes == 0.0);
        CHECK(t.window_s == doctest::Approx(128.0 / 9000.0).epsilon(1e-12));
    }
    SUBCASE("naive moves the raw overflow") {
        const SwapTraffic t = swap_traffic(fft, p, 262144, s.em, SwapMode::naive);
        CHECK(t.write_bytes == 761856.0);
        CHECK(t.read_bytes == 761856.0);
        CHECK(t.window_s == doctest::Approx(14.222e-3).epsilon(1e-4));
    }
    SUBCASE("dirty fraction scales the write-back only") {
        Kernel half = fft;
        half.dirty_fraction = 0.25;
        const SwapTraffic t = swap_traffic(half, p, 262144, s.em, SwapMode::naive);
        CHECK(t.write_bytes == doctest::Approx(0.25 * 761856.0));
        CHECK(t.read_bytes == 761856.0);
    }
    SUBCASE("em rounds to whole blocks") {
        const Kernel bbf = make_default_kernel(KernelKind::bbf, 128, 4);
        const SwapTraffic t = swap_traffic(bbf, p, 800, s.em, SwapMode::em);
        const double block = 4096.0 * 4.0;
        CHECK(t.read_bytes == std::ceil((32096.0 - 800.0) / block) * block);
        CHECK(t.write_bytes == t.read_bytes);
    }
}

TEST_CASE("classify: swap-feasible FFT point") {
    // FFT-128 at 1000 channels/9 kHz: 761856 bytes each way -> 47 pages,
    // k = 4 -> 6.29724 ms program + 4.19724 ms read inside a 14.22 ms window
    Scenario s = default_scenario();
    s.flash.geometry = FlashGeometry{4, 1, 1, 2048, 128, 16384};
    s.budget.power_budget_w = 200e-3;
    s.budget.response_deadline_s = 20e-3;
    s.budget.sram_capacity_accel_bytes = 262144;
    s.budget.sram_capacity_controller_bytes = 0;
    s.budget.controller_power_w = 0;
    s.kernels = {make_default_kernel(KernelKind::fft, 128, 0)};

    const FeasibilityReport r =
        classify(point_at(s, 1000), s.kernels, s.flash, s.sram, s.budget, s.em,
                 SwapMode::naive);
    CHECK_FALSE(r.cacheable);
    CHECK(r.timing == TimingVerdict::ok);
    CHECK(r.io_s == doctest::Approx(10.49448e-3).epsilon(1e-9));
    CHECK(r.window_s == doctest::Approx(14.2222e-3).epsilon(1e-4));
    CHECK(r.power_ok);
    CHECK(r.overall);
    CHECK(verdict_of(r) == Verdict::feasible);
}

TEST_CASE("classify: one-page swap misses a 300 us window on write latency") {
    Scenario s = default_scenario();
    s.flash.geometry = FlashGeometry{1, 1, 1, 2048, 128, 16384};
    s.budget.total_data_rate_bits_per_s = 1.6e6;
    s.budget.power_budget_w = 1.0;
    s.budget.sram_capacity_accel_bytes = 0;
    s.budget.sram_capacity_controller_bytes = 0;
    s.budget.controller_power_w = 0;
    Kernel k;
    k.kind = KernelKind::custom;
    k.alpha_bytes_per_channel = 16384;
    k.window_samples = 30;  // 300 us at 100 kHz
    s.kernels = {k};

    const OperatingPoint p = point_at(s, 1);
    CHECK(p.sampling_rate_hz == doctest::Approx(1e5).epsilon(1e-12));
    const FeasibilityReport r =
        classify(p, s.kernels, s.flash, s.sram, s.budget, s.em, SwapMode::naive);
    CHECK(r.io_s == doctest::Approx(390.84e-6).epsilon(1e-9));
    CHECK(r.timing == TimingVerdict::latency_limited);
    // demand ~109 MB/s stays under the ~197.6 MB/s bus ceiling
    CHECK(r.swap_bytes_per_window / 300e-6 <
          bus_ceiling_bytes_per_s(s.flash.geometry, s.flash.timing));
    CHECK_FALSE(r.overall);
}

TEST_CASE("classify: cacheable point is trivially feasible") {
    const Scenario s = default_scenario();
    const FeasibilityReport r = classify(point_at(s, 20), s.kernels, s.flash,
                                         s.sram, s.budget, s.em, SwapMode::naive);
    CHECK(r.cacheable);
    CHECK(r.timing == TimingVerdict::ok);
    CHECK(r.swap_bytes_per_window == 0.0);
    CHECK(r.overall);
    CHECK(verdict_of(r) == Verdict::cacheable);
}

TEST_CASE("classify with an instantaneous flash reduces to the SRAM power test") {
    Scenario s = default_scenario();
    s.flash.timing = FlashTiming{0, 0, 0, 1e18, 0};
    s.flash.power = FlashPower{0, 0, 0, 0, 0, 0};
    s.budget.controller_power_w = 0;
    const double access = s.budget.total_data_rate_bits_per_s / 8.0;
    for (std::uint64_t c : {100ull, 10000ull, 1000000ull, 8000000ull}) {
        const OperatingPoint p = point_at(s, c);
        const FeasibilityReport r =
            classify(p, s.kernels, s.flash, s.sram, s.budget, s.em, SwapMode::naive);
        CHECK(r.timing == TimingVerdict::ok);
        double resident = 0;
        for (const Kernel& k : s.kernels)
            resident += std::min(working_set_bytes(k, c),
                                 s.budget.pooled_capacity_bytes());
        const bool sram_fits =
            sram_power_w(resident, access, s.sram) <= s.budget.power_budget_w;
        CHECK(r.overall == sram_fits);
    }
}

TEST_CASE("classify over several kernels sums their traffic") {
    const Scenario s =
        parse_scenario_file(std::string(SWAPLINE_SCENARIO_DIR) + "/kernels.json");
    REQUIRE(s.kernels.size() == 5);
    const OperatingPoint p = point_at(s, 2000);
    const FeasibilityReport r =
        classify(p, s.kernels, s.flash, s.sram, s.budget, s.em, s.mode);
    double bytes = 0, shortest = 1e9;
    for (const Kernel& k : s.kernels) {
        const SwapTraffic t =
            swap_traffic(k, p, s.budget.pooled_capacity_bytes(), s.em, s.mode);
        bytes += t.write_bytes + t.read_bytes;
        shortest = std::min(shortest, t.window_s);
    }
    CHECK_FALSE(r.cacheable);  // the FFT working set alone tops the pool
    CHECK(r.swap_bytes_per_window == doctest::Approx(bytes).epsilon(1e-12));
    CHECK(r.window_s == doctest::Approx(shortest).epsilon(1e-12));
}

TEST_CASE("classify rejects an empty kernel list and a zero-size page") {
    const Scenario s = default_scenario();
    const OperatingPoint p = point_at(s, 1000);
    CHECK_THROWS_AS(
        classify(p, {}, s.flash, s.sram, s.budget, s.em, SwapMode::naive),
        std::invalid_argument);
    Scenario broken = s;
    broken.flash.geometry.page_size_bytes = 0;
    CHECK_THROWS_AS(classify(p, broken.kernels, broken.flash, broken.sram,
                             broken.budget, broken.em, SwapMode::naive),
                    std::invalid_argument);
}

TEST_CASE("sweep: single point, determinism, per-point error capture") {
    const Scenario s = default_scenario();
    const OperatingPoint p = point_at(s, 1000);
    const FeasibilityMap one = sweep({p}, s.kernels, s.flash, s.sram, s.budget,
                                     s.em, SwapMode::naive);
    REQUIRE(one.rows.size() == 1);
    CHECK_FALSE(one.rows[0].error);

    const OperatingPointSet grid = operating_points(s.budget, log_grid(500));
    const FeasibilityMap a = sweep(grid.points, s.kernels, s.flash, s.sram,
                                   s.budget, s.em, SwapMode::naive);
    const FeasibilityMap b = sweep(grid.points, s.kernels, s.flash, s.sram,
                                   s.budget, s.em, SwapMode::naive);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        CHECK(a.rows[i].report == b.rows[i].report);

    // an em-mode FFT against a capacity below two blocks cannot build its
    // external-memory model; the sweep records the error instead of dying
    Scenario bad = s;
    bad.kernels = {make_default_kernel(KernelKind::fft, 128, 0)};
    bad.budget.sram_capacity_accel_bytes = 100;
    bad.budget.sram_capacity_controller_bytes = 0;
    const FeasibilityMap err = sweep({point_at(bad, 100000)}, bad.kernels, bad.flash,
                                     bad.sram, bad.budget, bad.em, SwapMode::em);
    REQUIRE(err.rows.size() == 1);
    CHECK(err.rows[0].error);
    CHECK_FALSE(err.rows[0].error_message.empty());
}

TEST_CASE("overall-feasible channels form one interval on a gap-free pool") {
    Scenario s = default_scenario();
    s.budget.sram_capacity_accel_bytes = 32768;
    s.budget.sram_capacity_controller_bytes = 0;
    const OperatingPointSet grid = operating_points(s.budget, log_grid(2000));
    const FeasibilityMap map = sweep(grid.points, s.kernels, s.flash, s.sram,
                                     s.budget, s.em, SwapMode::naive);
    std::size_t first = map.rows.size(), last = 0;
    for (std::size_t i = 0; i < map.rows.size(); ++i) {
        if (map.rows[i].report.overall) {
            first = std::min(first, i);
            last = i;
        }
    }
    REQUIRE(first < map.rows.size());
    CHECK(last > first + 100);  // a real band, not a speck
    for (std::size_t i = first; i <= last; ++i) CHECK(map.rows[i].report.overall);
}

TEST_CASE("growing the pool never breaks a feasible point") {
    const Scenario s = default_scenario();
    const double page = 16384.0;
    for (const OperatingPoint& p : operating_points(s.budget, log_grid(120)).points) {
        for (double cap : {0.0, 944.0, 16384.0, 262144.0}) {
            SystemBudget b = s.budget;
            b.sram_capacity_accel_bytes = cap;
            b.sram_capacity_controller_bytes = 0;
            const bool before =
                classify(p, s.kernels, s.flash, s.sram, b, s.em, s.mode).overall;
            b.sram_capacity_accel_bytes = cap + page;
            const bool after =
                classify(p, s.kernels, s.flash, s.sram, b, s.em, s.mode).overall;
            if (before) CHECK(after);
        }
    }
}

TEST_CASE("feasible region grows with bus bandwidth, shrinks with t_program") {
    const Scenario s = default_scenario();
    Scenario fast_bus = s;
    fast_bus.flash.timing.bus_bytes_per_s *= 2;
    Scenario slow_prog = s;
    slow_prog.flash.timing.t_program_s *= 2;
    for (const OperatingPoint& p : operating_points(s.budget, log_grid(300)).points) {
        const bool base =
            classify(p, s.kernels, s.flash, s.sram, s.budget, s.em, s.mode).overall;
        const bool fast = classify(p, fast_bus.kernels, fast_bus.flash, fast_bus.sram,
                                   fast_bus.budget, fast_bus.em, s.mode)
                              .overall;
        const bool slow = classify(p, slow_prog.kernels, slow_prog.flash,
                                   slow_prog.sram, slow_prog.budget, slow_prog.em,
                                   s.mode)
                              .overall;
        if (base) CHECK(fast);
        if (slow) CHECK(base);
    }
}

TEST_CASE("em mode dominates naive mode on the shipped scenario") {
    const Scenario s = default_scenario();
    for (const OperatingPoint& p : operating_points(s.budget, log_grid(500)).points) {
        const bool naive =
            classify(p, s.kernels, s.flash, s.sram, s.budget, s.em, SwapMode::naive)
                .overall;
        const bool em =
            classify(p, s.kernels, s.flash, s.sram, s.budget, s.em, SwapMode::em)
                .overall;
        if (naive) CHECK(em);
    }
}

TEST_CASE("required_sram equals the linear-scan oracle") {
    const Scenario s = default_scenario();
    const Kernel kernel = s.kernels.front();
    std::mt19937_64 rng(424243);
    std::uniform_real_distribution<double> x(4.0, 17.0);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        const std::uint64_t c =
            static_cast<std::uint64_t>(std::round(std::exp2(x(rng))));
        const OperatingPoint p = point_at(s, c);
        const auto fast =
            required_sram_bytes(kernel, p, s.flash, s.sram, s.budget, s.em, s.mode);
        const auto slow = required_sram_linear(kernel, p, s);
        REQUIRE(fast.has_value() == slow.has_value());
        if (fast) CHECK(*fast == *slow);
        ++checked;
    }
    CHECK(checked == 60);
}

TEST_CASE("required_sram: bounded by a feasible capacity, monotone in budget") {
    const Scenario s = default_scenario();
    const Kernel kernel = s.kernels.front();

    // a point feasible at the shipped capacity needs no more than that
    const OperatingPoint p1000 = point_at(s, 1000);
    const auto need =
        required_sram_bytes(kernel, p1000, s.flash, s.sram, s.budget, s.em, s.mode);
    REQUIRE(need.has_value());
    CHECK(*need <= s.budget.pooled_capacity_bytes());

    std::mt19937_64 rng(7321);
    std::uniform_real_distribution<double> x(4.0, 18.0);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t c =
            static_cast<std::uint64_t>(std::round(std::exp2(x(rng))));
        const OperatingPoint p = point_at(s, c);
        SystemBudget richer = s.budget;
        richer.power_budget_w *= 2;
        const auto tight =
            required_sram_bytes(kernel, p, s.flash, s.sram, s.budget, s.em, s.mode);
        const auto loose =
            required_sram_bytes(kernel, p, s.flash, s.sram, richer, s.em, s.mode);
        if (tight) {
            REQUIRE(loose.has_value());
            CHECK(*loose <= *tight);
        }
    }
}
