#include <doctest.h>

#include <random>
#include <stdexcept>

#include "swapline/accel_model.hpp"

using namespace swapline;

TEST_CASE("working_set_bytes is affine in channels") {
    const Kernel bbf = make_default_kernel(KernelKind::bbf, 128, 4);
    CHECK(bbf.alpha_bytes_per_channel == 32.0);  // 4 sections * 2 words * 4 B
    CHECK(bbf.fixed_bytes == 96.0);              // coefficient store
    CHECK(working_set_bytes(bbf, 0) == 96.0);
    CHECK(working_set_bytes(bbf, 10000) == 320096.0);

    const Kernel fft = make_default_kernel(KernelKind::fft, 128, 0);
    CHECK(fft.beta_bytes_per_sample == 8.0);  // complex 4-byte words
    CHECK(working_set_bytes(fft, 1000) == 1024000.0);
}

TEST_CASE("default kernel table") {
    const Kernel dwt = make_default_kernel(KernelKind::dwt, 128, 6);
    CHECK(dwt.alpha_bytes_per_channel == 48.0);
    const Kernel xcor = make_default_kernel(KernelKind::xcor, 256, 0);
    CHECK(xcor.beta_bytes_per_sample == 4.0);
    CHECK(xcor.fixed_bytes == 1024.0);  // shared template
    const Kernel dtw = make_default_kernel(KernelKind::dtw, 128, 16);
    CHECK(dtw.alpha_bytes_per_channel == 128.0);  // two banded DP rows
    for (const Kernel& k : {dwt, xcor, dtw}) CHECK(k.dirty_fraction == 1.0);
}

TEST_CASE("kernel name vocabulary") {
    CHECK(kernel_kind_from_name("BBF") == KernelKind::bbf);
    CHECK(kernel_kind_from_name("custom") == KernelKind::custom);
    CHECK_THROWS_WITH_AS(kernel_kind_from_name("FIR"),
                         doctest::Contains("BBF, DWT, FFT, XCOR, DTW, custom"),
                         std::invalid_argument);
}

TEST_CASE("sram_power: leakage on residency plus access energy") {
    const SramModel sram{5e-9, 0.5e-12};
    CHECK(sram_power_w(0, 0, sram) == 0.0);
    CHECK(sram_power_w(1e6, 18e6, sram) == doctest::Approx(5.009e-3).epsilon(1e-12));
    // doubling residency at zero access doubles power
    CHECK(sram_power_w(2e6, 0, sram) == doctest::Approx(2 * sram_power_w(1e6, 0, sram)));
    CHECK_THROWS_AS(sram_power_w(-1, 0, sram), std::invalid_argument);
}

TEST_CASE("fits_in_sram is boundary inclusive") {
    const Kernel bbf = make_default_kernel(KernelKind::bbf, 128, 4);
    CHECK(fits_in_sram(bbf, 10000, 1 << 20));
    CHECK(fits_in_sram(bbf, 10000, 320096.0));
    CHECK_FALSE(fits_in_sram(bbf, 10000, 320095.0));
}

TEST_CASE("working set and sram power are non-decreasing in channels") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> bytes(0.0, 64.0);
    const SramModel sram{5e-9, 0.5e-12};
    for (int i = 0; i < 200; ++i) {
        Kernel k;
        k.alpha_bytes_per_channel = bytes(rng);
        k.beta_bytes_per_sample = bytes(rng) / 8.0;
        k.window_samples = 1 + (rng() % 512);
        k.fixed_bytes = bytes(rng) * 10;
        double prev_ws = -1, prev_p = -1;
        for (std::uint64_t c = 0; c <= 4096; c += 64) {
            const double ws = working_set_bytes(k, c);
            const double p = sram_power_w(ws, 18e6, sram);
            CHECK(ws >= prev_ws);
            CHECK(p >= prev_p);
            prev_ws = ws;
            prev_p = p;
        }
    }
}

TEST_CASE("at a fixed data rate only residency moves the sram power") {
    const SramModel sram{5e-9, 0.5e-12};
    const Kernel fft = make_default_kernel(KernelKind::fft, 128, 0);
    const double access = 144e6 / 8.0;  // constant across operating points
    const double p1 = sram_power_w(working_set_bytes(fft, 1000), access, sram);
    const double p2 = sram_power_w(working_set_bytes(fft, 2000), access, sram);
    const double dws = working_set_bytes(fft, 2000) - working_set_bytes(fft, 1000);
    CHECK(p2 - p1 == doctest::Approx(sram.leakage_w_per_byte * dws).epsilon(1e-9));
}

TEST_CASE("kernel validation names its bounds") {
    Kernel k = make_default_kernel(KernelKind::bbf, 128, 4);
    k.dirty_fraction = 1.5;
    CHECK_THROWS_AS(k.validate(), std::invalid_argument);
    k.dirty_fraction = 1.0;
    k.window_samples = 0;
    CHECK_THROWS_AS(k.validate(), std::invalid_argument);
}
