#pragma once

#include <cstdint>
#include <string>

namespace swapline {

// ---------------------------------------------------------------------------
// Affine working-set descriptions of the signal-processing accelerators and
// a two-parameter SRAM power model (leakage per resident byte plus access
// energy per byte of sample stream).
// ---------------------------------------------------------------------------

enum class KernelKind { bbf, dwt, fft, xcor, dtw, custom };

const char* kernel_kind_name(KernelKind kind);
// Accepts the config vocabulary BBF | DWT | FFT | XCOR | DTW | custom.
// Throws std::invalid_argument listing the vocabulary on an unknown name.
KernelKind kernel_kind_from_name(const std::string& name);

struct Kernel {
    KernelKind kind = KernelKind::custom;
    double alpha_bytes_per_channel = 0;  // bytes fixed per channel
    double beta_bytes_per_sample = 0;    // bytes per buffered sample per channel
    std::uint64_t window_samples = 1;    // samples per channel per processing window
    double fixed_bytes = 0;              // bytes shared across channels
    double dirty_fraction = 1.0;         // fraction rewritten each window

    void validate() const;
    bool operator==(const Kernel&) const = default;
};

// Structural defaults, in 4-byte state words:
//   BBF  alpha = 8*sections, fixed = 24*sections (biquad state + coefficients)
//   DWT  alpha = 8*levels,   fixed = 64          (filter taps)
//   FFT  beta  = 8                               (complex word per sample)
//   XCOR beta  = 4,          fixed = 4*window    (shared template)
//   DTW  alpha = 8*band_width                    (two banded DP rows)
// config_param carries sections / levels / band_width; it is ignored for
// FFT and XCOR. Every field may be overridden afterwards from the config.
Kernel make_default_kernel(KernelKind kind, std::uint64_t window_samples,
                           std::uint64_t config_param);

struct SramModel {
    double leakage_w_per_byte = 0;
    double e_access_j_per_byte = 0;

    void validate() const;
    bool operator==(const SramModel&) const = default;
};

// channels*(alpha + beta*window) + fixed
double working_set_bytes(const Kernel& kernel, std::uint64_t channels);

double sram_power_w(double resident_bytes, double access_rate_bytes_per_s,
                    const SramModel& sram);

// boundary inclusive: a working set exactly at capacity still fits
bool fits_in_sram(const Kernel& kernel, std::uint64_t channels,
                  double sram_capacity_bytes);

}  // namespace swapline
