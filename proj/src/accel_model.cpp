#include "swapline/accel_model.hpp"

#include <stdexcept>

namespace swapline {

namespace {
constexpr double kWordBytes = 4.0;  // accelerator state word
}

const char* kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::bbf: return "BBF";
        case KernelKind::dwt: return "DWT";
        case KernelKind::fft: return "FFT";
        case KernelKind::xcor: return "XCOR";
        case KernelKind::dtw: return "DTW";
        case KernelKind::custom: return "custom";
    }
    return "custom";
}

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "BBF") return KernelKind::bbf;
    if (name == "DWT") return KernelKind::dwt;
    if (name == "FFT") return KernelKind::fft;
    if (name == "XCOR") return KernelKind::xcor;
    if (name == "DTW") return KernelKind::dtw;
    if (name == "custom") return KernelKind::custom;
    throw std::invalid_argument("unknown kernel name \"" + name +
                                "\"; valid names: BBF, DWT, FFT, XCOR, DTW, custom");
}

void Kernel::validate() const {
    if (alpha_bytes_per_channel < 0)
        throw std::invalid_argument("kernel.alpha_bytes_per_channel must be >= 0");
    if (beta_bytes_per_sample < 0)
        throw std::invalid_argument("kernel.beta_bytes_per_sample must be >= 0");
    if (window_samples < 1)
        throw std::invalid_argument("kernel.window_samples must be >= 1");
    if (fixed_bytes < 0)
        throw std::invalid_argument("kernel.fixed_bytes must be >= 0");
    if (dirty_fraction < 0 || dirty_fraction > 1)
        throw std::invalid_argument("kernel.dirty_fraction must be in [0,1]");
}

Kernel make_default_kernel(KernelKind kind, std::uint64_t window_samples,
                           std::uint64_t config_param) {
    Kernel k;
    k.kind = kind;
    k.window_samples = window_samples;
    const double param = static_cast<double>(config_param);
    switch (kind) {
        case KernelKind::bbf:
            k.alpha_bytes_per_channel = 2.0 * kWordBytes * param;
            k.fixed_bytes = 6.0 * kWordBytes * param;
            break;
        case KernelKind::dwt:
            k.alpha_bytes_per_channel = 2.0 * kWordBytes * param;
            k.fixed_bytes = 64.0;
            break;
        case KernelKind::fft:
            k.beta_bytes_per_sample = 2.0 * kWordBytes;
            break;
        case KernelKind::xcor:
            k.beta_bytes_per_sample = kWordBytes;
            k.fixed_bytes = kWordBytes * static_cast<double>(window_samples);
            break;
        case KernelKind::dtw:
            k.alpha_bytes_per_channel = 2.0 * kWordBytes * param;
            break;
        case KernelKind::custom:
            break;
    }
    return k;
}

void SramModel::validate() const {
    if (leakage_w_per_byte < 0)
        throw std::invalid_argument("sram.leakage_nw_per_byte must be >= 0");
    if (e_access_j_per_byte < 0)
        throw std::invalid_argument("sram.e_access_pj_per_byte must be >= 0");
}

double working_set_bytes(const Kernel& kernel, std::uint64_t channels) {
    const double per_channel =
        kernel.alpha_bytes_per_channel +
        kernel.beta_bytes_per_sample * static_cast<double>(kernel.window_samples);
    return static_cast<double>(channels) * per_channel + kernel.fixed_bytes;
}

double sram_power_w(double resident_bytes, double access_rate_bytes_per_s,
                    const SramModel& sram) {
    if (resident_bytes < 0 || access_rate_bytes_per_s < 0)
        throw std::invalid_argument("sram_power inputs must be >= 0");
    return sram.leakage_w_per_byte * resident_bytes +
           sram.e_access_j_per_byte * access_rate_bytes_per_s;
}

bool fits_in_sram(const Kernel& kernel, std::uint64_t channels,
                  double sram_capacity_bytes) {
    return working_set_bytes(kernel, channels) <= sram_capacity_bytes;
}

}  // namespace swapline
