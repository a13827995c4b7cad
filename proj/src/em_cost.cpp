#include "swapline/em_cost.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace swapline {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
    return a == 0 ? 0 : (a - 1) / b + 1;
}

std::uint64_t ceil_div_bytes(double bytes, double block_bytes) {
    if (bytes <= 0) return 0;
    return static_cast<std::uint64_t>(std::ceil(bytes / block_bytes));
}

bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::uint64_t next_pow2(std::uint64_t n) {
    std::uint64_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// merge passes: smallest p with fanout^p >= runs
std::uint64_t merge_passes(std::uint64_t runs, std::uint64_t fanout) {
    std::uint64_t passes = 0;
    std::uint64_t reach = 1;
    while (reach < runs) {
        if (reach > std::numeric_limits<std::uint64_t>::max() / fanout)
            reach = std::numeric_limits<std::uint64_t>::max();
        else
            reach *= fanout;
        ++passes;
    }
    return passes;
}

}  // namespace

void EmModel::validate() const {
    if (word_bytes < 1) throw std::invalid_argument("em.word_bytes must be >= 1");
    if (b_words < 1) throw std::invalid_argument("em.block_words must be >= 1");
    if (m_words < 2 * b_words)
        throw std::invalid_argument("em model requires M >= 2B");
}

IoCount scan_cost(std::uint64_t n_words, const EmModel& model) {
    model.validate();
    return IoCount{ceil_div(n_words, model.b_words), 0};
}

IoCount mergesort_cost(std::uint64_t n_words, const EmModel& model) {
    model.validate();
    const std::uint64_t blocks = ceil_div(n_words, model.b_words);
    if (n_words <= model.m_words) return IoCount{blocks, blocks};
    const std::uint64_t runs = ceil_div(n_words, model.m_words);
    const std::uint64_t fanout = model.m_words / model.b_words - 1;
    if (fanout < 2)
        throw std::domain_error("em model fast memory too small to merge (fanout < 2)");
    const std::uint64_t total = blocks * (1 + merge_passes(runs, fanout));
    return IoCount{total, total};
}

IoCount fft_cost(std::uint64_t n_words, const EmModel& model) {
    if (!is_pow2(n_words))
        throw std::invalid_argument("fft_cost requires a power-of-two word count");
    return mergesort_cost(n_words, model);
}

double weighted_cost(const IoCount& io, double r, double w) {
    const double reads = static_cast<double>(io.reads);
    const double writes = static_cast<double>(io.writes);
    if (r == w) return r * (reads + writes);
    return r * reads + w * writes;
}

IoCount kernel_io_per_window(const Kernel& kernel, std::uint64_t channels,
                             double sram_capacity_bytes, const EmModel& model,
                             SwapMode mode) {
    if (model.word_bytes < 1 || model.b_words < 1)
        throw std::invalid_argument("em model requires word_bytes >= 1 and block_words >= 1");
    const double ws = working_set_bytes(kernel, channels);
    if (ws <= sram_capacity_bytes) return IoCount{};
    const double overflow = ws - sram_capacity_bytes;
    const double block_bytes =
        static_cast<double>(model.b_words) * static_cast<double>(model.word_bytes);

    const IoCount touch_once{
        ceil_div_bytes(overflow, block_bytes),
        ceil_div_bytes(kernel.dirty_fraction * overflow, block_bytes)};

    if (mode == SwapMode::naive) return touch_once;

    switch (kernel.kind) {
        case KernelKind::fft: {
            EmModel m = model;
            m.m_words = static_cast<std::uint64_t>(
                sram_capacity_bytes / static_cast<double>(model.word_bytes));
            const std::uint64_t ws_words = next_pow2(static_cast<std::uint64_t>(
                std::ceil(ws / static_cast<double>(model.word_bytes))));
            return fft_cost(ws_words, m);
        }
        case KernelKind::dtw: {
            EmModel m = model;
            m.m_words = static_cast<std::uint64_t>(
                sram_capacity_bytes / static_cast<double>(model.word_bytes));
            const std::uint64_t ws_words = static_cast<std::uint64_t>(
                std::ceil(ws / static_cast<double>(model.word_bytes)));
            return mergesort_cost(ws_words, m);
        }
        case KernelKind::bbf:
        case KernelKind::dwt:
        case KernelKind::xcor:
        case KernelKind::custom:
            // streaming kernels: one scan-shaped pass over the overflow
            return touch_once;
    }
    return touch_once;
}

}  // namespace swapline
