#pragma once

#include <cstdint>

#include "swapline/accel_model.hpp"

namespace swapline {

// ---------------------------------------------------------------------------
// External-memory block-I/O counts: a fast memory of M words exchanging
// blocks of B words with storage. Costs are exact pass counts (testable
// against a block-counting simulation), not asymptotic bounds. Read/write
// asymmetry enters as linear weights on the two counts.
// ---------------------------------------------------------------------------

struct EmModel {
    std::uint64_t m_words = 2;   // fast-memory capacity
    std::uint64_t b_words = 1;   // words per block
    std::uint64_t word_bytes = 4;

    void validate() const;  // M >= 2B >= 2, word_bytes >= 1
    bool operator==(const EmModel&) const = default;
};

struct IoCount {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    bool operator==(const IoCount&) const = default;
};

// One streaming pass over the input: ceil(N/B) reads, nothing written back.
IoCount scan_cost(std::uint64_t n_words, const EmModel& model);

// Multiway mergesort: run formation plus ceil(log_fanout(runs)) merge passes,
// fanout = floor(M/B) - 1. Each pass reads and writes ceil(N/B) blocks.
// Throws std::domain_error when N > M and fanout < 2 (M too small to merge).
IoCount mergesort_cost(std::uint64_t n_words, const EmModel& model);

// External FFT, costed at the sorting I/O complexity (modeling equivalence;
// the transform itself is not evaluated). N must be a power of two.
IoCount fft_cost(std::uint64_t n_words, const EmModel& model);

// r*reads + w*writes; computed as r*(reads+writes) when r == w so the
// symmetric reduction is exact.
double weighted_cost(const IoCount& io, double r, double w);

enum class SwapMode { naive, em };

// Block I/Os one accelerator issues per processing window once its working
// set overflows the given capacity (zero if it fits).
//   naive      touch-once paging of the overflow: reads = ceil(overflow/Bb),
//              writes = ceil(dirty*overflow/Bb), Bb = B*word_bytes
//   em, BBF/DWT/XCOR   scan-shaped, same touch-once counts (streaming state)
//   em, FFT    fft_cost over the working set padded to a power of two,
//              with M = capacity/word_bytes
//   em, DTW    mergesort_cost over the working set (candidate-search sort)
IoCount kernel_io_per_window(const Kernel& kernel, std::uint64_t channels,
                             double sram_capacity_bytes, const EmModel& model,
                             SwapMode mode);

}  // namespace swapline
