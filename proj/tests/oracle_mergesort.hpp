#pragma once

// Test-only oracle: count block reads/writes of external multiway mergesort
// by simulating the schedule itself (run formation, then repeated
// fanout-way merging of run lengths). Independent of the closed-form cost
// in the library; block counts only, no element data.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Counts {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
};

inline std::uint64_t blocks(std::uint64_t words, std::uint64_t b) {
    return words == 0 ? 0 : (words - 1) / b + 1;
}

inline Counts mergesort_block_io(std::uint64_t n, std::uint64_t m, std::uint64_t b) {
    Counts c;
    if (n == 0) return c;
    std::vector<std::uint64_t> runs;
    for (std::uint64_t left = n; left > 0;) {
        const std::uint64_t run = std::min(m, left);
        left -= run;
        c.reads += blocks(run, b);
        c.writes += blocks(run, b);
        runs.push_back(run);
    }
    const std::uint64_t fanout = m / b - 1;
    if (runs.size() > 1 && fanout < 2)
        throw std::domain_error("oracle: memory too small to merge");
    while (runs.size() > 1) {
        std::vector<std::uint64_t> next;
        for (std::size_t i = 0; i < runs.size(); i += fanout) {
            const std::size_t end = std::min(runs.size(), i + fanout);
            std::uint64_t merged = 0;
            for (std::size_t j = i; j < end; ++j) {
                c.reads += blocks(runs[j], b);
                merged += runs[j];
            }
            c.writes += blocks(merged, b);
            next.push_back(merged);
        }
        runs.swap(next);
    }
    return c;
}

}  // namespace oracle
