#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "swapline/em_cost.hpp"
#include "swapline/feasibility.hpp"
#include "swapline/flash_model.hpp"

namespace swapline {

// ---------------------------------------------------------------------------
// Scenario file: one JSON document with unit-suffixed keys (t_read_us,
// bus_mb_per_s, power_budget_mw, ...). Parsing validates every invariant and
// rejects unknown fields by name; serialization emits the normalized form
// with all defaults resolved.
// ---------------------------------------------------------------------------

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepGrid {
    bool log_range = true;
    double channels_log2_min = 4;
    double channels_log2_max = 24;
    std::uint64_t points = 1024;
    std::vector<std::uint64_t> channels;  // explicit list when !log_range

    // rounded geometric grid (or the explicit list), order preserved
    std::vector<std::uint64_t> expand() const;
    void validate() const;
    bool operator==(const SweepGrid&) const = default;
};

struct Scenario {
    FlashDevice flash;
    std::vector<Kernel> kernels;
    SramModel sram;
    SystemBudget budget;
    EmModel em;  // m_words derived from the pooled SRAM capacity
    SweepGrid grid;
    SwapMode mode = SwapMode::naive;

    void validate() const;
    bool operator==(const Scenario&) const = default;
};

const char* swap_mode_name(SwapMode mode);
SwapMode swap_mode_from_name(const std::string& name);

Scenario parse_scenario_string(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

// normalized form: canonical units, defaults resolved, keys sorted
std::string scenario_to_json_string(const Scenario& scenario);

// FNV-1a over the normalized form; ties a FeasibilityMap to its scenario
std::uint64_t scenario_fingerprint(const Scenario& scenario);

// expand the grid, drop degenerate points (returned for warning), classify
OperatingPointSet scenario_operating_points(const Scenario& scenario);
FeasibilityMap sweep_scenario(const Scenario& scenario);
FeasibilityMap sweep_scenario(const Scenario& scenario, SwapMode mode);

}  // namespace swapline
