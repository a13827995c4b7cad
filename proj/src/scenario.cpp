#include "swapline/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace swapline {

using nlohmann::json;

namespace {

// unit scales applied on parse; serialization divides them back out
constexpr double kUs = 1e-6;
constexpr double kMs = 1e-3;
constexpr double kMb = 1e6;   // both MB/s (bytes) and Mb/s (bits)
constexpr double kMw = 1e-3;
constexpr double kUj = 1e-6;
constexpr double kNw = 1e-9;
constexpr double kPj = 1e-12;

[[noreturn]] void missing(const std::string& scope, const char* key) {
    throw ConfigError("missing field " + scope + "." + key);
}

void check_keys(const json& obj, const std::string& scope,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known)
            throw ConfigError("unknown field " + scope + "." + item.key());
    }
}

double req_num(const json& obj, const std::string& scope, const char* key) {
    if (!obj.contains(key)) missing(scope, key);
    if (!obj[key].is_number())
        throw ConfigError("field " + scope + "." + key + " must be a number");
    return obj[key].get<double>();
}

double opt_num(const json& obj, const std::string& scope, const char* key,
               double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ConfigError("field " + scope + "." + key + " must be a number");
    return obj[key].get<double>();
}

std::uint64_t req_count(const json& obj, const std::string& scope, const char* key) {
    if (!obj.contains(key)) missing(scope, key);
    if (!obj[key].is_number_unsigned())
        throw ConfigError("field " + scope + "." + key +
                          " must be a non-negative integer");
    return obj[key].get<std::uint64_t>();
}

std::uint64_t opt_count(const json& obj, const std::string& scope, const char* key,
                        std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_unsigned())
        throw ConfigError("field " + scope + "." + key +
                          " must be a non-negative integer");
    return obj[key].get<std::uint64_t>();
}

const json& req_obj(const json& obj, const std::string& scope, const char* key) {
    if (!obj.contains(key)) missing(scope, key);
    if (!obj[key].is_object())
        throw ConfigError("field " + scope + "." + key + " must be an object");
    return obj[key];
}

FlashGeometry parse_geometry(const json& j) {
    const std::string scope = "flash.geometry";
    check_keys(j, scope, {"chips", "dies_per_chip", "planes_per_die",
                          "blocks_per_plane", "pages_per_block", "page_size_bytes"});
    FlashGeometry g;
    g.chips = req_count(j, scope, "chips");
    g.dies_per_chip = req_count(j, scope, "dies_per_chip");
    g.planes_per_die = req_count(j, scope, "planes_per_die");
    g.blocks_per_plane = req_count(j, scope, "blocks_per_plane");
    g.pages_per_block = req_count(j, scope, "pages_per_block");
    g.page_size_bytes = req_count(j, scope, "page_size_bytes");
    return g;
}

FlashTiming parse_timing(const json& j) {
    const std::string scope = "flash.timing";
    check_keys(j, scope, {"t_read_us", "t_program_us", "t_erase_ms",
                          "bus_mb_per_s", "t_cmd_us"});
    FlashTiming t;
    t.t_read_s = req_num(j, scope, "t_read_us") * kUs;
    t.t_program_s = req_num(j, scope, "t_program_us") * kUs;
    t.t_erase_s = req_num(j, scope, "t_erase_ms") * kMs;
    t.bus_bytes_per_s = req_num(j, scope, "bus_mb_per_s") * kMb;
    t.t_cmd_s = req_num(j, scope, "t_cmd_us") * kUs;
    return t;
}

FlashPower parse_flash_power(const json& j) {
    const std::string scope = "flash.power";
    check_keys(j, scope, {"e_read_page_uj", "e_program_page_uj", "e_erase_block_uj",
                          "e_bus_pj_per_byte", "p_chip_active_mw", "p_chip_idle_mw"});
    FlashPower p;
    p.e_read_page_j = req_num(j, scope, "e_read_page_uj") * kUj;
    p.e_program_page_j = req_num(j, scope, "e_program_page_uj") * kUj;
    p.e_erase_block_j = req_num(j, scope, "e_erase_block_uj") * kUj;
    p.e_bus_j_per_byte = req_num(j, scope, "e_bus_pj_per_byte") * kPj;
    p.p_chip_active_w = req_num(j, scope, "p_chip_active_mw") * kMw;
    p.p_chip_idle_w = req_num(j, scope, "p_chip_idle_mw") * kMw;
    return p;
}

Kernel parse_kernel(const json& j, std::size_t index) {
    const std::string scope = "kernels[" + std::to_string(index) + "]";
    if (!j.is_object()) throw ConfigError(scope + " must be an object");
    if (!j.contains("name")) missing(scope, "name");
    if (!j["name"].is_string())
        throw ConfigError("field " + scope + ".name must be a string");
    const KernelKind kind = kernel_kind_from_name(j["name"].get<std::string>());

    switch (kind) {
        case KernelKind::bbf:
            check_keys(j, scope,
                       {"name", "window_samples", "dirty_fraction", "sections",
                        "alpha_bytes_per_channel", "beta_bytes_per_sample", "fixed_bytes"});
            break;
        case KernelKind::dwt:
            check_keys(j, scope,
                       {"name", "window_samples", "dirty_fraction", "levels",
                        "alpha_bytes_per_channel", "beta_bytes_per_sample", "fixed_bytes"});
            break;
        case KernelKind::dtw:
            check_keys(j, scope,
                       {"name", "window_samples", "dirty_fraction", "band_width",
                        "alpha_bytes_per_channel", "beta_bytes_per_sample", "fixed_bytes"});
            break;
        default:
            check_keys(j, scope,
                       {"name", "window_samples", "dirty_fraction",
                        "alpha_bytes_per_channel", "beta_bytes_per_sample", "fixed_bytes"});
            break;
    }

    const std::uint64_t window = opt_count(j, scope, "window_samples", 128);
    std::uint64_t param = 0;
    switch (kind) {
        case KernelKind::bbf: param = opt_count(j, scope, "sections", 4); break;
        case KernelKind::dwt: param = opt_count(j, scope, "levels", 4); break;
        case KernelKind::dtw: param = opt_count(j, scope, "band_width", 16); break;
        default: break;
    }
    Kernel k = make_default_kernel(kind, window, param);
    k.dirty_fraction = opt_num(j, scope, "dirty_fraction", 1.0);
    k.alpha_bytes_per_channel =
        opt_num(j, scope, "alpha_bytes_per_channel", k.alpha_bytes_per_channel);
    k.beta_bytes_per_sample =
        opt_num(j, scope, "beta_bytes_per_sample", k.beta_bytes_per_sample);
    k.fixed_bytes = opt_num(j, scope, "fixed_bytes", k.fixed_bytes);
    return k;
}

}  // namespace

const char* swap_mode_name(SwapMode mode) {
    return mode == SwapMode::naive ? "naive" : "em";
}

SwapMode swap_mode_from_name(const std::string& name) {
    if (name == "naive") return SwapMode::naive;
    if (name == "em") return SwapMode::em;
    throw ConfigError("unknown mode \"" + name + "\"; valid modes: naive, em");
}

std::vector<std::uint64_t> SweepGrid::expand() const {
    if (!log_range) return channels;
    std::vector<std::uint64_t> out;
    out.reserve(points);
    if (points == 1) {
        out.push_back(static_cast<std::uint64_t>(
            std::max(1.0, std::round(std::exp2(channels_log2_min)))));
        return out;
    }
    const double step = (channels_log2_max - channels_log2_min) /
                        static_cast<double>(points - 1);
    for (std::uint64_t i = 0; i < points; ++i) {
        const double x = channels_log2_min + static_cast<double>(i) * step;
        out.push_back(static_cast<std::uint64_t>(
            std::max(1.0, std::round(std::exp2(x)))));
    }
    return out;
}

void SweepGrid::validate() const {
    if (log_range) {
        if (points < 1) throw ConfigError("sweep.points must be >= 1");
        if (channels_log2_max < channels_log2_min)
            throw ConfigError("sweep.channels_log2_max must be >= channels_log2_min");
        if (channels_log2_min < 0 || channels_log2_max > 62)
            throw ConfigError("sweep.channels_log2_min/max must lie in [0, 62]");
    } else {
        if (channels.empty()) throw ConfigError("sweep.channels must be non-empty");
        for (std::uint64_t c : channels)
            if (c < 1) throw ConfigError("sweep.channels entries must be >= 1");
    }
}

void Scenario::validate() const {
    try {
        flash.validate();
        if (kernels.empty()) throw ConfigError("kernels must list at least one kernel");
        for (const Kernel& k : kernels) k.validate();
        sram.validate();
        budget.validate();
        if (em.word_bytes < 1) throw ConfigError("em.word_bytes must be >= 1");
        if (em.b_words < 1) throw ConfigError("em.block_words must be >= 1");
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Scenario parse_scenario_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("scenario root must be an object");
    check_keys(doc, "scenario",
               {"mode", "flash", "kernels", "sram", "budget", "em", "sweep"});

    Scenario s;

    const json& flash = req_obj(doc, "scenario", "flash");
    check_keys(flash, "flash", {"geometry", "timing", "power"});
    s.flash.geometry = parse_geometry(req_obj(flash, "flash", "geometry"));
    s.flash.timing = parse_timing(req_obj(flash, "flash", "timing"));
    s.flash.power = parse_flash_power(req_obj(flash, "flash", "power"));

    if (!doc.contains("kernels") || !doc["kernels"].is_array())
        throw ConfigError("missing field scenario.kernels (array)");
    try {
        for (std::size_t i = 0; i < doc["kernels"].size(); ++i)
            s.kernels.push_back(parse_kernel(doc["kernels"][i], i));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const json& sram = req_obj(doc, "scenario", "sram");
    check_keys(sram, "sram",
               {"leakage_nw_per_byte", "e_access_pj_per_byte", "capacity_accel_bytes",
                "capacity_controller_bytes", "controller_power_mw"});
    s.sram.leakage_w_per_byte = req_num(sram, "sram", "leakage_nw_per_byte") * kNw;
    s.sram.e_access_j_per_byte = req_num(sram, "sram", "e_access_pj_per_byte") * kPj;

    const json& budget = req_obj(doc, "scenario", "budget");
    check_keys(budget, "budget", {"total_data_rate_mbps", "sample_bits",
                                  "power_budget_mw", "response_deadline_ms"});
    s.budget.total_data_rate_bits_per_s =
        req_num(budget, "budget", "total_data_rate_mbps") * kMb;
    s.budget.sample_bits = req_count(budget, "budget", "sample_bits");
    s.budget.power_budget_w = req_num(budget, "budget", "power_budget_mw") * kMw;
    s.budget.response_deadline_s =
        req_num(budget, "budget", "response_deadline_ms") * kMs;
    s.budget.sram_capacity_accel_bytes = req_num(sram, "sram", "capacity_accel_bytes");
    s.budget.sram_capacity_controller_bytes =
        req_num(sram, "sram", "capacity_controller_bytes");
    s.budget.controller_power_w = opt_num(sram, "sram", "controller_power_mw", 0) * kMw;

    s.em.word_bytes = 4;
    s.em.b_words = 0;  // 0 = derive one flash page per block below
    if (doc.contains("em")) {
        const json& em = doc["em"];
        check_keys(em, "em", {"word_bytes", "block_words"});
        s.em.word_bytes = opt_count(em, "em", "word_bytes", 4);
        s.em.b_words = opt_count(em, "em", "block_words", 0);
    }
    if (s.em.word_bytes < 1) throw ConfigError("em.word_bytes must be >= 1");
    if (s.em.b_words == 0)  // default block = one flash page
        s.em.b_words = std::max<std::uint64_t>(
            1, s.flash.geometry.page_size_bytes / s.em.word_bytes);
    s.em.m_words = static_cast<std::uint64_t>(s.budget.pooled_capacity_bytes() /
                                              static_cast<double>(s.em.word_bytes));

    if (doc.contains("sweep")) {
        const json& grid = doc["sweep"];
        if (grid.contains("channels")) {
            check_keys(grid, "sweep", {"channels"});
            if (!grid["channels"].is_array())
                throw ConfigError("sweep.channels must be an array");
            s.grid.log_range = false;
            for (const json& c : grid["channels"]) {
                if (!c.is_number_unsigned())
                    throw ConfigError("sweep.channels entries must be positive integers");
                s.grid.channels.push_back(c.get<std::uint64_t>());
            }
        } else {
            check_keys(grid, "sweep",
                       {"channels_log2_min", "channels_log2_max", "points"});
            s.grid.log_range = true;
            s.grid.channels_log2_min = opt_num(grid, "sweep", "channels_log2_min", 4);
            s.grid.channels_log2_max = opt_num(grid, "sweep", "channels_log2_max", 24);
            s.grid.points = opt_count(grid, "sweep", "points", 1024);
        }
    }

    if (doc.contains("mode")) {
        if (!doc["mode"].is_string())
            throw ConfigError("field scenario.mode must be a string");
        s.mode = swap_mode_from_name(doc["mode"].get<std::string>());
    }

    s.validate();
    return s;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_string(buf.str());
}

std::string scenario_to_json_string(const Scenario& s) {
    json doc;
    doc["mode"] = swap_mode_name(s.mode);
    doc["flash"]["geometry"] = {
        {"chips", s.flash.geometry.chips},
        {"dies_per_chip", s.flash.geometry.dies_per_chip},
        {"planes_per_die", s.flash.geometry.planes_per_die},
        {"blocks_per_plane", s.flash.geometry.blocks_per_plane},
        {"pages_per_block", s.flash.geometry.pages_per_block},
        {"page_size_bytes", s.flash.geometry.page_size_bytes},
    };
    doc["flash"]["timing"] = {
        {"t_read_us", s.flash.timing.t_read_s / kUs},
        {"t_program_us", s.flash.timing.t_program_s / kUs},
        {"t_erase_ms", s.flash.timing.t_erase_s / kMs},
        {"bus_mb_per_s", s.flash.timing.bus_bytes_per_s / kMb},
        {"t_cmd_us", s.flash.timing.t_cmd_s / kUs},
    };
    doc["flash"]["power"] = {
        {"e_read_page_uj", s.flash.power.e_read_page_j / kUj},
        {"e_program_page_uj", s.flash.power.e_program_page_j / kUj},
        {"e_erase_block_uj", s.flash.power.e_erase_block_j / kUj},
        {"e_bus_pj_per_byte", s.flash.power.e_bus_j_per_byte / kPj},
        {"p_chip_active_mw", s.flash.power.p_chip_active_w / kMw},
        {"p_chip_idle_mw", s.flash.power.p_chip_idle_w / kMw},
    };
    doc["kernels"] = json::array();
    for (const Kernel& k : s.kernels) {
        doc["kernels"].push_back({
            {"name", kernel_kind_name(k.kind)},
            {"window_samples", k.window_samples},
            {"dirty_fraction", k.dirty_fraction},
            {"alpha_bytes_per_channel", k.alpha_bytes_per_channel},
            {"beta_bytes_per_sample", k.beta_bytes_per_sample},
            {"fixed_bytes", k.fixed_bytes},
        });
    }
    doc["sram"] = {
        {"leakage_nw_per_byte", s.sram.leakage_w_per_byte / kNw},
        {"e_access_pj_per_byte", s.sram.e_access_j_per_byte / kPj},
        {"capacity_accel_bytes", s.budget.sram_capacity_accel_bytes},
        {"capacity_controller_bytes", s.budget.sram_capacity_controller_bytes},
        {"controller_power_mw", s.budget.controller_power_w / kMw},
    };
    doc["budget"] = {
        {"total_data_rate_mbps", s.budget.total_data_rate_bits_per_s / kMb},
        {"sample_bits", s.budget.sample_bits},
        {"power_budget_mw", s.budget.power_budget_w / kMw},
        {"response_deadline_ms", s.budget.response_deadline_s / kMs},
    };
    doc["em"] = {
        {"word_bytes", s.em.word_bytes},
        {"block_words", s.em.b_words},
    };
    if (s.grid.log_range) {
        doc["sweep"] = {
            {"channels_log2_min", s.grid.channels_log2_min},
            {"channels_log2_max", s.grid.channels_log2_max},
            {"points", s.grid.points},
        };
    } else {
        doc["sweep"] = {{"channels", s.grid.channels}};
    }
    return doc.dump(2) + "\n";
}

std::uint64_t scenario_fingerprint(const Scenario& scenario) {
    const std::string text = scenario_to_json_string(scenario);
    std::uint64_t hash = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

OperatingPointSet scenario_operating_points(const Scenario& scenario) {
    return operating_points(scenario.budget, scenario.grid.expand());
}

FeasibilityMap sweep_scenario(const Scenario& scenario) {
    return sweep_scenario(scenario, scenario.mode);
}

FeasibilityMap sweep_scenario(const Scenario& scenario, SwapMode mode) {
    const OperatingPointSet set = scenario_operating_points(scenario);
    return sweep(set.points, scenario.kernels, scenario.flash, scenario.sram,
                 scenario.budget, scenario.em, mode, scenario_fingerprint(scenario));
}

}  // namespace swapline
