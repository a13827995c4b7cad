#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swapline/output.hpp"
#include "swapline/scenario.hpp"
#include "swapline/swap_sim.hpp"

namespace {

using namespace swapline;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file: " + path);
    return file;
}

std::vector<std::uint64_t> parse_list(const std::string& text, const char* flag) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoull(item));
        } catch (const std::exception&) {
            throw ConfigError(std::string(flag) + " expects comma-separated integers");
        }
    }
    if (out.empty())
        throw ConfigError(std::string(flag) + " expects at least one value");
    return out;
}

void warn_degenerate(const OperatingPointSet& set) {
    if (set.degenerate_channels.empty()) return;
    std::cerr << "warning: dropped " << set.degenerate_channels.size()
              << " degenerate point(s) with sampling rate under 1 Hz (channels "
              << set.degenerate_channels.front() << ".."
              << set.degenerate_channels.back() << ")\n";
}

int run_sweep(const std::string& config, const std::string& out_path,
              const std::string& mode_name, const std::string& gnuplot_path) {
    Scenario scenario = parse_scenario_file(config);
    if (!mode_name.empty()) scenario.mode = swap_mode_from_name(mode_name);
    warn_degenerate(scenario_operating_points(scenario));
    const FeasibilityMap map = sweep_scenario(scenario);
    std::ofstream file;
    write_map_csv(open_out(file, out_path), map);
    if (!gnuplot_path.empty()) {
        std::ofstream gp(gnuplot_path);
        if (!gp) throw ConfigError("cannot open output file: " + gnuplot_path);
        write_map_gnuplot(gp, map);
    }
    return 0;
}

int run_simulate(const std::string& config, std::uint64_t channels,
                 double horizon_s, std::uint64_t windows,
                 const std::string& mode_name, const std::string& trace_path) {
    Scenario scenario = parse_scenario_file(config);
    if (!mode_name.empty()) scenario.mode = swap_mode_from_name(mode_name);

    OperatingPoint point;
    if (channels == 0) {
        const OperatingPointSet set = scenario_operating_points(scenario);
        if (set.points.empty()) throw ConfigError("scenario grid has no usable point");
        point = set.points.front();
    } else {
        const OperatingPointSet set =
            operating_points(scenario.budget, {channels});
        warn_degenerate(set);
        if (set.points.empty())
            throw ConfigError("requested operating point is degenerate");
        point = set.points.front();
    }

    if (horizon_s <= 0) {
        double slowest = 0;
        for (const Kernel& k : scenario.kernels)
            slowest = std::max(slowest, static_cast<double>(k.window_samples) /
                                            point.sampling_rate_hz);
        horizon_s = static_cast<double>(windows) * slowest;
    }

    const SimResult result = simulate(scenario, point, horizon_s);
    std::cout << sim_report_to_json(result.report);
    if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        if (!tf) throw ConfigError("cannot open output file: " + trace_path);
        write_sim_trace_csv(tf, result);
    }
    return 0;
}

int run_analyze_em(const std::string& n_list, const std::string& m_list,
                   const std::string& b_list, double r, double w, double re,
                   double we, const std::string& out_path) {
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "algorithm,n_words,m_words,b_words,reads,writes,latency_cost,"
           "energy_cost\n";
    char buf[64];
    const auto emit = [&](const char* name, std::uint64_t n, const EmModel& em,
                          const IoCount& io) {
        std::snprintf(buf, sizeof buf, "%.9g", weighted_cost(io, r, w));
        out << name << ',' << n << ',' << em.m_words << ',' << em.b_words << ','
            << io.reads << ',' << io.writes << ',' << buf;
        std::snprintf(buf, sizeof buf, "%.9g", weighted_cost(io, re, we));
        out << ',' << buf << '\n';
    };
    for (std::uint64_t n : parse_list(n_list, "--n"))
        for (std::uint64_t m : parse_list(m_list, "--m"))
            for (std::uint64_t b : parse_list(b_list, "--b")) {
                const EmModel em{m, b, 4};
                emit("scan", n, em, scan_cost(n, em));
                try {
                    emit("mergesort", n, em, mergesort_cost(n, em));
                } catch (const std::exception& e) {
                    std::cerr << "warning: mergesort n=" << n << " m=" << m
                              << " b=" << b << ": " << e.what() << '\n';
                }
                if (n != 0 && (n & (n - 1)) == 0) {
                    try {
                        emit("fft", n, em, fft_cost(n, em));
                    } catch (const std::exception& e) {
                        std::cerr << "warning: fft n=" << n << " m=" << m
                                  << " b=" << b << ": " << e.what() << '\n';
                    }
                }
            }
    return 0;
}

int run_flash_info(const std::string& config, const std::string& out_path) {
    const Scenario scenario = parse_scenario_file(config);
    const FlashGeometry& g = scenario.flash.geometry;
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "# capacity_bytes=" << g.total_capacity_bytes()
        << " page_size_bytes=" << g.page_size_bytes
        << " plane_units=" << g.plane_units() << '\n';
    out << "k,sustained_read_mb_per_s,sustained_program_mb_per_s\n";
    char buf[64];
    for (std::uint64_t k = 1; k <= g.plane_units(); ++k) {
        const double rd =
            sustained_bandwidth_bytes_per_s(FlashOp::read, k, g, scenario.flash.timing);
        const double pr = sustained_bandwidth_bytes_per_s(FlashOp::program, k, g,
                                                          scenario.flash.timing);
        std::snprintf(buf, sizeof buf, "%llu,%.9g,%.9g",
                      static_cast<unsigned long long>(k), rd / 1e6, pr / 1e6);
        out << buf << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swapline: NAND-flash swap feasibility modeling for "
                 "power-constrained neural recording systems"};
    app.require_subcommand(1);

    std::string config, out_path, mode_name, gnuplot_path, trace_path;
    std::uint64_t channels = 0, windows = 50;
    double horizon_s = 0;
    std::string n_list, m_list, b_list;
    double r = 1.0, w = 1.0, re = -1.0, we = -1.0;

    CLI::App* sweep = app.add_subcommand("sweep", "classify every grid point (CSV)");
    sweep->add_option("--config", config, "scenario file")->required();
    sweep->add_option("--out", out_path, "CSV path (default stdout)");
    sweep->add_option("--mode", mode_name, "naive|em (overrides scenario)");
    sweep->add_option("--gnuplot", gnuplot_path, "also write a heat-map grid file");

    CLI::App* sim = app.add_subcommand("simulate", "event simulation of one point (JSON)");
    sim->add_option("--config", config, "scenario file")->required();
    sim->add_option("--channels", channels, "operating point (default: first grid point)");
    sim->add_option("--horizon-s", horizon_s, "simulated seconds");
    sim->add_option("--windows", windows, "horizon in slowest-kernel windows")
        ->default_val(50);
    sim->add_option("--mode", mode_name, "naive|em (overrides scenario)");
    sim->add_option("--trace", trace_path, "write per-window CSV trace");

    CLI::App* em = app.add_subcommand("analyze-em", "external-memory I/O cost table (CSV)");
    em->add_option("--n", n_list, "input sizes in words, comma-separated")->required();
    em->add_option("--m", m_list, "fast memory words, comma-separated")->required();
    em->add_option("--b", b_list, "block words, comma-separated")->required();
    em->add_option("--r", r, "latency weight per block read")
        ->default_val(1.0)->check(CLI::NonNegativeNumber);
    em->add_option("--w", w, "latency weight per block write")
        ->default_val(1.0)->check(CLI::NonNegativeNumber);
    em->add_option("--re", re, "energy weight per block read (default --r)")
        ->check(CLI::NonNegativeNumber);
    em->add_option("--we", we, "energy weight per block write (default --w)")
        ->check(CLI::NonNegativeNumber);
    em->add_option("--out", out_path, "CSV path (default stdout)");

    CLI::App* info = app.add_subcommand("flash-info", "sustained bandwidth per parallelism");
    info->add_option("--config", config, "scenario file")->required();
    info->add_option("--out", out_path, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (sweep->parsed()) return run_sweep(config, out_path, mode_name, gnuplot_path);
        if (sim->parsed())
            return run_simulate(config, channels, horizon_s, windows, mode_name,
                                trace_path);
        if (em->parsed()) {
            if (em->count("--re") == 0) re = r;
            if (em->count("--we") == 0) we = w;
            return run_analyze_em(n_list, m_list, b_list, r, w, re, we, out_path);
        }
        if (info->parsed()) return run_flash_info(config, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
