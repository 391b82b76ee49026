// SPDX-License-Identifier: Apache-2.0
//
// Thin command-line layer over the library: run scenarios, compute schedule
// phases, summarize traces, export per-switch launch configurations.

#include <gatesim/gatesim.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

using namespace gatesim;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

// A scenario argument is either a built-in name or a file path.
ScenarioConfig load_scenario(const std::string& arg, std::uint64_t seed, bool seed_set) {
    ScenarioConfig cfg = std::filesystem::exists(arg)
                             ? parse_scenario(read_file(arg))
                             : builtin_scenario(arg, seed_set ? seed : 1);
    if (seed_set) cfg.seed = seed;
    return cfg;
}

// Cut instants accept a unit suffix: "2s", "1500ms", "250us", "42ns".
SimTime parse_instant(std::string tok) {
    std::int64_t scale = 1;
    auto ends_with = [&tok](const char* suf) {
        const std::size_t n = std::char_traits<char>::length(suf);
        return tok.size() > n && tok.compare(tok.size() - n, n, suf) == 0;
    };
    if (ends_with("ns")) {
        tok.resize(tok.size() - 2);
    } else if (ends_with("us")) {
        scale = 1'000;
        tok.resize(tok.size() - 2);
    } else if (ends_with("ms")) {
        scale = 1'000'000;
        tok.resize(tok.size() - 2);
    } else if (ends_with("s")) {
        scale = 1'000'000'000;
        tok.resize(tok.size() - 1);
    }
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("bad time value '" + tok + "'");
    }
    return SimTime{std::stoll(tok) * scale};
}

std::vector<SimTime> parse_cuts(const std::string& spec) {
    std::vector<SimTime> cuts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) cuts.push_back(parse_instant(tok));
    }
    return cuts;
}

int cmd_run(const std::string& scenario, std::uint64_t seed, bool seed_set,
            const std::string& out_dir) {
    Network net(load_scenario(scenario, seed, seed_set));
    net.run();

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "trace.csv", net.trace().to_csv());
    if (net.controller()) {
        write_file(dir / "control_log.csv", net.controller()->log().to_csv());
    }

    const AuditReport audit = net.audit();
    std::cout << "scenario " << net.config().name << " seed " << net.config().seed << " ran to "
              << net.engine().now().ns << " ns\n"
              << "trace rows: " << net.trace().rows().size() << "\n"
              << "conservation: born=" << audit.born() << " recorded=" << audit.recorded
              << " absorbed=" << audit.host_absorbed << " punted=" << audit.punted
              << " dropped=" << audit.dropped << " in-flight=" << audit.residual
              << (audit.balanced() ? " (balanced)" : " (IMBALANCED)") << "\n"
              << "wrote " << (dir / "trace.csv").string();
    if (net.controller()) std::cout << " and " << (dir / "control_log.csv").string();
    std::cout << "\n";
    return audit.balanced() ? 0 : 1;
}

int cmd_gcl_calc(std::uint32_t max_frame, std::uint32_t hp_frame, const std::string& rate,
                 const std::string& cycle_us, const std::string& margin_us, bool paper) {
    const std::uint64_t bps = parse_rate(rate);
    const Duration cycle = parse_duration_us(cycle_us);
    const Duration margin = parse_duration_us(margin_us);
    const PhaseSet p = paper ? gcl_calc_paper_rounded(max_frame, hp_frame, bps, cycle, margin)
                             : gcl_calc_exact(max_frame, hp_frame, bps, cycle, margin);
    std::cout << "red_us " << format_duration_us(p.t_red) << "\n"
              << "green_us " << format_duration_us(p.t_green) << "\n"
              << "yellow_us " << format_duration_us(p.t_yellow) << "\n"
              << "gcl " << p.to_gcl_text() << "\n";
    return 0;
}

int cmd_report(const std::string& trace_path, const std::string& cuts_spec,
               const std::string& settle_us) {
    const auto rows = parse_trace_csv(read_file(trace_path));
    const auto report = interval_report(rows, parse_cuts(cuts_spec), parse_duration_us(settle_us));
    std::cout << render_report(report);
    return 0;
}

int cmd_export_launch_config(const std::string& scenario, const std::string& switch_id,
                             std::uint64_t seed, bool seed_set) {
    Network net(load_scenario(scenario, seed, seed_set));
    Switch* sw = net.find_switch(switch_id);
    if (!sw) throw ConfigError("no switch '" + switch_id + "' in scenario");
    std::cout << serialize_switch_config(sw->export_launch_config());
    return 0;
}

int cmd_print_scenario(const std::string& name, std::uint64_t seed, bool seed_set) {
    std::cout << serialize_scenario(builtin_scenario(name, seed_set ? seed : 1));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"software-defined time-sensitive Ethernet simulator"};
    app.require_subcommand(1);

    std::string scenario, out_dir = ".", switch_id, trace_path;
    std::string cuts = "2s,4s,6s,8s", settle = "0", rate, cycle_us, margin_us, name;
    std::uint32_t max_frame = 0, hp_frame = 0;
    std::uint64_t seed = 1;
    bool paper = false;

    CLI::App* run = app.add_subcommand("run", "simulate a scenario and write trace/control logs");
    run->add_option("scenario", scenario, "built-in name or scenario file")->required();
    CLI::Option* run_seed = run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out", out_dir, "output directory (default .)");

    CLI::App* calc = app.add_subcommand("gcl-calc", "compute protected-window phases");
    calc->add_option("--max-frame", max_frame, "largest interfering frame, bytes")->required();
    calc->add_option("--hp-frame", hp_frame, "protected stream frame, bytes")->required();
    calc->add_option("--rate", rate, "link rate, bit/s (suffix K/M/G)")->required();
    calc->add_option("--cycle", cycle_us, "cycle length, us")->required();
    calc->add_option("--margin", margin_us, "safety margin, us")->required();
    calc->add_flag("--paper-rounding", paper,
                   "round serialization terms to the nearest 5 us first");

    CLI::App* report = app.add_subcommand("report", "per-flow latency statistics from a trace");
    report->add_option("trace", trace_path, "trace CSV file")->required();
    report->add_option("--cuts", cuts, "interval boundaries (default 2s,4s,6s,8s)");
    report->add_option("--settle", settle, "per-interval settle window to skip, us (default 0)");

    CLI::App* exp = app.add_subcommand("export-launch-config",
                                       "print one switch's launch configuration");
    exp->add_option("scenario", scenario, "built-in name or scenario file")->required();
    exp->add_option("switch", switch_id, "switch id")->required();
    CLI::Option* exp_seed = exp->add_option("--seed", seed, "override the scenario seed");

    CLI::App* print = app.add_subcommand("print-scenario", "print a built-in scenario file");
    print->add_option("name", name, "built-in scenario name")->required();
    CLI::Option* print_seed = print->add_option("--seed", seed, "seed to embed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario, seed, run_seed->count() > 0, out_dir);
        if (calc->parsed()) {
            return cmd_gcl_calc(max_frame, hp_frame, rate, cycle_us, margin_us, paper);
        }
        if (report->parsed()) return cmd_report(trace_path, cuts, settle);
        if (exp->parsed()) {
            return cmd_export_launch_config(scenario, switch_id, seed, exp_seed->count() > 0);
        }
        if (print->parsed()) return cmd_print_scenario(name, seed, print_seed->count() > 0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
