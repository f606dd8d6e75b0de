// Command-line front end. Talks to the simulator exclusively through the
// shared library's C interface.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sixpp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitScenario = 3;

int exit_code_for(sixpp_status status) {
    switch (status) {
        case SIXPP_OK: return kExitOk;
        case SIXPP_ERR_USAGE: return kExitUsage;
        default: return kExitScenario;
    }
}

int report(sixpp_status status) {
    std::fprintf(stderr, "error: %s\n", sixpp_last_error());
    return exit_code_for(status);
}

bool write_file(const std::string& path, const char* content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return out.good();
}

bool ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) std::fprintf(stderr, "error: cannot create %s: %s\n", dir.c_str(), ec.message().c_str());
    return !ec;
}

// Frees C strings on scope exit.
struct CStr {
    char* ptr = nullptr;
    ~CStr() { sixpp_string_free(ptr); }
};

struct ScenarioHandle {
    sixpp_scenario* ptr = nullptr;
    ~ScenarioHandle() { sixpp_scenario_free(ptr); }
};

int load_scenario_with_overrides(const std::string& path,
                                 const std::vector<std::string>& overrides, bool seed_given,
                                 std::uint64_t seed, bool flood_trace, ScenarioHandle& handle) {
    sixpp_status st = sixpp_scenario_load(path.c_str(), &handle.ptr);
    if (st != SIXPP_OK) return report(st);
    for (const std::string& kv : overrides) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects section.key=value, got '%s'\n",
                         kv.c_str());
            return kExitUsage;
        }
        st = sixpp_scenario_set(handle.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
        if (st != SIXPP_OK) return report(st);
    }
    if (seed_given) {
        st = sixpp_scenario_set(handle.ptr, "run.seed", std::to_string(seed).c_str());
        if (st != SIXPP_OK) return report(st);
    }
    if (flood_trace) {
        st = sixpp_scenario_set(handle.ptr, "run.trace_floods", "true");
        if (st != SIXPP_OK) return report(st);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TSCH slotframe simulator with concurrent-transmission flood windows"};
    app.require_subcommand(1);
    // Global flags may appear on either side of the subcommand.
    app.fallthrough();

    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
    bool quiet = false;
    app.add_option("--seed", seed, "Override the run seed")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_option("--out", out_dir, "Directory for output CSV files");
    app.add_flag("--quiet", quiet, "Suppress the one-line summaries");

    // capacity
    auto* cap = app.add_subcommand("capacity", "Messages per slotframe for flood parameters");
    std::string cap_phy = "LE_2M";
    bool cap_all = false;
    unsigned cap_ntx = 2, cap_ntx_hi = 0;
    unsigned cap_nh = 3, cap_nh_hi = 0;
    std::uint64_t cap_tsf_ms = 10;
    unsigned cap_payload = 64;
    std::uint64_t cap_ramp = 40;
    unsigned cap_overhead = 6;
    cap->add_option("--phy", cap_phy, "PHY name (see --all-phys for the full sweep)");
    cap->add_flag("--all-phys", cap_all, "Sweep every known PHY");
    cap->add_option("--ntx", cap_ntx, "Transmissions per node");
    cap->add_option("--ntx-hi", cap_ntx_hi, "Upper bound for an n_tx sweep (inclusive)");
    cap->add_option("--nh", cap_nh, "Hop budget");
    cap->add_option("--nh-hi", cap_nh_hi, "Upper bound for an n_h sweep (inclusive)");
    cap->add_option("--tsf-ms", cap_tsf_ms, "Slotframe period in milliseconds");
    cap->add_option("--payload", cap_payload, "Flood payload bytes");
    cap->add_option("--ramp-us", cap_ramp, "Radio ramp-up per micro-slot in microseconds");
    cap->add_option("--overhead", cap_overhead, "Per-frame overhead bytes");

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute one scenario");
    std::string run_path;
    std::vector<std::string> run_sets;
    bool run_trace = false;
    run_cmd->add_option("scenario", run_path, "Scenario file")->required();
    run_cmd->add_option("--set", run_sets, "Override section.key=value (repeatable)");
    run_cmd->add_flag("--flood-trace", run_trace, "Record per-flood per-node outcomes");

    // matrix
    auto* matrix_cmd = app.add_subcommand("matrix", "Modes x jamming x seeds comparison");
    std::string matrix_path;
    std::vector<std::string> matrix_sets;
    unsigned matrix_seeds = 1;
    unsigned matrix_workers = 0;
    matrix_cmd->add_option("scenario", matrix_path, "Scenario file")->required();
    matrix_cmd->add_option("--set", matrix_sets, "Override section.key=value (repeatable)");
    matrix_cmd->add_option("--seeds", matrix_seeds, "Number of consecutive seeds")
        ->check(CLI::PositiveNumber);
    matrix_cmd->add_option("--workers", matrix_workers, "Worker threads (0 = hardware)");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate, run nothing");
    std::string validate_path;
    std::vector<std::string> validate_sets;
    validate_cmd->add_option("scenario", validate_path, "Scenario file")->required();
    validate_cmd->add_option("--set", validate_sets, "Override section.key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (!out_dir.empty() && !ensure_out_dir(out_dir)) return kExitScenario;

    if (cap->parsed()) {
        std::vector<const char*> phys;
        if (!cap_all) phys.push_back(cap_phy.c_str());
        unsigned ntx_hi = cap_ntx_hi == 0 ? cap_ntx : cap_ntx_hi;
        unsigned nh_hi = cap_nh_hi == 0 ? cap_nh : cap_nh_hi;
        sixpp_capacity_table* table = nullptr;
        sixpp_status st = sixpp_capacity_sweep(phys.empty() ? nullptr : phys.data(), phys.size(),
                                               cap_tsf_ms * 1000, cap_payload, cap_ntx, ntx_hi,
                                               cap_nh, nh_hi, cap_ramp, cap_overhead, &table);
        if (st != SIXPP_OK) return report(st);
        CStr csv;
        st = sixpp_capacity_csv(table, seed, &csv.ptr);
        if (st != SIXPP_OK) {
            sixpp_capacity_free(table);
            return report(st);
        }
        if (!out_dir.empty()) {
            std::string path = out_dir + "/capacity.csv";
            if (!write_file(path, csv.ptr)) {
                std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
                sixpp_capacity_free(table);
                return kExitScenario;
            }
            if (!quiet) std::printf("wrote %s (%zu rows)\n", path.c_str(),
                                    sixpp_capacity_row_count(table));
        } else {
            std::fputs(csv.ptr, stdout);
        }
        sixpp_capacity_free(table);
        return kExitOk;
    }

    if (run_cmd->parsed()) {
        ScenarioHandle scenario;
        int rc = load_scenario_with_overrides(run_path, run_sets, seed_given, seed, run_trace,
                                              scenario);
        if (rc != kExitOk) return rc;
        sixpp_run_result* result = nullptr;
        sixpp_status st = sixpp_run(scenario.ptr, &result);
        if (st != SIXPP_OK) return report(st);
        if (!quiet) {
            CStr line;
            if (sixpp_result_summary_line(result, &line.ptr) == SIXPP_OK)
                std::printf("%s\n", line.ptr);
        }
        if (!out_dir.empty()) {
            struct Sink {
                const char* name;
                sixpp_status (*get)(const sixpp_run_result*, char**);
            };
            std::vector<Sink> sinks = {{"events.csv", sixpp_result_events_csv},
                                       {"summary.csv", sixpp_result_summary_csv}};
            if (run_trace) sinks.push_back({"floods.csv", sixpp_result_floods_csv});
            for (const Sink& sink : sinks) {
                CStr csv;
                st = sink.get(result, &csv.ptr);
                if (st != SIXPP_OK) {
                    sixpp_result_free(result);
                    return report(st);
                }
                std::string path = out_dir + "/" + sink.name;
                if (!write_file(path, csv.ptr)) {
                    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
                    sixpp_result_free(result);
                    return kExitScenario;
                }
                if (!quiet) std::printf("wrote %s\n", path.c_str());
            }
        }
        sixpp_result_free(result);
        return kExitOk;
    }

    if (matrix_cmd->parsed()) {
        ScenarioHandle scenario;
        int rc = load_scenario_with_overrides(matrix_path, matrix_sets, seed_given, seed, false,
                                              scenario);
        if (rc != kExitOk) return rc;
        std::uint64_t base = seed_given ? seed : 1;
        std::vector<std::uint64_t> seeds;
        for (unsigned i = 0; i < matrix_seeds; ++i) seeds.push_back(base + i);
        sixpp_matrix_result* result = nullptr;
        sixpp_status st =
            sixpp_matrix(scenario.ptr, seeds.data(), seeds.size(), matrix_workers, &result);
        if (st != SIXPP_OK) return report(st);
        CStr csv;
        st = sixpp_matrix_csv(result, &csv.ptr);
        if (st != SIXPP_OK) {
            sixpp_matrix_free(result);
            return report(st);
        }
        if (!out_dir.empty()) {
            std::string path = out_dir + "/matrix.csv";
            if (!write_file(path, csv.ptr)) {
                std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
                sixpp_matrix_free(result);
                return kExitScenario;
            }
            if (!quiet) std::printf("wrote %s (%zu cells)\n", path.c_str(),
                                    sixpp_matrix_cell_count(result));
        } else {
            std::fputs(csv.ptr, stdout);
        }
        sixpp_matrix_free(result);
        return kExitOk;
    }

    if (validate_cmd->parsed()) {
        ScenarioHandle scenario;
        int rc = load_scenario_with_overrides(validate_path, validate_sets, seed_given, seed,
                                              false, scenario);
        if (rc != kExitOk) return rc;
        sixpp_status st = sixpp_scenario_validate(scenario.ptr);
        if (st != SIXPP_OK) return report(st);
        if (!quiet)
            std::printf("ok config=%016llx\n",
                        static_cast<unsigned long long>(sixpp_scenario_config_hash(scenario.ptr)));
        return kExitOk;
    }

    return kExitUsage;
}
