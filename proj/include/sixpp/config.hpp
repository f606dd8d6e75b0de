#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sixpp/core.hpp"
#include "sixpp/phy.hpp"
#include "sixpp/schedule.hpp"
#include "sixpp/tschmac.hpp"
#include "sixpp/rpl.hpp"

namespace sixpp {

struct TopologySpec {
    enum class Kind : std::uint8_t { LINE, GRID, CLUSTER_LINE, RGG, EDGE_LIST };
    Kind kind = Kind::LINE;
    unsigned n = 2;
    unsigned rows = 1, cols = 2;
    unsigned clusters = 2, width = 1;
    double radius = 0.5;
    double prr = 1.0;
    std::uint64_t topo_seed = 42;  // placement seed, independent of the run seed
    std::string path;              // EDGE_LIST only

    Topology build() const;
};

struct JammerConfig {
    bool enabled = false;
    // Narrowband: a fixed set of channels across both planes.
    std::set<unsigned> channels = {17, 22, 39};
    double jam_loss = 1.0;
    // Active windows in true time; empty = whole run.
    std::vector<std::pair<SimTime, SimTime>> active_windows;

    bool active_on(unsigned channel, SimTime t) const;
    // Multiplier applied to a reception probability on `channel` at `t`.
    double factor(unsigned channel, SimTime t) const;
};

struct CaptureModel {
    double gamma_small = 1.0;  // 2..3 concurrent transmitters
    double gamma_large = 0.9;  // more than 3

    double gamma(unsigned k) const {
        if (k <= 1)
            return 1.0;
        return k <= 3 ? gamma_small : gamma_large;
    }
};

struct AppConfig {
    bool enabled = false;
    std::uint64_t period_us = 5'000'000;
    SimTime start_us = 0;
    SimTime stop_us = 0;  // 0 = run until the end of the run
    unsigned payload_bytes = 64;
};

enum class DriftMode : std::uint8_t { NONE, UNIFORM, ALTERNATE };

struct ScenarioConfig {
    MacMode mode = MacMode::SIXPP;
    std::uint64_t seed = 1;
    SimTime run_duration_us = 60'000'000;

    TopologySpec topology;

    // Slotframe geometry. The CT region is derived from the flood window in
    // SIXPP mode; the baseline runs a pure shared slotframe.
    std::uint64_t slot_us = 10'000;
    unsigned total_slots = 101;
    unsigned baseline_total_slots = 1;

    CtTiming timing;
    unsigned n_tx = 2;
    unsigned n_h = 1;
    unsigned floods_per_frame = 2;
    // A downward DATA message rides this many consecutive CT windows.
    unsigned data_redundancy = 2;

    HoppingConfig hopping;
    JammerConfig jammer;
    CaptureModel capture;
    MacParams mac;
    RplParams rpl;
    AppConfig app;

    DriftMode drift_mode = DriftMode::UNIFORM;
    unsigned drift_ppm_max = 40;

    bool trace_floods = false;

    // Effective layout for a given MAC mode.
    SlotframeLayout layout_for(MacMode mode) const;
    CtWindow ct_window() const;
    std::int32_t drift_for(NodeId node, const Rng& rng) const;
};

}  // namespace sixpp
