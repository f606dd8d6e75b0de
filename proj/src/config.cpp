#include "sixpp/config.hpp"

#include <stdexcept>

namespace sixpp {

Topology TopologySpec::build() const {
    switch (kind) {
        case Kind::LINE: return make_line_topology(n, prr);
        case Kind::GRID: return make_grid_topology(rows, cols, prr);
        case Kind::CLUSTER_LINE: return make_cluster_line_topology(clusters, width, prr);
        case Kind::RGG: return make_rgg_topology(n, radius, prr, topo_seed);
        case Kind::EDGE_LIST: return load_edge_list(path);
    }
    throw std::logic_error("unknown topology kind");
}

bool JammerConfig::active_on(unsigned channel, SimTime t) const {
    if (!enabled || channels.count(channel) == 0)
        return false;
    if (active_windows.empty())
        return true;
    for (const auto& [from, to] : active_windows)
        if (t >= from && t < to)
            return true;
    return false;
}

double JammerConfig::factor(unsigned channel, SimTime t) const {
    return active_on(channel, t) ? 1.0 - jam_loss : 1.0;
}

SlotframeLayout ScenarioConfig::layout_for(MacMode for_mode) const {
    if (for_mode == MacMode::SIXPP)
        return build_layout(total_slots, ct_window(), slot_us);
    return build_layout(baseline_total_slots, std::nullopt, slot_us);
}

CtWindow ScenarioConfig::ct_window() const {
    CtWindow w;
    w.n_tx = n_tx;
    w.n_h = n_h;
    w.t_slot_us = ct_micro_slot_duration_us(timing);
    w.floods_per_frame = floods_per_frame;
    return w;
}

std::int32_t ScenarioConfig::drift_for(NodeId node, const Rng& rng) const {
    switch (drift_mode) {
        case DriftMode::NONE: return 0;
        case DriftMode::UNIFORM:
            return std::int32_t(rng.uniform_range(-std::int64_t(drift_ppm_max),
                                                  std::int64_t(drift_ppm_max), node, Draw::Drift));
        case DriftMode::ALTERNATE:
            return (node % 2 == 0) ? std::int32_t(drift_ppm_max) : -std::int32_t(drift_ppm_max);
    }
    return 0;
}

}  // namespace sixpp
