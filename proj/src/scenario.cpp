#include "sixpp/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sixpp/schedule.hpp"

namespace sixpp {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& v) {
    if (v.empty()) throw ScenarioError("expected an unsigned integer, got nothing");
    std::size_t pos = 0;
    std::uint64_t out;
    try {
        out = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw ScenarioError("expected an unsigned integer, got '" + v + "'");
    }
    if (pos != v.size() || v[0] == '-')
        throw ScenarioError("expected an unsigned integer, got '" + v + "'");
    return out;
}

unsigned parse_u32(const std::string& v) {
    std::uint64_t x = parse_u64(v);
    if (x > 0xffffffffull) throw ScenarioError("value out of range: '" + v + "'");
    return static_cast<unsigned>(x);
}

double parse_double(const std::string& v) {
    if (v.empty()) throw ScenarioError("expected a number, got nothing");
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ScenarioError("expected a number, got '" + v + "'");
    }
    if (pos != v.size()) throw ScenarioError("expected a number, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ScenarioError("expected true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& v, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : v) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

std::vector<unsigned> parse_channel_list(const std::string& v) {
    std::vector<unsigned> out;
    if (trim(v).empty()) return out;
    for (const std::string& part : split(v, ',')) out.push_back(parse_u32(part));
    return out;
}

std::vector<std::pair<SimTime, SimTime>> parse_windows(const std::string& v) {
    std::vector<std::pair<SimTime, SimTime>> out;
    if (trim(v).empty()) return out;
    for (const std::string& part : split(v, ',')) {
        std::size_t dash = part.find('-');
        if (dash == std::string::npos)
            throw ScenarioError("expected start-end, got '" + part + "'");
        SimTime lo = parse_u64(trim(part.substr(0, dash)));
        SimTime hi = parse_u64(trim(part.substr(dash + 1)));
        out.push_back({lo, hi});
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_channels(const std::vector<unsigned>& list) {
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(list[i]);
    }
    return out;
}

std::string join_channels(const std::set<unsigned>& list) {
    std::string out;
    bool first = true;
    for (unsigned c : list) {
        if (!first) out += ',';
        out += std::to_string(c);
        first = false;
    }
    return out;
}

std::string join_windows(const std::vector<std::pair<SimTime, SimTime>>& windows) {
    std::string out;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(windows[i].first) + "-" + std::to_string(windows[i].second);
    }
    return out;
}

const char* topo_kind_name(TopologySpec::Kind kind) {
    switch (kind) {
        case TopologySpec::Kind::LINE: return "line";
        case TopologySpec::Kind::GRID: return "grid";
        case TopologySpec::Kind::CLUSTER_LINE: return "cluster_line";
        case TopologySpec::Kind::RGG: return "rgg";
        case TopologySpec::Kind::EDGE_LIST: return "edge_list";
    }
    return "line";
}

const char* drift_mode_name(DriftMode mode) {
    switch (mode) {
        case DriftMode::NONE: return "none";
        case DriftMode::UNIFORM: return "uniform";
        case DriftMode::ALTERNATE: return "alternate";
    }
    return "none";
}

// Applies one key. Throws ScenarioError (without line info) on unknown
// section/key or a malformed value.
void set_key(ScenarioConfig& cfg, const std::string& section, const std::string& key,
             const std::string& value) {
    if (section == "run") {
        if (key == "mode") {
            if (value == "sixpp")
                cfg.mode = MacMode::SIXPP;
            else if (value == "baseline")
                cfg.mode = MacMode::BASELINE_6TISCH_MINIMAL;
            else
                throw ScenarioError("unknown mode '" + value + "' (sixpp or baseline)");
        } else if (key == "seed") {
            cfg.seed = parse_u64(value);
        } else if (key == "duration_us") {
            cfg.run_duration_us = parse_u64(value);
        } else if (key == "trace_floods") {
            cfg.trace_floods = parse_bool(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [run]");
        }
    } else if (section == "topology") {
        if (key == "kind") {
            if (value == "line")
                cfg.topology.kind = TopologySpec::Kind::LINE;
            else if (value == "grid")
                cfg.topology.kind = TopologySpec::Kind::GRID;
            else if (value == "cluster_line")
                cfg.topology.kind = TopologySpec::Kind::CLUSTER_LINE;
            else if (value == "rgg")
                cfg.topology.kind = TopologySpec::Kind::RGG;
            else if (value == "edge_list")
                cfg.topology.kind = TopologySpec::Kind::EDGE_LIST;
            else
                throw ScenarioError("unknown topology kind '" + value + "'");
        } else if (key == "n") {
            cfg.topology.n = parse_u32(value);
        } else if (key == "rows") {
            cfg.topology.rows = parse_u32(value);
        } else if (key == "cols") {
            cfg.topology.cols = parse_u32(value);
        } else if (key == "clusters") {
            cfg.topology.clusters = parse_u32(value);
        } else if (key == "width") {
            cfg.topology.width = parse_u32(value);
        } else if (key == "radius") {
            cfg.topology.radius = parse_double(value);
        } else if (key == "prr") {
            cfg.topology.prr = parse_double(value);
        } else if (key == "topo_seed") {
            cfg.topology.topo_seed = parse_u64(value);
        } else if (key == "path") {
            cfg.topology.path = value;
        } else {
            throw ScenarioError("unknown key '" + key + "' in [topology]");
        }
    } else if (section == "slotframe") {
        if (key == "slot_us") {
            cfg.slot_us = parse_u64(value);
        } else if (key == "total_slots") {
            cfg.total_slots = parse_u32(value);
        } else if (key == "baseline_total_slots") {
            cfg.baseline_total_slots = parse_u32(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [slotframe]");
        }
    } else if (section == "ct") {
        if (key == "phy") {
            auto phy = phy_from_name(value);
            if (!phy) throw ScenarioError("unknown PHY '" + value + "'");
            cfg.timing.phy = *phy;
        } else if (key == "ramp_up_us") {
            cfg.timing.ramp_up_us = parse_u64(value);
        } else if (key == "overhead_bytes") {
            cfg.timing.overhead_bytes = parse_u32(value);
        } else if (key == "payload_bytes") {
            cfg.timing.payload_bytes = parse_u32(value);
        } else if (key == "n_tx") {
            cfg.n_tx = parse_u32(value);
        } else if (key == "n_h") {
            cfg.n_h = parse_u32(value);
        } else if (key == "floods_per_frame") {
            cfg.floods_per_frame = parse_u32(value);
        } else if (key == "data_redundancy") {
            cfg.data_redundancy = parse_u32(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [ct]");
        }
    } else if (section == "hopping") {
        if (key == "tsch_channels") {
            cfg.hopping.tsch_channels = parse_channel_list(value);
        } else if (key == "ct_channels") {
            cfg.hopping.ct_channels = parse_channel_list(value);
        } else if (key == "tsch_offset") {
            cfg.hopping.tsch_offset = parse_u32(value);
        } else if (key == "ct_offset") {
            cfg.hopping.ct_offset = parse_u32(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [hopping]");
        }
    } else if (section == "jammer") {
        if (key == "enabled") {
            cfg.jammer.enabled = parse_bool(value);
        } else if (key == "channels") {
            std::vector<unsigned> list = parse_channel_list(value);
            cfg.jammer.channels = std::set<unsigned>(list.begin(), list.end());
        } else if (key == "jam_loss") {
            cfg.jammer.jam_loss = parse_double(value);
        } else if (key == "windows") {
            cfg.jammer.active_windows = parse_windows(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [jammer]");
        }
    } else if (section == "capture") {
        if (key == "gamma_small") {
            cfg.capture.gamma_small = parse_double(value);
        } else if (key == "gamma_large") {
            cfg.capture.gamma_large = parse_double(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [capture]");
        }
    } else if (section == "mac") {
        if (key == "guard_us") {
            cfg.mac.guard_us = parse_u64(value);
        } else if (key == "eb_period_us") {
            cfg.mac.eb_period_us = parse_u64(value);
        } else if (key == "eb_jitter_frac") {
            cfg.mac.eb_jitter_frac = parse_double(value);
        } else if (key == "ka_period_us") {
            cfg.mac.ka_period_us = parse_u64(value);
        } else if (key == "max_retries") {
            cfg.mac.max_retries = parse_u32(value);
        } else if (key == "backoff_exponent_min") {
            cfg.mac.backoff_exponent_min = parse_u32(value);
        } else if (key == "backoff_exponent_max") {
            cfg.mac.backoff_exponent_max = parse_u32(value);
        } else if (key == "resync_enabled") {
            cfg.mac.resync_enabled = parse_bool(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [mac]");
        }
    } else if (section == "rpl") {
        if (key == "dao_retx_us") {
            cfg.rpl.dao_retx_us = parse_u64(value);
        } else if (key == "dao_retx_cap_us") {
            cfg.rpl.dao_retx_cap_us = parse_u64(value);
        } else if (key == "dao_jitter_us") {
            cfg.rpl.dao_jitter_us = parse_u64(value);
        } else if (key == "dio_period_us") {
            cfg.rpl.dio_period_us = parse_u64(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [rpl]");
        }
    } else if (section == "app") {
        if (key == "enabled") {
            cfg.app.enabled = parse_bool(value);
        } else if (key == "period_us") {
            cfg.app.period_us = parse_u64(value);
        } else if (key == "start_us") {
            cfg.app.start_us = parse_u64(value);
        } else if (key == "stop_us") {
            cfg.app.stop_us = parse_u64(value);
        } else if (key == "payload_bytes") {
            cfg.app.payload_bytes = parse_u32(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [app]");
        }
    } else if (section == "drift") {
        if (key == "mode") {
            if (value == "none")
                cfg.drift_mode = DriftMode::NONE;
            else if (value == "uniform")
                cfg.drift_mode = DriftMode::UNIFORM;
            else if (value == "alternate")
                cfg.drift_mode = DriftMode::ALTERNATE;
            else
                throw ScenarioError("unknown drift mode '" + value + "'");
        } else if (key == "ppm_max") {
            cfg.drift_ppm_max = parse_u32(value);
        } else {
            throw ScenarioError("unknown key '" + key + "' in [drift]");
        }
    } else {
        throw ScenarioError("unknown section [" + section + "]");
    }
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig cfg;
    std::string section;
    unsigned line_no = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ScenarioError("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ScenarioError("empty section name", line_no);
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("expected key = value, got '" + line + "'", line_no);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ScenarioError("empty key", line_no);
        if (section.empty())
            throw ScenarioError("key '" + key + "' before any [section]", line_no);
        try {
            set_key(cfg, section, key, value);
        } catch (const ScenarioError& e) {
            throw ScenarioError(e.what(), line_no);
        }
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    std::string out;
    auto kv = [&out](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };

    out += "[run]\n";
    kv("mode", mac_mode_name(cfg.mode));
    kv("seed", std::to_string(cfg.seed));
    kv("duration_us", std::to_string(cfg.run_duration_us));
    kv("trace_floods", cfg.trace_floods ? "true" : "false");

    out += "\n[topology]\n";
    kv("kind", topo_kind_name(cfg.topology.kind));
    kv("n", std::to_string(cfg.topology.n));
    kv("rows", std::to_string(cfg.topology.rows));
    kv("cols", std::to_string(cfg.topology.cols));
    kv("clusters", std::to_string(cfg.topology.clusters));
    kv("width", std::to_string(cfg.topology.width));
    kv("radius", format_double(cfg.topology.radius));
    kv("prr", format_double(cfg.topology.prr));
    kv("topo_seed", std::to_string(cfg.topology.topo_seed));
    kv("path", cfg.topology.path);

    out += "\n[slotframe]\n";
    kv("slot_us", std::to_string(cfg.slot_us));
    kv("total_slots", std::to_string(cfg.total_slots));
    kv("baseline_total_slots", std::to_string(cfg.baseline_total_slots));

    out += "\n[ct]\n";
    kv("phy", phy_name(cfg.timing.phy));
    kv("ramp_up_us", std::to_string(cfg.timing.ramp_up_us));
    kv("overhead_bytes", std::to_string(cfg.timing.overhead_bytes));
    kv("payload_bytes", std::to_string(cfg.timing.payload_bytes));
    kv("n_tx", std::to_string(cfg.n_tx));
    kv("n_h", std::to_string(cfg.n_h));
    kv("floods_per_frame", std::to_string(cfg.floods_per_frame));
    kv("data_redundancy", std::to_string(cfg.data_redundancy));

    out += "\n[hopping]\n";
    kv("tsch_channels", join_channels(cfg.hopping.tsch_channels));
    kv("ct_channels", join_channels(cfg.hopping.ct_channels));
    kv("tsch_offset", std::to_string(cfg.hopping.tsch_offset));
    kv("ct_offset", std::to_string(cfg.hopping.ct_offset));

    out += "\n[jammer]\n";
    kv("enabled", cfg.jammer.enabled ? "true" : "false");
    kv("channels", join_channels(cfg.jammer.channels));
    kv("jam_loss", format_double(cfg.jammer.jam_loss));
    kv("windows", join_windows(cfg.jammer.active_windows));

    out += "\n[capture]\n";
    kv("gamma_small", format_double(cfg.capture.gamma_small));
    kv("gamma_large", format_double(cfg.capture.gamma_large));

    out += "\n[mac]\n";
    kv("guard_us", std::to_string(cfg.mac.guard_us));
    kv("eb_period_us", std::to_string(cfg.mac.eb_period_us));
    kv("eb_jitter_frac", format_double(cfg.mac.eb_jitter_frac));
    kv("ka_period_us", std::to_string(cfg.mac.ka_period_us));
    kv("max_retries", std::to_string(cfg.mac.max_retries));
    kv("backoff_exponent_min", std::to_string(cfg.mac.backoff_exponent_min));
    kv("backoff_exponent_max", std::to_string(cfg.mac.backoff_exponent_max));
    kv("resync_enabled", cfg.mac.resync_enabled ? "true" : "false");

    out += "\n[rpl]\n";
    kv("dao_retx_us", std::to_string(cfg.rpl.dao_retx_us));
    kv("dao_retx_cap_us", std::to_string(cfg.rpl.dao_retx_cap_us));
    kv("dao_jitter_us", std::to_string(cfg.rpl.dao_jitter_us));
    kv("dio_period_us", std::to_string(cfg.rpl.dio_period_us));

    out += "\n[app]\n";
    kv("enabled", cfg.app.enabled ? "true" : "false");
    kv("period_us", std::to_string(cfg.app.period_us));
    kv("start_us", std::to_string(cfg.app.start_us));
    kv("stop_us", std::to_string(cfg.app.stop_us));
    kv("payload_bytes", std::to_string(cfg.app.payload_bytes));

    out += "\n[drift]\n";
    kv("mode", drift_mode_name(cfg.drift_mode));
    kv("ppm_max", std::to_string(cfg.drift_ppm_max));

    return out;
}

void apply_override(ScenarioConfig& cfg, const std::string& dotted_key,
                    const std::string& value) {
    std::size_t dot = dotted_key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= dotted_key.size())
        throw ScenarioError("override key must be section.key, got '" + dotted_key + "'");
    set_key(cfg, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), value);
}

void validate_scenario(const ScenarioConfig& cfg) {
    if (cfg.run_duration_us == 0) throw ScenarioError("duration_us must be positive");
    if (cfg.slot_us == 0) throw ScenarioError("slot_us must be positive");
    if (cfg.total_slots == 0) throw ScenarioError("total_slots must be positive");
    if (cfg.baseline_total_slots == 0)
        throw ScenarioError("baseline_total_slots must be positive");

    if (cfg.topology.prr <= 0.0 || cfg.topology.prr > 1.0)
        throw ScenarioError("topology prr must be in (0, 1]");
    Topology topo;
    try {
        topo = cfg.topology.build();
    } catch (const std::exception& e) {
        throw ScenarioError(std::string("topology: ") + e.what());
    }
    if (topo.node_count() < 2) throw ScenarioError("topology needs at least 2 nodes");
    if (!is_connected(topo))
        throw ScenarioError("topology is not connected from the coordinator");

    if (cfg.timing.payload_bytes == 0) throw ScenarioError("ct payload_bytes must be positive");
    if (cfg.n_tx == 0) throw ScenarioError("n_tx must be positive");
    if (cfg.n_h == 0) throw ScenarioError("n_h must be positive");
    if (cfg.floods_per_frame == 0) throw ScenarioError("floods_per_frame must be positive");
    if (cfg.data_redundancy == 0) throw ScenarioError("data_redundancy must be positive");

    SlotframeLayout layout;
    try {
        layout = cfg.layout_for(MacMode::SIXPP);
    } catch (const std::exception& e) {
        throw ScenarioError(std::string("flood window: ") + e.what());
    }
    if (layout.shared_slots == 0)
        throw ScenarioError("flood window leaves no shared slots in the slotframe");

    if (cfg.hopping.tsch_channels.empty()) throw ScenarioError("tsch_channels must not be empty");
    if (cfg.hopping.ct_channels.empty()) throw ScenarioError("ct_channels must not be empty");
    // Coprime rotation makes consecutive windows land every flood slot on a
    // fresh channel, which the narrowband robustness story relies on.
    if (std::gcd<std::uint64_t, std::uint64_t>(cfg.floods_per_frame,
                                               cfg.hopping.ct_channels.size()) != 1)
        throw ScenarioError("floods_per_frame must be coprime with the ct channel count");

    if (cfg.jammer.jam_loss < 0.0 || cfg.jammer.jam_loss > 1.0)
        throw ScenarioError("jam_loss must be in [0, 1]");
    for (const auto& [lo, hi] : cfg.jammer.active_windows) {
        if (lo >= hi) throw ScenarioError("jammer window start must precede its end");
    }

    if (cfg.capture.gamma_small < 0.0 || cfg.capture.gamma_small > 1.0 ||
        cfg.capture.gamma_large < 0.0 || cfg.capture.gamma_large > 1.0)
        throw ScenarioError("capture gammas must be in [0, 1]");

    if (cfg.mac.guard_us == 0) throw ScenarioError("guard_us must be positive");
    if (cfg.mac.eb_period_us == 0) throw ScenarioError("eb_period_us must be positive");
    if (cfg.mac.ka_period_us < 4) throw ScenarioError("ka_period_us too small");
    if (cfg.mac.eb_jitter_frac < 0.0 || cfg.mac.eb_jitter_frac > 0.5)
        throw ScenarioError("eb_jitter_frac must be in [0, 0.5]");
    if (cfg.mac.backoff_exponent_min == 0 ||
        cfg.mac.backoff_exponent_min > cfg.mac.backoff_exponent_max ||
        cfg.mac.backoff_exponent_max > 16)
        throw ScenarioError("backoff exponents must satisfy 1 <= min <= max <= 16");

    if (cfg.rpl.dao_retx_us == 0) throw ScenarioError("dao_retx_us must be positive");
    if (cfg.rpl.dao_retx_cap_us < cfg.rpl.dao_retx_us)
        throw ScenarioError("dao_retx_cap_us must be >= dao_retx_us");

    if (cfg.app.enabled && cfg.app.period_us == 0)
        throw ScenarioError("app period_us must be positive");
    if (cfg.app.enabled && cfg.app.stop_us != 0 && cfg.app.stop_us <= cfg.app.start_us)
        throw ScenarioError("app stop_us must exceed start_us");

    if (cfg.drift_ppm_max > 200) throw ScenarioError("drift ppm_max must be <= 200");
}

std::uint64_t scenario_hash(const ScenarioConfig& cfg) {
    std::string text = serialize_scenario(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace sixpp
