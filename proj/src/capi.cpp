#include "sixpp.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "sixpp/metrics.hpp"
#include "sixpp/phy.hpp"
#include "sixpp/scenario.hpp"
#include "sixpp/simengine.hpp"

using namespace sixpp;

struct sixpp_scenario {
    ScenarioConfig cfg;
};

struct sixpp_run_result {
    RunResult result;
};

struct sixpp_capacity_table {
    std::vector<CapacityRow> rows;
    std::uint64_t config_hash;
};

struct sixpp_matrix_result {
    MatrixResult result;
};

namespace {

thread_local std::string g_last_error;

sixpp_status fail(sixpp_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Exceptions crossing the C boundary become status codes.
template <typename Fn>
sixpp_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ScenarioError& e) {
        return fail(SIXPP_ERR_SCENARIO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SIXPP_ERR_USAGE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SIXPP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SIXPP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SIXPP_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) return nullptr;
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

sixpp_status out_string(const std::string& s, char** out) {
    if (out == nullptr) return fail(SIXPP_ERR_USAGE, "output pointer is null");
    char* copy = dup_string(s);
    if (copy == nullptr) return fail(SIXPP_ERR_INTERNAL, "out of memory");
    *out = copy;
    return SIXPP_OK;
}

std::string known_phy_names() {
    std::string names;
    for (PhyMode phy : all_phy_modes()) {
        if (!names.empty()) names += ", ";
        names += phy_name(phy);
    }
    return names;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

extern "C" {

const char* sixpp_version(void) { return "1.0.0"; }

const char* sixpp_last_error(void) { return g_last_error.c_str(); }

void sixpp_string_free(char* s) { std::free(s); }

/* ---- capacity ---------------------------------------------------------- */

sixpp_status sixpp_capacity_messages(const char* phy_name_str, uint64_t t_sf_us,
                                     unsigned payload_bytes, unsigned n_tx, unsigned n_h,
                                     uint64_t ramp_up_us, unsigned overhead_bytes,
                                     uint64_t* out_messages, uint64_t* out_t_slot_us) {
    return guarded([&]() -> sixpp_status {
        if (phy_name_str == nullptr || out_messages == nullptr)
            return fail(SIXPP_ERR_USAGE, "null argument");
        auto phy = phy_from_name(phy_name_str);
        if (!phy)
            return fail(SIXPP_ERR_USAGE, std::string("unknown PHY '") + phy_name_str +
                                             "'; valid: " + known_phy_names());
        CtTiming timing;
        timing.phy = *phy;
        timing.ramp_up_us = ramp_up_us;
        timing.overhead_bytes = overhead_bytes;
        timing.payload_bytes = payload_bytes;
        *out_messages = messages_per_slotframe(t_sf_us, timing, n_tx, n_h);
        if (out_t_slot_us != nullptr) *out_t_slot_us = ct_micro_slot_duration_us(timing);
        return SIXPP_OK;
    });
}

sixpp_status sixpp_capacity_sweep(const char* const* phy_names, size_t n_phys, uint64_t t_sf_us,
                                  unsigned payload_bytes, unsigned n_tx_lo, unsigned n_tx_hi,
                                  unsigned n_h_lo, unsigned n_h_hi, uint64_t ramp_up_us,
                                  unsigned overhead_bytes, sixpp_capacity_table** out) {
    return guarded([&]() -> sixpp_status {
        if (out == nullptr) return fail(SIXPP_ERR_USAGE, "null output pointer");
        std::vector<PhyMode> phys;
        if (phy_names == nullptr || n_phys == 0) {
            phys = all_phy_modes();
        } else {
            for (size_t i = 0; i < n_phys; ++i) {
                if (phy_names[i] == nullptr) return fail(SIXPP_ERR_USAGE, "null PHY name");
                auto phy = phy_from_name(phy_names[i]);
                if (!phy)
                    return fail(SIXPP_ERR_USAGE, std::string("unknown PHY '") + phy_names[i] +
                                                     "'; valid: " + known_phy_names());
                phys.push_back(*phy);
            }
        }
        if (n_tx_lo == 0 || n_h_lo == 0 || n_tx_lo > n_tx_hi || n_h_lo > n_h_hi)
            return fail(SIXPP_ERR_USAGE, "bad n_tx / n_h bounds");
        auto* table = new sixpp_capacity_table;
        table->rows = capacity_sweep(t_sf_us, payload_bytes, phys, n_tx_lo, n_tx_hi, n_h_lo,
                                     n_h_hi, ramp_up_us, overhead_bytes);
        std::string key = "capacity:" + std::to_string(t_sf_us) + ":" +
                          std::to_string(payload_bytes) + ":" + std::to_string(n_tx_lo) + "-" +
                          std::to_string(n_tx_hi) + ":" + std::to_string(n_h_lo) + "-" +
                          std::to_string(n_h_hi) + ":" + std::to_string(ramp_up_us) + ":" +
                          std::to_string(overhead_bytes);
        for (PhyMode phy : phys) key += std::string(":") + phy_name(phy);
        table->config_hash = fnv1a(key);
        *out = table;
        return SIXPP_OK;
    });
}

size_t sixpp_capacity_row_count(const sixpp_capacity_table* table) {
    return table == nullptr ? 0 : table->rows.size();
}

sixpp_status sixpp_capacity_row(const sixpp_capacity_table* table, size_t index,
                                sixpp_capacity_row_data* out) {
    return guarded([&]() -> sixpp_status {
        if (table == nullptr || out == nullptr) return fail(SIXPP_ERR_USAGE, "null argument");
        if (index >= table->rows.size()) return fail(SIXPP_ERR_USAGE, "row index out of range");
        const CapacityRow& row = table->rows[index];
        out->phy = phy_name(row.phy);
        out->n_tx = row.n_tx;
        out->n_h = row.n_h;
        out->payload_bytes = row.payload_bytes;
        out->t_slot_us = row.t_slot_us;
        out->messages = row.messages;
        return SIXPP_OK;
    });
}

sixpp_status sixpp_capacity_csv(const sixpp_capacity_table* table, uint64_t seed,
                                char** out_csv) {
    return guarded([&]() -> sixpp_status {
        if (table == nullptr) return fail(SIXPP_ERR_USAGE, "null table");
        return out_string(capacity_csv(table->rows, table->config_hash, seed), out_csv);
    });
}

void sixpp_capacity_free(sixpp_capacity_table* table) { delete table; }

/* ---- scenario ---------------------------------------------------------- */

sixpp_status sixpp_scenario_parse(const char* text, sixpp_scenario** out) {
    return guarded([&]() -> sixpp_status {
        if (text == nullptr || out == nullptr) return fail(SIXPP_ERR_USAGE, "null argument");
        auto* handle = new sixpp_scenario{parse_scenario(text)};
        *out = handle;
        return SIXPP_OK;
    });
}

sixpp_status sixpp_scenario_load(const char* path, sixpp_scenario** out) {
    return guarded([&]() -> sixpp_status {
        if (path == nullptr || out == nullptr) return fail(SIXPP_ERR_USAGE, "null argument");
        std::ifstream probe(path, std::ios::binary);
        if (!probe)
            return fail(SIXPP_ERR_IO, std::string("cannot open scenario file: ") + path);
        auto* handle = new sixpp_scenario{load_scenario(path)};
        *out = handle;
        return SIXPP_OK;
    });
}

sixpp_status sixpp_scenario_set(sixpp_scenario* scenario, const char* dotted_key,
                                const char* value) {
    return guarded([&]() -> sixpp_status {
        if (scenario == nullptr || dotted_key == nullptr || value == nullptr)
            return fail(SIXPP_ERR_USAGE, "null argument");
        apply_override(scenario->cfg, dotted_key, value);
        return SIXPP_OK;
    });
}

sixpp_status sixpp_scenario_validate(const sixpp_scenario* scenario) {
    return guarded([&]() -> sixpp_status {
        if (scenario == nullptr) return fail(SIXPP_ERR_USAGE, "null scenario");
        validate_scenario(scenario->cfg);
        return SIXPP_OK;
    });
}

sixpp_status sixpp_scenario_serialize(const sixpp_scenario* scenario, char** out_text) {
    return guarded([&]() -> sixpp_status {
        if (scenario == nullptr) return fail(SIXPP_ERR_USAGE, "null scenario");
        return out_string(serialize_scenario(scenario->cfg), out_text);
    });
}

uint64_t sixpp_scenario_config_hash(const sixpp_scenario* scenario) {
    if (scenario == nullptr) return 0;
    return scenario_hash(scenario->cfg);
}

void sixpp_scenario_free(sixpp_scenario* scenario) { delete scenario; }

/* ---- single run -------------------------------------------------------- */

sixpp_status sixpp_run(const sixpp_scenario* scenario, sixpp_run_result** out) {
    return guarded([&]() -> sixpp_status {
        if (scenario == nullptr || out == nullptr) return fail(SIXPP_ERR_USAGE, "null argument");
        validate_scenario(scenario->cfg);
        auto* handle = new sixpp_run_result{run(scenario->cfg)};
        *out = handle;
        return SIXPP_OK;
    });
}

sixpp_status sixpp_result_stats(const sixpp_run_result* result, sixpp_run_stats* out) {
    return guarded([&]() -> sixpp_status {
        if (result == nullptr || out == nullptr) return fail(SIXPP_ERR_USAGE, "null argument");
        const MetricsRecord& m = result->result.metrics;
        LatencySummary lat = aggregate(m.delivered_latencies());
        std::memset(out, 0, sizeof *out);
        out->reliability_pct = m.reliability_pct();
        if (!lat.empty()) {
            out->mean_latency_ms = lat.mean_us / 1000.0;
            out->median_latency_ms = lat.median_us / 1000.0;
            out->p95_latency_ms = lat.p95_us / 1000.0;
        }
        out->delivered = m.delivered_count();
        out->expected = m.expected_count();
        for (std::uint64_t d : m.desync_count) out->desyncs += d;
        for (std::uint64_t e : m.max_sync_error_us)
            out->max_sync_error_us = std::max(out->max_sync_error_us, e);
        out->eb_unicast = m.frames.eb_unicast;
        out->ka = m.frames.ka;
        out->dio = m.frames.dio;
        out->dao = m.frames.dao;
        out->dao_retx = m.frames.dao_retx;
        out->dao_ack_unicast = m.frames.dao_ack_unicast;
        out->data_unicast = m.frames.data_unicast;
        out->eb_flood = m.frames.eb_flood;
        out->dao_ack_flood = m.frames.dao_ack_flood;
        out->data_flood = m.frames.data_flood;
        out->collisions = m.frames.collisions;
        out->drops = m.frames.drops;
        return SIXPP_OK;
    });
}

size_t sixpp_result_node_count(const sixpp_run_result* result) {
    return result == nullptr ? 0 : result->result.node_rows.size();
}

sixpp_status sixpp_result_node_stats(const sixpp_run_result* result, size_t index,
                                     sixpp_node_stats* out) {
    return guarded([&]() -> sixpp_status {
        if (result == nullptr || out == nullptr) return fail(SIXPP_ERR_USAGE, "null argument");
        if (index >= result->result.node_rows.size())
            return fail(SIXPP_ERR_USAGE, "node index out of range");
        const NodeSummaryRow& row = result->result.node_rows[index];
        std::memset(out, 0, sizeof *out);
        out->node = row.node;
        out->hops = row.hops;
        out->has_assoc_latency = row.assoc_latency_us.has_value() ? 1 : 0;
        out->assoc_latency_us = row.assoc_latency_us.value_or(0);
        out->has_dao_delta = row.dao_delta_us.has_value() ? 1 : 0;
        out->dao_delta_us = row.dao_delta_us.value_or(0);
        out->data_delivered = row.data_delivered;
        out->data_lost = row.data_lost;
        out->desyncs = row.desyncs;
        out->max_sync_error_us = row.max_sync_error_us;
        return SIXPP_OK;
    });
}

sixpp_status sixpp_result_summary_line(const sixpp_run_result* result, char** out_line) {
    return guarded([&]() -> sixpp_status {
        if (result == nullptr) return fail(SIXPP_ERR_USAGE, "null result");
        return out_string(result->result.one_line_summary(), out_line);
    });
}

sixpp_status sixpp_result_events_csv(const sixpp_run_result* result, char** out_csv) {
    return guarded([&]() -> sixpp_status {
        if (result == nullptr) return fail(SIXPP_ERR_USAGE, "null result");
        return out_string(result->result.events_csv(), out_csv);
    });
}

sixpp_status sixpp_result_summary_csv(const sixpp_run_result* result, char** out_csv) {
    return guarded([&]() -> sixpp_status {
        if (result == nullptr) return fail(SIXPP_ERR_USAGE, "null result");
        return out_string(result->result.summary_csv(), out_csv);
    });
}

sixpp_status sixpp_result_floods_csv(const sixpp_run_result* result, char** out_csv) {
    return guarded([&]() -> sixpp_status {
        if (result == nullptr) return fail(SIXPP_ERR_USAGE, "null result");
        return out_string(result->result.floods_csv(), out_csv);
    });
}

void sixpp_result_free(sixpp_run_result* result) { delete result; }

/* ---- matrix ------------------------------------------------------------ */

sixpp_status sixpp_matrix(const sixpp_scenario* scenario, const uint64_t* seeds, size_t n_seeds,
                          unsigned max_workers, sixpp_matrix_result** out) {
    return guarded([&]() -> sixpp_status {
        if (scenario == nullptr || out == nullptr) return fail(SIXPP_ERR_USAGE, "null argument");
        if (seeds == nullptr || n_seeds == 0) return fail(SIXPP_ERR_USAGE, "no seeds given");
        validate_scenario(scenario->cfg);
        std::vector<std::uint64_t> seed_list(seeds, seeds + n_seeds);
        auto* handle = new sixpp_matrix_result{run_matrix(scenario->cfg, seed_list, max_workers)};
        *out = handle;
        return SIXPP_OK;
    });
}

size_t sixpp_matrix_cell_count(const sixpp_matrix_result* result) {
    return result == nullptr ? 0 : result->result.cells.size();
}

sixpp_status sixpp_matrix_cell(const sixpp_matrix_result* result, size_t index,
                               sixpp_matrix_cell_data* out) {
    return guarded([&]() -> sixpp_status {
        if (result == nullptr || out == nullptr) return fail(SIXPP_ERR_USAGE, "null argument");
        if (index >= result->result.cells.size())
            return fail(SIXPP_ERR_USAGE, "cell index out of range");
        const MatrixCell& cell = result->result.cells[index];
        out->mode = mac_mode_name(cell.mode);
        out->jam = cell.jam ? 1 : 0;
        out->seed = cell.seed;
        out->reliability_pct = cell.reliability_pct;
        out->mean_latency_ms = cell.mean_latency_ms;
        out->median_latency_ms = cell.median_latency_ms;
        return SIXPP_OK;
    });
}

sixpp_status sixpp_matrix_csv(const sixpp_matrix_result* result, char** out_csv) {
    return guarded([&]() -> sixpp_status {
        if (result == nullptr) return fail(SIXPP_ERR_USAGE, "null result");
        return out_string(result->result.csv(), out_csv);
    });
}

void sixpp_matrix_free(sixpp_matrix_result* result) { delete result; }

}  // extern "C"
