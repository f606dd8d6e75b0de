#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sixpp/config.hpp"
#include "sixpp/ctflood.hpp"
#include "sixpp/metrics.hpp"

namespace sixpp {

enum class EventKind : std::uint8_t {
    // Tie order at equal timestamps follows enum order.
    SLOT_BOUNDARY,
    CT_MICRO_SLOT,
    TIMER,
    APP_GEN,
};

struct Event {
    SimTime at = 0;
    EventKind kind = EventKind::SLOT_BOUNDARY;
    NodeId node = 0;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t seq = 0;  // insertion order, the final tie breaker
};

// Strict weak ordering: (at, kind, node, seq).
bool event_before(const Event& lhs, const Event& rhs);

// One TSCH shared-slot reception resolved for a single receiver: success
// requires exactly one in-range transmitter on the receiver's channel and a
// Bernoulli(PRR * jam factor) draw. `draw` is compared against the success
// probability.
struct TschRxOutcome {
    bool decoded = false;
    bool collision = false;
    std::size_t transmitter_index = 0;  // into the candidate list when decoded
};

TschRxOutcome resolve_tsch_reception(const std::vector<double>& candidate_prrs, double jam_factor,
                                     double draw);

struct EventRow {
    SimTime t_us = 0;
    NodeId node = 0;
    std::string event;
    std::string detail;
};

struct FloodTraceRow {
    std::uint64_t flood_idx = 0;
    NodeId node = 0;
    bool reached = false;
    unsigned first_rx_uslot = 0;  // meaningful only when reached and not initiator
    unsigned relay_cnt = 0;
    bool is_initiator = false;
};

struct NodeSummaryRow {
    NodeId node = 0;
    std::optional<std::uint64_t> assoc_latency_us;
    std::optional<std::uint64_t> dao_delta_us;
    std::uint64_t data_delivered = 0;
    std::uint64_t data_lost = 0;
    std::uint64_t desyncs = 0;
    std::uint64_t max_sync_error_us = 0;
    unsigned hops = 0;  // graph distance from the coordinator
};

struct RunResult {
    MacMode mode = MacMode::SIXPP;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::string config_echo;  // canonical scenario serialization
    SlotframeLayout layout;
    MetricsRecord metrics;
    std::vector<EventRow> events;
    std::vector<FloodTraceRow> flood_trace;
    std::vector<NodeSummaryRow> node_rows;

    std::string events_csv() const;
    std::string summary_csv() const;
    std::string floods_csv() const;
    std::string one_line_summary() const;
};

RunResult run(const ScenarioConfig& config);
RunResult run_with_seed(const ScenarioConfig& config, std::uint64_t seed);

struct MatrixCell {
    MacMode mode = MacMode::SIXPP;
    bool jam = false;
    std::uint64_t seed = 0;
    double reliability_pct = 0.0;
    double mean_latency_ms = 0.0;
    double median_latency_ms = 0.0;
};

struct MatrixResult {
    std::uint64_t config_hash = 0;
    std::uint64_t base_seed = 0;
    std::vector<MatrixCell> cells;  // ordered (mode, jam, seed)

    std::string csv() const;
};

// Runs {baseline, sixpp} x {jam off, jam on} x seeds. Cells may execute
// concurrently; the result order and content are identical to a serial run.
MatrixResult run_matrix(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds,
                        unsigned max_workers = 0);

}  // namespace sixpp
