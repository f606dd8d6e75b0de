#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sixpp/core.hpp"

namespace sixpp {

// Order statistics over a latency sample. count == 0 marks an empty summary;
// the statistic fields are meaningless then and must not be read as zeros.
struct LatencySummary {
    std::size_t count = 0;
    double mean_us = 0.0;
    double median_us = 0.0;
    double p95_us = 0.0;

    bool empty() const { return count == 0; }
};

LatencySummary aggregate(std::vector<std::uint64_t> latencies_us);

struct FrameCounts {
    std::uint64_t eb_unicast = 0;  // TSCH-plane beacon transmissions
    std::uint64_t ka = 0;
    std::uint64_t dio = 0;
    std::uint64_t dao = 0;
    std::uint64_t dao_retx = 0;
    std::uint64_t dao_ack_unicast = 0;
    std::uint64_t data_unicast = 0;
    std::uint64_t eb_flood = 0;  // CT-plane flood initiations by payload
    std::uint64_t dao_ack_flood = 0;
    std::uint64_t data_flood = 0;
    std::uint64_t collisions = 0;
    std::uint64_t drops = 0;
};

struct DeliveryRecord {
    bool delivered = false;
    std::uint64_t latency_us = 0;
};

// Everything one run measures. Node-indexed vectors span the full topology;
// per-message delivery is keyed (app_seq, destination).
struct MetricsRecord {
    std::vector<std::optional<std::uint64_t>> assoc_latency_us;
    std::vector<std::optional<std::uint64_t>> dao_delta_us;
    std::vector<std::uint64_t> desync_count;
    std::vector<std::uint64_t> max_sync_error_us;
    std::map<std::pair<unsigned, NodeId>, DeliveryRecord> deliveries;
    FrameCounts frames;

    void resize(unsigned node_count);

    void record_assoc(NodeId node, std::uint64_t latency_us);
    void record_dao_delta(NodeId node, std::uint64_t delta_us);
    void expect_delivery(unsigned app_seq, NodeId dst);
    // True when this (app_seq, dst) was expected and not yet delivered.
    bool record_delivery(unsigned app_seq, NodeId dst, std::uint64_t latency_us);

    std::uint64_t delivered_count() const;
    std::uint64_t expected_count() const;
    // Delivered / expected in percent; 100 when nothing was expected.
    double reliability_pct() const;
    std::vector<std::uint64_t> delivered_latencies() const;
    std::vector<std::uint64_t> assoc_latencies() const;
    std::vector<std::uint64_t> dao_deltas() const;
};

}  // namespace sixpp
