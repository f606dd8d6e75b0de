#include "sixpp/metrics.hpp"

#include <algorithm>

namespace sixpp {

LatencySummary aggregate(std::vector<std::uint64_t> latencies_us) {
    LatencySummary s;
    s.count = latencies_us.size();
    if (s.count == 0)
        return s;
    std::sort(latencies_us.begin(), latencies_us.end());
    double sum = 0.0;
    for (std::uint64_t v : latencies_us)
        sum += double(v);
    s.mean_us = sum / double(s.count);
    const std::size_t n = s.count;
    if (n % 2 == 1)
        s.median_us = double(latencies_us[n / 2]);
    else
        s.median_us = 0.5 * (double(latencies_us[n / 2 - 1]) + double(latencies_us[n / 2]));
    // Nearest-rank percentile.
    std::size_t rank = std::size_t((95 * n + 99) / 100);
    if (rank == 0)
        rank = 1;
    s.p95_us = double(latencies_us[rank - 1]);
    return s;
}

void MetricsRecord::resize(unsigned node_count) {
    assoc_latency_us.assign(node_count, std::nullopt);
    dao_delta_us.assign(node_count, std::nullopt);
    desync_count.assign(node_count, 0);
    max_sync_error_us.assign(node_count, 0);
}

void MetricsRecord::record_assoc(NodeId node, std::uint64_t latency_us) {
    if (!assoc_latency_us[node])
        assoc_latency_us[node] = latency_us;
}

void MetricsRecord::record_dao_delta(NodeId node, std::uint64_t delta_us) {
    if (!dao_delta_us[node])
        dao_delta_us[node] = delta_us;
}

void MetricsRecord::expect_delivery(unsigned app_seq, NodeId dst) {
    deliveries.emplace(std::make_pair(app_seq, dst), DeliveryRecord{});
}

bool MetricsRecord::record_delivery(unsigned app_seq, NodeId dst, std::uint64_t latency_us) {
    auto it = deliveries.find(std::make_pair(app_seq, dst));
    if (it == deliveries.end() || it->second.delivered)
        return false;
    it->second.delivered = true;
    it->second.latency_us = latency_us;
    return true;
}

std::uint64_t MetricsRecord::delivered_count() const {
    std::uint64_t n = 0;
    for (const auto& [key, rec] : deliveries)
        if (rec.delivered)
            ++n;
    return n;
}

std::uint64_t MetricsRecord::expected_count() const {
    return deliveries.size();
}

double MetricsRecord::reliability_pct() const {
    if (deliveries.empty())
        return 100.0;
    return 100.0 * double(delivered_count()) / double(expected_count());
}

std::vector<std::uint64_t> MetricsRecord::delivered_latencies() const {
    std::vector<std::uint64_t> out;
    for (const auto& [key, rec] : deliveries)
        if (rec.delivered)
            out.push_back(rec.latency_us);
    return out;
}

std::vector<std::uint64_t> MetricsRecord::assoc_latencies() const {
    std::vector<std::uint64_t> out;
    for (const auto& v : assoc_latency_us)
        if (v)
            out.push_back(*v);
    return out;
}

std::vector<std::uint64_t> MetricsRecord::dao_deltas() const {
    std::vector<std::uint64_t> out;
    for (const auto& v : dao_delta_us)
        if (v)
            out.push_back(*v);
    return out;
}

}  // namespace sixpp
