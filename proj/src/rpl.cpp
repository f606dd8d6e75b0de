#include "sixpp/rpl.hpp"

#include <algorithm>

namespace sixpp {

void RplNodeState::learn_neighbor(NodeId neighbor, unsigned neighbor_rank) {
    auto it = neighbor_ranks.find(neighbor);
    if (it == neighbor_ranks.end())
        neighbor_ranks.emplace(neighbor, neighbor_rank);
    else
        it->second = neighbor_rank;
}

bool select_parent(RplNodeState& state, bool is_root) {
    if (is_root) {
        state.rank = 0;
        state.parent.reset();
        return false;
    }
    std::optional<NodeId> best;
    unsigned best_rank = kInfiniteRank;
    for (const auto& [neighbor, rank] : state.neighbor_ranks) {
        if (rank < best_rank) {  // map iteration is id-ordered, ties keep the lowest id
            best = neighbor;
            best_rank = rank;
        }
    }
    if (!best || best_rank == kInfiniteRank)
        return false;
    const bool changed = (state.parent != best);
    state.parent = best;
    state.rank = best_rank + 1;
    return changed;
}

void RootRoutingTable::register_dao(NodeId origin, NodeId origin_parent) {
    parent_of_[origin] = origin_parent;
    if (std::find(pending_acks_.begin(), pending_acks_.end(), origin) == pending_acks_.end())
        pending_acks_.push_back(origin);
}

std::optional<std::vector<NodeId>> RootRoutingTable::source_route(NodeId origin) const {
    std::vector<NodeId> reversed;
    NodeId cur = origin;
    while (cur != kCoordinator) {
        reversed.push_back(cur);
        auto it = parent_of_.find(cur);
        if (it == parent_of_.end())
            return std::nullopt;
        cur = it->second;
        if (reversed.size() > parent_of_.size())
            return std::nullopt;  // loop in stale parent pointers
    }
    std::reverse(reversed.begin(), reversed.end());
    return reversed;
}

void RootRoutingTable::remove_pending_ack(NodeId origin) {
    auto it = std::find(pending_acks_.begin(), pending_acks_.end(), origin);
    if (it != pending_acks_.end())
        pending_acks_.erase(it);
}

std::vector<NodeId> RootRoutingTable::take_ack_batch(unsigned max_ids) {
    std::vector<NodeId> batch;
    while (!pending_acks_.empty() && batch.size() < max_ids) {
        batch.push_back(pending_acks_.front());
        pending_acks_.pop_front();
    }
    return batch;
}

unsigned dao_ack_batch_capacity(unsigned flood_payload_bytes, unsigned header_bytes,
                                unsigned bytes_per_id) {
    if (flood_payload_bytes <= header_bytes || bytes_per_id == 0)
        return 0;
    return (flood_payload_bytes - header_bytes) / bytes_per_id;
}

}  // namespace sixpp
