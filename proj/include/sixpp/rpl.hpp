#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "sixpp/core.hpp"

namespace sixpp {

inline constexpr unsigned kInfiniteRank = ~0u;

enum class DaoState : std::uint8_t { IDLE, WAITING_ACK, ACKED };

struct RplParams {
    std::uint64_t dao_retx_us = 3'000'000;
    std::uint64_t dao_retx_cap_us = 60'000'000;
    // First DAO is delayed by a uniform draw from [0, dao_jitter_us].
    std::uint64_t dao_jitter_us = 1'000'000;
    // Broadcast rank advertisement period; keeps neighbor tables fresh so
    // late joiners can pick a parent. 0 disables the advertisements.
    std::uint64_t dio_period_us = 4'000'000;
};

struct RplNodeState {
    std::optional<NodeId> parent;
    unsigned rank = kInfiniteRank;
    DaoState dao_state = DaoState::IDLE;
    unsigned dao_seq = 0;
    std::uint64_t retx_delay_us = 0;
    std::map<NodeId, unsigned> neighbor_ranks;

    void learn_neighbor(NodeId neighbor, unsigned rank);
};

// Minimum-rank parent, ties broken by lowest NodeId; own rank becomes
// parent rank + 1. Returns true when the parent changed. The root never
// selects a parent.
bool select_parent(RplNodeState& state, bool is_root);

// Downward state kept by the root: parent pointers learned from DAOs and the
// FIFO of origins awaiting a flooded acknowledgement.
class RootRoutingTable {
public:
    // Records origin -> parent. Re-registration (DAO retransmission or a
    // parent change) overwrites and re-queues the pending ack.
    void register_dao(NodeId origin, NodeId origin_parent);

    bool knows(NodeId origin) const { return parent_of_.count(origin) != 0; }

    // Hop sequence from the first hop after the root down to origin, or
    // nullopt while the parent chain is incomplete or looping.
    std::optional<std::vector<NodeId>> source_route(NodeId origin) const;

    // Up to max_ids origins in arrival order; taken ids leave the queue.
    std::vector<NodeId> take_ack_batch(unsigned max_ids);

    // Drops one origin from the ack queue (when its ack goes out unicast).
    void remove_pending_ack(NodeId origin);

    bool acks_pending() const { return !pending_acks_.empty(); }
    const std::deque<NodeId>& pending_acks() const { return pending_acks_; }

private:
    std::map<NodeId, NodeId> parent_of_;
    std::deque<NodeId> pending_acks_;
};

// Ids that fit one flooded acknowledgement:
// (payload - header_bytes) / bytes_per_id.
unsigned dao_ack_batch_capacity(unsigned flood_payload_bytes, unsigned header_bytes = 6,
                                unsigned bytes_per_id = 2);

}  // namespace sixpp
