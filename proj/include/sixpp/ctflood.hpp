#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sixpp/core.hpp"
#include "sixpp/phy.hpp"

namespace sixpp {

// Parameters of a single CT flood. The flood window spans exactly
// n_tx + n_h micro-slots.
struct CtFloodConfig {
    unsigned n_tx = 2;
    unsigned n_h = 1;
    CtTiming timing;
    NodeId initiator = kCoordinator;

    unsigned window_micro_slots() const { return n_tx + n_h; }
};

struct CtNodeFloodState {
    static constexpr unsigned kNoRx = ~0u;

    bool is_initiator = false;
    bool received = false;
    // Relay counter carried by the first received frame.
    unsigned relay_cnt_at_rx = 0;
    unsigned first_rx_micro_slot = kNoRx;
    unsigned tx_done = 0;

    // Relay counter this node stamps on its own transmissions.
    unsigned tx_relay_cnt() const { return is_initiator ? 0 : relay_cnt_at_rx + 1; }
};

// True when the node transmits in `micro_slot`:
//  - the initiator transmits in micro-slots 0 .. n_tx-1;
//  - a node that first received in micro-slot k transmits in k+1 .. k+n_tx;
//  - both truncated at the window end, and a relay whose stamped counter
//    would exceed the hop budget n_h stays silent.
bool ct_transmits(const CtFloodConfig& cfg, const CtNodeFloodState& state, unsigned micro_slot);

struct CtStepAction {
    NodeId node;
    unsigned relay_cnt;  // stamped on the transmitted frame
};

// Transmitters of one micro-slot given per-node states. Throws when
// micro_slot lies outside the flood window.
std::vector<CtStepAction> flood_step(const CtFloodConfig& cfg,
                                     const std::vector<CtNodeFloodState>& states,
                                     unsigned micro_slot);

struct SyncReference {
    SimTime ct0;  // reconstructed flood start
    unsigned relay_cnt;
};

// CT_0 = rx_start - relay_cnt * t_slot. Throws when the subtraction would
// underflow (a relay counter inconsistent with the reception time).
SyncReference on_ct_rx(SimTime rx_start, unsigned relay_cnt, const CtTiming& timing);

struct FloodNodeOutcome {
    bool reached = false;
    unsigned first_rx_micro_slot = CtNodeFloodState::kNoRx;
    unsigned relay_cnt = 0;  // counter carried by the first received frame
    unsigned tx_count = 0;
};

// Hooks let the caller bind the stochastic parts: `gamma` is the capture
// multiplier vs the concurrent in-range transmitter count, `adjust` scales
// the combined success probability (e.g. jamming), `draw` resolves one
// reception attempt. All three are called deterministically per
// (receiver, micro_slot).
struct FloodHooks {
    std::function<double(unsigned k)> gamma;
    std::function<double(NodeId receiver, unsigned micro_slot, double p)> adjust;
    std::function<bool(NodeId receiver, unsigned micro_slot, double p)> draw;
    // Nodes allowed to receive (associated or tuned scanners). Transmit
    // eligibility follows reception within the same flood.
    std::function<bool(NodeId receiver)> can_listen;
};

FloodHooks lossless_hooks();

// Runs one full flood over the topology and reports per-node outcomes.
// The initiator's outcome is reached=true with no reception slot.
std::vector<FloodNodeOutcome> flood_outcome(const CtFloodConfig& cfg, const Topology& topo,
                                            const FloodHooks& hooks);

// Combined reception probability for concurrent CT transmitters with the
// given link PRRs: gamma(k) * (1 - prod(1 - prr_i)).
double ct_reception_probability(const std::vector<double>& prrs,
                                const std::function<double(unsigned)>& gamma);

}  // namespace sixpp
