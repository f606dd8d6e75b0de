#include "sixpp/ctflood.hpp"

#include <algorithm>
#include <stdexcept>

namespace sixpp {

bool ct_transmits(const CtFloodConfig& cfg, const CtNodeFloodState& state, unsigned micro_slot) {
    if (micro_slot >= cfg.window_micro_slots())
        return false;
    if (state.is_initiator)
        return micro_slot < cfg.n_tx;
    if (!state.received || state.tx_done >= cfg.n_tx)
        return false;
    if (state.tx_relay_cnt() > cfg.n_h)
        return false;  // hop budget exhausted, frame is not relayed further
    const unsigned first_eligible = state.first_rx_micro_slot + 1;
    return micro_slot >= first_eligible && micro_slot < first_eligible + cfg.n_tx;
}

std::vector<CtStepAction> flood_step(const CtFloodConfig& cfg,
                                     const std::vector<CtNodeFloodState>& states,
                                     unsigned micro_slot) {
    if (micro_slot >= cfg.window_micro_slots())
        throw std::out_of_range("flood_step: micro-slot outside the flood window");
    std::vector<CtStepAction> actions;
    for (unsigned node = 0; node < states.size(); ++node)
        if (ct_transmits(cfg, states[node], micro_slot))
            actions.push_back({NodeId(node), states[node].tx_relay_cnt()});
    return actions;
}

SyncReference on_ct_rx(SimTime rx_start, unsigned relay_cnt, const CtTiming& timing) {
    const std::uint64_t travelled = std::uint64_t(relay_cnt) * ct_micro_slot_duration_us(timing);
    if (travelled > rx_start)
        throw std::invalid_argument("on_ct_rx: relay counter inconsistent with reception time");
    return {rx_start - travelled, relay_cnt};
}

double ct_reception_probability(const std::vector<double>& prrs,
                                const std::function<double(unsigned)>& gamma) {
    if (prrs.empty())
        return 0.0;
    double miss = 1.0;
    for (double p : prrs)
        miss *= (1.0 - p);
    return gamma(unsigned(prrs.size())) * (1.0 - miss);
}

FloodHooks lossless_hooks() {
    FloodHooks hooks;
    hooks.gamma = [](unsigned) { return 1.0; };
    hooks.adjust = [](NodeId, unsigned, double p) { return p; };
    hooks.draw = [](NodeId, unsigned, double p) { return p >= 1.0; };
    hooks.can_listen = [](NodeId) { return true; };
    return hooks;
}

std::vector<FloodNodeOutcome> flood_outcome(const CtFloodConfig& cfg, const Topology& topo,
                                            const FloodHooks& hooks) {
    const unsigned n = topo.node_count();
    if (cfg.initiator >= n)
        throw std::invalid_argument("flood_outcome: initiator outside topology");
    std::vector<CtNodeFloodState> states(n);
    states[cfg.initiator].is_initiator = true;
    const unsigned window = cfg.window_micro_slots();

    for (unsigned uslot = 0; uslot < window; ++uslot) {
        const std::vector<CtStepAction> txs = flood_step(cfg, states, uslot);
        if (txs.empty())
            continue;
        // Receptions resolve against the pre-slot transmit set; per-receiver
        // state updates apply after the slot.
        struct Rx {
            NodeId node;
            unsigned relay_cnt;
        };
        std::vector<Rx> received_now;
        for (NodeId r = 0; r < n; ++r) {
            CtNodeFloodState& state = states[r];
            if (state.received || state.is_initiator)
                continue;
            if (hooks.can_listen && !hooks.can_listen(r))
                continue;
            std::vector<double> prrs;
            unsigned min_relay_cnt = ~0u;
            for (const CtStepAction& tx : txs) {
                const double prr = topo.prr(tx.node, r);
                if (prr <= 0.0)
                    continue;
                prrs.push_back(prr);
                min_relay_cnt = std::min(min_relay_cnt, tx.relay_cnt);
            }
            if (prrs.empty())
                continue;
            double p = ct_reception_probability(prrs, hooks.gamma);
            if (hooks.adjust)
                p = hooks.adjust(r, uslot, p);
            if (hooks.draw(r, uslot, p))
                received_now.push_back({r, min_relay_cnt});
        }
        for (const CtStepAction& tx : txs)
            ++states[tx.node].tx_done;
        for (const Rx& rx : received_now) {
            CtNodeFloodState& state = states[rx.node];
            state.received = true;
            state.relay_cnt_at_rx = rx.relay_cnt;
            state.first_rx_micro_slot = uslot;
        }
    }

    std::vector<FloodNodeOutcome> outcomes(n);
    for (NodeId v = 0; v < n; ++v) {
        const CtNodeFloodState& state = states[v];
        FloodNodeOutcome& out = outcomes[v];
        out.tx_count = state.tx_done;
        if (state.is_initiator) {
            out.reached = true;
        } else if (state.received) {
            out.reached = true;
            out.first_rx_micro_slot = state.first_rx_micro_slot;
            out.relay_cnt = state.relay_cnt_at_rx;
        }
    }
    return outcomes;
}

}  // namespace sixpp
