#include "sixpp/simengine.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <deque>
#include <map>
#include <mutex>
#include <queue>
#include <thread>

#include "sixpp/rpl.hpp"
#include "sixpp/scenario.hpp"
#include "sixpp/tschmac.hpp"

namespace sixpp {

bool event_before(const Event& lhs, const Event& rhs) {
    if (lhs.at != rhs.at) return lhs.at < rhs.at;
    if (lhs.kind != rhs.kind) return static_cast<int>(lhs.kind) < static_cast<int>(rhs.kind);
    if (lhs.node != rhs.node) return lhs.node < rhs.node;
    return lhs.seq < rhs.seq;
}

TschRxOutcome resolve_tsch_reception(const std::vector<double>& candidate_prrs, double jam_factor,
                                     double draw) {
    TschRxOutcome out;
    if (candidate_prrs.empty()) return out;
    if (candidate_prrs.size() > 1) {
        // Two or more in-range transmitters on one channel destroy each other;
        // the narrowband slot model has no capture.
        out.collision = true;
        return out;
    }
    if (draw < candidate_prrs.front() * jam_factor) {
        out.decoded = true;
        out.transmitter_index = 0;
    }
    return out;
}

namespace {

enum TimerTag : std::uint64_t {
    kTimerEb = 1,
    kTimerKa = 2,
    kTimerDaoSend = 3,
    kTimerDaoRetx = 4,
    kTimerDio = 5,
};

struct QueuedFrame {
    Frame frame;
    std::vector<NodeId> route;  // full source route for root-originated traffic
    std::size_t cursor = 0;     // index of the hop currently carrying the frame
    unsigned retries = 0;
};

struct PendingData {
    unsigned app_seq = 0;
    SimTime born_at = 0;
    unsigned repeats_left = 0;
    Asn last_window_asn = ~0ull;
};

struct NodeRuntime {
    ClockModel clock;
    TschNodeState mac;
    RplNodeState rpl;
    std::deque<QueuedFrame> txq;
    unsigned scan_ct_index = 0;  // joiners listen on ct_channels[0], the well-known join channel
    std::uint64_t eb_draws = 0;
    std::uint64_t dio_draws = 0;
    std::uint64_t dao_jitter_draws = 0;
    std::uint64_t assoc_epochs = 0;
    bool ka_queued = false;
    bool eb_queued = false;
    bool dio_queued = false;
    SimTime dao_first_tx = 0;  // start of the current DAO handshake
};

struct FloodPlan {
    FrameKind kind = FrameKind::EB;
    std::uint64_t flood_idx = 0;
    unsigned channel = 0;
    unsigned app_seq = 0;
    SimTime born_at = 0;
    std::vector<NodeId> ack_ids;
};

std::string format_csv_header(std::uint64_t config_hash, std::uint64_t seed) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "# config=%016" PRIx64 " seed=%" PRIu64 "\n", config_hash,
                  seed);
    return buf;
}

class Engine {
  public:
    Engine(const ScenarioConfig& config, std::uint64_t seed)
        : cfg_(config),
          seed_(seed),
          rng_(seed),
          topo_(config.topology.build()),
          layout_(config.layout_for(config.mode)),
          window_(config.ct_window()) {}

    RunResult run();

  private:
    void schedule(SimTime at, EventKind kind, NodeId node, std::uint64_t a = 0,
                  std::uint64_t b = 0) {
        events_.push(Event{at, kind, node, a, b, next_event_seq_++});
    }

    void emit(SimTime t, NodeId node, std::string event, std::string detail = {}) {
        rows_.push_back(EventRow{t, node, std::move(event), std::move(detail)});
    }

    bool is_sixpp() const { return cfg_.mode == MacMode::SIXPP; }

    SimTime boundary_true(Asn asn) const {
        return static_cast<SimTime>(nodes_[kCoordinator].clock.true_of_local(
            static_cast<std::int64_t>(asn * cfg_.slot_us)));
    }

    void init();
    void on_slot_boundary(const Event& ev);
    void on_flood(const Event& ev);
    void on_timer(const Event& ev);
    void on_app_gen(const Event& ev);

    void frame_boundary_checks(Asn asn, SimTime t);
    void plan_ct_window(Asn asn, SimTime t);
    void shared_slot(Asn asn, SimTime t);
    void process_rx(NodeId receiver, const QueuedFrame& qf, Asn asn, SimTime t);
    void tx_feedback(NodeId sender, bool delivered, Asn asn, SimTime t);
    void handle_parent_change(NodeId node, SimTime t);
    void associate_baseline(NodeId node, Asn asn, SimTime t);
    void anchor_from_flood(NodeId node, Asn window_asn, SimTime rx_true, unsigned relay_cnt,
                           unsigned flood_in_window);
    void desync(NodeId node, SimTime t, std::int64_t err);
    void arm_dao_send(NodeId node, SimTime at);
    void arm_dio(NodeId node, SimTime t);
    void root_register_dao(const DaoMeta& meta, SimTime t);
    void flush_pending_data(NodeId dst);
    void enqueue_eb(NodeId node);
    void enqueue_ka(NodeId node);
    void enqueue_dio(NodeId node);
    unsigned scan_channel_baseline(NodeId node, Asn asn);
    double jam_factor(unsigned channel, SimTime t) const { return cfg_.jammer.factor(channel, t); }

    const ScenarioConfig& cfg_;
    std::uint64_t seed_;
    Rng rng_;
    Topology topo_;
    SlotframeLayout layout_;
    CtWindow window_;

    std::vector<NodeRuntime> nodes_;
    RootRoutingTable root_table_;
    // Baseline data generated before the destination's route closed.
    std::map<NodeId, std::vector<std::pair<unsigned, SimTime>>> route_wait_;
    std::deque<PendingData> flood_data_;
    std::vector<FloodPlan> active_window_;
    Asn active_window_asn_ = 0;

    struct EventCompare {
        bool operator()(const Event& lhs, const Event& rhs) const {
            // priority_queue keeps the largest on top, so invert.
            return event_before(rhs, lhs);
        }
    };
    std::priority_queue<Event, std::vector<Event>, EventCompare> events_;
    std::uint64_t next_event_seq_ = 0;

    std::uint64_t flood_counter_ = 0;
    unsigned app_seq_counter_ = 0;

    MetricsRecord metrics_;
    std::vector<EventRow> rows_;
    std::vector<FloodTraceRow> trace_;
};

void Engine::init() {
    const unsigned n = topo_.node_count();
    nodes_.resize(n);
    metrics_.resize(n);

    for (unsigned i = 0; i < n; ++i) {
        NodeRuntime& node = nodes_[i];
        node.clock.drift_ppm = cfg_.drift_for(static_cast<NodeId>(i), rng_);
        node.clock.offset_us = 0;
        node.scan_ct_index = 0;
    }

    NodeRuntime& root = nodes_[kCoordinator];
    root.mac.associated = true;
    root.mac.anchor = SyncAnchor{0, 0};
    root.rpl.rank = 0;
    metrics_.record_assoc(kCoordinator, 0);
    arm_dio(kCoordinator, 0);

    schedule(boundary_true(0), EventKind::SLOT_BOUNDARY, kCoordinator, 0);

    if (!is_sixpp()) {
        // The coordinator beacons from the start; everyone else begins on
        // association.
        SimTime first = rng_.uniform_int(cfg_.mac.eb_period_us / 10 + 1, kCoordinator,
                                         Draw::EbJitter, root.eb_draws++);
        schedule(first, EventKind::TIMER, kCoordinator, kTimerEb);
    }

    if (cfg_.app.enabled) {
        SimTime stop = cfg_.app.stop_us == 0 ? cfg_.run_duration_us
                                             : std::min(cfg_.app.stop_us, cfg_.run_duration_us);
        if (cfg_.app.start_us < stop) {
            schedule(cfg_.app.start_us, EventKind::APP_GEN, kCoordinator, 0);
        }
    }
}

unsigned Engine::scan_channel_baseline(NodeId node, Asn asn) {
    const auto& channels = cfg_.hopping.tsch_channels;
    std::uint64_t sweep = asn / channels.size();
    std::uint64_t start = rng_.uniform_int(channels.size(), node, Draw::ScanTsch, sweep);
    return channels[(start + asn) % channels.size()];
}

void Engine::enqueue_eb(NodeId node) {
    NodeRuntime& rt = nodes_[node];
    if (rt.eb_queued) return;  // one pending beacon at a time, stale ones are useless
    QueuedFrame qf;
    qf.frame = make_eb(node, rt.rpl.rank, 0, 0);
    rt.txq.push_back(std::move(qf));
    rt.eb_queued = true;
}

void Engine::enqueue_ka(NodeId node) {
    NodeRuntime& rt = nodes_[node];
    if (rt.ka_queued || !rt.rpl.parent) return;
    QueuedFrame qf;
    qf.frame = make_ka(node, *rt.rpl.parent, rt.rpl.rank, 0);
    rt.txq.push_back(std::move(qf));
    rt.ka_queued = true;
}

void Engine::enqueue_dio(NodeId node) {
    NodeRuntime& rt = nodes_[node];
    if (rt.dio_queued) return;
    QueuedFrame qf;
    qf.frame = make_dio(node, rt.rpl.rank, 0);
    rt.txq.push_back(std::move(qf));
    rt.dio_queued = true;
}

void Engine::arm_dio(NodeId node, SimTime t) {
    if (cfg_.rpl.dio_period_us == 0) return;
    SimTime first = rng_.uniform_int(cfg_.rpl.dio_period_us / 4 + 1, node, Draw::DioJitter,
                                     nodes_[node].dio_draws++);
    schedule(t + first, EventKind::TIMER, node, kTimerDio);
}

void Engine::arm_dao_send(NodeId node, SimTime at) {
    schedule(at, EventKind::TIMER, node, kTimerDaoSend);
}

void Engine::handle_parent_change(NodeId node, SimTime t) {
    NodeRuntime& rt = nodes_[node];
    if (!rt.mac.associated || node == kCoordinator) return;
    // A new parent invalidates the advertised route; refresh promptly. The
    // very first registration keeps the join jitter: a formation wave hands
    // the whole network its parents within a second, and releasing every DAO
    // at that instant would stampede the shared slots.
    rt.rpl.dao_state = DaoState::IDLE;
    rt.rpl.retx_delay_us = cfg_.rpl.dao_retx_us;
    if (rt.dao_first_tx == 0) {
        std::uint64_t jitter = rng_.uniform_int(cfg_.rpl.dao_jitter_us + 1, node,
                                                Draw::DaoJitter, rt.dao_jitter_draws++);
        arm_dao_send(node, t + jitter);
    } else {
        arm_dao_send(node, t);
    }
}

void Engine::associate_baseline(NodeId node, Asn asn, SimTime t) {
    NodeRuntime& rt = nodes_[node];
    rt.mac.associated = true;
    rt.mac.anchor = SyncAnchor{rt.clock.local_of_true(t), asn};
    rt.mac.associated_at = t;
    rt.mac.last_sync_at = t;
    rt.assoc_epochs++;
    metrics_.record_assoc(node, t);
    emit(t, node, "assoc");
    schedule(t + cfg_.mac.ka_period_us, EventKind::TIMER, node, kTimerKa);
    SimTime eb_offset = rng_.uniform_int(cfg_.mac.eb_period_us / 10 + 1, node, Draw::EbJitter,
                                         rt.eb_draws++);
    schedule(t + eb_offset, EventKind::TIMER, node, kTimerEb);
    arm_dio(node, t);
    std::uint64_t jitter =
        rng_.uniform_int(cfg_.rpl.dao_jitter_us + 1, node, Draw::DaoJitter, rt.dao_jitter_draws++);
    arm_dao_send(node, t + jitter);
}

void Engine::anchor_from_flood(NodeId node, Asn window_asn, SimTime rx_true, unsigned relay_cnt,
                               unsigned flood_in_window) {
    // The node reconstructs the window start on its own clock from the relay
    // counter and the flood's position inside the window.
    NodeRuntime& rt = nodes_[node];
    std::int64_t rx_local = rt.clock.local_of_true(rx_true);
    std::int64_t window_start_local =
        rx_local - static_cast<std::int64_t>(relay_cnt) * static_cast<std::int64_t>(window_.t_slot_us) -
        static_cast<std::int64_t>(flood_in_window) * static_cast<std::int64_t>(window_.flood_span_us());
    rt.mac.anchor = SyncAnchor{window_start_local, window_asn};
    rt.mac.last_sync_at = rx_true;
}

void Engine::desync(NodeId node, SimTime t, std::int64_t err) {
    NodeRuntime& rt = nodes_[node];
    rt.mac.associated = false;
    rt.txq.clear();
    rt.ka_queued = false;
    rt.eb_queued = false;
    rt.dio_queued = false;
    rt.rpl.parent.reset();
    rt.rpl.rank = kInfiniteRank;
    rt.rpl.neighbor_ranks.clear();
    if (rt.rpl.dao_state == DaoState::WAITING_ACK) rt.rpl.dao_state = DaoState::IDLE;
    reset_backoff(rt.mac, cfg_.mac);
    metrics_.desync_count[node]++;
    char buf[48];
    std::snprintf(buf, sizeof buf, "err_us=%" PRId64, err);
    emit(t, node, "desync", buf);
}

void Engine::frame_boundary_checks(Asn asn, SimTime t) {
    for (unsigned i = 1; i < nodes_.size(); ++i) {
        NodeRuntime& rt = nodes_[i];
        if (!rt.mac.associated) continue;
        std::int64_t err =
            sync_error_us(rt.clock, rt.mac.anchor, asn, cfg_.slot_us, static_cast<std::int64_t>(t));
        std::uint64_t mag = static_cast<std::uint64_t>(err < 0 ? -err : err);
        metrics_.max_sync_error_us[i] = std::max(metrics_.max_sync_error_us[i], mag);
        if (mag >= cfg_.mac.guard_us) desync(static_cast<NodeId>(i), t, err);
    }
}

void Engine::root_register_dao(const DaoMeta& meta, SimTime t) {
    root_table_.register_dao(meta.origin, meta.origin_parent);
    if (!is_sixpp()) {
        // Unicast acks ride source routes; each leaves as soon as its route
        // closes. A registration can close routes for other pending origins.
        std::vector<NodeId> ready;
        for (NodeId id : root_table_.pending_acks()) {
            if (root_table_.source_route(id)) ready.push_back(id);
        }
        for (NodeId id : ready) {
            auto route = root_table_.source_route(id);
            root_table_.remove_pending_ack(id);
            QueuedFrame qf;
            qf.frame = make_dao_ack(kCoordinator, (*route)[0], {id}, t);
            qf.route = *route;
            nodes_[kCoordinator].txq.push_back(std::move(qf));
        }
        std::vector<NodeId> waiting;
        for (const auto& [dst, items] : route_wait_) waiting.push_back(dst);
        for (NodeId dst : waiting) flush_pending_data(dst);
    }
}

void Engine::flush_pending_data(NodeId dst) {
    auto it = route_wait_.find(dst);
    if (it == route_wait_.end()) return;
    auto route = root_table_.source_route(dst);
    if (!route) return;
    for (const auto& [seq, born] : it->second) {
        QueuedFrame qf;
        qf.frame = make_data(kCoordinator, (*route)[0], seq, cfg_.app.payload_bytes, born);
        qf.route = *route;
        nodes_[kCoordinator].txq.push_back(std::move(qf));
    }
    route_wait_.erase(it);
}

void Engine::process_rx(NodeId receiver, const QueuedFrame& qf, Asn asn, SimTime t) {
    NodeRuntime& rt = nodes_[receiver];
    const Frame& frame = qf.frame;

    if (frame.src_rank != kInfiniteRank) rt.rpl.learn_neighbor(frame.src, frame.src_rank);
    if (select_parent(rt.rpl, receiver == kCoordinator)) handle_parent_change(receiver, t);

    if (frame.kind == FrameKind::EB) {
        if (!rt.mac.associated) {
            associate_baseline(receiver, asn, t);
        } else if (cfg_.mac.resync_enabled && rt.rpl.parent && frame.src == *rt.rpl.parent) {
            rt.mac.anchor = SyncAnchor{rt.clock.local_of_true(t), asn};
            rt.mac.last_sync_at = t;
        }
        return;
    }
    // Overhearing a unicast frame only contributes the rank update above.
    if (!rt.mac.associated || frame.dst != receiver) return;

    switch (frame.kind) {
        case FrameKind::KA:
        case FrameKind::DIO:
            // KA: nothing on the parent side; the sender realigns when the
            // exchange is acknowledged. DIO: the rank update above is all.
            break;
        case FrameKind::DAO: {
            if (receiver == kCoordinator) {
                root_register_dao(frame.dao, t);
            } else if (rt.rpl.parent) {
                QueuedFrame fwd;
                fwd.frame = frame;
                fwd.frame.src = receiver;
                fwd.frame.dst = *rt.rpl.parent;
                fwd.frame.src_rank = rt.rpl.rank;
                rt.txq.push_back(std::move(fwd));
            }
            break;
        }
        case FrameKind::DAO_ACK:
        case FrameKind::DATA: {
            bool final_hop = qf.route.empty() || qf.cursor + 1 >= qf.route.size();
            if (!final_hop) {
                QueuedFrame fwd = qf;
                fwd.cursor++;
                fwd.frame.src = receiver;
                fwd.frame.dst = fwd.route[fwd.cursor];
                fwd.frame.src_rank = rt.rpl.rank;
                fwd.retries = 0;
                rt.txq.push_back(std::move(fwd));
                break;
            }
            if (frame.kind == FrameKind::DAO_ACK) {
                for (NodeId id : frame.dao_ack.acked) {
                    if (id != receiver || rt.rpl.dao_state != DaoState::WAITING_ACK) continue;
                    rt.rpl.dao_state = DaoState::ACKED;
                    std::uint64_t delta = t - rt.dao_first_tx;
                    metrics_.record_dao_delta(receiver, delta);
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "hops=%u delta_us=%" PRIu64, rt.rpl.rank,
                                  delta);
                    emit(t, receiver, "dao_ack_rx", buf);
                }
            } else {
                std::uint64_t latency = t - frame.born_at;
                if (metrics_.record_delivery(frame.data.app_seq, receiver, latency)) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "seq=%u lat_us=%" PRIu64, frame.data.app_seq,
                                  latency);
                    emit(t, receiver, "data_rx", buf);
                }
            }
            break;
        }
        case FrameKind::EB:
            break;
    }
}

void Engine::tx_feedback(NodeId sender, bool delivered, Asn asn, SimTime t) {
    NodeRuntime& rt = nodes_[sender];
    QueuedFrame& head = rt.txq.front();

    if (head.frame.dst == kBroadcast) {
        // Beacons and advertisements are fire and forget.
        if (head.frame.kind == FrameKind::EB) rt.eb_queued = false;
        if (head.frame.kind == FrameKind::DIO) rt.dio_queued = false;
        rt.txq.pop_front();
        return;
    }

    if (delivered) {
        if (head.frame.kind == FrameKind::KA) {
            // An acknowledged keepalive realigns the sender to its parent's
            // slot grid.
            rt.ka_queued = false;
            if (cfg_.mac.resync_enabled) {
                rt.mac.anchor = SyncAnchor{rt.clock.local_of_true(t), asn};
                rt.mac.last_sync_at = t;
            }
        }
        rt.txq.pop_front();
        reset_backoff(rt.mac, cfg_.mac);
        return;
    }

    head.retries++;
    if (head.retries > cfg_.mac.max_retries) {
        metrics_.frames.drops++;
        char buf[32];
        std::snprintf(buf, sizeof buf, "kind=%s", frame_kind_name(head.frame.kind));
        emit(t, sender, "drop", buf);
        if (head.frame.kind == FrameKind::KA) rt.ka_queued = false;
        rt.txq.pop_front();
        reset_backoff(rt.mac, cfg_.mac);
        return;
    }
    apply_backoff(rt.mac, cfg_.mac, rng_, sender);
}

void Engine::shared_slot(Asn asn, SimTime t) {
    unsigned channel = tsch_channel(cfg_.hopping, asn);

    struct TxEntry {
        NodeId node;
        bool decoded_by_dst = false;
    };
    std::vector<TxEntry> txs;
    for (unsigned i = 0; i < nodes_.size(); ++i) {
        NodeRuntime& rt = nodes_[i];
        if (!rt.mac.associated || rt.txq.empty()) continue;
        if (rt.mac.backoff_counter > 0) {
            rt.mac.backoff_counter--;
            continue;
        }
        txs.push_back(TxEntry{static_cast<NodeId>(i), false});
    }
    if (txs.empty()) return;

    for (const TxEntry& tx : txs) {
        switch (nodes_[tx.node].txq.front().frame.kind) {
            case FrameKind::EB: metrics_.frames.eb_unicast++; break;
            case FrameKind::KA: metrics_.frames.ka++; break;
            case FrameKind::DIO: metrics_.frames.dio++; break;
            case FrameKind::DAO: metrics_.frames.dao++; break;
            case FrameKind::DAO_ACK: metrics_.frames.dao_ack_unicast++; break;
            case FrameKind::DATA: metrics_.frames.data_unicast++; break;
        }
    }

    struct RxEntry {
        NodeId receiver;
        std::size_t tx_index;
    };
    std::vector<RxEntry> receptions;
    for (unsigned i = 0; i < nodes_.size(); ++i) {
        NodeId receiver = static_cast<NodeId>(i);
        NodeRuntime& rt = nodes_[i];
        bool transmitting = std::any_of(txs.begin(), txs.end(),
                                        [&](const TxEntry& e) { return e.node == receiver; });
        if (transmitting) continue;
        if (!rt.mac.associated) {
            // Joiners in flood mode camp on a CT channel instead of sweeping
            // the TSCH plane.
            if (is_sixpp()) continue;
            if (scan_channel_baseline(receiver, asn) != channel) continue;
        }
        std::vector<double> prrs;
        std::vector<std::size_t> indices;
        for (std::size_t k = 0; k < txs.size(); ++k) {
            double prr = topo_.prr(txs[k].node, receiver, channel);
            if (prr > 0.0) {
                prrs.push_back(prr);
                indices.push_back(k);
            }
        }
        if (prrs.empty()) continue;
        double draw = rng_.uniform(receiver, Draw::LinkShared, asn);
        TschRxOutcome out = resolve_tsch_reception(prrs, jam_factor(channel, t), draw);
        if (out.collision) {
            metrics_.frames.collisions++;
            continue;
        }
        if (out.decoded) receptions.push_back(RxEntry{receiver, indices[out.transmitter_index]});
    }

    for (const RxEntry& rx : receptions) {
        const QueuedFrame& qf = nodes_[txs[rx.tx_index].node].txq.front();
        if (qf.frame.dst == rx.receiver) txs[rx.tx_index].decoded_by_dst = true;
        process_rx(rx.receiver, qf, asn, t);
    }

    for (const TxEntry& tx : txs) {
        tx_feedback(tx.node, tx.decoded_by_dst, asn, t);
    }
}

void Engine::plan_ct_window(Asn asn, SimTime t) {
    active_window_.clear();
    active_window_asn_ = asn;
    for (unsigned j = 0; j < window_.floods_per_frame; ++j) {
        FloodPlan plan;
        plan.flood_idx = flood_counter_++;
        plan.channel = ct_channel(cfg_.hopping, plan.flood_idx);
        if (j == 0) {
            plan.kind = FrameKind::EB;
        } else if (root_table_.acks_pending()) {
            plan.kind = FrameKind::DAO_ACK;
            plan.ack_ids =
                root_table_.take_ack_batch(dao_ack_batch_capacity(cfg_.timing.payload_bytes));
        } else {
            // Oldest message that has not already used a slot in this window;
            // its repeats land on rotated channels in later windows.
            std::size_t chosen = flood_data_.size();
            for (std::size_t k = 0; k < flood_data_.size(); ++k) {
                if (flood_data_[k].last_window_asn != asn) {
                    chosen = k;
                    break;
                }
            }
            if (chosen < flood_data_.size()) {
                PendingData& pd = flood_data_[chosen];
                plan.kind = FrameKind::DATA;
                plan.app_seq = pd.app_seq;
                plan.born_at = pd.born_at;
                pd.last_window_asn = asn;
                if (--pd.repeats_left == 0) {
                    flood_data_.erase(flood_data_.begin() +
                                      static_cast<std::ptrdiff_t>(chosen));
                }
            } else {
                plan.kind = FrameKind::EB;  // idle flood slots repeat the beacon
            }
        }
        active_window_.push_back(std::move(plan));
        schedule(t + static_cast<SimTime>(j) * window_.flood_span_us(), EventKind::CT_MICRO_SLOT,
                 kCoordinator, asn, j);
    }
}

void Engine::on_flood(const Event& ev) {
    Asn window_asn = ev.a;
    unsigned j = static_cast<unsigned>(ev.b);
    if (window_asn != active_window_asn_ || j >= active_window_.size()) return;
    const FloodPlan plan = active_window_[j];
    SimTime flood_start = ev.at;
    std::uint64_t t_slot = window_.t_slot_us;

    switch (plan.kind) {
        case FrameKind::EB: metrics_.frames.eb_flood++; break;
        case FrameKind::DAO_ACK: metrics_.frames.dao_ack_flood++; break;
        case FrameKind::DATA: metrics_.frames.data_flood++; break;
        default: break;
    }

    CtFloodConfig fc;
    fc.n_tx = window_.n_tx;
    fc.n_h = window_.n_h;
    fc.timing = cfg_.timing;
    fc.initiator = kCoordinator;

    FloodHooks hooks;
    hooks.gamma = [this](unsigned k) { return cfg_.capture.gamma(k); };
    hooks.adjust = [&](NodeId, unsigned uslot, double p) {
        return p * jam_factor(plan.channel, flood_start + uslot * t_slot);
    };
    hooks.draw = [&](NodeId receiver, unsigned uslot, double p) {
        return rng_.uniform(receiver, Draw::LinkCt, plan.flood_idx, uslot) < p;
    };
    hooks.can_listen = [&](NodeId receiver) {
        const NodeRuntime& rt = nodes_[receiver];
        if (rt.mac.associated) return true;
        if (!is_sixpp()) return false;
        return cfg_.hopping.ct_channels[rt.scan_ct_index] == plan.channel;
    };

    std::vector<FloodNodeOutcome> outcomes = flood_outcome(fc, topo_, hooks);

    unsigned reached = 0;
    for (unsigned i = 0; i < outcomes.size(); ++i) {
        const FloodNodeOutcome& oc = outcomes[i];
        if (oc.reached) reached++;
        if (cfg_.trace_floods) {
            trace_.push_back(FloodTraceRow{plan.flood_idx, static_cast<NodeId>(i), oc.reached,
                                           oc.first_rx_micro_slot, oc.relay_cnt,
                                           i == kCoordinator});
        }
        if (!oc.reached || i == kCoordinator) continue;

        NodeId node = static_cast<NodeId>(i);
        NodeRuntime& rt = nodes_[i];
        SimTime rx_true = flood_start + static_cast<SimTime>(oc.first_rx_micro_slot) * t_slot;

        if (oc.relay_cnt == 0) {
            // Only the initiator stamps zero, so the coordinator itself is in
            // range.
            rt.rpl.learn_neighbor(kCoordinator, 0);
            if (select_parent(rt.rpl, false)) handle_parent_change(node, rx_true);
        }

        if (!rt.mac.associated) {
            if (plan.kind != FrameKind::EB) continue;
            anchor_from_flood(node, window_asn, rx_true, oc.relay_cnt, j);
            rt.mac.associated = true;
            rt.mac.associated_at = rx_true;
            rt.assoc_epochs++;
            metrics_.record_assoc(node, rx_true);
            emit(rx_true, node, "assoc");
            arm_dio(node, rx_true);
            std::uint64_t jitter = rng_.uniform_int(cfg_.rpl.dao_jitter_us + 1, node,
                                                    Draw::DaoJitter, rt.dao_jitter_draws++);
            arm_dao_send(node, rx_true + jitter);
            continue;
        }

        if (cfg_.mac.resync_enabled) {
            anchor_from_flood(node, window_asn, rx_true, oc.relay_cnt, j);
        }

        if (plan.kind == FrameKind::DAO_ACK) {
            for (NodeId id : plan.ack_ids) {
                if (id != node || rt.rpl.dao_state != DaoState::WAITING_ACK) continue;
                rt.rpl.dao_state = DaoState::ACKED;
                std::uint64_t delta = rx_true - rt.dao_first_tx;
                metrics_.record_dao_delta(node, delta);
                char buf[64];
                std::snprintf(buf, sizeof buf, "hops=%u delta_us=%" PRIu64, rt.rpl.rank, delta);
                emit(rx_true, node, "dao_ack_rx", buf);
            }
        } else if (plan.kind == FrameKind::DATA) {
            std::uint64_t latency = rx_true - plan.born_at;
            if (metrics_.record_delivery(plan.app_seq, node, latency)) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "seq=%u lat_us=%" PRIu64, plan.app_seq, latency);
                emit(rx_true, node, "data_rx", buf);
            }
        }
    }

    char buf[96];
    std::snprintf(buf, sizeof buf, "idx=%" PRIu64 " kind=%s ch=%u reached=%u", plan.flood_idx,
                  frame_kind_name(plan.kind), plan.channel, reached);
    emit(flood_start, kCoordinator, "flood", buf);
}

void Engine::on_slot_boundary(const Event& ev) {
    Asn asn = ev.a;
    SimTime t = ev.at;

    if (asn % layout_.total_slots == 0) frame_boundary_checks(asn, t);

    if (slot_role(layout_, asn) == SlotRole::CT) {
        if (asn % layout_.total_slots == 0 && is_sixpp()) plan_ct_window(asn, t);
    } else {
        shared_slot(asn, t);
    }

    SimTime next = boundary_true(asn + 1);
    if (next < cfg_.run_duration_us) {
        schedule(next, EventKind::SLOT_BOUNDARY, kCoordinator, asn + 1);
    }
}

void Engine::on_timer(const Event& ev) {
    NodeRuntime& rt = nodes_[ev.node];
    SimTime t = ev.at;
    switch (ev.a) {
        case kTimerEb: {
            if (is_sixpp()) break;
            if (rt.mac.associated) enqueue_eb(ev.node);
            SimTime period = cfg_.mac.eb_period_us;
            std::int64_t spread = static_cast<std::int64_t>(
                static_cast<double>(period) * cfg_.mac.eb_jitter_frac);
            std::int64_t jitter =
                rng_.uniform_range(-spread, spread, ev.node, Draw::EbJitter, rt.eb_draws++);
            schedule(static_cast<SimTime>(static_cast<std::int64_t>(t + period) + jitter),
                     EventKind::TIMER, ev.node, kTimerEb);
            break;
        }
        case kTimerKa: {
            if (is_sixpp()) break;
            if (!rt.mac.associated) break;  // re-armed on the next association
            if (t - rt.mac.last_sync_at >= cfg_.mac.ka_period_us) enqueue_ka(ev.node);
            schedule(t + cfg_.mac.ka_period_us / 4, EventKind::TIMER, ev.node, kTimerKa);
            break;
        }
        case kTimerDio: {
            if (!rt.mac.associated) break;  // re-armed on the next association
            enqueue_dio(ev.node);
            SimTime period = cfg_.rpl.dio_period_us;
            SimTime spread = period / 10;
            schedule(t + period +
                         rng_.uniform_range(-static_cast<std::int64_t>(spread),
                                            static_cast<std::int64_t>(spread), ev.node,
                                            Draw::DioJitter, rt.dio_draws++),
                     EventKind::TIMER, ev.node, kTimerDio);
            break;
        }
        case kTimerDaoSend: {
            if (!rt.mac.associated || !rt.rpl.parent) break;
            if (rt.rpl.dao_state != DaoState::IDLE) break;
            rt.rpl.dao_seq++;
            QueuedFrame qf;
            qf.frame = make_dao(ev.node, *rt.rpl.parent, rt.rpl.rank, ev.node, *rt.rpl.parent,
                                rt.rpl.dao_seq, t);
            rt.txq.push_back(std::move(qf));
            rt.dao_first_tx = t;  // delta is measured per handshake episode
            rt.rpl.dao_state = DaoState::WAITING_ACK;
            rt.rpl.retx_delay_us = cfg_.rpl.dao_retx_us;
            char buf[32];
            std::snprintf(buf, sizeof buf, "hops=%u", rt.rpl.rank);
            emit(t, ev.node, "dao_tx", buf);
            schedule(t + rt.rpl.retx_delay_us, EventKind::TIMER, ev.node, kTimerDaoRetx);
            break;
        }
        case kTimerDaoRetx: {
            if (!rt.mac.associated || !rt.rpl.parent) break;
            if (rt.rpl.dao_state != DaoState::WAITING_ACK) break;
            rt.rpl.dao_seq++;
            QueuedFrame qf;
            qf.frame = make_dao(ev.node, *rt.rpl.parent, rt.rpl.rank, ev.node, *rt.rpl.parent,
                                rt.rpl.dao_seq, t);
            rt.txq.push_back(std::move(qf));
            metrics_.frames.dao_retx++;
            char buf[32];
            std::snprintf(buf, sizeof buf, "hops=%u", rt.rpl.rank);
            emit(t, ev.node, "dao_retx", buf);
            rt.rpl.retx_delay_us = std::min(rt.rpl.retx_delay_us * 2, cfg_.rpl.dao_retx_cap_us);
            schedule(t + rt.rpl.retx_delay_us, EventKind::TIMER, ev.node, kTimerDaoRetx);
            break;
        }
        default:
            break;
    }
}

void Engine::on_app_gen(const Event& ev) {
    SimTime t = ev.at;
    unsigned seq = app_seq_counter_++;
    for (unsigned i = 1; i < nodes_.size(); ++i) {
        metrics_.expect_delivery(seq, static_cast<NodeId>(i));
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "seq=%u", seq);
    emit(t, kCoordinator, "data_gen", buf);

    if (is_sixpp()) {
        flood_data_.push_back(PendingData{seq, t, cfg_.data_redundancy, ~0ull});
    } else {
        for (unsigned i = 1; i < nodes_.size(); ++i) {
            NodeId dst = static_cast<NodeId>(i);
            auto route = root_table_.source_route(dst);
            if (route) {
                QueuedFrame qf;
                qf.frame = make_data(kCoordinator, (*route)[0], seq, cfg_.app.payload_bytes, t);
                qf.route = *route;
                nodes_[kCoordinator].txq.push_back(std::move(qf));
            } else {
                route_wait_[dst].push_back({seq, t});
            }
        }
    }

    SimTime stop = cfg_.app.stop_us == 0 ? cfg_.run_duration_us
                                         : std::min(cfg_.app.stop_us, cfg_.run_duration_us);
    SimTime next = t + cfg_.app.period_us;
    if (next < stop) schedule(next, EventKind::APP_GEN, kCoordinator, 0);
}

RunResult Engine::run() {
    init();
    while (!events_.empty()) {
        Event ev = events_.top();
        events_.pop();
        if (ev.at >= cfg_.run_duration_us) break;
        switch (ev.kind) {
            case EventKind::SLOT_BOUNDARY: on_slot_boundary(ev); break;
            case EventKind::CT_MICRO_SLOT: on_flood(ev); break;
            case EventKind::TIMER: on_timer(ev); break;
            case EventKind::APP_GEN: on_app_gen(ev); break;
        }
    }

    RunResult result;
    result.mode = cfg_.mode;
    result.seed = seed_;
    result.config_hash = scenario_hash(cfg_);
    result.config_echo = serialize_scenario(cfg_);
    result.layout = layout_;
    result.metrics = std::move(metrics_);
    result.events = std::move(rows_);
    result.flood_trace = std::move(trace_);

    for (unsigned i = 0; i < topo_.node_count(); ++i) {
        NodeSummaryRow row;
        row.node = static_cast<NodeId>(i);
        row.assoc_latency_us = result.metrics.assoc_latency_us[i];
        row.dao_delta_us = result.metrics.dao_delta_us[i];
        row.desyncs = result.metrics.desync_count[i];
        row.max_sync_error_us = result.metrics.max_sync_error_us[i];
        auto hops = hop_distance(topo_, kCoordinator, static_cast<NodeId>(i));
        row.hops = hops ? *hops : 0;
        result.node_rows.push_back(row);
    }
    for (const auto& [key, rec] : result.metrics.deliveries) {
        NodeSummaryRow& row = result.node_rows[key.second];
        if (rec.delivered) {
            row.data_delivered++;
        } else {
            row.data_lost++;
        }
    }
    return result;
}

}  // namespace

RunResult run(const ScenarioConfig& config) { return Engine(config, config.seed).run(); }

RunResult run_with_seed(const ScenarioConfig& config, std::uint64_t seed) {
    ScenarioConfig copy = config;
    copy.seed = seed;
    return Engine(copy, seed).run();
}

std::string RunResult::events_csv() const {
    std::string out = format_csv_header(config_hash, seed);
    out += "t_us,node,event,detail\n";
    char buf[48];
    for (const EventRow& row : events) {
        std::snprintf(buf, sizeof buf, "%" PRIu64 ",%u,", row.t_us, row.node);
        out += buf;
        out += row.event;
        out += ',';
        out += row.detail;
        out += '\n';
    }
    return out;
}

std::string RunResult::summary_csv() const {
    std::string out = format_csv_header(config_hash, seed);
    out +=
        "node,hops,assoc_latency_us,dao_delta_us,data_delivered,data_lost,desyncs,"
        "max_sync_error_us\n";
    char buf[160];
    for (const NodeSummaryRow& row : node_rows) {
        std::string assoc = row.assoc_latency_us ? std::to_string(*row.assoc_latency_us) : "";
        std::string dao = row.dao_delta_us ? std::to_string(*row.dao_delta_us) : "";
        std::snprintf(buf, sizeof buf,
                      "%u,%u,%s,%s,%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 "\n", row.node,
                      row.hops, assoc.c_str(), dao.c_str(), row.data_delivered, row.data_lost,
                      row.desyncs, row.max_sync_error_us);
        out += buf;
    }
    return out;
}

std::string RunResult::floods_csv() const {
    std::string out = format_csv_header(config_hash, seed);
    out += "flood_idx,node,reached,first_rx_uslot,relay_cnt,initiator\n";
    char buf[96];
    for (const FloodTraceRow& row : flood_trace) {
        std::string uslot =
            row.reached && !row.is_initiator ? std::to_string(row.first_rx_uslot) : "";
        std::snprintf(buf, sizeof buf, "%" PRIu64 ",%u,%d,%s,%u,%d\n", row.flood_idx, row.node,
                      row.reached ? 1 : 0, uslot.c_str(), row.relay_cnt, row.is_initiator ? 1 : 0);
        out += buf;
    }
    return out;
}

std::string RunResult::one_line_summary() const {
    LatencySummary lat = aggregate(metrics.delivered_latencies());
    LatencySummary assoc = aggregate(metrics.assoc_latencies());
    std::uint64_t desyncs = 0;
    std::uint64_t max_err = 0;
    for (std::uint64_t d : metrics.desync_count) desyncs += d;
    for (std::uint64_t e : metrics.max_sync_error_us) max_err = std::max(max_err, e);
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "mode=%s seed=%" PRIu64 " reliability=%.2f%% latency_ms=%.3f assoc_s=%.2f "
                  "desyncs=%" PRIu64 " max_sync_err_us=%" PRIu64 " eb_unicast=%" PRIu64
                  " ka=%" PRIu64 " floods=%" PRIu64,
                  mac_mode_name(mode), seed, metrics.reliability_pct(),
                  lat.empty() ? 0.0 : lat.mean_us / 1000.0,
                  assoc.empty() ? 0.0 : assoc.mean_us / 1.0e6, desyncs, max_err,
                  metrics.frames.eb_unicast, metrics.frames.ka,
                  metrics.frames.eb_flood + metrics.frames.dao_ack_flood +
                      metrics.frames.data_flood);
    return buf;
}

std::string MatrixResult::csv() const {
    std::string out = format_csv_header(config_hash, base_seed);
    out += "mode,jam,seed,reliability_pct,mean_latency_ms,median_latency_ms\n";
    char buf[128];
    for (const MatrixCell& cell : cells) {
        std::snprintf(buf, sizeof buf, "%s,%d,%" PRIu64 ",%.2f,%.3f,%.3f\n",
                      mac_mode_name(cell.mode), cell.jam ? 1 : 0, cell.seed, cell.reliability_pct,
                      cell.mean_latency_ms, cell.median_latency_ms);
        out += buf;
    }
    return out;
}

MatrixResult run_matrix(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds,
                        unsigned max_workers) {
    std::vector<MatrixCell> cells;
    for (MacMode mode : {MacMode::BASELINE_6TISCH_MINIMAL, MacMode::SIXPP}) {
        for (bool jam : {false, true}) {
            for (std::uint64_t seed : seeds) {
                cells.push_back(MatrixCell{mode, jam, seed, 0.0, 0.0, 0.0});
            }
        }
    }

    unsigned workers = max_workers == 0 ? std::thread::hardware_concurrency() : max_workers;
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(cells.size()));
    if (workers == 0) workers = 1;

    std::mutex mu;
    std::size_t next_index = 0;
    auto worker = [&]() {
        for (;;) {
            std::size_t idx;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next_index >= cells.size()) return;
                idx = next_index++;
            }
            MatrixCell& cell = cells[idx];
            ScenarioConfig run_cfg = config;
            run_cfg.mode = cell.mode;
            run_cfg.jammer.enabled = cell.jam;
            run_cfg.seed = cell.seed;
            run_cfg.trace_floods = false;
            RunResult rr = run(run_cfg);
            LatencySummary lat = aggregate(rr.metrics.delivered_latencies());
            cell.reliability_pct = rr.metrics.reliability_pct();
            cell.mean_latency_ms = lat.empty() ? 0.0 : lat.mean_us / 1000.0;
            cell.median_latency_ms = lat.empty() ? 0.0 : lat.median_us / 1000.0;
        }
    };

    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();

    MatrixResult result;
    result.config_hash = scenario_hash(config);
    result.base_seed = config.seed;
    result.cells = std::move(cells);
    return result;
}

}  // namespace sixpp
