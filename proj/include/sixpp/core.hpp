#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sixpp {

// True simulated time in microseconds since experiment start. All protocol
// arithmetic is integer microseconds; there is no floating-point time base.
using SimTime = std::uint64_t;

using NodeId = std::uint16_t;

// Destination sentinel for broadcast frames.
inline constexpr NodeId kBroadcast = 0xffff;

// Node 0 is always the coordinator / timesync root.
inline constexpr NodeId kCoordinator = 0;

struct Link {
    NodeId src = 0;
    NodeId dst = 0;
    double prr = 0.0;
};

// Directed link graph with packet reception ratios. Node ids are dense
// [0, node_count). PRR is stored per link and applies uniformly across
// channels; channel-dependent loss is modelled by the jammer.
class Topology {
public:
    Topology() = default;
    explicit Topology(unsigned node_count);

    unsigned node_count() const { return n_; }

    // Directed link. Self links and out-of-range ids are rejected.
    void add_link(NodeId src, NodeId dst, double prr);
    void add_bidir(NodeId a, NodeId b, double prr);

    // 0.0 when no link exists.
    double prr(NodeId src, NodeId dst) const;
    double prr(NodeId src, NodeId dst, unsigned /*channel*/) const { return prr(src, dst); }
    bool has_link(NodeId src, NodeId dst) const { return prr(src, dst) > 0.0; }

    const std::vector<Link>& links() const { return links_; }
    // Transmitters with a link into dst.
    const std::vector<NodeId>& neighbors_in(NodeId dst) const;
    const std::vector<NodeId>& neighbors_out(NodeId src) const;

    bool symmetric() const;

    // Set by the geometric generator; empty otherwise.
    std::vector<std::pair<double, double>> positions;

private:
    unsigned n_ = 0;
    std::vector<Link> links_;
    std::vector<std::vector<NodeId>> in_;
    std::vector<std::vector<NodeId>> out_;
    std::vector<double> prr_;  // n_ x n_ adjacency, 0 = absent
};

// BFS hop count over links with prr > 0. nullopt when unreachable.
std::optional<unsigned> hop_distance(const Topology& topo, NodeId from, NodeId to);

// Max hop distance from `from` over all reachable nodes.
unsigned eccentricity(const Topology& topo, NodeId from);

bool is_connected(const Topology& topo, NodeId from = kCoordinator);

// Chain 0-1-...-(n-1), bidirectional, uniform PRR. n >= 2.
Topology make_line_topology(unsigned n, double prr);

// rows x cols lattice, 4-neighbourhood, node id = r*cols + c.
Topology make_grid_topology(unsigned rows, unsigned cols, double prr);

// `clusters` groups of `width` nodes; full mesh inside a group and between
// adjacent groups. Hop distance from node 0 grows by one per group, which
// packs many nodes into a bounded diameter.
Topology make_cluster_line_topology(unsigned clusters, unsigned width, double prr);

// n points in the unit square, link when distance <= radius. Retries with
// fresh coordinates until connected; throws after too many attempts.
Topology make_rgg_topology(unsigned n, double radius, double prr, std::uint64_t seed);

// Text exchange format: one `src dst prr` triple per line, `#` comments.
Topology parse_edge_list(const std::string& text);
Topology load_edge_list(const std::string& path);
std::string to_edge_list(const Topology& topo);

enum class FrameKind : std::uint8_t { EB, KA, DIO, DAO, DAO_ACK, DATA };

const char* frame_kind_name(FrameKind kind);

struct EbMeta {
    std::uint64_t asn = 0;  // ASN of the slot (or CT window) the beacon describes
};

struct DaoMeta {
    NodeId origin = 0;
    NodeId origin_parent = 0;
    unsigned seq = 0;
};

struct DaoAckMeta {
    // Unicast form: single-entry route target. Flood form: batched origin ids.
    std::vector<NodeId> acked;
};

struct DataMeta {
    unsigned app_seq = 0;
};

struct Frame {
    FrameKind kind = FrameKind::DATA;
    NodeId src = 0;
    NodeId dst = kBroadcast;
    unsigned payload_bytes = 1;  // >= 1
    SimTime born_at = 0;
    // Advertised rank of the transmitter; receivers use it for parent selection.
    unsigned src_rank = 0;
    EbMeta eb;
    DaoMeta dao;
    DaoAckMeta dao_ack;
    DataMeta data;
};

Frame make_eb(NodeId src, unsigned rank, std::uint64_t asn, SimTime now);
Frame make_ka(NodeId src, NodeId parent, unsigned rank, SimTime now);
// Broadcast rank advertisement; the stand-in for RPL DIOs that keeps
// neighbor tables alive in both MAC modes.
Frame make_dio(NodeId src, unsigned rank, SimTime now);
Frame make_dao(NodeId src, NodeId dst, unsigned rank, NodeId origin, NodeId origin_parent,
               unsigned seq, SimTime now);
Frame make_dao_ack(NodeId src, NodeId dst, std::vector<NodeId> acked, SimTime now);
Frame make_data(NodeId src, NodeId dst, unsigned app_seq, unsigned payload_bytes, SimTime now);

// Purpose tag for independent random substreams.
enum class Draw : std::uint32_t {
    LinkShared,
    LinkCt,
    Backoff,
    EbJitter,
    DioJitter,
    DaoJitter,
    ScanTsch,
    Drift,
    TopoGen,
    Generic,
};

// Keyed deterministic generator. Every draw is a pure function of
// (seed, node, purpose, key), so identical seeds reproduce identical runs and
// unrelated draws never perturb each other.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(NodeId node, Draw purpose, std::uint64_t a = 0, std::uint64_t b = 0) const;

    // Uniform in [0, 1).
    double uniform(NodeId node, Draw purpose, std::uint64_t a = 0, std::uint64_t b = 0) const;

    // Uniform integer in [0, n). n >= 1.
    std::uint64_t uniform_int(std::uint64_t n, NodeId node, Draw purpose, std::uint64_t a = 0,
                              std::uint64_t b = 0) const;

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_range(std::int64_t lo, std::int64_t hi, NodeId node, Draw purpose,
                               std::uint64_t a = 0, std::uint64_t b = 0) const;

private:
    std::uint64_t seed_;
};

}  // namespace sixpp
