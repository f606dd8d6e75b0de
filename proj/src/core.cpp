#include "sixpp/core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sixpp {

Topology::Topology(unsigned node_count)
    : n_(node_count), in_(node_count), out_(node_count), prr_(std::size_t(node_count) * node_count, 0.0) {}

void Topology::add_link(NodeId src, NodeId dst, double prr) {
    if (src >= n_ || dst >= n_)
        throw std::invalid_argument("topology: link endpoint out of range");
    if (src == dst)
        throw std::invalid_argument("topology: self links are not allowed");
    if (prr < 0.0 || prr > 1.0)
        throw std::invalid_argument("topology: prr outside [0,1]");
    double& cell = prr_[std::size_t(src) * n_ + dst];
    if (cell == 0.0 && prr > 0.0) {
        in_[dst].push_back(src);
        out_[src].push_back(dst);
        std::sort(in_[dst].begin(), in_[dst].end());
        std::sort(out_[src].begin(), out_[src].end());
    }
    cell = prr;
    links_.push_back({src, dst, prr});
}

void Topology::add_bidir(NodeId a, NodeId b, double prr) {
    add_link(a, b, prr);
    add_link(b, a, prr);
}

double Topology::prr(NodeId src, NodeId dst) const {
    if (src >= n_ || dst >= n_)
        return 0.0;
    return prr_[std::size_t(src) * n_ + dst];
}

const std::vector<NodeId>& Topology::neighbors_in(NodeId dst) const {
    if (dst >= n_)
        throw std::out_of_range("topology: node id out of range");
    return in_[dst];
}

const std::vector<NodeId>& Topology::neighbors_out(NodeId src) const {
    if (src >= n_)
        throw std::out_of_range("topology: node id out of range");
    return out_[src];
}

bool Topology::symmetric() const {
    for (NodeId a = 0; a < n_; ++a)
        for (NodeId b = 0; b < n_; ++b)
            if (prr(a, b) != prr(b, a))
                return false;
    return true;
}

std::optional<unsigned> hop_distance(const Topology& topo, NodeId from, NodeId to) {
    const unsigned n = topo.node_count();
    if (from >= n || to >= n)
        throw std::out_of_range("hop_distance: node id out of range");
    if (from == to)
        return 0u;
    std::vector<unsigned> dist(n, ~0u);
    dist[from] = 0;
    std::deque<NodeId> frontier{from};
    while (!frontier.empty()) {
        NodeId cur = frontier.front();
        frontier.pop_front();
        for (NodeId next : topo.neighbors_out(cur)) {
            if (dist[next] != ~0u)
                continue;
            dist[next] = dist[cur] + 1;
            if (next == to)
                return dist[next];
            frontier.push_back(next);
        }
    }
    return std::nullopt;
}

unsigned eccentricity(const Topology& topo, NodeId from) {
    unsigned ecc = 0;
    for (NodeId v = 0; v < topo.node_count(); ++v)
        if (auto d = hop_distance(topo, from, v))
            ecc = std::max(ecc, *d);
    return ecc;
}

bool is_connected(const Topology& topo, NodeId from) {
    for (NodeId v = 0; v < topo.node_count(); ++v)
        if (!hop_distance(topo, from, v))
            return false;
    return true;
}

Topology make_line_topology(unsigned n, double prr) {
    if (n < 2)
        throw std::invalid_argument("line topology needs at least 2 nodes");
    Topology topo(n);
    for (unsigned i = 0; i + 1 < n; ++i)
        topo.add_bidir(NodeId(i), NodeId(i + 1), prr);
    return topo;
}

Topology make_grid_topology(unsigned rows, unsigned cols, double prr) {
    if (rows < 1 || cols < 1 || rows * cols < 2)
        throw std::invalid_argument("grid topology needs at least 2 nodes");
    Topology topo(rows * cols);
    auto id = [cols](unsigned r, unsigned c) { return NodeId(r * cols + c); };
    for (unsigned r = 0; r < rows; ++r) {
        for (unsigned c = 0; c < cols; ++c) {
            if (c + 1 < cols)
                topo.add_bidir(id(r, c), id(r, c + 1), prr);
            if (r + 1 < rows)
                topo.add_bidir(id(r, c), id(r + 1, c), prr);
        }
    }
    return topo;
}

Topology make_cluster_line_topology(unsigned clusters, unsigned width, double prr) {
    if (clusters < 2 || width < 1)
        throw std::invalid_argument("cluster line needs >= 2 clusters of >= 1 node");
    Topology topo(clusters * width);
    auto id = [width](unsigned g, unsigned m) { return NodeId(g * width + m); };
    for (unsigned g = 0; g < clusters; ++g) {
        for (unsigned a = 0; a < width; ++a) {
            for (unsigned b = a + 1; b < width; ++b)
                topo.add_bidir(id(g, a), id(g, b), prr);
            if (g + 1 < clusters)
                for (unsigned b = 0; b < width; ++b)
                    topo.add_bidir(id(g, a), id(g + 1, b), prr);
        }
    }
    return topo;
}

Topology make_rgg_topology(unsigned n, double radius, double prr, std::uint64_t seed) {
    if (n < 2)
        throw std::invalid_argument("rgg topology needs at least 2 nodes");
    if (radius <= 0.0)
        throw std::invalid_argument("rgg radius must be positive");
    Rng rng(seed);
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        Topology topo(n);
        topo.positions.resize(n);
        for (unsigned v = 0; v < n; ++v) {
            topo.positions[v] = {rng.uniform(NodeId(v), Draw::TopoGen, attempt, 0),
                                 rng.uniform(NodeId(v), Draw::TopoGen, attempt, 1)};
        }
        for (unsigned a = 0; a < n; ++a) {
            for (unsigned b = a + 1; b < n; ++b) {
                double dx = topo.positions[a].first - topo.positions[b].first;
                double dy = topo.positions[a].second - topo.positions[b].second;
                if (std::sqrt(dx * dx + dy * dy) <= radius)
                    topo.add_bidir(NodeId(a), NodeId(b), prr);
            }
        }
        if (is_connected(topo))
            return topo;
    }
    throw std::runtime_error("rgg topology: no connected placement found");
}

Topology parse_edge_list(const std::string& text) {
    struct Row {
        unsigned src, dst;
        double prr;
    };
    std::vector<Row> rows;
    unsigned max_id = 0;
    std::istringstream in(text);
    std::string line;
    unsigned lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        unsigned src, dst;
        double prr;
        if (!(fields >> src))
            continue;  // blank or comment-only line
        if (!(fields >> dst >> prr)) {
            throw std::runtime_error("edge list line " + std::to_string(lineno) +
                                     ": expected `src dst prr`");
        }
        std::string rest;
        if (fields >> rest)
            throw std::runtime_error("edge list line " + std::to_string(lineno) +
                                     ": trailing content `" + rest + "`");
        rows.push_back({src, dst, prr});
        max_id = std::max({max_id, src, dst});
    }
    if (rows.empty())
        throw std::runtime_error("edge list: no links found");
    Topology topo(max_id + 1);
    for (const Row& r : rows)
        topo.add_link(NodeId(r.src), NodeId(r.dst), r.prr);
    return topo;
}

Topology load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("edge list: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_edge_list(buf.str());
}

std::string to_edge_list(const Topology& topo) {
    std::ostringstream out;
    out << "# " << topo.node_count() << " nodes\n";
    for (const Link& l : topo.links()) {
        std::ostringstream prr;
        prr << l.prr;
        out << l.src << ' ' << l.dst << ' ' << prr.str() << '\n';
    }
    return out.str();
}

const char* frame_kind_name(FrameKind kind) {
    switch (kind) {
        case FrameKind::EB: return "EB";
        case FrameKind::KA: return "KA";
        case FrameKind::DIO: return "DIO";
        case FrameKind::DAO: return "DAO";
        case FrameKind::DAO_ACK: return "DAO_ACK";
        case FrameKind::DATA: return "DATA";
    }
    return "?";
}

Frame make_eb(NodeId src, unsigned rank, std::uint64_t asn, SimTime now) {
    Frame f;
    f.kind = FrameKind::EB;
    f.src = src;
    f.dst = kBroadcast;
    f.payload_bytes = 35;
    f.born_at = now;
    f.src_rank = rank;
    f.eb.asn = asn;
    return f;
}

Frame make_ka(NodeId src, NodeId parent, unsigned rank, SimTime now) {
    Frame f;
    f.kind = FrameKind::KA;
    f.src = src;
    f.dst = parent;
    f.payload_bytes = 12;
    f.born_at = now;
    f.src_rank = rank;
    return f;
}

Frame make_dio(NodeId src, unsigned rank, SimTime now) {
    Frame f;
    f.kind = FrameKind::DIO;
    f.src = src;
    f.dst = kBroadcast;
    f.payload_bytes = 24;
    f.born_at = now;
    f.src_rank = rank;
    return f;
}

Frame make_dao(NodeId src, NodeId dst, unsigned rank, NodeId origin, NodeId origin_parent,
               unsigned seq, SimTime now) {
    Frame f;
    f.kind = FrameKind::DAO;
    f.src = src;
    f.dst = dst;
    f.payload_bytes = 24;
    f.born_at = now;
    f.src_rank = rank;
    f.dao = {origin, origin_parent, seq};
    return f;
}

Frame make_dao_ack(NodeId src, NodeId dst, std::vector<NodeId> acked, SimTime now) {
    Frame f;
    f.kind = FrameKind::DAO_ACK;
    f.src = src;
    f.dst = dst;
    f.payload_bytes = 8;
    f.born_at = now;
    f.src_rank = 0;
    f.dao_ack.acked = std::move(acked);
    return f;
}

Frame make_data(NodeId src, NodeId dst, unsigned app_seq, unsigned payload_bytes, SimTime now) {
    Frame f;
    f.kind = FrameKind::DATA;
    f.src = src;
    f.dst = dst;
    f.payload_bytes = payload_bytes;
    f.born_at = now;
    f.src_rank = 0;
    f.data.app_seq = app_seq;
    return f;
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::bits(NodeId node, Draw purpose, std::uint64_t a, std::uint64_t b) const {
    std::uint64_t h = seed_;
    h = splitmix64(h ^ (std::uint64_t(node) + 1));
    h = splitmix64(h ^ (std::uint64_t(purpose) + 0x51ull));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    return h;
}

double Rng::uniform(NodeId node, Draw purpose, std::uint64_t a, std::uint64_t b) const {
    return double(bits(node, purpose, a, b) >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_int(std::uint64_t n, NodeId node, Draw purpose, std::uint64_t a,
                               std::uint64_t b) const {
    if (n == 0)
        throw std::invalid_argument("uniform_int: empty range");
    return bits(node, purpose, a, b) % n;
}

std::int64_t Rng::uniform_range(std::int64_t lo, std::int64_t hi, NodeId node, Draw purpose,
                                std::uint64_t a, std::uint64_t b) const {
    if (hi < lo)
        throw std::invalid_argument("uniform_range: hi < lo");
    std::uint64_t span = std::uint64_t(hi - lo) + 1;
    return lo + std::int64_t(uniform_int(span, node, purpose, a, b));
}

}  // namespace sixpp
