#include "doctest.h"

#include <set>
#include <stdexcept>

#include "sixpp/core.hpp"

using namespace sixpp;

TEST_SUITE("core") {

TEST_CASE("topology rejects bad links") {
    Topology topo(3);
    CHECK_THROWS_AS(topo.add_link(0, 3, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(topo.add_link(3, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(topo.add_link(1, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(topo.add_link(0, 1, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(topo.add_link(0, 1, 1.1), std::invalid_argument);
    CHECK(topo.links().empty());
}

TEST_CASE("topology stores directed prr and adjacency") {
    Topology topo(4);
    topo.add_link(0, 1, 0.9);
    topo.add_link(2, 1, 0.4);
    CHECK(topo.prr(0, 1) == doctest::Approx(0.9));
    CHECK(topo.prr(1, 0) == 0.0);         // directed
    CHECK(topo.prr(0, 3) == 0.0);         // absent
    CHECK(topo.prr(7, 0) == 0.0);         // out of range reads as absent
    CHECK(topo.has_link(0, 1));
    CHECK_FALSE(topo.has_link(1, 0));
    CHECK(topo.neighbors_in(1) == std::vector<NodeId>{0, 2});
    CHECK(topo.neighbors_out(0) == std::vector<NodeId>{1});
    CHECK_THROWS_AS(topo.neighbors_in(4), std::out_of_range);
    CHECK_THROWS_AS(topo.neighbors_out(4), std::out_of_range);
    CHECK_FALSE(topo.symmetric());
    topo.add_link(1, 0, 0.9);
    topo.add_link(1, 2, 0.4);
    CHECK(topo.symmetric());
}

TEST_CASE("hop distance and connectivity") {
    Topology topo(4);
    topo.add_bidir(0, 1, 1.0);
    topo.add_bidir(2, 3, 1.0);
    CHECK(hop_distance(topo, 0, 0) == 0u);
    CHECK(hop_distance(topo, 0, 1) == 1u);
    CHECK_FALSE(hop_distance(topo, 0, 3).has_value());
    CHECK_THROWS_AS(hop_distance(topo, 0, 9), std::out_of_range);
    CHECK_FALSE(is_connected(topo));
    topo.add_bidir(1, 2, 1.0);
    CHECK(is_connected(topo));
    CHECK(hop_distance(topo, 0, 3) == 3u);
    CHECK(eccentricity(topo, 0) == 3u);
    CHECK(eccentricity(topo, 1) == 2u);
}

TEST_CASE("line topology") {
    CHECK_THROWS_AS(make_line_topology(1, 1.0), std::invalid_argument);
    Topology line = make_line_topology(5, 0.8);
    CHECK(line.node_count() == 5);
    CHECK(line.symmetric());
    CHECK(is_connected(line));
    for (NodeId v = 0; v < 5; ++v)
        CHECK(hop_distance(line, 0, v) == unsigned(v));
    CHECK(eccentricity(line, 0) == 4u);
    CHECK(eccentricity(line, 2) == 2u);
    CHECK(line.neighbors_out(2) == std::vector<NodeId>{1, 3});
    CHECK(line.prr(0, 1) == doctest::Approx(0.8));
    CHECK(line.prr(0, 2) == 0.0);  // no shortcut links
}

TEST_CASE("grid topology") {
    Topology grid = make_grid_topology(3, 4, 1.0);
    CHECK(grid.node_count() == 12);
    CHECK(grid.symmetric());
    CHECK(is_connected(grid));
    // id = r*cols + c; manhattan distance on the lattice.
    CHECK(hop_distance(grid, 0, 11) == 5u);  // (0,0) -> (2,3)
    CHECK(hop_distance(grid, 0, 4) == 1u);   // (0,0) -> (1,0)
    CHECK(grid.neighbors_out(5) == std::vector<NodeId>{1, 4, 6, 9});  // inner node, 4 neighbours
    CHECK(grid.neighbors_out(0) == std::vector<NodeId>{1, 4});        // corner, 2 neighbours
    CHECK(eccentricity(grid, 0) == 5u);
}

TEST_CASE("cluster line topology") {
    Topology topo = make_cluster_line_topology(3, 2, 1.0);
    CHECK(topo.node_count() == 6);
    CHECK(topo.symmetric());
    CHECK(is_connected(topo));
    // Full mesh inside a group and to the adjacent group: hop distance is the
    // group distance, so diameter stays the cluster count minus one.
    CHECK(hop_distance(topo, 0, 1) == 1u);
    CHECK(hop_distance(topo, 0, 3) == 1u);
    CHECK(hop_distance(topo, 0, 4) == 2u);
    CHECK(hop_distance(topo, 0, 5) == 2u);
    CHECK(eccentricity(topo, 0) == 2u);
    CHECK(topo.prr(0, 4) == 0.0);  // groups two apart are out of range
    CHECK_THROWS_AS(make_cluster_line_topology(1, 4, 1.0), std::invalid_argument);
}

TEST_CASE("rgg topology is deterministic in its seed") {
    Topology a = make_rgg_topology(20, 0.35, 0.95, 42);
    Topology b = make_rgg_topology(20, 0.35, 0.95, 42);
    CHECK(a.node_count() == 20);
    CHECK(is_connected(a));
    CHECK(a.symmetric());
    REQUIRE(a.links().size() == b.links().size());
    for (std::size_t i = 0; i < a.links().size(); ++i) {
        CHECK(a.links()[i].src == b.links()[i].src);
        CHECK(a.links()[i].dst == b.links()[i].dst);
    }
    CHECK(a.positions.size() == 20);
    for (auto [x, y] : a.positions) {
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        CHECK(y >= 0.0);
        CHECK(y < 1.0);
    }
    // A radius beyond the square's diagonal links every pair.
    Topology full = make_rgg_topology(6, 1.5, 1.0, 1);
    CHECK(full.links().size() == 6 * 5);
    CHECK_THROWS_AS(make_rgg_topology(1, 0.5, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_rgg_topology(5, -1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("edge list round trip") {
    const char* text =
        "# three nodes\n"
        "0 1 0.9\n"
        "1 0 0.9\n"
        "1 2 0.5  # lossy tail\n"
        "2 1 0.5\n";
    Topology topo = parse_edge_list(text);
    CHECK(topo.node_count() == 3);
    CHECK(topo.prr(1, 2) == doctest::Approx(0.5));
    CHECK(topo.symmetric());
    Topology again = parse_edge_list(to_edge_list(topo));
    CHECK(again.node_count() == 3);
    CHECK(again.prr(0, 1) == doctest::Approx(0.9));
    CHECK(again.prr(2, 1) == doctest::Approx(0.5));
}

TEST_CASE("edge list errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_edge_list("0 1\n"), "edge list line 1: expected `src dst prr`",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_edge_list("# header\n0 1 0.5 junk\n"),
                         "edge list line 2: trailing content `junk`", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_edge_list("# nothing\n\n"), "edge list: no links found",
                         std::runtime_error);
}

TEST_CASE("frame constructors fill the wire fields") {
    Frame eb = make_eb(3, 2, 777, 1000);
    CHECK(eb.kind == FrameKind::EB);
    CHECK(eb.src == 3);
    CHECK(eb.dst == kBroadcast);
    CHECK(eb.payload_bytes == 35);
    CHECK(eb.src_rank == 2);
    CHECK(eb.eb.asn == 777);
    CHECK(eb.born_at == 1000);

    Frame ka = make_ka(5, 4, 3, 2000);
    CHECK(ka.kind == FrameKind::KA);
    CHECK(ka.dst == 4);
    CHECK(ka.payload_bytes == 12);

    Frame dio = make_dio(2, 1, 0);
    CHECK(dio.kind == FrameKind::DIO);
    CHECK(dio.dst == kBroadcast);
    CHECK(dio.payload_bytes == 24);
    CHECK(dio.src_rank == 1);

    Frame dao = make_dao(7, 6, 4, 7, 6, 9, 3000);
    CHECK(dao.kind == FrameKind::DAO);
    CHECK(dao.payload_bytes == 24);
    CHECK(dao.dao.origin == 7);
    CHECK(dao.dao.origin_parent == 6);
    CHECK(dao.dao.seq == 9);

    Frame ack = make_dao_ack(0, 1, {4, 9, 12}, 4000);
    CHECK(ack.kind == FrameKind::DAO_ACK);
    CHECK(ack.payload_bytes == 8);
    CHECK(ack.src_rank == 0);
    CHECK(ack.dao_ack.acked == std::vector<NodeId>{4, 9, 12});

    Frame data = make_data(9, 0, 17, 64, 5000);
    CHECK(data.kind == FrameKind::DATA);
    CHECK(data.payload_bytes == 64);
    CHECK(data.data.app_seq == 17);

    CHECK(std::string(frame_kind_name(FrameKind::DAO_ACK)) == "DAO_ACK");
    CHECK(std::string(frame_kind_name(FrameKind::DATA)) == "DATA");
}

TEST_CASE("rng draws are pure functions of their key") {
    Rng rng(12345);
    Rng same(12345);
    Rng other(12346);
    CHECK(rng.bits(3, Draw::Backoff, 7, 0) == same.bits(3, Draw::Backoff, 7, 0));
    CHECK(rng.bits(3, Draw::Backoff, 7, 0) != other.bits(3, Draw::Backoff, 7, 0));
    // Independent key components give independent streams.
    CHECK(rng.bits(3, Draw::Backoff, 7, 0) != rng.bits(4, Draw::Backoff, 7, 0));
    CHECK(rng.bits(3, Draw::Backoff, 7, 0) != rng.bits(3, Draw::EbJitter, 7, 0));
    CHECK(rng.bits(3, Draw::Backoff, 7, 0) != rng.bits(3, Draw::Backoff, 8, 0));
    CHECK(rng.bits(3, Draw::Backoff, 7, 0) != rng.bits(3, Draw::Backoff, 7, 1));
}

TEST_CASE("rng ranges and distributions") {
    Rng rng(99);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < 4096; ++k) {
        double u = rng.uniform(1, Draw::Generic, k);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(sum / 4096.0 == doctest::Approx(0.5).epsilon(0.02));

    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 512; ++k) {
        std::uint64_t v = rng.uniform_int(6, 2, Draw::Generic, k);
        CHECK(v < 6);
        seen.insert(v);
    }
    CHECK(seen.size() == 6);  // all faces hit

    for (std::uint64_t k = 0; k < 256; ++k) {
        std::int64_t v = rng.uniform_range(-40, 40, 3, Draw::Drift, k);
        CHECK(v >= -40);
        CHECK(v <= 40);
    }
    CHECK(rng.uniform_range(5, 5, 0, Draw::Generic) == 5);
    CHECK_THROWS_AS(rng.uniform_int(0, 0, Draw::Generic), std::invalid_argument);
    CHECK_THROWS_AS(rng.uniform_range(2, 1, 0, Draw::Generic), std::invalid_argument);
}

}  // TEST_SUITE
