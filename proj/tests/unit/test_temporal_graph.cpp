#include <set>
#include <stdexcept>

#include "doctest.h"
#include "kinemb/temporal_graph.hpp"

using namespace kinemb;

TEST_SUITE("temporal_graph") {

TEST_CASE("edges normalize their endpoint order") {
    Edge a(3, 1), b(1, 3);
    CHECK(a.first == 1);
    CHECK(a.second == 3);
    CHECK(a == b);
}

TEST_CASE("registry assigns dense ids in first-seen order and is idempotent") {
    NodeRegistry reg;
    CHECK(reg.add("x") == 0);
    CHECK(reg.add("y") == 1);
    CHECK(reg.add("x") == 0);
    CHECK(reg.size() == 2);
    CHECK(reg.id_of("y") == 1);
    CHECK(reg.label_of(0) == "x");
    CHECK(reg.contains("y"));
    CHECK_FALSE(reg.contains("z"));
    CHECK_THROWS_AS(reg.id_of("z"), std::out_of_range);
    CHECK_THROWS_AS(reg.label_of(5), std::out_of_range);
}

TEST_CASE("snapshot deduplicates edges and rejects self-loops") {
    std::vector<Edge> edges{{0, 1}, {1, 0}, {1, 2}};
    Snapshot s(0, edges, 3);
    CHECK(s.num_edges() == 2);
    CHECK(s.has_edge(0, 1));
    CHECK(s.has_edge(1, 0));
    CHECK_FALSE(s.has_edge(0, 2));
    CHECK_FALSE(s.has_edge(1, 1));
    CHECK_THROWS_AS(Snapshot(0, {Edge(2, 2)}, 3), std::invalid_argument);
    CHECK_THROWS_AS(Snapshot(0, {Edge(0, 7)}, 3), std::invalid_argument);
}

TEST_CASE("neighbor lists are sorted and exclude the node itself") {
    Snapshot s(0, {{2, 0}, {0, 1}, {2, 1}}, 4);
    auto n0 = s.neighbors(0);
    REQUIRE(n0.size() == 2);
    CHECK(n0[0] == 1);
    CHECK(n0[1] == 2);
    CHECK(s.neighbors(3).empty());
    CHECK(s.degree(2) == 2);
}

TEST_CASE("graph enforces gap-free snapshot indexing") {
    NodeRegistry reg;
    reg.add("a");
    reg.add("b");
    std::vector<Snapshot> snaps;
    snaps.emplace_back(0, std::vector<Edge>{{0, 1}}, 2);
    snaps.emplace_back(2, std::vector<Edge>{}, 2);
    CHECK_THROWS_AS(TemporalGraph(std::move(reg), std::move(snaps)), std::invalid_argument);
}

TEST_CASE("builder accumulates edges per snapshot") {
    TemporalGraphBuilder b(2);
    b.add_edge(0, "a", "b");
    b.add_edge(1, "b", "c");
    b.add_edge(1, "a", "b");
    auto g = b.build();
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_snapshots() == 2);
    CHECK(g.snapshot(0).num_edges() == 1);
    CHECK(g.snapshot(1).num_edges() == 2);
    CHECK(g.neighbors(1, g.registry().id_of("b")).size() == 2);
    CHECK_THROWS_AS(g.snapshot(2), std::out_of_range);
}

TEST_CASE("induced subgraph repacks ids ascending and keeps inner edges only") {
    TemporalGraphBuilder b(2);
    b.add_edge(0, "a", "b");  // ids 0,1
    b.add_edge(0, "b", "c");  // id 2
    b.add_edge(1, "c", "d");  // id 3
    auto g = b.build();

    auto sub = g.induced_subgraph({1, 2, 3});
    CHECK(sub.num_nodes() == 3);
    CHECK(sub.registry().label_of(0) == "b");
    CHECK(sub.registry().label_of(1) == "c");
    CHECK(sub.registry().label_of(2) == "d");
    CHECK(sub.snapshot(0).num_edges() == 1);  // b-c survives, a-b dropped
    CHECK(sub.snapshot(0).has_edge(0, 1));
    CHECK(sub.snapshot(1).has_edge(1, 2));
    CHECK_THROWS_AS(g.induced_subgraph({}), std::invalid_argument);
    CHECK_THROWS_AS(g.induced_subgraph({9}), std::out_of_range);
}

TEST_CASE("degree sequence covers every registry node") {
    TemporalGraphBuilder b(1);
    b.add_node("lonely");
    b.add_edge(0, "a", "b");
    auto g = b.build();
    auto degs = g.degree_sequence(0);
    REQUIRE(degs.size() == 3);
    CHECK(degs[0] == std::pair<NodeId, std::size_t>{0, 0});
    CHECK(degs[1].second == 1);
    CHECK(degs[2].second == 1);
}

}  // TEST_SUITE
