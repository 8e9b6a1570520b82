#include <doctest.h>

#include "mlob/digraph.hpp"
#include "mlob/generators.hpp"
#include "reference.hpp"

using namespace mlob;

namespace {

Digraph cycle(int n) {
    std::vector<Arc> arcs;
    for (Vertex v = 0; v < n; ++v) arcs.emplace_back(v, (v + 1) % n);
    return Digraph(n, arcs);
}

// Reference: strong connectivity by reachability from every vertex.
bool strong_by_reachability(const Digraph& d) {
    for (Vertex v = 0; v < d.n(); ++v)
        if (static_cast<int>(reachable_from(d, v).size()) != d.n()) return false;
    return true;
}

}  // namespace

TEST_CASE("Digraph keeps arcs and adjacency sorted") {
    Digraph d(4, {{2, 0}, {0, 3}, {0, 1}, {3, 2}});
    CHECK(d.n() == 4);
    CHECK(d.m() == 4);
    CHECK(d.arcs() == std::vector<Arc>{{0, 1}, {0, 3}, {2, 0}, {3, 2}});
    CHECK(std::vector<Vertex>(d.out(0).begin(), d.out(0).end()) == std::vector<Vertex>{1, 3});
    CHECK(std::vector<Vertex>(d.in(0).begin(), d.in(0).end()) == std::vector<Vertex>{2});
    CHECK(d.has_arc(3, 2));
    CHECK_FALSE(d.has_arc(2, 3));
    CHECK(d.min_in_degree() == 1);
    CHECK(d.is_oriented());
    CHECK_FALSE(Digraph(2, {{0, 1}, {1, 0}}).is_oriented());
    CHECK(Digraph(2, {{0, 1}, {1, 0}}).is_double(0, 1));
}

TEST_CASE("Digraph rejects invalid arcs") {
    CHECK_THROWS_AS(Digraph(2, {{0, 0}}), GraphError);
    CHECK_THROWS_AS(Digraph(2, {{0, 1}, {0, 1}}), GraphError);
    CHECK_THROWS_AS(Digraph(3, {{0, 1}, {0, 3}}), GraphError);
    CHECK_THROWS_AS(Digraph(3, {{-1, 1}}), GraphError);
    CHECK_THROWS_AS(Digraph(-1), std::invalid_argument);
}

TEST_CASE("strong_components examples") {
    SUBCASE("directed 4-cycle") {
        auto idx = strong_components(cycle(4));
        CHECK(idx.count() == 1);
        CHECK(idx.members[0] == std::vector<Vertex>{0, 1, 2, 3});
        CHECK(idx.source_components == std::vector<int>{0});
    }
    SUBCASE("two components, one source") {
        Digraph d(4, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 2}});
        auto idx = strong_components(d);
        REQUIRE(idx.count() == 2);
        CHECK(idx.members[0] == std::vector<Vertex>{0, 1});
        CHECK(idx.members[1] == std::vector<Vertex>{2, 3});
        CHECK(idx.source_components == std::vector<int>{0});
        CHECK(idx.condensation.arcs() == std::vector<Arc>{{0, 1}});
    }
    SUBCASE("two source components") {
        Digraph d(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
        CHECK(strong_components(d).source_components.size() == 2);
    }
}

TEST_CASE("strong_components agrees with reachability on random digraphs") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        Digraph d = random_digraph(2 + static_cast<int>(seed % 9), seed, 0.15 + 0.05 * (seed % 5));
        auto idx = strong_components(d);
        CHECK(is_acyclic(idx.condensation));
        CHECK_FALSE(idx.source_components.empty());
        // Same component iff mutually reachable.
        std::vector<std::vector<Vertex>> reach(d.n());
        for (Vertex v = 0; v < d.n(); ++v) reach[v] = reachable_from(d, v);
        auto reaches = [&](Vertex a, Vertex b) { return std::binary_search(reach[a].begin(), reach[a].end(), b); };
        for (Vertex u = 0; u < d.n(); ++u)
            for (Vertex v = 0; v < d.n(); ++v)
                CHECK((idx.component_id[u] == idx.component_id[v]) == (reaches(u, v) && reaches(v, u)));
        CHECK(is_strongly_connected(d) == strong_by_reachability(d));
    }
}

TEST_CASE("has_out_branching examples") {
    auto roots = out_branching_roots(Digraph(4, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 2}}));
    REQUIRE(roots);
    CHECK(*roots == std::vector<Vertex>{0, 1});
    CHECK_FALSE(has_out_branching(Digraph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}})));
    auto path_roots = out_branching_roots(Digraph(3, {{0, 1}, {1, 2}}));
    REQUIRE(path_roots);
    CHECK(*path_roots == std::vector<Vertex>{0});
    CHECK(has_out_branching(Digraph(1)));
    CHECK_FALSE(has_out_branching(Digraph(2)));
}

TEST_CASE("has_out_branching matches reachability of every vertex") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        Digraph d = random_digraph(2 + static_cast<int>(seed % 8), seed, 0.2);
        std::vector<Vertex> expected;
        for (Vertex v = 0; v < d.n(); ++v)
            if (static_cast<int>(reachable_from(d, v).size()) == d.n()) expected.push_back(v);
        auto roots = out_branching_roots(d);
        CHECK(roots.has_value() == !expected.empty());
        if (roots) CHECK(*roots == expected);
    }
}

TEST_CASE("reachable_subdigraph examples") {
    Digraph path(3, {{0, 1}, {1, 2}});
    Subdigraph s = reachable_subdigraph(path, 1);
    CHECK(s.graph.n() == 2);
    CHECK(s.graph.arcs() == std::vector<Arc>{{0, 1}});
    CHECK(s.to_original == std::vector<Vertex>{1, 2});
    CHECK(s.from_original == std::vector<Vertex>{kNoVertex, 0, 1});

    Digraph c = cycle(5);
    CHECK(reachable_subdigraph(c, 3).graph == c);

    Digraph isolated(3, {{0, 1}});
    Subdigraph single = reachable_subdigraph(isolated, 2);
    CHECK(single.graph.n() == 1);
    CHECK(single.graph.m() == 0);
}

TEST_CASE("in_class_L examples") {
    CHECK(in_class_L(cycle(5)));
    CHECK(in_class_L(Digraph(4, {{0, 1}, {1, 0}, {0, 2}, {1, 3}, {2, 3}, {3, 2}})));
    CHECK_FALSE(in_class_L(Digraph(4, {{0, 1}, {1, 0}, {0, 2}, {2, 3}, {3, 2}})));
}

TEST_CASE("underlying_graph examples") {
    UndirectedGraph g = underlying_graph(Digraph(2, {{0, 1}, {1, 0}}));
    CHECK(g.edge_count() == 1);
    CHECK(g.has_edge(0, 1));
    UndirectedGraph c = underlying_graph(cycle(4));
    CHECK(c.edges() == UndirectedGraph::cycle(4).edges());
    CHECK(underlying_graph(Digraph(5)).edge_count() == 0);
}

TEST_CASE("UndirectedGraph families") {
    CHECK(UndirectedGraph::path(4).edge_count() == 3);
    CHECK(UndirectedGraph::cycle(5).edge_count() == 5);
    CHECK(UndirectedGraph::complete(5).edge_count() == 10);
    CHECK_THROWS(UndirectedGraph(2, {{1, 1}}));
}

TEST_CASE("induced_subdigraph relabels in ascending order") {
    Digraph d(5, {{0, 4}, {4, 2}, {2, 0}, {1, 3}});
    Subdigraph s = induced_subdigraph(d, {4, 2, 0});
    CHECK(s.to_original == std::vector<Vertex>{0, 2, 4});
    CHECK(s.graph.arcs() == std::vector<Arc>{{0, 2}, {1, 0}, {2, 1}});
}
