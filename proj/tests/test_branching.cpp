#include <doctest.h>

#include "mlob/branching.hpp"
#include "mlob/generators.hpp"

using namespace mlob;

namespace {

Digraph bidirected_complete(int n) {
    std::vector<Arc> arcs;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (u != v) arcs.emplace_back(u, v);
    return Digraph(n, arcs);
}

}  // namespace

TEST_CASE("validate examples") {
    SUBCASE("non-host arc") {
        Digraph c3(3, {{0, 1}, {1, 2}, {2, 0}});
        OutBranching t(0, {kNoVertex, 0, 0});
        auto bad = validate(c3, t);
        REQUIRE(bad);
        CHECK(bad->kind == TreeViolationKind::non_host_arc);
        CHECK(bad->arc == Arc{0, 2});
    }
    SUBCASE("path") {
        Digraph path(3, {{0, 1}, {1, 2}});
        CHECK_FALSE(validate(path, OutBranching(0, {kNoVertex, 0, 1})));
    }
    SUBCASE("2-cycle among non-roots") {
        Digraph d(3, {{0, 1}, {1, 2}, {2, 1}});
        auto bad = validate(d, OutBranching(0, {kNoVertex, 2, 1}));
        REQUIRE(bad);
        CHECK(bad->kind == TreeViolationKind::unreachable_from_root);
    }
    SUBCASE("structural problems") {
        Digraph d(3, {{0, 1}, {1, 2}});
        auto mismatch = validate(d, OutBranching(0, {kNoVertex, 0}));
        REQUIRE(mismatch);
        CHECK(mismatch->kind == TreeViolationKind::host_mismatch);
        auto missing = validate(d, OutBranching(0, {kNoVertex, 0, kAbsent}));
        REQUIRE(missing);
        CHECK(missing->kind == TreeViolationKind::missing_parent);
        CHECK_FALSE(validate_out_tree(d, OutTree(0, {kNoVertex, 0, kAbsent})));
    }
}

TEST_CASE("classify examples") {
    SUBCASE("star") {
        OutTree star(0, {kNoVertex, 0, 0, 0, 0});
        Classification c = classify(star);
        CHECK(c.leaves == std::vector<Vertex>{1, 2, 3, 4});
        CHECK(c.branches == std::vector<Vertex>{0});
        CHECK(c.links.empty());
        CHECK(c.link_paths.empty());
        CHECK(star.leaf_count() == 4);
    }
    SUBCASE("path") {
        OutTree path(0, {kNoVertex, 0, 1, 2});
        Classification c = classify(path);
        CHECK(c.leaves == std::vector<Vertex>{3});
        CHECK(c.links == std::vector<Vertex>{0, 1, 2});
        REQUIRE(c.link_paths.size() == 1);
        CHECK(c.link_paths[0] == std::vector<Vertex>{0, 1, 2});
    }
    SUBCASE("binary tree with four leaves") {
        OutTree bin(0, {kNoVertex, 0, 0, 1, 1, 2, 2});
        Classification c = classify(bin);
        CHECK(c.leaves.size() == 4);
        CHECK(c.branches.size() == c.leaves.size() - 1);
    }
}

TEST_CASE("fact: branch vertices are fewer than leaves") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Digraph d = random_strong_min_in3(5 + static_cast<int>(seed % 20), seed);
        auto t = bfs_out_branching(d, 0);
        REQUIRE(t);
        Classification c = classify(*t);
        CHECK(c.branches.size() + 1 <= c.leaves.size());
        CHECK(c.leaves.size() + c.links.size() + c.branches.size() == static_cast<std::size_t>(d.n()));
        CHECK(static_cast<int>(c.leaves.size()) == leaf_count(*t));
    }
}

TEST_CASE("siblings and ancestry") {
    OutTree t(0, {kNoVertex, 0, 0, 1, 1});
    CHECK(siblings(t, 3, 4));
    CHECK(siblings(t, 3, 2));
    CHECK_FALSE(siblings(t, 1, 3));
    CHECK_FALSE(siblings(t, 0, 4));
    AncestryIndex anc(t);
    CHECK(anc.is_ancestor(0, 4));
    CHECK(anc.is_ancestor(1, 1));
    CHECK_FALSE(anc.is_ancestor(2, 3));
}

TEST_CASE("OutTree basics") {
    OutTree lone = OutTree::single_vertex(3, 1);
    CHECK(lone.size() == 1);
    CHECK(lone.leaf_count() == 0);
    CHECK_FALSE(lone.spans());
    OutTree t = OutTree::from_arcs(4, 2, {{2, 0}, {0, 1}, {2, 3}});
    CHECK(t.spans());
    CHECK(t.parent(1) == 0);
    CHECK(t.arcs() == std::vector<Arc>{{0, 1}, {2, 0}, {2, 3}});
    CHECK(t.leaf_count() == 2);
    CHECK_THROWS(OutTree::from_arcs(3, 0, {{0, 2}, {1, 2}}));
}

TEST_CASE("bfs and extension") {
    Digraph k4 = bidirected_complete(4);
    auto t = bfs_out_branching(k4, 2);
    REQUIRE(t);
    CHECK(t->leaf_count() == 3);
    CHECK_FALSE(validate(k4, *t));
    CHECK_FALSE(bfs_out_branching(Digraph(3, {{0, 1}, {1, 2}}), 1));

    Digraph d = gen_ht(6);
    OutTree seed_tree = OutTree::from_arcs(d.n(), 0, {{0, 1}});
    auto extended = extend_to_branching(d, seed_tree);
    REQUIRE(extended);
    CHECK_FALSE(validate(d, *extended));
    CHECK(extended->parent(1) == 0);
}
