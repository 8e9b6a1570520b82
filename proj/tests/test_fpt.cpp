#include <doctest.h>

#include <json.hpp>

#include "mlob/decomposition.hpp"
#include "mlob/fpt.hpp"
#include "mlob/generators.hpp"
#include "mlob/oracles.hpp"
#include "reference.hpp"

using namespace mlob;

namespace {

PathDecomposition optimal_pd(const Digraph& d) {
    UndirectedGraph g = underlying_graph(d);
    return ordering_to_decomposition(g, exact_vertex_separation(g).order);
}

PathDecomposition trivial_pd(const Digraph& d) {
    PathDecomposition p;
    p.bags.emplace_back();
    for (Vertex v = 0; v < d.n(); ++v) p.bags[0].push_back(v);
    return p;
}

}  // namespace

TEST_CASE("to_nice forgets before it introduces") {
    PathDecomposition p{{{0, 1}, {1, 2}}};
    std::vector<NiceStep> expected{{NiceKind::introduce, 0}, {NiceKind::introduce, 1}, {NiceKind::forget, 0},
                                   {NiceKind::introduce, 2}, {NiceKind::forget, 1}, {NiceKind::forget, 2}};
    CHECK(to_nice(p) == expected);
    CHECK(to_nice(PathDecomposition{}).empty());
}

TEST_CASE("dp_state_bound") {
    CHECK(dp_state_bound(0) == 1);
    CHECK(dp_state_bound(1) == 4);
    CHECK(dp_state_bound(2) == 2 * 16);
    CHECK(dp_state_bound(3) == 5 * 64);
    CHECK(dp_state_bound(200) == UINT64_MAX);
}

TEST_CASE("dp_max_leaf on small fixed digraphs") {
    SUBCASE("single vertex") {
        DpResult r = dp_max_leaf(Digraph(1), trivial_pd(Digraph(1)));
        CHECK(r.value == 0);
        CHECK(r.status == DpStatus::optimal);
    }
    SUBCASE("directed path has one leaf") {
        Digraph d(4, {{0, 1}, {1, 2}, {2, 3}});
        DpResult r = dp_max_leaf(d, optimal_pd(d));
        CHECK(r.value == 1);
        REQUIRE(r.witness);
        CHECK(r.witness->root() == 0);
    }
    SUBCASE("star") {
        Digraph d(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
        CHECK(dp_max_leaf(d, optimal_pd(d)).value == 4);
        CHECK(dp_max_leaf(d, optimal_pd(d), 1).status == DpStatus::below_bound);
    }
    SUBCASE("no branching") {
        Digraph d(3, {{0, 1}, {2, 1}});
        CHECK(dp_max_leaf(d, optimal_pd(d)).status == DpStatus::below_bound);
    }
    SUBCASE("invalid decomposition rejected") {
        Digraph d(3, {{0, 1}, {1, 2}});
        CHECK_THROWS_AS(dp_max_leaf(d, PathDecomposition{{{0, 1}, {2}}}), std::invalid_argument);
    }
}

TEST_CASE("dp_max_leaf agrees with brute force on random digraphs") {
    for (int i = 0; i < 150; ++i) {
        int n = 2 + i % 6;
        Digraph d = random_digraph(n, 1000 + i, 0.2 + 0.05 * (i % 5));
        int expected = testing::naive_max_leaf(d);
        DpResult r = dp_max_leaf(d, optimal_pd(d));
        INFO("instance " << i);
        if (expected < 0) {
            CHECK(r.status == DpStatus::below_bound);
        } else {
            CHECK(r.value == expected);
            CHECK(dp_max_leaf(d, trivial_pd(d)).value == expected);
        }
        Vertex root = i % n;
        int rooted = testing::naive_max_leaf(d, root);
        DpResult rr = dp_max_leaf(d, optimal_pd(d), root);
        CHECK((rooted < 0 ? -1 : rr.value) == rooted);
        CHECK(r.states_peak <= r.state_bound);
    }
}

namespace {

Digraph bidirected_complete(int n) {
    std::vector<Arc> arcs;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (u != v) arcs.emplace_back(u, v);
    return Digraph(n, arcs);
}

Digraph cycle(int n) {
    std::vector<Arc> arcs;
    for (Vertex v = 0; v < n; ++v) arcs.emplace_back(v, (v + 1) % n);
    return Digraph(n, arcs);
}

void check_yes(const Digraph& d, const DecideResult& r, bool spanning) {
    CHECK(r.answer == Answer::yes);
    REQUIRE(r.witness);
    CHECK(r.witness->leaf_count() >= r.k);
    CHECK(r.leaves == r.witness->leaf_count());
    if (spanning) CHECK_FALSE(validate(d, *r.witness));
    else CHECK_FALSE(validate_out_tree(d, *r.witness));
}

}  // namespace

TEST_CASE("decide_k_dmlob examples") {
    Digraph k6 = bidirected_complete(6);
    check_yes(k6, decide_k_dmlob(k6, 5), true);
    CHECK(decide_k_dmlob(k6, 6).answer == Answer::no);

    Digraph c7 = cycle(7);
    check_yes(c7, decide_k_dmlob(c7, 1), true);
    DecideResult no = decide_k_dmlob(c7, 2);
    CHECK(no.answer == Answer::no);
    CHECK(no.method == "dp");
    CHECK_FALSE(no.witness);

    Digraph two_sources(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    CHECK(decide_k_dmlob(two_sources, 1).answer == Answer::no);

    Digraph dag(5, {{0, 1}, {1, 2}, {2, 3}, {1, 4}});
    check_yes(dag, decide_k_dmlob(dag, 2), true);
    CHECK(decide_k_dmlob(dag, 3).answer == Answer::no);

    // Not strong, not acyclic, not in class L, but with an out-branching.
    Digraph outside(4, {{0, 1}, {1, 0}, {0, 2}, {2, 3}, {3, 2}});
    CHECK(decide_k_dmlob(outside, 3).answer == Answer::unsupported);
    check_yes(outside, decide_k_dmlob(outside, 2), true);  // local search already suffices
}

TEST_CASE("decide_k_dmlob on H_6 matches the oracle value") {
    Digraph h = gen_ht(6);
    const int ls = exact_max_leaf_branching(h).value;
    check_yes(h, decide_k_dmlob(h, ls), true);
    DecideResult above = decide_k_dmlob(h, ls + 1);
    CHECK(above.answer == Answer::no);
    CHECK(above.states_peak <= dp_state_bound(above.width + 1));
}

TEST_CASE("decide_k_dmlot examples") {
    Digraph star_plus(5, {{0, 1}, {0, 2}, {0, 3}});
    check_yes(star_plus, decide_k_dmlot(star_plus, 3), false);
    CHECK(decide_k_dmlot(star_plus, 4).answer == Answer::no);
    CHECK(decide_k_dmlob(star_plus, 1).answer == Answer::no);  // no out-branching at all
    check_yes(Digraph(2, {{0, 1}}), decide_k_dmlot(Digraph(2, {{0, 1}}), 1), false);
}

TEST_CASE("decision procedures agree with the oracles on random digraphs") {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        Digraph d = random_digraph(3 + static_cast<int>(seed % 5), seed, 0.3);
        const int l = exact_max_leaf_tree(d).value;
        for (int k = 1; k <= l + 1; ++k) {
            DecideResult r = decide_k_dmlot(d, k);
            CHECK((r.answer == Answer::yes) == (k <= l));
            if (r.answer == Answer::yes) check_yes(d, r, false);
        }
        const int ls = exact_max_leaf_branching(d).value;
        for (int k = 1; k <= ls + 1; ++k) {
            DecideResult r = decide_k_dmlob(d, k);
            if (r.answer == Answer::unsupported) continue;
            CHECK((r.answer == Answer::yes) == (k <= ls));
        }
    }
}

TEST_CASE("decide result JSON") {
    DecideResult r = decide_k_dmlob(bidirected_complete(4), 3);
    auto j = nlohmann::json::parse(to_json(r));
    for (const char* key : {"answer", "k", "leaves", "witness", "method", "width", "states_peak"})
        CHECK(j.contains(key));
    CHECK(j["answer"] == "yes");
    CHECK(j["witness"]["root"].is_number());
}
