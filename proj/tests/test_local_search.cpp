#include <doctest.h>

#include "mlob/generators.hpp"
#include "mlob/local_search.hpp"
#include "mlob/oracles.hpp"

using namespace mlob;

namespace {

Digraph cycle(int n) {
    std::vector<Arc> arcs;
    for (Vertex v = 0; v < n; ++v) arcs.emplace_back(v, (v + 1) % n);
    return Digraph(n, arcs);
}

Digraph bidirected_complete(int n) {
    std::vector<Arc> arcs;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (u != v) arcs.emplace_back(u, v);
    return Digraph(n, arcs);
}

// Reference: try every well-formed single-arc exchange.
bool brute_force_1ae_optimal(const Digraph& d, const OutBranching& t) {
    const int base = t.leaf_count();
    for (const Arc& removed : t.arcs())
        for (const Arc& added : d.arcs()) {
            if (t.parent(added.second) == added.first) continue;
            MoveOutcome out = apply_move(d, t, ExchangeMove{{removed}, {added}});
            if (out.ok() && out.branching->leaf_count() > base) return false;
        }
    return true;
}

// r=0, a=1, b=2; tree 0->1, 0->2, 1->3, 3->4, 2->5, 5->6 plus the arc 3->5.
// 3 and 5 are non-leaf siblings and p(5)=2 has out-degree 1.
Digraph lemma1_a_host() {
    return Digraph(7, {{0, 1}, {0, 2}, {1, 3}, {3, 4}, {2, 5}, {5, 6}, {3, 5}, {6, 0}, {4, 0}});
}
OutBranching lemma1_a_tree() { return OutBranching(0, {kNoVertex, 0, 0, 1, 3, 2, 5}); }

}  // namespace

TEST_CASE("apply_move examples") {
    // r=0, a=1, b=2
    Digraph d(3, {{0, 1}, {1, 2}, {0, 2}});
    OutBranching t(0, {kNoVertex, 0, 1});
    MoveOutcome good = apply_move(d, t, ExchangeMove{{{1, 2}}, {{0, 2}}});
    REQUIRE(good.ok());
    CHECK(good.branching->leaf_count() == 2);

    MoveOutcome orphan = apply_move(d, t, ExchangeMove{{{0, 1}}, {{0, 2}}});
    CHECK_FALSE(orphan.ok());
    CHECK(orphan.reason != RejectReason::none);

    Digraph c = cycle(5);
    OutBranching path(0, {kNoVertex, 0, 1, 2, 3});
    // Closing the cycle re-roots the path at 4: a valid out-branching, but
    // no more leaves.
    MoveOutcome reroot = apply_move(c, path, ExchangeMove{{{3, 4}}, {{4, 0}}});
    REQUIRE(reroot.ok());
    CHECK(reroot.branching->root() == 4);
    CHECK(reroot.branching->leaf_count() == 1);

    Digraph c3(3, {{0, 1}, {1, 2}, {2, 0}, {2, 1}});
    OutBranching p3(0, {kNoVertex, 0, 1});
    MoveOutcome cyc = apply_move(c3, p3, ExchangeMove{{{0, 1}}, {{2, 1}}});
    CHECK_FALSE(cyc.ok());
    CHECK(cyc.reason == RejectReason::cycle);
    CHECK(orphan.reason == RejectReason::disconnected);
    MoveOutcome two = apply_move(c3, p3, ExchangeMove{{{1, 2}}, {{2, 1}}});
    CHECK_FALSE(two.ok());
    CHECK(two.reason == RejectReason::disconnected);  // 2 lost its parent; 1 would have two
    CHECK(two.witness == 2);

    CHECK_THROWS_AS(apply_move(d, t, ExchangeMove{{{0, 2}}, {{0, 2}}}), std::invalid_argument);
    CHECK_THROWS_AS(apply_move(d, t, ExchangeMove{{{1, 2}}, {{2, 0}}}), std::invalid_argument);
}

TEST_CASE("is_1ae_optimal examples") {
    Digraph c5 = cycle(5);
    OutBranching path(0, {kNoVertex, 0, 1, 2, 3});
    CHECK(is_1ae_optimal(c5, path).optimal);
    CHECK(brute_force_1ae_optimal(c5, path));

    Digraph d(3, {{0, 1}, {1, 2}, {0, 2}});
    Certificate cert = is_1ae_optimal(d, OutBranching(0, {kNoVertex, 0, 1}));
    CHECK_FALSE(cert.optimal);
    REQUIRE(cert.violating_move);
    CHECK(*cert.violating_move == ExchangeMove{{{1, 2}}, {{0, 2}}});

    OutBranching star(0, {kNoVertex, 0, 0, 0});
    CHECK(is_1ae_optimal(bidirected_complete(4), star).optimal);
}

TEST_CASE("is_1ae_optimal agrees with brute force") {
    int improvable = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        Digraph d = random_digraph(3 + static_cast<int>(seed % 7), seed, 0.35);
        auto roots = out_branching_roots(d);
        if (!roots) continue;
        auto t = bfs_out_branching(d, roots->front());
        REQUIRE(t);
        Certificate cert = is_1ae_optimal(d, *t);
        CHECK(cert.optimal == brute_force_1ae_optimal(d, *t));
        if (!cert.optimal) {
            ++improvable;
            REQUIRE(cert.violating_move);
            MoveOutcome out = apply_move(d, *t, *cert.violating_move);
            REQUIRE(out.ok());
            CHECK(out.branching->leaf_count() > t->leaf_count());
        }
    }
    CHECK(improvable > 0);
}

TEST_CASE("is_ae_optimal with one arc matches the fast check") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        Digraph d = random_strong_min_in3(4 + static_cast<int>(seed % 4), seed);
        auto t = bfs_out_branching(d, 0);
        REQUIRE(t);
        CHECK(is_ae_optimal(d, *t, 1).optimal == is_1ae_optimal(d, *t).optimal);
    }
}

TEST_CASE("check_lemma1 reports condition (a) on the hand-built instance") {
    Digraph d = lemma1_a_host();
    OutBranching t = lemma1_a_tree();
    REQUIRE_FALSE(validate(d, t));
    auto violations = check_lemma1(d, t);
    bool found = false;
    for (const LemmaViolation& v : violations) found |= v.condition == LemmaCondition::a && v.arc == Arc{3, 5};
    CHECK(found);
    MoveOutcome out = apply_move(d, t, ExchangeMove{{{2, 5}}, {{3, 5}}});
    REQUIRE(out.ok());
    CHECK(out.branching->leaf_count() == t.leaf_count() + 1);
    CHECK_FALSE(is_1ae_optimal(d, t).optimal);
}

TEST_CASE("check_lemma1 on the Hamiltonian path of C5 is empty") {
    CHECK(check_lemma1(cycle(5), OutBranching(0, {kNoVertex, 0, 1, 2, 3})).empty());
}

TEST_CASE("1-AE optimal trees have no check_lemma1 violations") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        Digraph d = random_strong_min_in3(4 + static_cast<int>(seed % 6), seed);
        auto t0 = bfs_out_branching(d, static_cast<Vertex>(seed % d.n()));
        REQUIRE(t0);
        OutBranching t = improve_to_1ae(d, *t0);
        CHECK(brute_force_1ae_optimal(d, t));
        CHECK(check_lemma1(d, t).empty());
    }
}

TEST_CASE("improve_to_1ae examples") {
    Digraph k5 = bidirected_complete(5);
    OutBranching path(0, {kNoVertex, 0, 1, 2, 3});
    ImproveStats stats;
    OutBranching best = improve_to_1ae(k5, path, &stats);
    CHECK(best.leaf_count() == 4);
    CHECK(stats.moves > 0);

    Digraph d(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(improve_to_1ae(d, OutBranching(0, {kNoVertex, 0, 1})).leaf_count() == 2);

    Digraph h6 = gen_ht(6);
    OutBranching h = improve_to_1ae(h6, *bfs_out_branching(h6, 0));
    CHECK_FALSE(validate(h6, h));
    CHECK(is_1ae_optimal(h6, h).optimal);
    CHECK(h.leaf_count() <= exact_max_leaf_branching(h6).value);
}

TEST_CASE("best_of_restarts examples") {
    Digraph c5 = cycle(5);
    CHECK(best_of_restarts(c5, {0, 1, 2, 3, 4}, 3, 1).leaf_count() == 1);
    CHECK(best_of_restarts(bidirected_complete(4), {0, 1, 2, 3}, 2, 1).leaf_count() == 3);
    Digraph d = random_strong_min_in3(14, 7);
    OutBranching t = best_of_restarts(d, {0, 1, 2}, 4, 11);
    CHECK(t.leaf_count() <= exact_max_leaf_branching(d).value);
    CHECK(best_of_restarts(d, {0, 1, 2}, 4, 11) == t);  // deterministic per seed
}
