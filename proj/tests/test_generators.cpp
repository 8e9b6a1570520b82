#include <doctest.h>

#include "mlob/generators.hpp"
#include "mlob/io.hpp"
#include "mlob/rng.hpp"

using namespace mlob;

TEST_CASE("gen_ht structure") {
    Digraph h6 = gen_ht(6);
    CHECK(h6.n() == 37);
    // Per spoke: 8 double-path arcs + 2 backward arcs + 12 arcs of the
    // complete digraph on the last four vertices, 2 of them shared with the
    // double path: 20 arcs, times 6 spokes.
    CHECK(h6.m() == 120);
    CHECK(is_strongly_connected(h6));
    CHECK(h6.min_in_degree() >= 3);
    for (int t = 6; t <= 10; ++t) {
        Digraph h = gen_ht(t);
        CHECK(h.n() == t * t + 1);
        CHECK(is_strongly_connected(h));
        CHECK(h.min_in_degree() >= 3);
        CHECK(h.m() == static_cast<std::size_t>(t) * (2 * (t - 2) + (t - 4) + 12 - 2));
    }
    CHECK_THROWS_AS(gen_ht(5), std::invalid_argument);
}

TEST_CASE("gen_ht spoke of H_6 by hand") {
    // Spoke 1 of H_6 is u_1..u_6 = vertices 1..6, u_0 = r = 0.
    Digraph h = gen_ht(6);
    for (auto [a, b] : std::vector<Arc>{{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 4}, {4, 3}, {3, 1}, {4, 2}})
        CHECK(h.has_arc(a, b));
    for (Vertex a = 3; a <= 6; ++a)
        for (Vertex b = 3; b <= 6; ++b)
            if (a != b) CHECK(h.has_arc(a, b));
    CHECK_FALSE(h.has_arc(5, 3 - 2));
    CHECK(h.out_degree(6) == 3);
}

TEST_CASE("random_strong_min_in3") {
    for (int n : {4, 5, 12, 50, 200}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Digraph d = random_strong_min_in3(n, seed);
            CHECK(d.n() == n);
            CHECK(is_strongly_connected(d));
            CHECK(d.min_in_degree() >= 3);
        }
    }
    // n = 4 forces the bidirected complete digraph.
    CHECK(random_strong_min_in3(4, 9).m() == 12);
    CHECK(to_edge_list(random_strong_min_in3(12, 1)) == to_edge_list(random_strong_min_in3(12, 1)));
    CHECK_FALSE(random_strong_min_in3(12, 1) == random_strong_min_in3(12, 2));
    CHECK_THROWS_AS(random_strong_min_in3(3, 1), std::invalid_argument);
}

TEST_CASE("random_dag_single_source") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Digraph d = random_dag_single_source(1 + static_cast<int>(seed % 20), seed, 0.05 * (seed % 6));
        CHECK(is_acyclic(d));
        int sources = 0;
        for (Vertex v = 0; v < d.n(); ++v) sources += d.in_degree(v) == 0;
        CHECK(sources == 1);
        CHECK(d == random_dag_single_source(d.n(), seed, 0.05 * (seed % 6)));
    }
}

TEST_CASE("random_dag_spines") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const int n = 1 + static_cast<int>(seed % 18);
        const int spines = 1 + static_cast<int>(seed % 3);
        Digraph d = random_dag_spines(n, spines, seed, 0.02 * (seed % 4));
        CHECK(is_acyclic(d));
        int sources = 0;
        for (Vertex v = 0; v < d.n(); ++v) sources += d.in_degree(v) == 0;
        CHECK(sources == 1);
        CHECK(d == random_dag_spines(n, spines, seed, 0.02 * (seed % 4)));
    }
    // One spine without extra arcs is a Hamiltonian path.
    Digraph path = random_dag_spines(10, 1, 3, 0.0);
    CHECK(path.m() == 9);
    CHECK_THROWS_AS(random_dag_spines(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_dag_spines(5, 0, 1), std::invalid_argument);
}

TEST_CASE("random_digraph density extremes") {
    CHECK(random_digraph(6, 3, 0.0).m() == 0);
    CHECK(random_digraph(6, 3, 1.0).m() == 30);
    CHECK(random_digraph(9, 4, 0.4) == random_digraph(9, 4, 0.4));
}

TEST_CASE("RNG is a fixed integer scheme") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    CHECK(mix_seed(1, 2) != mix_seed(1, 3));
}

TEST_CASE("InstanceSpec arguments and generate") {
    InstanceSpec ht;
    ht.family = Family::ht;
    ht.t = 7;
    CHECK(ht.arguments() == "--family ht --t 7");
    CHECK(ht.command_line() == "mlob gen --family ht --t 7");
    CHECK(generate(ht) == gen_ht(7));

    InstanceSpec strong;
    strong.family = Family::random_strong_min_in3;
    strong.n = 30;
    strong.seed = 77;
    CHECK(strong.arguments() == "--family random_strong_min_in3 --n 30 --seed 77");
    CHECK(generate(strong) == random_strong_min_in3(30, 77));

    InstanceSpec dag;
    dag.family = Family::random_dag_single_source;
    dag.n = 9;
    dag.density = 0.25;
    CHECK(dag.arguments() == "--family random_dag_single_source --n 9 --density 0.25 --seed 1");

    for (Family f : {Family::ht, Family::random_strong_min_in3, Family::random_dag_single_source,
                     Family::random_digraph})
        CHECK(parse_family(to_string(f)) == f);
    CHECK_FALSE(parse_family("nope"));
}
