#include <doctest.h>

#include <atomic>

#include <json.hpp>

#include "mlob/campaigns.hpp"
#include "mlob/local_search.hpp"

using namespace mlob;

namespace {

Digraph cycle(int n) {
    std::vector<Arc> arcs;
    for (Vertex v = 0; v < n; ++v) arcs.emplace_back(v, (v + 1) % n);
    return Digraph(n, arcs);
}

InstanceSpec strong_spec(int n, std::uint64_t seed) {
    InstanceSpec s;
    s.family = Family::random_strong_min_in3;
    s.n = n;
    s.seed = seed;
    return s;
}

// Records compared without their runtimes.
bool same_record(Record a, Record b) {
    a.runtime_ms = b.runtime_ms = 0;
    return a.campaign == b.campaign && a.spec == b.spec && a.n == b.n && a.m == b.m && a.k == b.k &&
           a.search_leaves == b.search_leaves && a.oracle_value == b.oracle_value &&
           a.oracle_exact == b.oracle_exact && a.bound == b.bound && a.needed == b.needed && a.width == b.width &&
           a.width_bound == b.width_bound && a.layers == b.layers && a.layer_bound == b.layer_bound &&
           a.status == b.status && a.detail == b.detail && a.command == b.command;
}

}  // namespace

TEST_CASE("theorem2_needed is the ceiling of the bound") {
    CHECK(theorem2_needed(1) == 0);
    CHECK(theorem2_needed(4) == 0);
    CHECK(theorem2_needed(5) == 1);
    CHECK(theorem2_needed(16) == 1);
    CHECK(theorem2_needed(32) == 1);
    CHECK(theorem2_needed(33) == 2);
    CHECK(theorem2_needed(65) == 2);
    CHECK(theorem2_needed(500) == 4);
    CHECK(theorem2_needed(1000) == 6);
    for (int n = 1; n <= 2000; ++n) {
        const double b = std::cbrt(n / 4.0) - 1.0;
        const int c = theorem2_needed(n);
        CHECK(c >= b - 1e-9);
        CHECK((c == 0 || c - 1 < b - 1e-12));
    }
}

TEST_CASE("theorem2_applies") {
    CHECK(theorem2_applies(random_strong_min_in3(10, 1)));
    CHECK_FALSE(theorem2_applies(cycle(5)));
    // Oriented, strong, min in-degree 2: the circulant i -> i+1, i+2 on 7 vertices.
    std::vector<Arc> arcs;
    for (Vertex v = 0; v < 7; ++v) {
        arcs.emplace_back(v, (v + 1) % 7);
        arcs.emplace_back(v, (v + 2) % 7);
    }
    CHECK(theorem2_applies(Digraph(7, arcs)));
}

TEST_CASE("verify_bound_theorem2 records") {
    CampaignOptions options;
    Record small = verify_bound_theorem2(strong_spec(12, 3), options);
    CHECK(small.status == RecordStatus::pass_witnessed);
    REQUIRE(small.oracle_value);
    CHECK(small.oracle_exact);
    CHECK(*small.oracle_value >= small.needed);
    CHECK(*small.oracle_value >= small.search_leaves);
    CHECK(small.command ==
          "mlob verify --campaign theorem2 --family random_strong_min_in3 --n 12 --seed 3 --time-budget-ms 30000");

    InstanceSpec ht;
    ht.family = Family::ht;
    ht.t = 8;
    Record h8 = verify_bound_theorem2(ht, options);
    CHECK(h8.n == 65);
    CHECK(h8.needed == 2);
    CHECK(h8.bound == doctest::Approx(1.5329).epsilon(1e-3));
    CHECK(h8.status == RecordStatus::pass_witnessed);

    InstanceSpec other;
    other.family = Family::random_digraph;
    other.n = 8;
    CHECK(verify_bound_theorem2(other, options).status == RecordStatus::skipped);
}

TEST_CASE("records are reproducible") {
    CampaignOptions options;
    for (const InstanceSpec& s : default_specs("theorem2", 12, 5))
        CHECK(same_record(verify_bound_theorem2(s, options), verify_bound_theorem2(s, options)));
    options.threads = 4;
    std::vector<InstanceSpec> specs = default_specs("widths", 12, 5);
    Report threaded = verify_widths(specs, options);
    options.threads = 1;
    Report serial = verify_widths(specs, options);
    REQUIRE(threaded.records.size() == serial.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i)
        CHECK(same_record(threaded.records[i], serial.records[i]));
}

TEST_CASE("verify_lemma2_structure examples") {
    SUBCASE("C6 passes vacuously") {
        Digraph c6 = cycle(6);
        OutBranching path(0, {kNoVertex, 0, 1, 2, 3, 4});
        Lemma2Result r = verify_lemma2_structure(c6, path, Milliseconds(5000));
        CHECK(r.passed());
        CHECK(r.certified);
        CHECK(r.forward_arcs == 0);
        CHECK(r.longest_backward_path == 0);
    }
    SUBCASE("planted forward arc on a non-optimal tree") {
        Digraph d(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 3}, {4, 0}});
        OutBranching path(0, {kNoVertex, 0, 1, 2, 3});
        Lemma2Result r = verify_lemma2_structure(d, path, Milliseconds(5000));
        CHECK_FALSE(r.passed());
        CHECK_FALSE(r.certified);
        CHECK(r.forward_arcs >= 1);
        CHECK_FALSE(is_1ae_optimal(d, path).optimal);
    }
    SUBCASE("random small instances pass every check") {
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            Digraph d = random_strong_min_in3(4 + static_cast<int>(seed % 9), seed);
            OutBranching t = best_of_restarts(d, {0, 1}, 3, seed);
            Lemma2Result r = verify_lemma2_structure(d, t, Milliseconds(5000));
            CHECK_MESSAGE(r.passed(), r.failure);
            CHECK(r.pruned_to_two);
            for (Vertex v = 0; v < d.n(); ++v) CHECK(r.pruned.in_degree(v) == 2);
            REQUIRE(r.max_leaf_tree);
            CHECK(r.longest_backward_path <= *r.max_leaf_tree);
        }
    }
    SUBCASE("H_t carries backward arcs") {
        InstanceSpec s;
        s.family = Family::ht;
        s.t = 10;
        Record r = verify_lemma2(s, CampaignOptions{});
        CHECK(r.status == RecordStatus::pass_witnessed);
        CHECK(r.detail.find("longest_backward=0") == std::string::npos);
    }
    CHECK_THROWS_AS(verify_lemma2_structure(cycle(4), OutBranching(0, {kNoVertex, 0, 0, 2}), Milliseconds(10)),
                    std::invalid_argument);
}

TEST_CASE("verify_widths records") {
    InstanceSpec dag;
    dag.family = Family::random_dag_single_source;
    dag.n = 15;
    dag.density = 0.15;
    dag.seed = 4;
    Record r = verify_widths(dag, CampaignOptions{});
    CHECK(r.status == RecordStatus::pass_witnessed);
    CHECK(r.width <= r.width_bound);
    CHECK(r.width_bound == 4 * r.k - 6);

    Record s = verify_widths(strong_spec(60, 2), CampaignOptions{});
    CHECK(s.status == RecordStatus::pass_witnessed);
    CHECK(s.layers <= s.layer_bound);
    CHECK(s.width_bound == (2 * s.layers + 3) * s.k);
}

TEST_CASE("report formats") {
    CampaignOptions options;
    Report report = verify_bound_theorem2(default_specs("theorem2", 6, 1), options);
    CHECK(report.passed());
    std::string csv = report.to_csv();
    std::string header;
    for (std::size_t i = 0; i < kReportColumns.size(); ++i) header += (i ? "," : "") + kReportColumns[i];
    CHECK(csv.substr(0, csv.find('\n')) == header);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    auto j = nlohmann::json::parse(report.to_json());
    CHECK(j["campaign"] == "theorem2");
    CHECK(j["passed"] == true);
    CHECK(j["records"].size() == 6);

    Report quoted;
    quoted.campaign = "x";
    Record r;
    r.detail = "a,b \"c\"";
    quoted.records.push_back(r);
    CHECK(quoted.to_csv().find("\"a,b \"\"c\"\"\"") != std::string::npos);

    Report failing;
    Record f;
    f.status = RecordStatus::fail;
    failing.records.push_back(f);
    CHECK_FALSE(failing.passed());
    CHECK(failing.counts().at("FAIL") == 1);
}

TEST_CASE("default_specs") {
    auto t2 = default_specs("theorem2", 300, 1);
    CHECK(t2.size() == 300);
    CHECK(t2 == default_specs("theorem2", 300, 1));
    int small = 0, ht = 0, max_n = 0;
    for (const InstanceSpec& s : t2) {
        Digraph d = generate(s);
        small += d.n() <= 16;
        ht += s.family == Family::ht;
        max_n = std::max(max_n, d.n());
        CHECK(d.n() >= 4);
    }
    CHECK(small >= 40);
    CHECK(ht == 3);
    CHECK(max_n == 1000);
    CHECK(std::is_sorted(t2.begin(), t2.end(), [](const InstanceSpec& a, const InstanceSpec& b) {
        return std::tie(a.family, a.t, a.n, a.density, a.seed) < std::tie(b.family, b.t, b.n, b.density, b.seed);
    }));
    CHECK(default_specs("lemma2", 20, 1).size() == 20);
    CHECK(default_specs("widths", 20, 1).size() == 20);
    CHECK_THROWS_AS(default_specs("nope", 3, 1), std::invalid_argument);
}

TEST_CASE("parallel_for") {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 4, [&](int i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](int i) { if (i == 7) throw std::runtime_error("x"); }), std::runtime_error);
    parallel_for(0, 4, [](int) { FAIL("no work expected"); });
}
