// Command-line front end: instance generation, solving, decomposition,
// certificate checking, verification campaigns and benchmarks.
//
// Exit codes: 0 success / yes, 1 no, 2 usage or input error,
// 3 budget exhausted, 4 internal error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlob/branching.hpp"
#include "mlob/campaigns.hpp"
#include "mlob/decomposition.hpp"
#include "mlob/digraph.hpp"
#include "mlob/fpt.hpp"
#include "mlob/generators.hpp"
#include "mlob/io.hpp"
#include "mlob/local_search.hpp"
#include "mlob/oracles.hpp"

namespace {

using namespace mlob;
using nlohmann::json;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

constexpr const char* kBudgetEnv = "MLOB_TIME_BUDGET_MS";
constexpr long long kDefaultBudgetMs = 30'000;

/// Input or usage problem detected after argument parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

long long default_budget_ms() {
    const char* env = std::getenv(kBudgetEnv);
    if (!env || !*env) return kDefaultBudgetMs;
    try {
        std::size_t used = 0;
        long long value = std::stoll(env, &used);
        if (used == std::string(env).size() && value > 0) return value;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(kBudgetEnv) + " must be a positive integer, got '" + env + "'");
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream out;
        out << std::cin.rdbuf();
        return out.str();
    }
    return read_file(path);
}

Digraph load_digraph(const std::string& path) { return parse_digraph(read_input(path)); }

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") std::cout << text;
    else write_file(out_path, text);
}

json tree_json(const OutTree& t) { return json::parse(to_json(t)); }

std::string extension_of(const std::string& path) {
    return std::filesystem::path(path).extension().string();
}

// ---------------------------------------------------------------- gen

struct GenArgs {
    std::string family = "random_strong_min_in3";
    int t = 6;
    int n = 10;
    double density = -1;
    std::uint64_t seed = 1;
    std::string out;
    std::string format;
};

InstanceSpec make_spec(const GenArgs& a) {
    auto family = parse_family(a.family);
    if (!family) throw UsageError("unknown family '" + a.family + "'");
    InstanceSpec spec;
    spec.family = *family;
    spec.t = a.t;
    spec.n = a.n;
    spec.seed = a.seed;
    if (a.density >= 0) spec.density = a.density;
    else if (spec.family == Family::random_dag_single_source) spec.density = 0.2;
    return spec;
}

void add_family_options(CLI::App* cmd, GenArgs& a) {
    cmd->add_option("--family", a.family, "ht | random_strong_min_in3 | random_dag_single_source | random_digraph")
        ->capture_default_str();
    cmd->add_option("--t", a.t, "H_t parameter (ht, t >= 6)")->capture_default_str();
    cmd->add_option("--n", a.n, "number of vertices (random families)")->capture_default_str();
    cmd->add_option("--density", a.density, "arc density (random_dag_single_source, random_digraph)");
    cmd->add_option("--seed", a.seed, "64-bit generator seed")->capture_default_str();
}

int run_gen(const GenArgs& a) {
    Digraph d = generate(make_spec(a));
    std::string format = a.format.empty() ? extension_of(a.out) : a.format;
    if (!format.empty() && format.front() == '.') format.erase(0, 1);
    if (format == "json") emit(to_json(d), a.out);
    else if (format == "dot") emit(to_dot(d), a.out);
    else emit(to_edge_list(d), a.out);
    return kExitYes;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
    std::string input;
    bool exact = false, local = false, fpt = false, tree = false;
    std::optional<int> k;
    std::optional<Vertex> root;
    std::uint64_t seed = 1;
    int starts = 4;
    std::string dot;
};

int run_solve(const SolveArgs& a, Milliseconds budget) {
    Digraph d = load_digraph(a.input);
    if (int modes = a.exact + a.local + a.fpt; modes != 1)
        throw UsageError("solve needs exactly one of --exact, --local, --fpt");
    if (a.root && (*a.root < 0 || *a.root >= d.n())) throw UsageError("--root out of range");

    if (a.fpt) {
        if (!a.k) throw UsageError("--fpt requires --k");
        DecideOptions options;
        options.budget = budget;
        options.seed = a.seed;
        DecideResult r = a.tree ? decide_k_dmlot(d, *a.k, options) : decide_k_dmlob(d, *a.k, options);
        std::cout << to_json(r);
        if (r.witness && !a.dot.empty()) write_file(a.dot, to_dot(d, *r.witness));
        switch (r.answer) {
            case Answer::yes: return kExitYes;
            case Answer::no: return kExitNo;
            case Answer::budget_exhausted: return kExitBudget;
            case Answer::unsupported:
                std::cerr << "mlob: input class not supported by the parameterized pipeline\n";
                return kExitUsage;
        }
        return kExitInternal;
    }

    json j;
    std::optional<OutTree> witness;
    bool budget_hit = false;
    if (a.exact) {
        MaxLeafResult r = a.tree  ? exact_max_leaf_tree(d, budget)
                          : a.root ? exact_max_leaf_branching_rooted(d, *a.root, budget)
                                   : exact_max_leaf_branching(d, budget);
        j["method"] = "exact";
        j["value"] = r.status == OracleStatus::no_branching ? json(nullptr) : json(r.value);
        j["exact"] = r.exact();
        j["nodes"] = r.nodes;
        witness = r.witness;
        budget_hit = !r.exact();
        if (r.status == OracleStatus::no_branching) j["detail"] = "no out-branching";
    } else {
        if (a.tree) throw UsageError("--tree is supported with --exact and --fpt only");
        auto roots = out_branching_roots(d);
        j["method"] = "local";
        if (!roots) {
            j["value"] = nullptr;
            j["detail"] = "no out-branching";
        } else {
            std::vector<Vertex> chosen = a.root ? std::vector<Vertex>{*a.root} : *roots;
            if (a.root && std::find(roots->begin(), roots->end(), *a.root) == roots->end())
                throw UsageError("no out-branching is rooted at --root");
            OutBranching t = best_of_restarts(d, chosen, std::max(1, a.starts), a.seed);
            Certificate cert = is_1ae_optimal(d, t);
            j["value"] = t.leaf_count();
            j["certified_1ae"] = cert.optimal;
            witness = t;
        }
    }
    j["witness"] = witness ? tree_json(*witness) : json(nullptr);
    if (witness && !a.dot.empty()) write_file(a.dot, to_dot(d, *witness));

    int code = budget_hit ? kExitBudget : kExitYes;
    if (a.k) {
        const int value = witness ? witness->leaf_count() : 0;
        const bool reached = witness && value >= *a.k;
        j["k"] = *a.k;
        if (reached || (*a.k <= 0 && !j["value"].is_null())) {
            j["answer"] = "yes";
            code = kExitYes;
        } else if (a.exact && !budget_hit) {
            j["answer"] = "no";
            code = kExitNo;
        } else {
            // Local search (or an interrupted oracle) cannot refute.
            j["answer"] = budget_hit ? "budget_exhausted" : "unknown";
            code = budget_hit ? kExitBudget : kExitNo;
        }
    } else if (j["value"].is_null()) {
        code = kExitNo;
    }
    std::cout << j.dump() << "\n";
    return code;
}

// ---------------------------------------------------------------- decompose

struct DecomposeArgs {
    std::string input;
    std::string mode = "strong";
    int k = 2;
    std::string out;
    std::string format = "pd";
    bool class_l = false;
};

int run_decompose(const DecomposeArgs& a, Milliseconds budget) {
    Digraph d = load_digraph(a.input);
    DecompositionOutcome o;
    if (a.mode == "acyclic") {
        o = decompose_acyclic(d, a.k);
    } else if (a.mode == "strong") {
        StrongOptions options;
        options.assume_class_l = a.class_l;
        options.witness_budget = budget;
        o = decompose_strong(d, a.k, options);
    } else {
        throw UsageError("--mode must be acyclic or strong");
    }
    json info{{"mode", a.mode}, {"k", a.k}, {"search_leaves", o.search_leaves}};
    if (o.has_witness()) {
        const OutTree& w = o.witness ? *o.witness : *o.tree_witness;
        info["witness"] = tree_json(w);
        info["leaves"] = w.leaf_count();
        std::cout << info.dump() << "\n";
        std::cerr << "mlob: found an out-branching with " << w.leaf_count() << " >= k leaves; no decomposition\n";
        return kExitNo;
    }
    const PathDecomposition& p = *o.decomposition;
    emit(a.format == "json" ? to_json(p) : to_pd_text(p), a.out);
    info["width"] = o.width;
    info["raw_width"] = o.raw_width;
    info["width_bound"] = o.width_bound;
    if (a.mode == "strong") {
        info["layers"] = o.layers;
        info["layer_bound"] = o.layer_bound;
        info["cross_bound_held"] = o.cross_bound_held;
    }
    std::cerr << info.dump() << "\n";
    return kExitYes;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
    std::string graph, object;
    bool branching = false, pd = false, one_ae = false;
};

int run_check(const CheckArgs& a) {
    if (int modes = a.branching + a.pd + a.one_ae; modes != 1)
        throw UsageError("check needs exactly one of --branching, --pd, --1ae");
    Digraph d = load_digraph(a.graph);
    std::string text = read_input(a.object);
    json j;
    if (a.pd) {
        PathDecomposition p = parse_pd(text);
        auto bad = validate_pd(underlying_graph(d), p);
        j["valid"] = !bad;
        j["width"] = p.width();
        if (bad) {
            j["axiom"] = to_string(bad->axiom);
            j["message"] = bad->message;
            std::cerr << "mlob: invalid path decomposition (" << to_string(bad->axiom) << "): " << bad->message << "\n";
        }
        std::cout << j.dump() << "\n";
        return bad ? kExitUsage : kExitYes;
    }
    OutBranching t = parse_branching_json(text, d.n());
    if (auto bad = validate(d, t)) {
        j["valid"] = false;
        j["message"] = bad->message;
        std::cerr << "mlob: invalid out-branching: " << bad->message << "\n";
        std::cout << j.dump() << "\n";
        return kExitUsage;
    }
    j["valid"] = true;
    j["leaves"] = t.leaf_count();
    if (a.branching) {
        std::cout << j.dump() << "\n";
        return kExitYes;
    }
    Certificate cert = is_1ae_optimal(d, t);
    j["optimal_1ae"] = cert.optimal;
    if (cert.violating_move) {
        json removed = json::array(), added = json::array();
        for (auto [u, v] : cert.violating_move->removed) removed.push_back({u, v});
        for (auto [u, v] : cert.violating_move->added) added.push_back({u, v});
        j["move"] = {{"removed", removed}, {"added", added}};
    }
    if (cert.violated_condition) j["condition"] = to_string(*cert.violated_condition);
    json violations = json::array();
    for (const LemmaViolation& v : check_lemma1(d, t))
        violations.push_back({{"condition", to_string(v.condition)}, {"arc", {v.arc.first, v.arc.second}},
                              {"witness", v.witness}});
    j["lemma1_violations"] = violations;
    std::cout << j.dump() << "\n";
    return cert.optimal ? kExitYes : kExitNo;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string campaign;
    int count = -1;
    std::uint64_t seed = 1;
    std::string csv, json_out;
    bool single = false;
    GenArgs gen;
};

int run_verify(const VerifyArgs& a, CampaignOptions options) {
    std::vector<InstanceSpec> specs;
    if (a.single) {
        specs.push_back(make_spec(a.gen));
    } else {
        int count = a.count;
        if (count < 0) count = a.campaign == "theorem2" ? 300 : 100;
        specs = default_specs(a.campaign, count, a.seed);
    }
    Report report;
    if (a.campaign == "theorem2") report = verify_bound_theorem2(specs, options);
    else if (a.campaign == "lemma2") report = verify_lemma2(specs, options);
    else if (a.campaign == "widths") report = verify_widths(specs, options);
    else throw UsageError("--campaign must be theorem2, lemma2 or widths");

    emit(report.to_csv(), a.csv);
    if (!a.json_out.empty()) emit(report.to_json(), a.json_out);
    for (const Record& r : report.records)
        if (r.status == RecordStatus::fail || r.status == RecordStatus::undecided)
            std::cerr << "mlob: " << to_string(r.status) << " " << r.detail << "\n  reproduce: " << r.command << "\n";
    std::cerr << "mlob: campaign " << report.campaign << ":";
    for (auto& [status, n] : report.counts()) std::cerr << " " << status << "=" << n;
    std::cerr << "\n";

    bool any_fail = false, any_undecided = false;
    for (const Record& r : report.records) {
        any_fail |= r.status == RecordStatus::fail;
        any_undecided |= r.status == RecordStatus::undecided;
    }
    return any_fail ? kExitNo : any_undecided ? kExitBudget : kExitYes;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::vector<int> sizes{20, 40, 80};
    int count = 3;
    std::uint64_t seed = 1;
    int k_offset = 1;
    std::string out;
};

int run_bench(const BenchArgs& a, Milliseconds budget, int threads) {
    using Clock = std::chrono::steady_clock;
    struct Row {
        int n = 0;
        std::size_t m = 0;
        std::uint64_t seed = 0;
        int local = 0, k = 0, width = -1;
        double local_ms = 0, decompose_ms = 0, fpt_ms = 0;
        std::string answer;
        std::uint64_t states_peak = 0;
    };
    std::vector<std::pair<int, std::uint64_t>> jobs;
    for (int n : a.sizes)
        for (int i = 0; i < a.count; ++i) jobs.emplace_back(n, a.seed + static_cast<std::uint64_t>(i));
    std::vector<Row> rows(jobs.size());
    auto ms_since = [](Clock::time_point t) {
        return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
    };
    parallel_for(static_cast<int>(jobs.size()), threads, [&](int i) {
        Row& row = rows[i];
        row.n = jobs[i].first;
        row.seed = jobs[i].second;
        Digraph d = random_strong_min_in3(row.n, row.seed);
        row.m = d.m();
        auto t0 = Clock::now();
        OutBranching t = best_of_restarts(d, {0}, 2, row.seed);
        row.local = t.leaf_count();
        row.local_ms = ms_since(t0);
        row.k = row.local + a.k_offset;
        t0 = Clock::now();
        DecompositionOutcome o = decompose_strong(d, row.k);
        row.decompose_ms = ms_since(t0);
        row.width = o.decomposition ? o.width : -1;
        t0 = Clock::now();
        DecideOptions options;
        options.budget = budget;
        DecideResult r = decide_k_dmlob(d, row.k, options);
        row.fpt_ms = ms_since(t0);
        row.answer = to_string(r.answer);
        row.states_peak = r.states_peak;
    });
    std::ostringstream csv;
    csv << "n,m,seed,local_leaves,local_ms,k,strong_width,decompose_ms,answer,states_peak,fpt_ms\n";
    csv.precision(3);
    csv << std::fixed;
    for (const Row& r : rows)
        csv << r.n << ',' << r.m << ',' << r.seed << ',' << r.local << ',' << r.local_ms << ',' << r.k << ','
            << r.width << ',' << r.decompose_ms << ',' << r.answer << ',' << r.states_peak << ',' << r.fpt_ms
            << '\n';
    emit(csv.str(), a.out);
    return kExitYes;
}

int run(int argc, char** argv) {
    CLI::App app{"Maximum-leaf out-branchings: generation, solving, decomposition and verification", "mlob"};
    app.require_subcommand(1);
    long long budget_ms = 0;
    int threads = 1;
    app.add_option("--time-budget-ms", budget_ms,
                   std::string("time budget for exact searches (default: $") + kBudgetEnv + " or 30000)");
    app.add_option("--threads", threads, "worker threads for campaigns and benchmarks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.fallthrough();

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate an instance");
    add_family_options(gen_cmd, gen);
    gen_cmd->add_option("--out", gen.out, "output file (default: standard output)");
    gen_cmd->add_option("--format", gen.format, "el | json | dot (default: from --out extension, else el)");

    SolveArgs solve;
    CLI::App* solve_cmd = app.add_subcommand("solve", "maximum-leaf out-branching or k-decision");
    solve_cmd->add_option("input", solve.input, "digraph file (edge list or JSON; - for stdin)")->required();
    solve_cmd->add_flag("--exact", solve.exact, "branch and bound oracle");
    solve_cmd->add_flag("--local", solve.local, "1-AE local search with restarts");
    solve_cmd->add_flag("--fpt", solve.fpt, "parameterized decision pipeline (needs --k)");
    solve_cmd->add_flag("--tree", solve.tree, "out-trees instead of out-branchings");
    solve_cmd->add_option("--k", solve.k, "leaf threshold");
    solve_cmd->add_option("--root", solve.root, "fix the root (--exact, --local)");
    solve_cmd->add_option("--seed", solve.seed, "local search seed")->capture_default_str();
    solve_cmd->add_option("--starts", solve.starts, "local search starts per root")->capture_default_str();
    solve_cmd->add_option("--dot", solve.dot, "also write the witness as DOT to this file");

    DecomposeArgs dec;
    CLI::App* dec_cmd = app.add_subcommand("decompose", "constructive path decomposition or witness");
    dec_cmd->add_option("input", dec.input, "digraph file")->required();
    dec_cmd->add_option("--mode", dec.mode, "acyclic | strong")->capture_default_str();
    dec_cmd->add_option("--k", dec.k, "leaf threshold")->required();
    dec_cmd->add_option("--out", dec.out, "output file (default: standard output)");
    dec_cmd->add_option("--format", dec.format, "pd | json")->capture_default_str();
    dec_cmd->add_flag("--class-l", dec.class_l, "accept members of class L that are not strongly connected");

    CheckArgs check;
    CLI::App* check_cmd = app.add_subcommand("check", "validate a branching, decomposition or 1-AE optimality");
    check_cmd->add_option("graph", check.graph, "digraph file")->required();
    check_cmd->add_option("object", check.object, "branching JSON or decomposition (.pd / JSON)")->required();
    check_cmd->add_flag("--branching", check.branching, "validate an out-branching");
    check_cmd->add_flag("--pd", check.pd, "validate a path decomposition of the underlying graph");
    check_cmd->add_flag("--1ae", check.one_ae, "certify 1-AE optimality of an out-branching");

    VerifyArgs verify;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run a verification campaign (CSV on stdout)");
    verify_cmd->add_option("--campaign", verify.campaign, "theorem2 | lemma2 | widths")->required();
    verify_cmd->add_option("--count", verify.count, "number of instances (default 300 for theorem2, else 100)");
    verify_cmd->add_option("--campaign-seed", verify.seed, "seed of the default instance list")->capture_default_str();
    verify_cmd->add_option("--csv", verify.csv, "write the CSV report here instead of standard output");
    verify_cmd->add_option("--json", verify.json_out, "also write the JSON report here");
    add_family_options(verify_cmd, verify.gen);
    CampaignOptions campaign_options;
    verify_cmd->add_option("--restarts", campaign_options.restarts, "local search starts per root")
        ->capture_default_str();
    verify_cmd->add_option("--oracle-up-to", campaign_options.oracle_up_to_n, "always run the oracle up to this n")
        ->capture_default_str();

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "time local search, decomposition and the decision pipeline");
    bench_cmd->add_option("--sizes", bench.sizes, "vertex counts")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--count", bench.count, "instances per size")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "first seed")->capture_default_str();
    bench_cmd->add_option("--k-offset", bench.k_offset, "k = local-search leaves + offset")->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "output CSV file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    Milliseconds budget(app.count("--time-budget-ms") ? budget_ms : default_budget_ms());
    if (budget.count() <= 0) throw UsageError("--time-budget-ms must be positive");

    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve, budget);
    if (*dec_cmd) return run_decompose(dec, budget);
    if (*check_cmd) return run_check(check);
    if (*verify_cmd) {
        verify.single = verify_cmd->count("--family") > 0;
        campaign_options.budget = budget;
        campaign_options.threads = threads;
        return run_verify(verify, campaign_options);
    }
    if (*bench_cmd) return run_bench(bench, budget, threads);
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "mlob: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "mlob: parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InternalError& e) {
        std::cerr << "mlob: internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::invalid_argument& e) {
        std::cerr << "mlob: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        std::cerr << "mlob: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FileError& e) {
        std::cerr << "mlob: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "mlob: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
