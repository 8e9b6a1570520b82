#include "mlob/campaigns.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "mlob/decomposition.hpp"
#include "mlob/local_search.hpp"
#include "mlob/rng.hpp"

namespace mlob {

std::string to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::pass_witnessed: return "PASS(witnessed)";
        case RecordStatus::pass_oracle: return "PASS(oracle)";
        case RecordStatus::fail: return "FAIL";
        case RecordStatus::skipped: return "SKIP(precondition)";
        case RecordStatus::undecided: return "UNDECIDED(budget)";
    }
    return "?";
}

const std::vector<std::string> kReportColumns = {
    "campaign", "family", "t", "n_param", "density", "seed", "n", "m", "k", "search_leaves", "oracle_value",
    "oracle_exact", "bound", "needed", "width", "width_bound", "layers", "layer_bound", "status", "runtime_ms",
    "detail", "command"};

bool Report::passed() const {
    return std::none_of(records.begin(), records.end(), [](const Record& r) {
        return r.status == RecordStatus::fail || r.status == RecordStatus::undecided;
    });
}

std::map<std::string, int> Report::counts() const {
    std::map<std::string, int> out;
    for (const Record& r : records) ++out[to_string(r.status)];
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string number(double x) {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed << x;
    return out.str();
}

std::vector<std::string> row(const Record& r) {
    return {r.campaign,
            to_string(r.spec.family),
            std::to_string(r.spec.t),
            std::to_string(r.spec.n),
            number(r.spec.density),
            std::to_string(r.spec.seed),
            std::to_string(r.n),
            std::to_string(r.m),
            std::to_string(r.k),
            std::to_string(r.search_leaves),
            r.oracle_value ? std::to_string(*r.oracle_value) : "",
            r.oracle_value ? (r.oracle_exact ? "1" : "0") : "",
            number(r.bound),
            std::to_string(r.needed),
            std::to_string(r.width),
            std::to_string(r.width_bound),
            std::to_string(r.layers),
            std::to_string(r.layer_bound),
            to_string(r.status),
            number(r.runtime_ms),
            r.detail,
            r.command};
}

}  // namespace

std::string Report::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < kReportColumns.size(); ++i) out += (i ? "," : "") + kReportColumns[i];
    out += '\n';
    for (const Record& r : records) {
        std::vector<std::string> cells = row(r);
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
        out += '\n';
    }
    return out;
}

std::string Report::to_json() const {
    using nlohmann::json;
    json records_json = json::array();
    for (const Record& r : records) {
        json j;
        j["family"] = to_string(r.spec.family);
        j["t"] = r.spec.t;
        j["n_param"] = r.spec.n;
        j["density"] = r.spec.density;
        j["seed"] = r.spec.seed;
        j["n"] = r.n;
        j["m"] = r.m;
        j["k"] = r.k;
        j["search_leaves"] = r.search_leaves;
        j["oracle_value"] = r.oracle_value ? json(*r.oracle_value) : json(nullptr);
        j["oracle_exact"] = r.oracle_exact;
        j["bound"] = r.bound;
        j["needed"] = r.needed;
        j["width"] = r.width;
        j["width_bound"] = r.width_bound;
        j["layers"] = r.layers;
        j["layer_bound"] = r.layer_bound;
        j["status"] = to_string(r.status);
        j["runtime_ms"] = r.runtime_ms;
        j["detail"] = r.detail;
        j["command"] = r.command;
        records_json.push_back(std::move(j));
    }
    json out;
    out["campaign"] = campaign;
    out["passed"] = passed();
    out["counts"] = counts();
    out["records"] = std::move(records_json);
    return out.dump(2) + "\n";
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

int theorem2_needed(int n) {
    int c = 0;
    while (4LL * (c + 1) * (c + 1) * (c + 1) < n) ++c;
    return c;
}

bool theorem2_applies(const Digraph& d) {
    if (d.n() == 0 || !is_strongly_connected(d)) return false;
    return d.min_in_degree() >= 3 || (d.is_oriented() && d.min_in_degree() >= 2);
}

namespace {

using Clock = std::chrono::steady_clock;

Record start_record(const std::string& campaign, const InstanceSpec& spec, const Digraph& d,
                    const CampaignOptions& options) {
    Record r;
    r.campaign = campaign;
    r.spec = spec;
    r.n = d.n();
    r.m = d.m();
    r.command = "mlob verify --campaign " + campaign + " " + spec.arguments() +
                " --time-budget-ms " + std::to_string(options.budget.count());
    return r;
}

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

OutBranching search(const Digraph& d, const CampaignOptions& options, std::uint64_t seed) {
    std::vector<Vertex> roots = *out_branching_roots(d);
    roots.resize(std::min<std::size_t>(roots.size(), std::max(1, options.restart_roots)));
    return best_of_restarts(d, roots, std::max(1, options.restarts), seed);
}

template <class One>
Report run_all(const std::string& campaign, const std::vector<InstanceSpec>& specs, const CampaignOptions& options,
               One one) {
    Report report;
    report.campaign = campaign;
    report.records.resize(specs.size());
    parallel_for(static_cast<int>(specs.size()), options.threads,
                 [&](int i) { report.records[i] = one(specs[i], options); });
    return report;
}

}  // namespace

Record verify_bound_theorem2(const InstanceSpec& spec, const CampaignOptions& options) {
    auto t0 = Clock::now();
    Digraph d = generate(spec);
    Record r = start_record("theorem2", spec, d, options);
    r.bound = std::cbrt(d.n() / 4.0) - 1.0;
    r.needed = theorem2_needed(d.n());
    if (!theorem2_applies(d)) {
        r.status = RecordStatus::skipped;
        r.detail = "not strongly connected with min in-degree 3 (or oriented with min in-degree 2)";
        r.runtime_ms = elapsed_ms(t0);
        return r;
    }
    r.search_leaves = search(d, options, spec.seed).leaf_count();
    const bool witnessed = r.search_leaves >= r.needed;
    if (!witnessed || d.n() <= options.oracle_up_to_n) {
        MaxLeafResult exact = exact_max_leaf_branching(d, options.budget);
        r.oracle_value = exact.value;
        r.oracle_exact = exact.exact();
        if (exact.exact() && exact.value < r.needed) {
            r.status = RecordStatus::fail;
            r.detail = "oracle value below the bound";
        } else if (witnessed) {
            r.status = RecordStatus::pass_witnessed;
        } else if (exact.value >= r.needed) {
            r.status = RecordStatus::pass_oracle;
        } else {
            r.status = RecordStatus::undecided;
        }
    } else {
        r.status = RecordStatus::pass_witnessed;
    }
    r.runtime_ms = elapsed_ms(t0);
    return r;
}

Report verify_bound_theorem2(const std::vector<InstanceSpec>& specs, const CampaignOptions& options) {
    return run_all("theorem2", specs, options,
                   [](const InstanceSpec& s, const CampaignOptions& o) { return verify_bound_theorem2(s, o); });
}

Lemma2Result verify_lemma2_structure(const Digraph& d, const OutBranching& t, Milliseconds oracle_budget,
                                     int oracle_up_to_n) {
    const int n = d.n();
    if (auto bad = validate(d, t)) throw std::invalid_argument("verify_lemma2_structure: " + bad->message);
    Lemma2Result res;
    Classification cls = classify(t);
    std::vector<std::string> failures;

    // Prune: drop reverse arcs of link-path arcs, then the lowest-tail
    // non-tree in-arcs until every in-degree is 2.
    std::vector<Arc> removed;
    for (const auto& path : cls.link_paths)
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            if (d.has_arc(path[i + 1], path[i])) removed.emplace_back(path[i + 1], path[i]);
    std::sort(removed.begin(), removed.end());
    std::vector<Arc> kept;
    for (Vertex v = 0; v < n; ++v) {
        std::vector<Vertex> tails;
        for (Vertex u : d.in(v))
            if (!std::binary_search(removed.begin(), removed.end(), Arc{u, v})) tails.push_back(u);
        int excess = static_cast<int>(tails.size()) - 2;
        for (Vertex u : tails) {
            bool tree_arc = t.parent(v) == u;
            if (!tree_arc && excess > 0) {
                --excess;
                continue;
            }
            kept.emplace_back(u, v);
        }
    }
    res.pruned = Digraph(n, std::move(kept));
    res.pruned_to_two = true;
    for (Vertex v = 0; v < n; ++v)
        if (res.pruned.in_degree(v) != 2) res.pruned_to_two = false;
    // Vertices already below in-degree 2 stay as they are; pruned_to_two
    // records whether the counting argument's setting was reached exactly.
    const Digraph& dp = res.pruned;

    res.certified = is_1ae_optimal(dp, t).optimal;
    if (!res.certified) failures.push_back("out-branching is not 1-AE optimal");

    AncestryIndex anc(t);
    for (const auto& path : cls.link_paths) {
        if (path.size() < 2) continue;
        const Vertex x = path.front(), y = path.back();
        std::vector<int> pos(n, -1);
        for (std::size_t i = 1; i < path.size(); ++i) pos[path[i]] = static_cast<int>(i) - 1;
        const int len = static_cast<int>(path.size()) - 1;
        std::vector<std::vector<int>> backward_in(len);
        for (std::size_t i = 1; i < path.size(); ++i) {
            const Vertex v = path[i];
            for (Vertex u : dp.in(v)) {
                if (u == t.parent(v)) continue;
                if (pos[u] >= 0) {
                    if (pos[u] < pos[v]) ++res.forward_arcs;
                    else backward_in[pos[v]].push_back(pos[u]);
                } else if (u == x) {
                    ++res.forward_arcs;
                } else {
                    bool ancestor = anc.is_ancestor(u, x);
                    bool descendant = anc.is_ancestor(y, u);
                    bool sink = t.is_leaf(u);
                    if (ancestor || (!descendant && !sink)) ++res.foreign_arcs;
                }
            }
        }
        std::vector<int> longest(len, 0);  // longest backward path starting at a position
        for (int p = 0; p < len; ++p) {
            res.max_backward_in_degree = std::max(res.max_backward_in_degree, static_cast<int>(backward_in[p].size()));
        }
        // Backward arcs go from later to earlier positions: longest path
        // starting at p extends through arcs p -> q with q < p.
        std::vector<std::vector<int>> backward_out(len);
        for (int q = 0; q < len; ++q)
            for (int p : backward_in[q]) backward_out[p].push_back(q);
        for (int p = 0; p < len; ++p)
            for (int q : backward_out[p]) longest[p] = std::max(longest[p], longest[q] + 1);
        for (int p = 0; p < len; ++p) res.longest_backward_path = std::max(res.longest_backward_path, longest[p]);
    }
    if (res.forward_arcs > 0) failures.push_back(std::to_string(res.forward_arcs) + " forward arcs into link paths");
    if (res.foreign_arcs > 0)
        failures.push_back(std::to_string(res.foreign_arcs) + " arcs into link paths from ancestor or special vertices");
    if (res.max_backward_in_degree > 1) failures.push_back("backward-arc out-trees are not vertex-disjoint");

    res.leaf_lower_bound = t.leaf_count();
    bool lower_bound_exact = false;
    if (n <= oracle_up_to_n) {
        MaxLeafResult tree = exact_max_leaf_tree(dp, oracle_budget);
        if (tree.exact()) {
            res.max_leaf_tree = tree.value;
            if (res.longest_backward_path > tree.value)
                failures.push_back("backward path of length " + std::to_string(res.longest_backward_path) +
                                   " exceeds the maximum out-tree leaf count " + std::to_string(tree.value));
        }
        MaxLeafResult branching = exact_max_leaf_branching(d, oracle_budget);
        res.leaf_lower_bound = std::max(res.leaf_lower_bound, branching.value);
        lower_bound_exact = branching.exact();
    }
    const long long c = res.leaf_lower_bound + 1;
    res.size_bound_held = n <= 4 * c * c * c;
    if (!res.size_bound_held && lower_bound_exact) failures.push_back("n exceeds 4(l_s + 1)^3");

    for (std::size_t i = 0; i < failures.size(); ++i) res.failure += (i ? "; " : "") + failures[i];
    return res;
}

Record verify_lemma2(const InstanceSpec& spec, const CampaignOptions& options) {
    auto t0 = Clock::now();
    Digraph d = generate(spec);
    Record r = start_record("lemma2", spec, d, options);
    if (!theorem2_applies(d)) {
        r.status = RecordStatus::skipped;
        r.detail = "not strongly connected with min in-degree 3 (or oriented with min in-degree 2)";
        r.runtime_ms = elapsed_ms(t0);
        return r;
    }
    OutBranching t = search(d, options, spec.seed);
    r.search_leaves = t.leaf_count();
    Lemma2Result res = verify_lemma2_structure(d, t, options.budget, options.oracle_up_to_n);
    if (res.max_leaf_tree) {
        r.oracle_value = res.max_leaf_tree;
        r.oracle_exact = true;
    }
    std::ostringstream detail;
    detail << "forward=" << res.forward_arcs << " foreign=" << res.foreign_arcs
           << " backward_in=" << res.max_backward_in_degree << " longest_backward=" << res.longest_backward_path
           << " ls_lower=" << res.leaf_lower_bound;
    if (!res.passed()) detail << " failure: " << res.failure;
    r.detail = detail.str();
    r.status = !res.passed() ? RecordStatus::fail
               : res.max_leaf_tree ? RecordStatus::pass_oracle
                                   : RecordStatus::pass_witnessed;
    r.runtime_ms = elapsed_ms(t0);
    return r;
}

Report verify_lemma2(const std::vector<InstanceSpec>& specs, const CampaignOptions& options) {
    return run_all("lemma2", specs, options,
                   [](const InstanceSpec& s, const CampaignOptions& o) { return verify_lemma2(s, o); });
}

Record verify_widths(const InstanceSpec& spec, const CampaignOptions& options) {
    auto t0 = Clock::now();
    Digraph d = generate(spec);
    Record r = start_record("widths", spec, d, options);
    auto roots = out_branching_roots(d);
    const bool acyclic = roots && is_acyclic(d);
    const bool strong = is_strongly_connected(d);
    if (d.n() < 2 || !roots || (!acyclic && !strong)) {
        r.status = RecordStatus::skipped;
        r.detail = "needs a strongly connected digraph or a single-source acyclic digraph with n >= 2";
        r.runtime_ms = elapsed_ms(t0);
        return r;
    }
    r.search_leaves = search(d, options, spec.seed).leaf_count();
    std::optional<DecompositionOutcome> outcome;
    for (int k = std::max(2, r.search_leaves + 1); k <= r.search_leaves + 12; ++k) {
        DecompositionOutcome o = acyclic ? decompose_acyclic(d, k) : decompose_strong(d, k);
        if (!o.has_witness()) {
            r.k = k;
            outcome = std::move(o);
            break;
        }
    }
    if (!outcome) {
        r.status = RecordStatus::undecided;
        r.detail = "every k tried produced a witness";
        r.runtime_ms = elapsed_ms(t0);
        return r;
    }
    r.width = outcome->width;
    r.width_bound = outcome->width_bound;
    auto bad = validate_pd(underlying_graph(d), *outcome->decomposition);
    bool ok = !bad && r.width <= r.width_bound;
    std::string mode = acyclic ? "acyclic" : "strong";
    std::ostringstream detail;
    detail << "mode=" << mode << " raw_width=" << outcome->raw_width;
    if (!acyclic) {
        r.layers = outcome->layers;
        r.layer_bound = outcome->layer_bound;
        ok = ok && r.layers <= r.layer_bound;
        detail << " cross_bound_held=" << (outcome->cross_bound_held ? 1 : 0);
    }
    if (bad) detail << " invalid: " << bad->message;
    r.detail = detail.str();
    r.status = ok ? RecordStatus::pass_witnessed : RecordStatus::fail;
    r.runtime_ms = elapsed_ms(t0);
    return r;
}

Report verify_widths(const std::vector<InstanceSpec>& specs, const CampaignOptions& options) {
    return run_all("widths", specs, options,
                   [](const InstanceSpec& s, const CampaignOptions& o) { return verify_widths(s, o); });
}

std::vector<InstanceSpec> default_specs(const std::string& campaign, int count, std::uint64_t seed) {
    std::vector<InstanceSpec> specs;
    auto strong = [&](int n, int i) {
        InstanceSpec s;
        s.family = Family::random_strong_min_in3;
        s.n = n;
        s.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
        return s;
    };
    auto ht = [](int t) {
        InstanceSpec s;
        s.family = Family::ht;
        s.t = t;
        return s;
    };
    if (campaign == "theorem2") {
        // A block of small orders (oracle territory), then orders spread up to 1000.
        const int small = std::min(count, std::max(0, count / 6));
        const int fixed = std::min(3, count - small);
        const int spread = count - small - fixed;
        for (int i = 0; i < small; ++i) specs.push_back(strong(4 + i % 13, i));
        for (int i = 0; i < spread; ++i)
            specs.push_back(strong(17 + (spread > 1 ? static_cast<int>(static_cast<long long>(i) * 983 / (spread - 1)) : 0),
                                   small + i));
        for (int t = 6; t < 6 + fixed; ++t) specs.push_back(ht(t));
    } else if (campaign == "lemma2") {
        // Small orders where the out-tree oracle checks the backward-path
        // bound, larger random orders, and H_t, whose spokes carry link paths.
        const int fixed = std::min(5, count);
        const int rest = count - fixed;
        for (int i = 0; i < rest; ++i) specs.push_back(strong(i % 2 == 0 ? 4 + (i / 2) % 9 : 13 + (i * 7) % 188, i));
        for (int t = 6; t < 6 + fixed; ++t) specs.push_back(ht(t));
    } else if (campaign == "widths") {
        const int fixed = std::min(3, count);
        const int rest = count - fixed;
        for (int i = 0; i < rest; ++i) {
            if (i % 2 == 0) {
                InstanceSpec s;
                s.family = Family::random_dag_single_source;
                s.n = 4 + (i / 2) % 15;
                s.density = 0.05 + 0.05 * ((i / 2) % 4);
                s.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
                specs.push_back(s);
            } else {
                specs.push_back(strong(4 + static_cast<int>((static_cast<long long>(i) * 37) % 197), i));
            }
        }
        for (int t = 6; t < 6 + fixed; ++t) specs.push_back(ht(t));
    } else {
        throw std::invalid_argument("unknown campaign: " + campaign);
    }
    std::stable_sort(specs.begin(), specs.end(), [](const InstanceSpec& a, const InstanceSpec& b) {
        return std::tie(a.family, a.t, a.n, a.density, a.seed) < std::tie(b.family, b.t, b.n, b.density, b.seed);
    });
    return specs;
}

}  // namespace mlob
