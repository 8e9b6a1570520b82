#include "mlob/fpt.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "mlob/local_search.hpp"

namespace mlob {

std::vector<NiceStep> to_nice(const PathDecomposition& p) {
    std::vector<NiceStep> steps;
    std::vector<Vertex> current;
    auto advance = [&](std::vector<Vertex> next) {
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        for (Vertex v : current)
            if (!std::binary_search(next.begin(), next.end(), v)) steps.push_back({NiceKind::forget, v});
        for (Vertex v : next)
            if (!std::binary_search(current.begin(), current.end(), v)) steps.push_back({NiceKind::introduce, v});
        current = std::move(next);
    };
    for (const auto& bag : p.bags) advance(bag);
    advance({});
    return steps;
}

std::uint64_t dp_state_bound(int m) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    auto sat_add = [](std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; };
    auto sat_mul = [](std::uint64_t a, std::uint64_t b) { return b != 0 && a > kMax / b ? kMax : a * b; };
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= m; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t x : row) next.push_back(sat_add(next.back(), x));
        row = std::move(next);
    }
    std::uint64_t bound = row.front();
    for (int i = 0; i < m; ++i) bound = sat_mul(bound, 4);
    return bound;
}

std::string to_string(DpStatus s) {
    switch (s) {
        case DpStatus::optimal: return "optimal";
        case DpStatus::below_bound: return "below_bound";
        case DpStatus::state_limit: return "state_limit";
        case DpStatus::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

std::string to_string(Answer a) {
    switch (a) {
        case Answer::yes: return "yes";
        case Answer::no: return "no";
        case Answer::unsupported: return "unsupported";
        case Answer::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

Clock::time_point deadline_after(Milliseconds budget) {
    auto now = Clock::now();
    if (budget == kNoBudget || budget > std::chrono::hours(24 * 365)) return Clock::time_point::max();
    return now + budget;
}

// Partial solution on the active vertices, sorted by vertex id. Every tree
// of the partial forest keeps an active vertex until the last step; the
// block label says which tree an active vertex belongs to.
struct Slot {
    bool has_parent;
    bool childless;
    std::uint8_t block;
};

constexpr int kMaxActive = 62;
constexpr std::uint8_t kFresh = 63;

std::string encode(const std::vector<Slot>& slots, bool root_used) {
    std::array<int, 64> relabel;
    relabel.fill(-1);
    int next = 0;
    std::string key(slots.size() + 1, '\0');
    for (std::size_t i = 0; i < slots.size(); ++i) {
        int& label = relabel[slots[i].block];
        if (label < 0) label = next++;
        key[i] = static_cast<char>((slots[i].has_parent ? 1 : 0) | (slots[i].childless ? 2 : 0) | (label << 2));
    }
    key.back() = root_used ? 1 : 0;
    return key;
}

void decode(const std::string& key, std::vector<Slot>& slots, bool& root_used) {
    slots.resize(key.size() - 1);
    for (std::size_t i = 0; i + 1 < key.size(); ++i) {
        auto c = static_cast<unsigned char>(key[i]);
        slots[i] = {(c & 1) != 0, (c & 2) != 0, static_cast<std::uint8_t>(c >> 2)};
    }
    root_used = key.back() != 0;
}

struct Rec {
    int value;
    int pred;
    Vertex parent;         // introduce steps: chosen parent of the new vertex
    std::uint64_t kids;    // introduce steps: children among the previous active list
};

int childless_count(const std::vector<Slot>& slots) {
    int c = 0;
    for (const Slot& s : slots) c += s.childless ? 1 : 0;
    return c;
}

}  // namespace

DpResult dp_max_leaf(const Digraph& d, const PathDecomposition& p, Vertex root, const DpOptions& options) {
    const int n = d.n();
    if (n == 0) throw std::invalid_argument("dp_max_leaf needs a non-empty digraph");
    if (root != kNoVertex && !d.contains(root)) throw std::invalid_argument("dp_max_leaf: root out of range");
    if (auto bad = validate_pd(underlying_graph(d), p))
        throw std::invalid_argument("dp_max_leaf needs a valid path decomposition: " + bad->message);

    DpResult result;
    result.width = p.width();
    result.state_bound = dp_state_bound(result.width + 1);
    if (result.width + 1 > kMaxActive) throw std::length_error("dp_max_leaf: decomposition too wide");

    if (n == 1) {
        result.states_peak = result.states_total = 1;
        if (options.lower_bound > 0) {
            result.status = DpStatus::below_bound;
            return result;
        }
        result.value = 0;
        result.witness = OutTree::single_vertex(1, 0);
        return result;
    }

    const bool fixed_root = root != kNoVertex;
    const std::vector<NiceStep> steps = to_nice(p);
    const auto deadline = deadline_after(options.budget);
    constexpr std::uint64_t kMaxTotalStates = 60'000'000;

    std::vector<std::vector<Vertex>> active_before(steps.size());
    std::vector<std::vector<Rec>> history;
    history.reserve(steps.size());
    std::vector<std::string> keys{encode({}, false)};
    std::vector<Rec> recs{{0, -1, kNoVertex, 0}};
    std::vector<Vertex> active;
    int introduced = 0;
    std::uint64_t work = 0;

    std::vector<Slot> slots, next;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const NiceStep step = steps[i];
        active_before[i] = active;
        std::vector<std::string> new_keys;
        std::vector<Rec> new_recs;
        std::unordered_map<std::string, int> index;
        auto offer = [&](const std::vector<Slot>& s, bool root_used, const Rec& r) {
            std::string key = encode(s, root_used);
            auto [it, inserted] = index.try_emplace(key, static_cast<int>(new_recs.size()));
            if (inserted) {
                new_keys.push_back(std::move(key));
                new_recs.push_back(r);
            } else if (r.value > new_recs[it->second].value) {
                new_recs[it->second] = r;
            }
        };

        const Vertex v = step.vertex;
        const int pos = static_cast<int>(std::lower_bound(active.begin(), active.end(), v) - active.begin());
        if (step.kind == NiceKind::introduce) {
            ++introduced;
            std::vector<int> in_pos, out_pos;
            for (int j = 0; j < static_cast<int>(active.size()); ++j) {
                if (d.has_arc(active[j], v)) in_pos.push_back(j);
                if (d.has_arc(v, active[j])) out_pos.push_back(j);
            }
            const bool may_have_parent = !(fixed_root && v == root);
            for (int s = 0; s < static_cast<int>(keys.size()); ++s) {
                bool root_used;
                decode(keys[s], slots, root_used);
                std::vector<int> parent_options{-1};
                if (may_have_parent) parent_options.insert(parent_options.end(), in_pos.begin(), in_pos.end());
                for (int par : parent_options) {
                    std::vector<int> cand;
                    for (int w : out_pos)
                        if (!slots[w].has_parent && !(fixed_root && active[w] == root) &&
                            (par < 0 || slots[w].block != slots[par].block))
                            cand.push_back(w);
                    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cand.size()); ++mask) {
                        if ((++work & 1023) == 0 && Clock::now() > deadline) {
                            result.status = DpStatus::budget_exhausted;
                            return result;
                        }
                        std::array<bool, 64> merge{};
                        if (par >= 0) merge[slots[par].block] = true;
                        std::uint64_t kids = 0;
                        for (std::size_t b = 0; b < cand.size(); ++b)
                            if (mask >> b & 1) {
                                merge[slots[cand[b]].block] = true;
                                kids |= std::uint64_t{1} << cand[b];
                            }
                        next = slots;
                        for (Slot& x : next)
                            if (merge[x.block]) x.block = kFresh;
                        for (std::size_t b = 0; b < cand.size(); ++b)
                            if (mask >> b & 1) next[cand[b]].has_parent = true;
                        if (par >= 0) next[par].childless = false;
                        next.insert(next.begin() + pos, Slot{par >= 0, mask == 0, kFresh});
                        const int value = recs[s].value;
                        if (value + childless_count(next) + (n - introduced) < options.lower_bound) continue;
                        offer(next, root_used, Rec{value, s, par >= 0 ? active[par] : kNoVertex, kids});
                    }
                }
            }
            active.insert(active.begin() + pos, v);
        } else {
            const bool last = i + 1 == steps.size();
            for (int s = 0; s < static_cast<int>(keys.size()); ++s) {
                if ((++work & 1023) == 0 && Clock::now() > deadline) {
                    result.status = DpStatus::budget_exhausted;
                    return result;
                }
                bool root_used;
                decode(keys[s], slots, root_used);
                const Slot x = slots[pos];
                if (!x.has_parent) {
                    if (fixed_root ? v != root : root_used) continue;
                    if (!fixed_root) root_used = true;
                }
                bool shared = false;
                for (int j = 0; j < static_cast<int>(slots.size()); ++j)
                    if (j != pos && slots[j].block == x.block) shared = true;
                if (!shared && !last) continue;
                const int value = recs[s].value + (x.childless ? 1 : 0);
                slots.erase(slots.begin() + pos);
                if (value + childless_count(slots) + (n - introduced) < options.lower_bound) continue;
                offer(slots, root_used, Rec{value, s, kNoVertex, 0});
            }
            active.erase(active.begin() + pos);
        }

        const auto count = static_cast<std::uint64_t>(new_recs.size());
        result.states_per_step.push_back(count);
        result.states_peak = std::max(result.states_peak, count);
        result.states_total += count;
        history.push_back(std::move(recs));
        keys = std::move(new_keys);
        recs = std::move(new_recs);
        if (count > options.max_states_per_step || result.states_total > kMaxTotalStates) {
            result.status = DpStatus::state_limit;
            return result;
        }
        if (count == 0) break;
    }

    int best = -1;
    for (int s = 0; s < static_cast<int>(recs.size()); ++s)
        if (best < 0 || recs[s].value > recs[best].value) best = s;
    if (best < 0 || recs[best].value < options.lower_bound) {
        result.status = DpStatus::below_bound;
        return result;
    }
    result.value = recs[best].value;

    // Walk the back-pointers; history[i + 1] holds the records made by step i.
    history.push_back(std::move(recs));
    std::vector<Vertex> parent(n, kAbsent);
    int at = best;
    for (int i = static_cast<int>(steps.size()) - 1; i >= 0; --i) {
        const Rec& r = history[i + 1][at];
        if (steps[i].kind == NiceKind::introduce) {
            const Vertex v = steps[i].vertex;
            if (r.parent != kNoVertex) parent[v] = r.parent;
            for (std::size_t b = 0; b < active_before[i].size(); ++b)
                if (r.kids >> b & 1) parent[active_before[i][b]] = v;
        }
        at = r.pred;
    }
    Vertex tree_root = kNoVertex;
    for (Vertex v = 0; v < n; ++v)
        if (parent[v] == kAbsent) {
            if (tree_root != kNoVertex) throw std::logic_error("dp_max_leaf: witness has two roots");
            tree_root = v;
            parent[v] = kNoVertex;
        }
    if (tree_root == kNoVertex) throw std::logic_error("dp_max_leaf: witness has no root");
    OutBranching t(tree_root, std::move(parent));
    if (auto bad = validate(d, t)) throw std::logic_error("dp_max_leaf: invalid witness: " + bad->message);
    if (t.leaf_count() != result.value) throw std::logic_error("dp_max_leaf: witness leaf count differs from value");
    result.witness = std::move(t);
    return result;
}

namespace {

// One decision for a digraph with an out-branching. In tree mode the input
// is a reachable subdigraph and an out-tree witness is acceptable.
DecideResult run_pipeline(const Digraph& d, int k, const DecideOptions& options, bool tree_mode,
                          Clock::time_point deadline) {
    DecideResult r;
    r.k = k;
    auto roots = out_branching_roots(d);
    if (!roots) {
        r.answer = Answer::no;
        r.detail = "no out-branching exists";
        return r;
    }
    auto accept = [&](OutTree t, const char* method) {
        r.answer = Answer::yes;
        r.leaves = t.leaf_count();
        r.witness = std::move(t);
        r.method = method;
        return r;
    };
    if (k <= 0) return accept(*bfs_out_branching(d, roots->front()), "local-search");

    std::vector<Vertex> starts(roots->begin(),
                               roots->begin() + std::min<std::size_t>(roots->size(), std::max(1, options.local_search_roots)));
    OutBranching best = best_of_restarts(d, starts, std::max(1, options.local_search_starts), options.seed);
    if (best.leaf_count() >= k) return accept(std::move(best), "local-search");

    DecompositionOutcome outcome;
    if (is_acyclic(d)) {
        outcome = decompose_acyclic(d, k);
    } else if (tree_mode || is_strongly_connected(d) || in_class_L(d)) {
        StrongOptions so;
        so.assume_class_l = tree_mode;
        so.accept_out_tree = tree_mode;
        outcome = decompose_strong(d, k, so);
    } else {
        r.answer = Answer::unsupported;
        r.detail = "input is neither strongly connected, acyclic with one source, nor in class L";
        return r;
    }
    if (outcome.witness) return accept(std::move(*outcome.witness), "local-search");
    if (outcome.tree_witness) return accept(std::move(*outcome.tree_witness), "local-search");

    PathDecomposition p = std::move(*outcome.decomposition);
    r.constructed_width = p.width();
    if (options.refine_small_decompositions && d.n() <= kMaxExactSeparationVertices) {
        UndirectedGraph g = underlying_graph(d);
        VertexOrdering best_order = exact_vertex_separation(g);
        if (best_order.cost < p.width()) p = ordering_to_decomposition(g, best_order.order);
    }
    r.width = p.width();

    DpOptions dp;
    dp.lower_bound = k;
    dp.max_states_per_step = options.max_states_per_step;
    if (deadline != Clock::time_point::max()) {
        auto left = std::chrono::duration_cast<Milliseconds>(deadline - Clock::now());
        dp.budget = std::max(left, Milliseconds(0));
    }
    DpResult res = dp_max_leaf(d, p, kNoVertex, dp);
    r.states_peak = res.states_peak;
    r.method = "dp";
    switch (res.status) {
        case DpStatus::optimal:
            r.answer = Answer::yes;
            r.leaves = res.value;
            r.witness = std::move(res.witness);
            break;
        case DpStatus::below_bound: r.answer = Answer::no; break;
        case DpStatus::state_limit:
            r.answer = Answer::budget_exhausted;
            r.detail = "state limit reached";
            break;
        case DpStatus::budget_exhausted:
            r.answer = Answer::budget_exhausted;
            r.detail = "time budget exhausted";
            break;
    }
    return r;
}

}  // namespace

DecideResult decide_k_dmlob(const Digraph& d, int k, const DecideOptions& options) {
    if (d.n() == 0) throw std::invalid_argument("decide_k_dmlob needs a non-empty digraph");
    return run_pipeline(d, k, options, false, deadline_after(options.budget));
}

DecideResult decide_k_dmlot(const Digraph& d, int k, const DecideOptions& options) {
    const int n = d.n();
    if (n == 0) throw std::invalid_argument("decide_k_dmlot needs a non-empty digraph");
    const auto deadline = deadline_after(options.budget);
    DecideResult r;
    r.k = k;
    if (k <= 0) {
        r.answer = Answer::yes;
        r.witness = OutTree::single_vertex(n, 0);
        r.leaves = 0;
        r.method = "local-search";
        return r;
    }
    StrongComponentIndex scc = strong_components(d);
    bool exhausted = false;
    r.answer = Answer::no;
    for (const auto& members : scc.members) {
        Subdigraph sub = reachable_subdigraph(d, members.front());
        if (sub.graph.n() - 1 < k) continue;
        DecideResult part = run_pipeline(sub.graph, k, options, true, deadline);
        r.width = std::max(r.width, part.width);
        r.constructed_width = std::max(r.constructed_width, part.constructed_width);
        r.states_peak = std::max(r.states_peak, part.states_peak);
        if (part.method != "none") r.method = part.method;
        if (part.answer == Answer::budget_exhausted) exhausted = true;
        if (part.answer != Answer::yes) continue;
        std::vector<Vertex> parent(n, kAbsent);
        for (Vertex v : part.witness->vertices()) {
            Vertex p = part.witness->parent(v);
            parent[sub.to_original[v]] = p == kNoVertex ? kNoVertex : sub.to_original[p];
        }
        r.answer = Answer::yes;
        r.witness = OutTree(sub.to_original[part.witness->root()], std::move(parent));
        r.leaves = r.witness->leaf_count();
        r.method = part.method;
        r.detail.clear();
        return r;
    }
    if (exhausted) {
        r.answer = Answer::budget_exhausted;
        r.detail = "time budget or state limit reached";
    }
    return r;
}

std::string to_json(const DecideResult& r) {
    using nlohmann::json;
    json j;
    j["answer"] = to_string(r.answer);
    j["k"] = r.k;
    j["leaves"] = r.witness ? json(r.leaves) : json(nullptr);
    if (r.witness) {
        json parent = json::object();
        for (Vertex v : r.witness->vertices())
            if (v != r.witness->root()) parent[std::to_string(v)] = r.witness->parent(v);
        j["witness"] = json{{"root", r.witness->root()}, {"parent", parent}};
    } else {
        j["witness"] = nullptr;
    }
    j["method"] = r.method;
    j["width"] = r.width;
    j["states_peak"] = r.states_peak;
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j.dump() + "\n";
}

}  // namespace mlob
