#include "mlob/local_search.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

#include "mlob/rng.hpp"

namespace mlob {

std::string to_string(RejectReason r) {
    switch (r) {
        case RejectReason::none: return "none";
        case RejectReason::disconnected: return "disconnected";
        case RejectReason::two_parents: return "two parents";
        case RejectReason::cycle: return "cycle";
    }
    return "unknown";
}

std::string to_string(LemmaCondition c) {
    switch (c) {
        case LemmaCondition::a: return "a";
        case LemmaCondition::b: return "b";
        case LemmaCondition::c: return "c";
        case LemmaCondition::generic: return "generic";
    }
    return "unknown";
}

namespace {

std::string arc_str(const Arc& a) {
    return "(" + std::to_string(a.first) + "," + std::to_string(a.second) + ")";
}

void check_well_formed(const Digraph& d, const OutBranching& t, const ExchangeMove& m) {
    if (m.removed.size() != m.added.size() || m.removed.empty())
        throw std::invalid_argument("exchange move needs equally many removed and added arcs");
    auto removed = m.removed, added = m.added;
    std::sort(removed.begin(), removed.end());
    std::sort(added.begin(), added.end());
    if (std::adjacent_find(removed.begin(), removed.end()) != removed.end() ||
        std::adjacent_find(added.begin(), added.end()) != added.end())
        throw std::invalid_argument("exchange move repeats an arc");
    for (const auto& [u, v] : removed)
        if (!t.contains(v) || t.parent(v) != u)
            throw std::invalid_argument("removed arc " + arc_str({u, v}) + " is not a tree arc");
    for (const auto& [u, v] : added) {
        if (!d.has_arc(u, v)) throw std::invalid_argument("added arc " + arc_str({u, v}) + " is not a host arc");
        if (t.parent(v) == u) throw std::invalid_argument("added arc " + arc_str({u, v}) + " is already a tree arc");
    }
}

}  // namespace

MoveOutcome apply_move(const Digraph& d, const OutBranching& t, const ExchangeMove& m) {
    check_well_formed(d, t, m);
    const int n = d.n();
    std::vector<int> indeg(n, 0);
    std::vector<Vertex> parent(n, kNoVertex);
    for (Vertex v = 0; v < n; ++v)
        if (t.parent(v) >= 0) {
            indeg[v] = 1;
            parent[v] = t.parent(v);
        }
    for (const auto& [u, v] : m.removed) {
        indeg[v] = 0;
        parent[v] = kNoVertex;
    }
    for (const auto& [u, v] : m.added) {
        ++indeg[v];
        parent[v] = u;
    }

    MoveOutcome out;
    std::vector<Vertex> parentless;
    for (Vertex v = 0; v < n; ++v)
        if (indeg[v] == 0) parentless.push_back(v);
    if (parentless.size() > 1) {
        out.reason = RejectReason::disconnected;
        out.witness = parentless.front() == t.root() ? parentless[1] : parentless.front();
        return out;
    }
    if (parentless.empty()) {
        out.reason = RejectReason::cycle;
        return out;
    }
    // With |F| = |X| a vertex with two parents always comes with an orphan,
    // reported above; this guards malformed callers.
    for (Vertex v = 0; v < n; ++v)
        if (indeg[v] > 1) {
            out.reason = RejectReason::two_parents;
            out.witness = v;
            return out;
        }

    const Vertex root = parentless.front();
    OutBranching candidate(root, parent);
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{root};
    seen[root] = 1;
    int reached = 1;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex c : candidate.children(u))
            if (!seen[c]) {
                seen[c] = 1;
                ++reached;
                stack.push_back(c);
            }
    }
    if (reached != n) {
        out.reason = RejectReason::cycle;
        for (Vertex v = 0; v < n; ++v)
            if (!seen[v]) {
                out.witness = v;
                break;
            }
        return out;
    }
    out.branching = std::move(candidate);
    return out;
}

Certificate is_1ae_optimal(const Digraph& d, const OutBranching& t) {
    // A single exchange (p(v),v) -> (u,w) keeps an out-branching only if
    // w = v and u is outside the subtree of v, or w is the root and u lies in
    // the subtree of v (v becomes the new root). The leaf count then changes
    // by [d+(p(v)) = 1] - [d+(u) = 0]; every other pair is rejected.
    Certificate cert;
    if (t.size() <= 1) return cert;
    AncestryIndex anc(t);
    const Vertex r = t.root();

    for (const auto& [p, v] : t.arcs()) {
        if (t.out_degree(p) != 1) continue;
        std::optional<Arc> best;
        for (Vertex u : d.in(v)) {
            if (u == p || t.out_degree(u) == 0 || anc.is_ancestor(v, u)) continue;
            best = Arc{u, v};
            break;
        }
        for (Vertex u : d.in(r)) {
            if (best && Arc{u, r} > *best) break;
            if (t.out_degree(u) == 0 || !anc.is_ancestor(v, u)) continue;
            best = Arc{u, r};
            break;
        }
        if (!best) continue;

        cert.optimal = false;
        cert.violating_move = ExchangeMove{{{p, v}}, {*best}};
        const Vertex u = best->first;
        if (best->second == r && best->second != v)
            cert.violated_condition = LemmaCondition::c;
        else if (t.out_degree(v) == 0)
            cert.violated_condition = LemmaCondition::generic;
        else if (anc.siblings(u, v))
            cert.violated_condition = LemmaCondition::a;
        else
            cert.violated_condition = LemmaCondition::b;
        return cert;
    }
    return cert;
}

namespace {

// Calls f(indices) for each ell-subset of [0, size) in lexicographic order;
// stops when f returns true.
template <class F>
bool for_each_subset(std::size_t size, int ell, F&& f) {
    std::vector<std::size_t> idx(ell);
    for (int i = 0; i < ell; ++i) idx[i] = i;
    if (static_cast<std::size_t>(ell) > size) return false;
    while (true) {
        if (f(idx)) return true;
        int i = ell - 1;
        while (i >= 0 && idx[i] == size - ell + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < ell; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::uint64_t choose(std::uint64_t n, int k) {
    if (k > static_cast<int>(n)) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

Certificate is_ae_optimal(const Digraph& d, const OutBranching& t, int ell, std::uint64_t max_candidates) {
    if (ell < 1 || ell > 2) throw std::invalid_argument("exchange size must be 1 or 2");
    const auto tree_arcs = t.arcs();
    std::vector<Arc> other;
    for (const auto& a : d.arcs())
        if (t.parent(a.second) != a.first) other.push_back(a);
    if (choose(tree_arcs.size(), ell) * choose(other.size(), ell) > max_candidates)
        throw std::length_error("exchange neighborhood exceeds the candidate limit");

    Certificate cert;
    const int leaves = t.leaf_count();
    for_each_subset(tree_arcs.size(), ell, [&](const std::vector<std::size_t>& fi) {
        return for_each_subset(other.size(), ell, [&](const std::vector<std::size_t>& xi) {
            ExchangeMove m;
            for (auto i : fi) m.removed.push_back(tree_arcs[i]);
            for (auto i : xi) m.added.push_back(other[i]);
            auto res = apply_move(d, t, m);
            if (res.ok() && res.branching->leaf_count() > leaves) {
                cert.optimal = false;
                cert.violating_move = std::move(m);
                cert.violated_condition = LemmaCondition::generic;
                return true;
            }
            return false;
        });
    });
    return cert;
}

std::vector<LemmaViolation> check_lemma1(const Digraph& d, const OutBranching& t) {
    std::vector<LemmaViolation> found;
    if (t.size() <= 1) return found;
    AncestryIndex anc(t);
    const Vertex r = t.root();
    for (const auto& [u, v] : d.arcs()) {
        if (t.parent(v) == u) continue;
        if (t.out_degree(u) == 0) continue;
        if (v == r) {
            // cycle: tree path r..u plus (u,r); look for x != r on it with d+(p(x)) = 1
            for (Vertex x = u; x != r; x = t.parent(x))
                if (t.out_degree(t.parent(x)) == 1) {
                    found.push_back({LemmaCondition::c, {u, v}, x});
                    break;
                }
            continue;
        }
        if (t.out_degree(v) == 0 || t.out_degree(t.parent(v)) != 1) continue;
        if (anc.siblings(u, v))
            found.push_back({LemmaCondition::a, {u, v}, kNoVertex});
        else if (anc.is_ancestor(u, v))
            found.push_back({LemmaCondition::b, {u, v}, kNoVertex});
    }
    return found;
}

OutBranching improve_to_1ae(const Digraph& d, OutBranching t, ImproveStats* stats) {
    int moves = 0;
    while (true) {
        auto cert = is_1ae_optimal(d, t);
        if (cert.optimal) break;
        const int before = t.leaf_count();
        auto res = apply_move(d, t, *cert.violating_move);
        if (!res.ok() || res.branching->leaf_count() <= before)
            throw std::logic_error("improving exchange was rejected");
        t = std::move(*res.branching);
        ++moves;
    }
    if (stats) stats->moves = moves;
    return t;
}

namespace {

std::optional<OutBranching> random_bfs(const Digraph& d, Vertex root, Rng& rng) {
    std::vector<Vertex> parent(d.n(), kAbsent);
    parent[root] = kNoVertex;
    std::deque<Vertex> queue{root};
    int reached = 1;
    std::vector<Vertex> nbrs;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        nbrs.assign(d.out(u).begin(), d.out(u).end());
        rng.shuffle(nbrs);
        for (Vertex w : nbrs)
            if (parent[w] == kAbsent) {
                parent[w] = u;
                ++reached;
                queue.push_back(w);
            }
    }
    if (reached != d.n()) return std::nullopt;
    return OutBranching(root, std::move(parent));
}

std::optional<OutBranching> random_dfs(const Digraph& d, Vertex root, Rng& rng) {
    std::vector<Vertex> parent(d.n(), kAbsent);
    parent[root] = kNoVertex;
    int reached = 1;
    struct Frame {
        Vertex v;
        std::vector<Vertex> nbrs;
        std::size_t pos = 0;
    };
    auto make_frame = [&](Vertex v) {
        Frame f{v, {d.out(v).begin(), d.out(v).end()}, 0};
        rng.shuffle(f.nbrs);
        return f;
    };
    std::vector<Frame> stack;
    stack.push_back(make_frame(root));
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.pos == f.nbrs.size()) {
            stack.pop_back();
            continue;
        }
        Vertex w = f.nbrs[f.pos++];
        if (parent[w] != kAbsent) continue;
        parent[w] = f.v;
        ++reached;
        stack.push_back(make_frame(w));
    }
    if (reached != d.n()) return std::nullopt;
    return OutBranching(root, std::move(parent));
}

bool better(const OutBranching& a, const OutBranching& b) {
    int la = a.leaf_count(), lb = b.leaf_count();
    if (la != lb) return la > lb;
    return a.arcs() < b.arcs();
}

}  // namespace

OutBranching best_of_restarts(const Digraph& d, const std::vector<Vertex>& roots, int starts_per_root,
                              std::uint64_t seed) {
    if (roots.empty()) throw std::invalid_argument("best_of_restarts needs at least one root");
    if (starts_per_root < 1) throw std::invalid_argument("starts_per_root must be positive");
    std::optional<OutBranching> best;
    for (Vertex root : roots) {
        if (!d.contains(root)) throw std::invalid_argument("root out of range");
        for (int s = 0; s < starts_per_root; ++s) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(root), static_cast<std::uint64_t>(s)));
            auto start = s % 2 == 0 ? random_bfs(d, root, rng) : random_dfs(d, root, rng);
            if (!start)
                throw std::invalid_argument("root " + std::to_string(root) + " does not reach every vertex");
            auto t = improve_to_1ae(d, std::move(*start));
            if (!best || better(t, *best)) best = std::move(t);
        }
    }
    return std::move(*best);
}

}  // namespace mlob
