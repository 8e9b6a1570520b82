#include "mlob/decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mlob/local_search.hpp"

namespace mlob {

int PathDecomposition::width() const {
    int w = -1;
    for (const auto& bag : bags) w = std::max(w, static_cast<int>(bag.size()) - 1);
    return w;
}

std::string to_string(PdAxiom a) {
    switch (a) {
        case PdAxiom::vertex_range: return "vertex_range";
        case PdAxiom::coverage: return "coverage";
        case PdAxiom::edge: return "edge";
        case PdAxiom::contiguity: return "contiguity";
    }
    return "?";
}

namespace {

struct Intervals {
    std::vector<int> first, last, count;
};

// Occurrence intervals; a vertex repeated inside one bag counts once.
Intervals occurrence(int n, const PathDecomposition& p) {
    Intervals iv{std::vector<int>(n, -1), std::vector<int>(n, -1), std::vector<int>(n, 0)};
    for (int i = 0; i < static_cast<int>(p.bags.size()); ++i)
        for (Vertex v : p.bags[i]) {
            if (iv.last[v] == i) continue;
            if (iv.first[v] < 0) iv.first[v] = i;
            iv.last[v] = i;
            ++iv.count[v];
        }
    return iv;
}

PathDecomposition bags_from_intervals(int n, int bag_count, const std::vector<int>& lo, const std::vector<int>& hi) {
    PathDecomposition p;
    p.bags.assign(bag_count, {});
    for (Vertex v = 0; v < n; ++v)
        for (int i = lo[v]; i <= hi[v]; ++i) p.bags[i].push_back(v);
    return p;
}

bool subset(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void add_to_every_bag(PathDecomposition& p, const std::vector<Vertex>& extra) {
    for (auto& bag : p.bags) {
        bag.insert(bag.end(), extra.begin(), extra.end());
        std::sort(bag.begin(), bag.end());
        bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    }
}

void require_valid(const UndirectedGraph& g, const PathDecomposition& p, const char* what) {
    if (auto bad = validate_pd(g, p)) throw InternalError(std::string(what) + " produced an invalid decomposition: " + bad->message);
}

std::string arc_text(Vertex u, Vertex v) { return "(" + std::to_string(u) + "," + std::to_string(v) + ")"; }

}  // namespace

std::optional<PdViolation> validate_pd(const UndirectedGraph& g, const PathDecomposition& p) {
    const int n = g.n();
    for (const auto& bag : p.bags)
        for (Vertex v : bag)
            if (v < 0 || v >= n)
                return PdViolation{PdAxiom::vertex_range, v, {kNoVertex, kNoVertex},
                                   "bag vertex " + std::to_string(v) + " outside 0.." + std::to_string(n - 1)};
    Intervals iv = occurrence(n, p);
    for (Vertex v = 0; v < n; ++v)
        if (iv.first[v] < 0)
            return PdViolation{PdAxiom::coverage, v, {kNoVertex, kNoVertex}, "vertex " + std::to_string(v) + " is in no bag"};
    for (Vertex v = 0; v < n; ++v)
        if (iv.count[v] != iv.last[v] - iv.first[v] + 1)
            return PdViolation{PdAxiom::contiguity, v, {kNoVertex, kNoVertex},
                               "bags holding vertex " + std::to_string(v) + " are not consecutive"};
    for (auto [u, v] : g.edges())
        if (std::max(iv.first[u], iv.first[v]) > std::min(iv.last[u], iv.last[v]))
            return PdViolation{PdAxiom::edge, kNoVertex, {u, v}, "no bag holds both ends of edge {" + std::to_string(u) + "," + std::to_string(v) + "}"};
    return std::nullopt;
}

PathDecomposition ordering_to_decomposition(const UndirectedGraph& g, std::span<const Vertex> order) {
    const int n = g.n();
    if (static_cast<int>(order.size()) != n) throw std::invalid_argument("ordering must list every vertex once");
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i) {
        Vertex v = order[i];
        if (v < 0 || v >= n || pos[v] >= 0) throw std::invalid_argument("ordering must list every vertex once");
        pos[v] = i;
    }
    std::vector<int> reach(n);
    for (Vertex v = 0; v < n; ++v) {
        reach[v] = pos[v];
        for (Vertex w : g.neighbors(v)) reach[v] = std::max(reach[v], pos[w]);
    }
    PathDecomposition p;
    std::vector<Vertex> active;
    for (int j = 0; j < n; ++j) {
        std::erase_if(active, [&](Vertex v) { return reach[v] < j; });
        std::vector<Vertex> bag = active;
        bag.push_back(order[j]);
        std::sort(bag.begin(), bag.end());
        p.bags.push_back(std::move(bag));
        if (reach[order[j]] > j) active.push_back(order[j]);
    }
    return p;
}

PathDecomposition tighten(const UndirectedGraph& g, PathDecomposition p) {
    const int n = g.n();
    if (auto bad = validate_pd(g, p)) throw std::invalid_argument("tighten needs a valid decomposition: " + bad->message);
    const int bag_count = static_cast<int>(p.bags.size());
    Intervals iv = occurrence(n, p);
    std::vector<int>& lo = iv.first;
    std::vector<int>& hi = iv.last;

    std::vector<int> load(bag_count, 0);
    for (Vertex v = 0; v < n; ++v)
        for (int i = lo[v]; i <= hi[v]; ++i) ++load[i];

    // Each step keeps every edge covered: the new interval of v meets the
    // current interval of every neighbor. Intervals only shrink, so this ends.
    // Long intervals go first so that short ones stay put and act as anchors.
    std::vector<Vertex> order(n);
    for (bool changed = true; changed;) {
        changed = false;
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Vertex x, Vertex y) { return hi[x] - lo[x] > hi[y] - lo[y]; });
        for (Vertex v : order) {
            int a = bag_count, b = -1;  // a = min right end, b = max left end
            for (Vertex u : g.neighbors(v)) {
                a = std::min(a, hi[u]);
                b = std::max(b, lo[u]);
            }
            int new_lo, new_hi;
            if (g.degree(v) == 0 || b <= a) {
                // A single bag meets every neighbor interval; take the lightest.
                int from = std::max(g.degree(v) == 0 ? lo[v] : b, lo[v]);
                int to = std::min(g.degree(v) == 0 ? hi[v] : a, hi[v]);
                int pick = from;
                for (int i = from; i <= to; ++i)
                    if (load[i] < load[pick]) pick = i;
                new_lo = new_hi = pick;
            } else {
                new_lo = std::max(lo[v], a);
                new_hi = std::min(hi[v], b);
            }
            if (new_lo != lo[v] || new_hi != hi[v]) {
                for (int i = lo[v]; i <= hi[v]; ++i) --load[i];
                lo[v] = new_lo;
                hi[v] = new_hi;
                for (int i = lo[v]; i <= hi[v]; ++i) ++load[i];
                changed = true;
            }
        }
    }

    PathDecomposition shrunk = bags_from_intervals(n, bag_count, lo, hi);
    PathDecomposition out;
    for (auto& bag : shrunk.bags) {
        if (!out.bags.empty() && subset(bag, out.bags.back())) continue;
        while (!out.bags.empty() && subset(out.bags.back(), bag)) out.bags.pop_back();
        out.bags.push_back(std::move(bag));
    }
    return out;
}

DecompositionOutcome decompose_acyclic(const Digraph& d, int k) {
    const int n = d.n();
    if (n == 0) throw PreconditionError("decompose_acyclic needs a non-empty digraph");
    if (!is_acyclic(d)) throw PreconditionError("decompose_acyclic needs an acyclic digraph");
    Vertex source = kNoVertex;
    for (Vertex v = 0; v < n; ++v)
        if (d.in_degree(v) == 0) {
            if (source != kNoVertex) throw PreconditionError("decompose_acyclic needs exactly one vertex of in-degree zero");
            source = v;
        }

    DecompositionOutcome out;
    out.k = k;
    out.width_bound = 4 * k - 6;
    OutBranching t = improve_to_1ae(d, *bfs_out_branching(d, source));
    out.search_leaves = t.leaf_count();
    if (out.search_leaves >= k) {
        out.tree_witness = t;
        out.witness = std::move(t);
        return out;
    }

    Classification cls = classify(t);
    std::vector<char> in_w(n, 0);
    for (Vertex v : cls.leaves) in_w[v] = 1;
    for (Vertex v : cls.branches) in_w[v] = 1;
    for (Vertex v : cls.first_vertices) in_w[v] = 1;
    if (n == 1) in_w[0] = 1;

    // H: link paths without their first vertex. In a 1-AE optimal
    // out-branching of an acyclic digraph, H carries no arcs but its own.
    std::vector<int> path_of(n, -1), index_in_path(n, -1);
    std::vector<std::vector<Vertex>> h_paths;
    for (const auto& lp : cls.link_paths) {
        if (lp.size() < 2) continue;
        std::vector<Vertex> h(lp.begin() + 1, lp.end());
        for (int i = 0; i < static_cast<int>(h.size()); ++i) {
            path_of[h[i]] = static_cast<int>(h_paths.size());
            index_in_path[h[i]] = i;
        }
        h_paths.push_back(std::move(h));
    }
    for (auto [u, v] : d.arcs())
        if (path_of[u] >= 0 && path_of[v] >= 0 &&
            !(path_of[u] == path_of[v] && index_in_path[v] == index_in_path[u] + 1))
            throw InternalError("arc " + arc_text(u, v) + " joins link vertices outside the tree");

    std::vector<Vertex> w;
    for (Vertex v = 0; v < n; ++v)
        if (in_w[v]) w.push_back(v);

    // Width-1 decomposition of H with a singleton bag around every edge bag
    // and an empty bag between paths: the extra bags give tighten() room to
    // confine each vertex of W to the part of the sequence it needs.
    PathDecomposition p;
    p.bags.emplace_back();
    for (const auto& h : h_paths) {
        p.bags.push_back({h[0]});
        for (std::size_t i = 0; i + 1 < h.size(); ++i) {
            p.bags.push_back({std::min(h[i], h[i + 1]), std::max(h[i], h[i + 1])});
            p.bags.push_back({h[i + 1]});
        }
        p.bags.emplace_back();
    }
    add_to_every_bag(p, w);

    UndirectedGraph g = underlying_graph(d);
    require_valid(g, p, "decompose_acyclic");
    out.raw_width = p.width();
    p = tighten(g, std::move(p));
    require_valid(g, p, "tighten");
    out.width = p.width();
    out.decomposition = std::move(p);
    return out;
}

namespace {

// Turns an out-tree with at least k leaves into an out-branching with at
// least k leaves.
std::optional<OutBranching> complete_witness(const Digraph& d, const OutTree& tree, int k, const StrongOptions& options) {
    if (tree.leaf_count() < k) throw InternalError("out-tree witness has too few leaves");
    if (auto b = extend_to_branching(d, tree); b && b->leaf_count() >= k) return *b;
    if (options.accept_out_tree) return std::nullopt;
    MaxLeafResult r = exact_max_leaf_branching(d, options.witness_budget);
    if (r.witness && r.value >= k) return *r.witness;
    throw InternalError("an out-tree with " + std::to_string(tree.leaf_count()) +
                        " leaves exists but no out-branching with that many leaves was found");
}

struct StrongBuild {
    const Digraph& d;
    int k;
    const StrongOptions& options;
    const BetaTree& beta;
    const std::vector<char>& in_w;
    std::optional<OutBranching> witness;
    std::optional<OutTree> tree_witness;
    bool cross_bound_held = true;

    void found(const OutTree& tree) {
        tree_witness = tree;
        witness = complete_witness(d, tree, k, options);
    }

    // Decomposition of the leaf path of a beta leaf node, or a witness.
    std::optional<PathDecomposition> leaf_path(const BetaNode& node) {
        const int n = d.n();
        std::vector<Vertex> q;
        for (Vertex v : beta.path(node))
            if (!beta.is_clone(v)) q.push_back(v);
        const int len = static_cast<int>(q.size());
        std::vector<int> pos(n, -1);
        for (int i = 0; i < len; ++i) pos[q[i]] = i;

        // R: path arcs plus arcs avoiding W; all of the latter point backwards.
        std::vector<std::pair<Vertex, Vertex>> edges;
        std::vector<std::vector<int>> backward_sources(len);
        for (int i = 0; i < len; ++i)
            for (Vertex w : d.out(q[i])) {
                int j = pos[w];
                if (j < 0) continue;
                if (j == i + 1) {
                    edges.emplace_back(i, j);
                    continue;
                }
                if (in_w[q[i]] || in_w[w]) continue;
                if (j > i) throw InternalError("forward arc " + arc_text(q[i], w) + " on a leaf path");
                edges.emplace_back(j, i);
                backward_sources[j].push_back(i);
            }
        UndirectedGraph r(len, edges);

        // Boundary of the first j+1 path vertices: q_j and the targets of
        // backward arcs from later vertices.
        for (int j = 0; j + 1 < len; ++j) {
            std::vector<int> targets;
            for (int x = 0; x <= j; ++x)
                for (int y : backward_sources[x])
                    if (y > j) {
                        targets.push_back(x);
                        break;
                    }
            if (static_cast<int>(targets.size()) + 1 <= k) continue;
            // Path suffix plus one backward arc into each target.
            std::vector<Vertex> parent(n, kAbsent);
            parent[q[j + 1]] = kNoVertex;
            for (int i = j + 2; i < len; ++i) parent[q[i]] = q[i - 1];
            for (int x : targets) {
                int y = *std::find_if(backward_sources[x].begin(), backward_sources[x].end(), [&](int s) { return s > j; });
                parent[q[x]] = q[y];
            }
            found(OutTree(q[j + 1], std::move(parent)));
            return std::nullopt;
        }

        std::vector<Vertex> identity(len);
        std::iota(identity.begin(), identity.end(), 0);
        PathDecomposition local = ordering_to_decomposition(r, identity);
        PathDecomposition p;
        for (const auto& bag : local.bags) {
            std::vector<Vertex> mapped;
            for (int i : bag) mapped.push_back(q[i]);
            std::sort(mapped.begin(), mapped.end());
            p.bags.push_back(std::move(mapped));
        }
        std::vector<Vertex> w_here;
        for (Vertex v : q)
            if (in_w[v]) w_here.push_back(v);
        add_to_every_bag(p, w_here);
        return p;
    }

    // Out-tree of a beta node mapped to original vertices, grown by one arc
    // into each cross target outside it.
    OutTree node_tree_with_targets(const BetaNode& node, const std::vector<Vertex>& sources,
                                   const std::vector<Vertex>& targets) {
        const int n = d.n();
        std::vector<Vertex> parent(n, kAbsent);
        for (std::size_t i = 0; i < node.vertices.size(); ++i) {
            Vertex v = beta.origin[node.vertices[i]];
            Vertex p = node.parents[i];
            parent[v] = p == kNoVertex ? kNoVertex : beta.origin[p];
        }
        std::vector<char> is_source(n, 0);
        for (Vertex v : sources) is_source[v] = 1;
        for (Vertex w : targets) {
            if (parent[w] != kAbsent) continue;
            for (Vertex u : d.in(w))
                if (is_source[u]) {
                    parent[w] = u;
                    break;
                }
        }
        return OutTree(beta.origin[node.root], std::move(parent));
    }

    std::vector<Vertex> cross_targets(const std::vector<Vertex>& from, const std::vector<char>& in_to) {
        std::vector<Vertex> out;
        std::vector<char> hit(d.n(), 0);
        for (Vertex u : from)
            for (Vertex w : d.out(u))
                if (in_to[w] && !hit[w]) {
                    hit[w] = 1;
                    out.push_back(w);
                }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::optional<PathDecomposition> run() {
        const int count = static_cast<int>(beta.nodes.size());
        std::vector<PathDecomposition> decomp(count);
        for (int i = count - 1; i >= 0; --i) {
            const BetaNode& node = beta.nodes[i];
            if (node.is_leaf()) {
                auto p = leaf_path(node);
                if (!p) return std::nullopt;
                decomp[i] = std::move(*p);
                continue;
            }
            const BetaNode& a = beta.nodes[node.first_child];
            const BetaNode& b = beta.nodes[node.second_child];
            std::vector<Vertex> va = beta.originals(a), vb = beta.originals(b);
            std::vector<char> in_a(d.n(), 0), in_b(d.n(), 0);
            for (Vertex v : va) in_a[v] = 1;
            for (Vertex v : vb) in_b[v] = 1;
            std::vector<Vertex> a_to_b = cross_targets(va, in_b);
            std::vector<Vertex> b_to_a = cross_targets(vb, in_a);
            for (auto [from, from_set, targets] : {std::tuple{&a, &va, &a_to_b}, std::tuple{&b, &vb, &b_to_a}}) {
                if (static_cast<int>(targets->size()) <= k) continue;
                OutTree tree = node_tree_with_targets(*from, *from_set, *targets);
                if (tree.leaf_count() < k) continue;
                found(tree);
                return std::nullopt;
            }
            std::vector<Vertex> y = a_to_b;
            y.insert(y.end(), b_to_a.begin(), b_to_a.end());
            if (static_cast<int>(y.size()) > 2 * k) cross_bound_held = false;
            PathDecomposition p = std::move(decomp[node.first_child]);
            for (auto& bag : decomp[node.second_child].bags) p.bags.push_back(std::move(bag));
            add_to_every_bag(p, y);
            decomp[i] = std::move(p);
            decomp[node.first_child] = {};
            decomp[node.second_child] = {};
        }
        return std::move(decomp[0]);
    }
};

}  // namespace

DecompositionOutcome decompose_strong(const Digraph& d, int k, const StrongOptions& options) {
    const int n = d.n();
    if (n == 0) throw PreconditionError("decompose_strong needs a non-empty digraph");
    auto roots = out_branching_roots(d);
    if (!roots) throw PreconditionError("decompose_strong needs a digraph with an out-branching");
    if (!options.assume_class_l && !is_strongly_connected(d) && !in_class_L(d))
        throw PreconditionError("decompose_strong needs a strongly connected digraph or one in class L");

    DecompositionOutcome out;
    out.k = k;
    out.layer_bound = beta_layer_bound(std::max(k, 2));
    OutBranching t = improve_to_1ae(d, *bfs_out_branching(d, roots->front()));
    out.search_leaves = t.leaf_count();
    if (out.search_leaves >= k) {
        out.tree_witness = t;
        out.witness = std::move(t);
        return out;
    }

    Classification cls = classify(t);
    std::vector<char> in_w(n, 0);
    for (Vertex v : cls.leaves) in_w[v] = 1;
    for (Vertex v : cls.branches) in_w[v] = 1;
    for (Vertex v : cls.first_vertices) in_w[v] = 1;

    BetaTree beta = build_beta_tree(d, t);
    out.layers = beta.layers;
    out.width_bound = (2 * beta.layers + 3) * k;

    StrongBuild build{d, k, options, beta, in_w, std::nullopt, std::nullopt, true};
    std::optional<PathDecomposition> p = build.run();
    out.cross_bound_held = build.cross_bound_held;
    if (!p) {
        out.witness = std::move(build.witness);
        out.tree_witness = std::move(build.tree_witness);
        return out;
    }
    UndirectedGraph g = underlying_graph(d);
    require_valid(g, *p, "decompose_strong");
    out.raw_width = p->width();
    *p = tighten(g, std::move(*p));
    require_valid(g, *p, "tighten");
    out.width = p->width();
    out.decomposition = std::move(p);
    return out;
}

}  // namespace mlob
