#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "mlob/decomposition.hpp"

namespace mlob {

Vertex centroid(const UndirectedGraph& tree, std::span<const double> weight) {
    const int n = tree.n();
    if (n == 0) throw std::invalid_argument("centroid of an empty tree");
    if (static_cast<int>(weight.size()) != n) throw std::invalid_argument("centroid: one weight per vertex required");
    if (static_cast<int>(tree.edge_count()) != n - 1) throw std::invalid_argument("centroid: graph is not a tree");
    for (double w : weight)
        if (!(w >= 0)) throw std::invalid_argument("centroid: weights must be non-negative");

    std::vector<Vertex> parent(n, kNoVertex), order;
    std::vector<char> seen(n, 0);
    order.reserve(n);
    order.push_back(0);
    seen[0] = 1;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (Vertex w : tree.neighbors(order[i]))
            if (!seen[w]) {
                seen[w] = 1;
                parent[w] = order[i];
                order.push_back(w);
            }
    if (static_cast<int>(order.size()) != n) throw std::invalid_argument("centroid: graph is not connected");

    std::vector<double> below(weight.begin(), weight.end());
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (parent[*it] != kNoVertex) below[parent[*it]] += below[*it];
    const double total = below[0];

    Vertex best = kNoVertex;
    std::tuple<double, double, Vertex> best_key;
    for (Vertex v = 0; v < n; ++v) {
        double heaviest = parent[v] == kNoVertex ? 0.0 : total - below[v];
        for (Vertex w : tree.neighbors(v))
            if (w != parent[v]) heaviest = std::max(heaviest, below[w]);
        std::tuple<double, double, Vertex> key{heaviest, weight[v], v};
        if (best == kNoVertex || key < best_key) {
            best = v;
            best_key = key;
        }
    }
    return best;
}

int beta_layer_bound(int lambda) {
    if (lambda <= 1) return 2;
    // Smallest integer e with (4/3)^e >= lambda, computed exactly.
    int e = 0;
    long double p = 1;
    while (p < lambda) {
        p *= 4.0L / 3.0L;
        ++e;
    }
    return 2 + e;
}

namespace {

// Out-tree of one beta node over local indices 0..k-1 (ascending working id).
struct LocalTree {
    std::vector<Vertex> ids;
    std::vector<int> parent;
    std::vector<std::vector<int>> children;
    int root = -1;
    std::vector<int> preorder;

    explicit LocalTree(const BetaNode& node) {
        const int k = static_cast<int>(node.vertices.size());
        std::vector<int> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return node.vertices[a] < node.vertices[b]; });
        std::unordered_map<Vertex, int> local;
        ids.resize(k);
        for (int i = 0; i < k; ++i) {
            ids[i] = node.vertices[idx[i]];
            local[ids[i]] = i;
        }
        parent.assign(k, -1);
        children.assign(k, {});
        for (int i = 0; i < k; ++i) {
            Vertex p = node.parents[idx[i]];
            if (p == kNoVertex) {
                root = i;
                continue;
            }
            parent[i] = local.at(p);
        }
        for (int i = 0; i < k; ++i)
            if (parent[i] >= 0) children[parent[i]].push_back(i);
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            preorder.push_back(v);
            for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) stack.push_back(*it);
        }
    }

    int size() const { return static_cast<int>(ids.size()); }
    bool is_leaf(int v) const { return children[v].empty() && size() > 1; }
};

int count_leaves(const std::vector<Vertex>& vertices, const std::vector<Vertex>& parents) {
    if (vertices.size() <= 1) return 0;
    std::vector<Vertex> sorted_parents;
    for (Vertex p : parents)
        if (p != kNoVertex) sorted_parents.push_back(p);
    std::sort(sorted_parents.begin(), sorted_parents.end());
    int leaves = 0;
    for (Vertex v : vertices)
        if (!std::binary_search(sorted_parents.begin(), sorted_parents.end(), v)) ++leaves;
    return leaves;
}

BetaNode make_node(std::vector<std::pair<Vertex, Vertex>> entries) {
    std::sort(entries.begin(), entries.end());
    BetaNode node;
    for (auto [v, p] : entries) {
        node.vertices.push_back(v);
        node.parents.push_back(p);
        if (p == kNoVertex) node.root = v;
    }
    node.leaves = count_leaves(node.vertices, node.parents);
    return node;
}

struct Component {
    std::vector<int> members;  // local indices
    int leaves = 0;
    Vertex min_id = 0;
    bool holds_root = false;
};

int count_cross(const Digraph& d, const std::vector<Vertex>& from, const std::vector<Vertex>& to) {
    std::vector<char> in_to(d.n(), 0), in_from(d.n(), 0), hit(d.n(), 0);
    for (Vertex v : to) in_to[v] = 1;
    for (Vertex v : from) in_from[v] = 1;
    int count = 0;
    for (Vertex u : from)
        for (Vertex w : d.out(u))
            if (in_to[w] && !in_from[w] && !hit[w]) {
                hit[w] = 1;
                ++count;
            }
    return count;
}

std::vector<Vertex> originals_of(const BetaNode& node, int host_size) {
    std::vector<Vertex> out;
    for (Vertex v : node.vertices)
        if (v < host_size) out.push_back(v);
    return out;
}

BetaSplit split_node(const Digraph& d, const BetaNode& node, std::vector<Vertex>& origin) {
    const int host = d.n();
    LocalTree t(node);
    const int k = t.size();

    std::vector<int> below(k, 0);  // leaves in each subtree
    for (auto it = t.preorder.rbegin(); it != t.preorder.rend(); ++it) {
        int v = *it;
        if (t.is_leaf(v)) below[v] = 1;
        if (t.parent[v] >= 0) below[t.parent[v]] += below[v];
    }
    const int lambda = below[t.root];
    if (lambda < 2) throw std::invalid_argument("beta_split needs an out-tree with at least two leaves");

    // Leaves of the component above v, counting p(v) when it becomes a leaf.
    auto upper_leaves = [&](int v) {
        int p = t.parent[v];
        return lambda - below[v] + (t.children[p].size() == 1 ? 1 : 0);
    };

    // Separator: smallest heaviest component (in leaves of T - v), then more
    // components, then lower id. The leaf-weighted centroid guarantees every
    // component has at most lambda/2 + 1 leaves.
    int sep = -1;
    std::tuple<int, int, Vertex> best_key;
    for (int v = 0; v < k; ++v) {
        int heaviest = 0;
        int parts = static_cast<int>(t.children[v].size());
        if (t.parent[v] >= 0) {
            heaviest = upper_leaves(v);
            ++parts;
        }
        for (int c : t.children[v]) heaviest = std::max(heaviest, below[c]);
        std::tuple<int, int, Vertex> key{heaviest, -parts, t.ids[v]};
        if (sep < 0 || key < best_key) {
            sep = v;
            best_key = key;
        }
    }
    if (2 * std::get<0>(best_key) > lambda + 2)
        throw std::logic_error("beta_split: no balanced separator found");

    std::vector<Component> comps;
    std::vector<char> in_sub(k, 0);
    for (int c : t.children[sep]) {
        Component comp;
        std::vector<int> stack{c};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            in_sub[x] = 1;
            comp.members.push_back(x);
            for (int y : t.children[x]) stack.push_back(y);
        }
        comp.leaves = below[c];
        comp.min_id = t.ids[*std::min_element(comp.members.begin(), comp.members.end())];
        comps.push_back(std::move(comp));
    }
    if (t.parent[sep] >= 0) {
        Component comp;
        comp.holds_root = true;
        for (int x : t.preorder)
            if (x != sep && !in_sub[x]) comp.members.push_back(x);
        comp.leaves = upper_leaves(sep);
        comp.min_id = t.ids[*std::min_element(comp.members.begin(), comp.members.end())];
        comps.push_back(std::move(comp));
    }
    for (auto& comp : comps) std::sort(comp.members.begin(), comp.members.end());
    std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
        return a.leaves != b.leaves ? a.leaves > b.leaves : a.min_id < b.min_id;
    });
    const int s = static_cast<int>(comps.size());
    if (s < 2) throw std::logic_error("beta_split: separator leaves a single component");

    BetaSplit out;
    for (const auto& comp : comps) out.component_leaves.push_back(comp.leaves);

    int j = s, prefix = 0;
    for (int i = 0; i < s; ++i) {
        prefix += comps[i].leaves;
        if (2 * prefix >= lambda + 2) {
            j = i + 1;
            break;
        }
    }
    out.case_a = 4 * comps[j - 1].leaves <= lambda + 2;
    int p = out.case_a ? j : 1;
    if (p >= s) {
        p = s - 1;
        out.prefix_adjusted = true;
    }
    out.prefix = p;

    int s1 = 0, s2 = 0;
    for (int i = 0; i < s; ++i) (i < p ? s1 : s2) += comps[i].leaves;
    bool bounds;
    if (out.case_a)
        bounds = 2 * s1 >= lambda + 2 && 4 * s1 <= 3 * (lambda + 2) && 4 * s2 >= lambda - 6 && 2 * s2 <= lambda;
    else
        bounds = 4 * s1 >= lambda + 2 && 2 * s1 <= lambda + 2 && 2 * s2 >= lambda - 2 && 4 * s2 <= 3 * lambda + 2;
    out.within_case_bounds = bounds && !out.prefix_adjusted;

    // The side with the root component (or the first side when the separator
    // is the root) keeps the separator; the other side gets a fresh copy.
    bool orig_is_first = true;
    for (int i = 0; i < s; ++i)
        if (comps[i].holds_root) orig_is_first = i < p;

    const Vertex sep_id = t.ids[sep];
    const Vertex clone = static_cast<Vertex>(origin.size());
    origin.push_back(origin[sep_id]);

    std::vector<std::pair<Vertex, Vertex>> orig_side, clone_side;
    orig_side.emplace_back(sep_id, t.parent[sep] >= 0 ? t.ids[t.parent[sep]] : kNoVertex);
    clone_side.emplace_back(clone, kNoVertex);
    for (int i = 0; i < s; ++i) {
        bool first_group = i < p;
        bool to_orig = first_group == orig_is_first;
        for (int x : comps[i].members) {
            Vertex par = t.parent[x] >= 0 ? t.ids[t.parent[x]] : kNoVertex;
            if (to_orig)
                orig_side.emplace_back(t.ids[x], par);
            else
                clone_side.emplace_back(t.ids[x], par == sep_id ? clone : par);
        }
    }
    BetaNode a = make_node(std::move(orig_side));
    BetaNode b = make_node(std::move(clone_side));
    if (orig_is_first) {
        out.first = std::move(a);
        out.second = std::move(b);
    } else {
        out.first = std::move(b);
        out.second = std::move(a);
    }
    out.separator = sep_id;
    out.clone = clone;

    auto first_set = originals_of(out.first, host);
    auto second_set = originals_of(out.second, host);
    out.cross_first_to_second = count_cross(d, first_set, second_set);
    out.cross_second_to_first = count_cross(d, second_set, first_set);
    return out;
}

BetaNode node_from_branching(const OutBranching& t) {
    std::vector<std::pair<Vertex, Vertex>> entries;
    for (Vertex v : t.vertices()) entries.emplace_back(v, t.parent(v));
    return make_node(std::move(entries));
}

void require_spanning(const Digraph& d, const OutBranching& t) {
    if (auto bad = validate(d, t)) throw std::invalid_argument("not an out-branching of the digraph: " + bad->message);
}

}  // namespace

std::vector<Vertex> BetaTree::originals(const BetaNode& node) const { return originals_of(node, host_size); }

std::vector<Vertex> BetaTree::path(const BetaNode& node) const {
    LocalTree t(node);
    std::vector<Vertex> out;
    for (int v = t.root; v >= 0;) {
        out.push_back(t.ids[v]);
        if (t.children[v].size() > 1) throw std::invalid_argument("beta node is not a path");
        v = t.children[v].empty() ? -1 : t.children[v][0];
    }
    return out;
}

BetaSplit beta_split(const Digraph& d, const OutBranching& t) {
    require_spanning(d, t);
    std::vector<Vertex> origin(d.n());
    std::iota(origin.begin(), origin.end(), 0);
    return split_node(d, node_from_branching(t), origin);
}

BetaTree build_beta_tree(const Digraph& d, const OutBranching& t) {
    require_spanning(d, t);
    BetaTree bt;
    bt.host_size = d.n();
    bt.origin.resize(d.n());
    std::iota(bt.origin.begin(), bt.origin.end(), 0);
    bt.nodes.push_back(node_from_branching(t));
    for (std::size_t i = 0; i < bt.nodes.size(); ++i) {
        if (bt.nodes[i].leaves < 2) continue;
        BetaSplit split = split_node(d, bt.nodes[i], bt.origin);
        const int layer = bt.nodes[i].layer + 1;
        split.first.layer = layer;
        split.second.layer = layer;
        bt.nodes[i].separator = split.separator;
        bt.nodes[i].clone = split.clone;
        bt.nodes[i].first_child = static_cast<int>(bt.nodes.size());
        bt.nodes[i].second_child = bt.nodes[i].first_child + 1;
        bt.nodes.push_back(std::move(split.first));
        bt.nodes.push_back(std::move(split.second));
    }
    for (const auto& node : bt.nodes) bt.layers = std::max(bt.layers, node.layer);
    return bt;
}

}  // namespace mlob
