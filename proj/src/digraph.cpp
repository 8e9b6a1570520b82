#include "mlob/digraph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mlob {

namespace {

int checked_order(int n) {
    if (n < 0) throw GraphError("negative vertex count");
    return n;
}

}  // namespace

Digraph::Digraph(int n) : n_(checked_order(n)), out_(n_), in_(n_) {}

Digraph::Digraph(int n, std::vector<Arc> arcs) : Digraph(n) {
    for (const auto& [u, v] : arcs) {
        if (!contains(u) || !contains(v))
            throw GraphError("arc (" + std::to_string(u) + "," + std::to_string(v) +
                             ") has an endpoint outside 0.." + std::to_string(n - 1));
        if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
    }
    std::sort(arcs.begin(), arcs.end());
    auto dup = std::adjacent_find(arcs.begin(), arcs.end());
    if (dup != arcs.end())
        throw GraphError("duplicate arc (" + std::to_string(dup->first) + "," +
                         std::to_string(dup->second) + ")");
    arcs_ = std::move(arcs);
    for (const auto& [u, v] : arcs_) {
        out_[u].push_back(v);
        in_[v].push_back(u);
    }
    // out_ is sorted by construction; in_ is filled in order of u, so sorted too.
}

int Digraph::min_in_degree() const {
    int best = n_ == 0 ? 0 : in_degree(0);
    for (Vertex v = 1; v < n_; ++v) best = std::min(best, in_degree(v));
    return best;
}

bool Digraph::has_arc(Vertex u, Vertex v) const {
    if (!contains(u) || !contains(v)) return false;
    return std::binary_search(out_[u].begin(), out_[u].end(), v);
}

bool Digraph::is_oriented() const {
    for (const auto& [u, v] : arcs_)
        if (u < v && has_arc(v, u)) return false;
    return true;
}

UndirectedGraph::UndirectedGraph(int n, const std::vector<std::pair<Vertex, Vertex>>& edges)
    : adj_(n) {
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw GraphError("edge endpoint out of range");
        if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        edge_count_ += a.size();
    }
    edge_count_ /= 2;
}

bool UndirectedGraph::has_edge(Vertex u, Vertex v) const {
    if (u < 0 || u >= n()) return false;
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<std::pair<Vertex, Vertex>> UndirectedGraph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> result;
    result.reserve(edge_count_);
    for (Vertex u = 0; u < n(); ++u)
        for (Vertex v : adj_[u])
            if (u < v) result.emplace_back(u, v);
    return result;
}

UndirectedGraph UndirectedGraph::path(int n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return UndirectedGraph(n, e);
}

UndirectedGraph UndirectedGraph::cycle(int n) {
    auto e = path(n).edges();
    if (n >= 3) e.emplace_back(0, n - 1);
    return UndirectedGraph(n, e);
}

UndirectedGraph UndirectedGraph::complete(int n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return UndirectedGraph(n, e);
}

UndirectedGraph underlying_graph(const Digraph& d) {
    std::vector<std::pair<Vertex, Vertex>> e;
    e.reserve(d.m());
    for (const auto& [u, v] : d.arcs()) e.emplace_back(u, v);
    return UndirectedGraph(d.n(), e);
}

namespace {

// Iterative Tarjan. Returns raw component index per vertex (arbitrary labels).
std::vector<int> tarjan(const Digraph& d, int& count) {
    const int n = d.n();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<Vertex> stack;
    std::vector<std::pair<Vertex, std::size_t>> call;  // vertex, next out-neighbor position
    int next_index = 0;
    count = 0;

    for (Vertex s = 0; s < n; ++s) {
        if (index[s] != -1) continue;
        call.emplace_back(s, 0);
        index[s] = low[s] = next_index++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            auto out = d.out(v);
            if (pos < out.size()) {
                Vertex w = out[pos++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                Vertex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = count;
                } while (w != v);
                ++count;
            }
            Vertex done = v;
            call.pop_back();
            if (!call.empty()) {
                Vertex parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    return comp;
}

}  // namespace

StrongComponentIndex strong_components(const Digraph& d) {
    int raw_count = 0;
    auto raw = tarjan(d, raw_count);

    // relabel by smallest contained vertex
    std::vector<int> relabel(raw_count, -1);
    int next = 0;
    StrongComponentIndex idx;
    idx.component_id.assign(d.n(), -1);
    for (Vertex v = 0; v < d.n(); ++v) {
        int& label = relabel[raw[v]];
        if (label == -1) label = next++;
        idx.component_id[v] = label;
    }
    idx.members.resize(next);
    for (Vertex v = 0; v < d.n(); ++v) idx.members[idx.component_id[v]].push_back(v);

    std::vector<Arc> cond;
    for (const auto& [u, v] : d.arcs()) {
        int a = idx.component_id[u], b = idx.component_id[v];
        if (a != b) cond.emplace_back(a, b);
    }
    std::sort(cond.begin(), cond.end());
    cond.erase(std::unique(cond.begin(), cond.end()), cond.end());
    idx.condensation = Digraph(next, std::move(cond));
    for (int c = 0; c < next; ++c)
        if (idx.condensation.in_degree(c) == 0) idx.source_components.push_back(c);
    return idx;
}

bool is_strongly_connected(const Digraph& d) {
    if (d.n() == 0) return true;
    return strong_components(d).count() == 1;
}

bool is_acyclic(const Digraph& d) {
    return strong_components(d).count() == d.n();
}

std::optional<std::vector<Vertex>> out_branching_roots(const Digraph& d) {
    if (d.n() == 0) return std::nullopt;
    auto idx = strong_components(d);
    if (idx.source_components.size() != 1) return std::nullopt;
    return idx.members[idx.source_components.front()];
}

std::vector<Vertex> reachable_from(const Digraph& d, Vertex v) {
    if (!d.contains(v)) throw GraphError("vertex out of range");
    std::vector<char> seen(d.n(), 0);
    std::vector<Vertex> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : d.out(u))
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    std::vector<Vertex> result;
    for (Vertex u = 0; u < d.n(); ++u)
        if (seen[u]) result.push_back(u);
    return result;
}

Subdigraph induced_subdigraph(const Digraph& d, std::vector<Vertex> vertices) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    Subdigraph sub;
    sub.from_original.assign(d.n(), kNoVertex);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (!d.contains(vertices[i])) throw GraphError("vertex out of range");
        sub.from_original[vertices[i]] = static_cast<Vertex>(i);
    }
    std::vector<Arc> arcs;
    for (Vertex u : vertices)
        for (Vertex w : d.out(u))
            if (sub.from_original[w] != kNoVertex)
                arcs.emplace_back(sub.from_original[u], sub.from_original[w]);
    sub.graph = Digraph(static_cast<int>(vertices.size()), std::move(arcs));
    sub.to_original = std::move(vertices);
    return sub;
}

Subdigraph reachable_subdigraph(const Digraph& d, Vertex v) {
    return induced_subdigraph(d, reachable_from(d, v));
}

bool in_class_L(const Digraph& d) {
    auto idx = strong_components(d);
    // For each vertex q and each component R != comp(q) that sends an arc into
    // comp(q), q needs an in-neighbor in R.
    std::vector<std::vector<int>> feeding(idx.count());
    for (const auto& [a, b] : idx.condensation.arcs()) feeding[b].push_back(a);
    std::vector<int> mark(idx.count(), -1);
    for (Vertex q = 0; q < d.n(); ++q) {
        int cq = idx.component_id[q];
        for (Vertex p : d.in(q)) mark[idx.component_id[p]] = q;
        for (int r : feeding[cq])
            if (mark[r] != q) return false;
    }
    return true;
}

}  // namespace mlob
