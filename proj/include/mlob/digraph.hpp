#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlob {

using Vertex = int;
using Arc = std::pair<Vertex, Vertex>;

inline constexpr Vertex kNoVertex = -1;

/// Raised when a digraph would violate its invariants (self-loop, duplicate
/// arc, endpoint out of range).
class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Simple digraph on the dense vertex set 0..n-1.
///
/// Arcs are kept sorted lexicographically; out- and in-adjacency lists are
/// sorted as well, so `has_arc` is a binary search. Values are immutable once
/// constructed.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(int n);
    /// Throws GraphError on self-loops, duplicates or out-of-range endpoints.
    Digraph(int n, std::vector<Arc> arcs);

    int n() const { return n_; }
    std::size_t m() const { return arcs_.size(); }
    const std::vector<Arc>& arcs() const { return arcs_; }

    std::span<const Vertex> out(Vertex v) const { return out_[v]; }
    std::span<const Vertex> in(Vertex v) const { return in_[v]; }
    int out_degree(Vertex v) const { return static_cast<int>(out_[v].size()); }
    int in_degree(Vertex v) const { return static_cast<int>(in_[v].size()); }
    int min_in_degree() const;

    bool has_arc(Vertex u, Vertex v) const;
    /// An arc (u,v) whose reverse (v,u) is also present.
    bool is_double(Vertex u, Vertex v) const { return has_arc(u, v) && has_arc(v, u); }
    /// True when no directed 2-cycle exists.
    bool is_oriented() const;

    bool contains(Vertex v) const { return v >= 0 && v < n_; }

    friend bool operator==(const Digraph& a, const Digraph& b) {
        return a.n_ == b.n_ && a.arcs_ == b.arcs_;
    }

private:
    int n_ = 0;
    std::vector<Arc> arcs_;
    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
};

/// Simple undirected graph with sorted adjacency lists.
class UndirectedGraph {
public:
    UndirectedGraph() = default;
    explicit UndirectedGraph(int n) : adj_(n) {}
    /// Parallel edges are collapsed; self-loops rejected.
    UndirectedGraph(int n, const std::vector<std::pair<Vertex, Vertex>>& edges);

    int n() const { return static_cast<int>(adj_.size()); }
    std::size_t edge_count() const { return edge_count_; }
    std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
    int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
    bool has_edge(Vertex u, Vertex v) const;
    /// Edges {u,v} with u < v, sorted.
    std::vector<std::pair<Vertex, Vertex>> edges() const;

    static UndirectedGraph path(int n);
    static UndirectedGraph cycle(int n);
    static UndirectedGraph complete(int n);

private:
    std::vector<std::vector<Vertex>> adj_;
    std::size_t edge_count_ = 0;
};

UndirectedGraph underlying_graph(const Digraph& d);

struct StrongComponentIndex {
    /// Labels are assigned in order of the smallest vertex they contain.
    std::vector<int> component_id;
    std::vector<std::vector<Vertex>> members;
    Digraph condensation;
    std::vector<int> source_components;

    int count() const { return static_cast<int>(members.size()); }
};

StrongComponentIndex strong_components(const Digraph& d);
bool is_strongly_connected(const Digraph& d);
bool is_acyclic(const Digraph& d);

/// Roots from which an out-branching exists: the vertices of the unique
/// source strong component. Empty optional when there is no out-branching.
std::optional<std::vector<Vertex>> out_branching_roots(const Digraph& d);
inline bool has_out_branching(const Digraph& d) { return out_branching_roots(d).has_value(); }

/// Vertices reachable from `v` (including v), ascending.
std::vector<Vertex> reachable_from(const Digraph& d, Vertex v);

/// An induced subdigraph with its relabeling.
struct Subdigraph {
    Digraph graph;
    std::vector<Vertex> to_original;    // new id -> old id
    std::vector<Vertex> from_original;  // old id -> new id, kNoVertex if absent
};

/// Induced subdigraph on `vertices`; new ids follow ascending old ids.
Subdigraph induced_subdigraph(const Digraph& d, std::vector<Vertex> vertices);

/// The subdigraph induced by everything reachable from `v`.
Subdigraph reachable_subdigraph(const Digraph& d, Vertex v);

/// For every pair of distinct strong components R, Q with an arc R -> Q,
/// every vertex of Q has an in-neighbor in R. This is a sufficient
/// condition for l_s(D) in {0, l(D)}, not a characterization.
bool in_class_L(const Digraph& d);

}  // namespace mlob
