#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlob/digraph.hpp"

namespace mlob {

/// Marks a host vertex that is not part of an out-tree.
inline constexpr Vertex kAbsent = -2;

/// Out-tree over a host vertex set 0..n-1, stored as a parent assignment.
///
/// `parent[v]` is kNoVertex for the root and kAbsent for vertices the tree
/// does not cover. An out-branching is an out-tree covering every host
/// vertex. Construction only checks that parent ids are in range; whether the
/// assignment is actually a tree in some digraph is the job of `validate`.
class OutTree {
public:
    OutTree() = default;
    OutTree(Vertex root, std::vector<Vertex> parent);

    /// Tree with the single vertex `root` on a host of n vertices.
    static OutTree single_vertex(int n, Vertex root);
    /// Builds the parent map from tree arcs; throws if some vertex gets two parents.
    static OutTree from_arcs(int n, Vertex root, const std::vector<Arc>& arcs);

    int host_size() const { return static_cast<int>(parent_.size()); }
    int size() const { return size_; }
    Vertex root() const { return root_; }
    Vertex parent(Vertex v) const { return parent_[v]; }
    const std::vector<Vertex>& parents() const { return parent_; }
    bool contains(Vertex v) const { return v >= 0 && v < host_size() && parent_[v] != kAbsent; }
    bool spans() const { return size_ == host_size(); }

    std::span<const Vertex> children(Vertex v) const { return children_[v]; }
    int out_degree(Vertex v) const { return static_cast<int>(children_[v].size()); }
    /// Out-degree zero. A lone root is not a leaf.
    bool is_leaf(Vertex v) const { return contains(v) && children_[v].empty() && size_ > 1; }
    int leaf_count() const;

    std::vector<Vertex> vertices() const;
    /// Tree arcs (p(v), v), sorted.
    std::vector<Arc> arcs() const;

    friend bool operator==(const OutTree& a, const OutTree& b) {
        return a.root_ == b.root_ && a.parent_ == b.parent_;
    }

private:
    Vertex root_ = kNoVertex;
    std::vector<Vertex> parent_;
    std::vector<std::vector<Vertex>> children_;
    int size_ = 0;
};

using OutBranching = OutTree;

enum class TreeViolationKind {
    host_mismatch,
    bad_root,
    missing_parent,
    non_host_arc,
    unreachable_from_root,
};

struct TreeViolation {
    TreeViolationKind kind;
    Vertex vertex = kNoVertex;
    Arc arc{kNoVertex, kNoVertex};
    std::string message;
};

/// Checks the out-branching invariants against `d`; returns the first failure.
std::optional<TreeViolation> validate(const Digraph& d, const OutBranching& t);
/// Same as validate without requiring the tree to span.
std::optional<TreeViolation> validate_out_tree(const Digraph& d, const OutTree& t);

/// Depths and pre/post numbering of a valid out-tree for O(1) ancestor tests.
class AncestryIndex {
public:
    explicit AncestryIndex(const OutTree& t);

    int depth(Vertex v) const { return depth_[v]; }
    /// True when u lies on the root path of v (u == v counts).
    bool is_ancestor(Vertex u, Vertex v) const {
        return enter_[u] <= enter_[v] && exit_[v] <= exit_[u];
    }
    /// Neither vertex is an ancestor of the other.
    bool siblings(Vertex u, Vertex v) const {
        return !is_ancestor(u, v) && !is_ancestor(v, u);
    }
    /// Vertices in preorder.
    const std::vector<Vertex>& preorder() const { return preorder_; }

private:
    std::vector<int> depth_, enter_, exit_;
    std::vector<Vertex> preorder_;
};

/// Leaves, link and branch vertices of an out-tree by tree out-degree
/// 0 / 1 / >= 2, plus the maximal directed paths of link vertices.
struct Classification {
    std::vector<Vertex> leaves;
    std::vector<Vertex> links;
    std::vector<Vertex> branches;
    /// Ordered by depth of the first vertex, then its id.
    std::vector<std::vector<Vertex>> link_paths;
    std::vector<Vertex> first_vertices;
};

Classification classify(const OutTree& t);

inline int leaf_count(const OutTree& t) { return t.leaf_count(); }

/// u and v do not lie on a common path from the root. Requires u != v.
bool siblings(const OutTree& t, Vertex u, Vertex v);

/// Breadth-first out-branching from `root` (lowest-id neighbor first).
/// Empty optional if `root` does not reach every vertex.
std::optional<OutBranching> bfs_out_branching(const Digraph& d, Vertex root);

/// Grows `t` into an out-branching by attaching unreached vertices one at a
/// time; each attachment keeps the leaf count from dropping. Empty optional
/// when the root of `t` does not reach every vertex.
std::optional<OutBranching> extend_to_branching(const Digraph& d, const OutTree& t);

}  // namespace mlob
