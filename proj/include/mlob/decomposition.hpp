#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mlob/branching.hpp"
#include "mlob/digraph.hpp"
#include "mlob/oracles.hpp"

namespace mlob {

/// Ordered bags of vertex ids; each bag is kept sorted.
struct PathDecomposition {
    std::vector<std::vector<Vertex>> bags;

    /// max bag size - 1; -1 for no bags.
    int width() const;
    friend bool operator==(const PathDecomposition&, const PathDecomposition&) = default;
};

enum class PdAxiom {
    vertex_range,  // a bag mentions a vertex outside the graph
    coverage,      // some vertex is in no bag
    edge,          // some edge has no bag holding both ends
    contiguity,    // a vertex's bags are not consecutive
};

std::string to_string(PdAxiom a);

struct PdViolation {
    PdAxiom axiom;
    Vertex vertex = kNoVertex;
    std::pair<Vertex, Vertex> edge{kNoVertex, kNoVertex};
    std::string message;
};

std::optional<PdViolation> validate_pd(const UndirectedGraph& g, const PathDecomposition& p);

/// Bag j holds v_j and every earlier vertex with a neighbor at position >= j.
/// Width equals vertex_separation_cost(g, order).
PathDecomposition ordering_to_decomposition(const UndirectedGraph& g, std::span<const Vertex> order);

/// Shrinks each vertex to the shortest bag interval still covering its edges,
/// then drops bags contained in a neighboring bag. Never increases width.
PathDecomposition tighten(const UndirectedGraph& g, PathDecomposition p);

/// Precondition failure of a constructive decomposition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A construction step whose guarantee did not hold. These indicate bugs.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Either an out-branching with at least k leaves or a path decomposition of
/// the underlying graph, together with the bookkeeping of the construction.
struct DecompositionOutcome {
    std::optional<OutBranching> witness;
    /// Out-tree with at least k leaves behind the witness; set alone when
    /// StrongOptions::accept_out_tree is on and it could not be completed.
    std::optional<OutTree> tree_witness;
    std::optional<PathDecomposition> decomposition;
    int k = 0;
    int search_leaves = 0;   // leaves of the 1-AE optimal out-branching used
    int width = -1;          // of the returned decomposition
    int raw_width = -1;      // before tightening
    int width_bound = 0;     // guaranteed bound for this construction
    int layers = 0;          // beta-tree layers (strong construction only)
    int layer_bound = 0;
    /// Every cross-target set stayed within 2k (always true for class L).
    bool cross_bound_held = true;

    bool has_witness() const { return witness.has_value() || tree_witness.has_value(); }
};

/// Acyclic digraph with one vertex of in-degree zero. The decomposition puts
/// leaves, branch vertices and first vertices of maximal link paths of a
/// 1-AE optimal out-branching into every bag of a width-1 decomposition of
/// the remaining link paths. width_bound = 4k - 6.
DecompositionOutcome decompose_acyclic(const Digraph& d, int k);

struct StrongOptions {
    /// Skip the class check; the caller knows l_s(D) = l(D) > 0.
    bool assume_class_l = false;
    /// Budget for the exact fallback when an out-tree witness cannot be
    /// extended greedily (only possible outside strongly connected inputs).
    Milliseconds witness_budget = Milliseconds(10'000);
    /// Return an out-tree witness as is when it does not extend greedily to
    /// an out-branching (enough for the out-tree problem).
    bool accept_out_tree = false;
};

/// Strongly connected digraph (or member of class L with an out-branching).
/// Builds decompositions of the beta-tree leaf paths and merges them bottom
/// up. width_bound = 2(t + 1.5)k for t beta-tree layers.
DecompositionOutcome decompose_strong(const Digraph& d, int k, const StrongOptions& options = {});

/// A vertex whose removal leaves components of weight at most half the total.
/// Among such vertices the one with the lightest heaviest component wins,
/// then the lighter own weight, then the lower id.
Vertex centroid(const UndirectedGraph& tree, std::span<const double> weight);

/// One node of a beta-decomposition: an out-tree over working ids. Ids below
/// the host size are original vertices; larger ids are clones.
struct BetaNode {
    std::vector<Vertex> vertices;
    std::vector<Vertex> parents;  // aligned with vertices; kNoVertex for the root
    Vertex root = kNoVertex;
    int leaves = 0;
    int layer = 1;
    int first_child = -1;
    int second_child = -1;
    Vertex separator = kNoVertex;
    Vertex clone = kNoVertex;

    bool is_leaf() const { return first_child < 0; }
};

struct BetaSplit {
    BetaNode first;   // separator side holding the first group of components
    BetaNode second;
    Vertex separator = kNoVertex;
    Vertex clone = kNoVertex;            // working id of the copy
    std::vector<int> component_leaves;   // sorted as used for the prefix choice
    bool case_a = true;
    int prefix = 0;                      // components in the first group
    bool prefix_adjusted = false;        // the prefix rule left a side empty
    bool within_case_bounds = true;
    int cross_first_to_second = 0;       // distinct out-neighbors across the split
    int cross_second_to_first = 0;
};

struct BetaTree {
    int host_size = 0;
    std::vector<BetaNode> nodes;   // nodes[0] is the root
    std::vector<Vertex> origin;    // working id -> original vertex
    int layers = 0;

    bool is_clone(Vertex id) const { return id >= host_size; }
    /// Original vertices of a node, clones dropped. Leaf-node sets partition V(D).
    std::vector<Vertex> originals(const BetaNode& node) const;
    /// Vertices of a leaf node from root to leaf.
    std::vector<Vertex> path(const BetaNode& node) const;
};

/// 2 + ceil(log_{4/3} max(lambda, 1)).
int beta_layer_bound(int lambda);

/// Splits an out-branching with lambda >= 2 leaves at a leaf-weighted
/// centroid. Throws std::invalid_argument for lambda < 2.
BetaSplit beta_split(const Digraph& d, const OutBranching& t);

BetaTree build_beta_tree(const Digraph& d, const OutBranching& t);

}  // namespace mlob
