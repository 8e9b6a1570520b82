#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mlob/branching.hpp"
#include "mlob/digraph.hpp"

namespace mlob {

using Milliseconds = std::chrono::milliseconds;
inline constexpr Milliseconds kNoBudget = Milliseconds::max();

enum class OracleStatus {
    exact,
    budget_exhausted,  // value is a lower bound carried by the witness
    no_branching,
};

struct MaxLeafResult {
    int value = 0;
    std::optional<OutTree> witness;
    OracleStatus status = OracleStatus::exact;
    std::uint64_t nodes = 0;  // search nodes visited

    bool exact() const { return status != OracleStatus::budget_exhausted; }
};

/// Exact maximum number of leaves over out-branchings (l_s), by branch and
/// bound over internal-vertex sets grown from each admissible root.
MaxLeafResult exact_max_leaf_branching(const Digraph& d, Milliseconds budget = kNoBudget);

/// Same, restricted to out-branchings rooted at `root`. No witness and
/// status no_branching when `root` does not reach every vertex.
MaxLeafResult exact_max_leaf_branching_rooted(const Digraph& d, Vertex root, Milliseconds budget = kNoBudget);

/// Exact maximum number of leaves over out-trees (l). Exhaustive over
/// internal-vertex subsets for n <= 10, otherwise the maximum of l_s over
/// the reachable subdigraphs.
MaxLeafResult exact_max_leaf_tree(const Digraph& d, Milliseconds budget = kNoBudget);

struct VertexOrdering {
    std::vector<Vertex> order;
    int cost = 0;
};

/// max_j |{v in V_j : v has a neighbor outside V_j}| for the prefixes V_j.
int vertex_separation_cost(const UndirectedGraph& g, std::span<const Vertex> order);

inline constexpr int kMaxExactSeparationVertices = 20;

/// Exact vertex separation number by dynamic programming over vertex
/// subsets. Throws std::length_error above kMaxExactSeparationVertices.
VertexOrdering exact_vertex_separation(const UndirectedGraph& g);

/// Pathwidth equals vertex separation number.
inline int exact_pathwidth(const UndirectedGraph& g) { return exact_vertex_separation(g).cost; }

}  // namespace mlob
