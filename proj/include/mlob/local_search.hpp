#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlob/branching.hpp"
#include "mlob/digraph.hpp"

namespace mlob {

/// Replace the tree arcs `removed` by the non-tree arcs `added` (equal sizes).
struct ExchangeMove {
    std::vector<Arc> removed;
    std::vector<Arc> added;

    std::size_t size() const { return removed.size(); }
    friend bool operator==(const ExchangeMove&, const ExchangeMove&) = default;
};

enum class RejectReason {
    none,
    disconnected,  // some non-root vertex lost its only parent
    two_parents,
    cycle,
};

std::string to_string(RejectReason r);

struct MoveOutcome {
    std::optional<OutBranching> branching;
    RejectReason reason = RejectReason::none;
    Vertex witness = kNoVertex;  // vertex exhibiting the rejection

    bool ok() const { return branching.has_value(); }
};

/// Applies the exchange. Throws std::invalid_argument when the move is not
/// well formed against t and d (sizes differ, removed arc not in the tree,
/// added arc not a non-tree host arc, duplicates).
MoveOutcome apply_move(const Digraph& d, const OutBranching& t, const ExchangeMove& m);

enum class LemmaCondition { a, b, c, generic };

std::string to_string(LemmaCondition c);

struct Certificate {
    bool optimal = true;
    std::optional<ExchangeMove> violating_move;
    std::optional<LemmaCondition> violated_condition;
};

/// Decides whether any single-arc exchange yields strictly more leaves.
/// The first improving move in lexicographic order (removed arc, then added
/// arc) is reported.
Certificate is_1ae_optimal(const Digraph& d, const OutBranching& t);

/// Exhaustive l-arc-exchange check for l in {1, 2}. Enumerates every pair of
/// arc subsets, so it is guarded by `max_candidates` (number of (F, X) pairs).
Certificate is_ae_optimal(const Digraph& d, const OutBranching& t, int ell,
                          std::uint64_t max_candidates = 50'000'000);

struct LemmaViolation {
    LemmaCondition condition;
    Arc arc;
    Vertex witness = kNoVertex;  // for (c): the cycle vertex x with d+(p(x)) = 1
};

/// Violations of the necessary conditions (a), (b), (c) for 1-AE optimality.
std::vector<LemmaViolation> check_lemma1(const Digraph& d, const OutBranching& t);

struct ImproveStats {
    int moves = 0;
};

/// Applies first improving single-arc exchanges until none is left.
OutBranching improve_to_1ae(const Digraph& d, OutBranching t, ImproveStats* stats = nullptr);

/// Randomized BFS/DFS starts from each root, each improved to 1-AE
/// optimality; the best by (leaf count, lexicographically smallest arc list)
/// is returned. Deterministic for a given seed. Throws on an empty root set
/// or a root that does not reach every vertex.
OutBranching best_of_restarts(const Digraph& d, const std::vector<Vertex>& roots,
                              int starts_per_root, std::uint64_t seed);

}  // namespace mlob
