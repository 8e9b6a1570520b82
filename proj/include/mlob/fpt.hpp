#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlob/branching.hpp"
#include "mlob/decomposition.hpp"
#include "mlob/digraph.hpp"
#include "mlob/oracles.hpp"

namespace mlob {

enum class NiceKind { introduce, forget };

struct NiceStep {
    NiceKind kind;
    Vertex vertex;
    friend bool operator==(const NiceStep&, const NiceStep&) = default;
};

/// Introduce/forget sequence visiting the bags in order. Between consecutive
/// bags the departing vertices are forgotten before the new ones are
/// introduced (each group ascending); the last bag is forgotten at the end.
std::vector<NiceStep> to_nice(const PathDecomposition& p);

/// Bell(m) * 4^m, saturating at UINT64_MAX.
std::uint64_t dp_state_bound(int m);

struct DpOptions {
    /// Discard states that cannot reach this many leaves.
    int lower_bound = 0;
    /// Abort when one step holds more states than this.
    std::uint64_t max_states_per_step = 4'000'000;
    Milliseconds budget = kNoBudget;
};

enum class DpStatus {
    optimal,           // value and witness are exact
    below_bound,       // no out-branching reaches lower_bound leaves
    state_limit,
    budget_exhausted,
};

std::string to_string(DpStatus s);

struct DpResult {
    DpStatus status = DpStatus::optimal;
    int value = -1;
    std::optional<OutBranching> witness;
    int width = -1;
    std::uint64_t states_peak = 0;     // most states held after one step
    std::uint64_t states_total = 0;
    std::uint64_t state_bound = 0;     // dp_state_bound(width + 1)
    std::vector<std::uint64_t> states_per_step;
};

/// Maximum number of leaves of an out-branching of d rooted at `root`
/// (any root when root == kNoVertex), by dynamic programming along the nice
/// form of a path decomposition of the underlying graph. Throws
/// std::invalid_argument when p is not a valid decomposition.
DpResult dp_max_leaf(const Digraph& d, const PathDecomposition& p, Vertex root = kNoVertex,
                     const DpOptions& options = {});

enum class Answer { yes, no, unsupported, budget_exhausted };

std::string to_string(Answer a);

struct DecideOptions {
    Milliseconds budget = kNoBudget;
    std::uint64_t max_states_per_step = 4'000'000;
    int local_search_starts = 4;
    int local_search_roots = 4;
    std::uint64_t seed = 1;
    /// Replace the constructed decomposition by an optimal one when the
    /// digraph is small enough for the exact vertex separation routine.
    bool refine_small_decompositions = true;
};

struct DecideResult {
    Answer answer = Answer::unsupported;
    int k = 0;
    std::optional<OutTree> witness;
    int leaves = -1;               // leaves of the witness
    std::string method = "none";   // "local-search" or "dp"
    int width = -1;                // width of the decomposition used by the DP
    int constructed_width = -1;    // width of the structural decomposition
    std::uint64_t states_peak = 0;
    std::string detail;
};

/// Does d have an out-branching with at least k leaves? Supported inputs:
/// strongly connected digraphs, acyclic digraphs with one source, and
/// members of class L; other inputs answer unsupported.
DecideResult decide_k_dmlob(const Digraph& d, int k, const DecideOptions& options = {});

/// Does d have an out-tree with at least k leaves? Runs the branching
/// pipeline on the subdigraph reachable from each strong component.
DecideResult decide_k_dmlot(const Digraph& d, int k, const DecideOptions& options = {});

std::string to_json(const DecideResult& r);

}  // namespace mlob
