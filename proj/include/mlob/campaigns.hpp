#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlob/branching.hpp"
#include "mlob/digraph.hpp"
#include "mlob/generators.hpp"
#include "mlob/oracles.hpp"

namespace mlob {

/// Outcome of one instance in a campaign.
enum class RecordStatus {
    pass_witnessed,  // local search met the requirement
    pass_oracle,     // the exact oracle met the requirement
    fail,
    skipped,         // instance does not meet the campaign's precondition
    undecided,       // budget ran out before a verdict
};

std::string to_string(RecordStatus s);

struct Record {
    std::string campaign;
    InstanceSpec spec;
    int n = 0;
    std::size_t m = 0;
    int k = -1;
    int search_leaves = -1;
    std::optional<int> oracle_value;
    bool oracle_exact = false;
    double bound = 0;         // (n/4)^(1/3) - 1 (theorem2)
    int needed = 0;           // ceil(bound) (theorem2)
    int width = -1;
    int width_bound = -1;
    int layers = -1;
    int layer_bound = -1;
    RecordStatus status = RecordStatus::skipped;
    double runtime_ms = 0;
    std::string detail;
    std::string command;      // reproduces this record

    bool failed() const { return status == RecordStatus::fail; }
};

struct Report {
    std::string campaign;
    std::vector<Record> records;

    bool passed() const;  // no fail and no undecided record
    std::map<std::string, int> counts() const;
    std::string to_csv() const;
    std::string to_json() const;
};

/// Column order of Report::to_csv. Frozen; extend only by appending.
extern const std::vector<std::string> kReportColumns;

struct CampaignOptions {
    Milliseconds budget = Milliseconds(30'000);  // per oracle call
    int threads = 1;
    int restarts = 3;          // local-search starts per root
    int restart_roots = 2;
    int oracle_up_to_n = 16;   // always run the oracle at or below this order
};

/// ceil((n/4)^(1/3) - 1), computed exactly: the least c >= 0 with 4(c+1)^3 >= n.
int theorem2_needed(int n);

/// Strongly connected with minimum in-degree >= 3, or strongly connected
/// oriented with minimum in-degree >= 2.
bool theorem2_applies(const Digraph& d);

Record verify_bound_theorem2(const InstanceSpec& spec, const CampaignOptions& options);
Report verify_bound_theorem2(const std::vector<InstanceSpec>& specs, const CampaignOptions& options);

/// Structural checks on a 1-AE optimal out-branching after pruning every
/// in-degree to 2, following the counting argument that bounds n by the
/// number of leaves.
struct Lemma2Result {
    Digraph pruned;
    bool pruned_to_two = false;     // every in-degree became exactly 2 (informational)
    bool certified = false;         // t is 1-AE optimal in the pruned digraph
    int forward_arcs = 0;           // forward arcs into a path P' (incl. from its first vertex)
    int foreign_arcs = 0;           // arcs into P' from ancestor or special vertices
    int max_backward_in_degree = 0; // <= 1 means the backward out-trees are disjoint
    int longest_backward_path = 0;
    std::optional<int> max_leaf_tree;  // l(pruned) when the oracle finished
    int leaf_lower_bound = 0;       // best known lower bound on l_s(d)
    bool size_bound_held = false;   // n <= 4(l_s + 1)^3
    std::string failure;

    bool passed() const { return failure.empty(); }
};

Lemma2Result verify_lemma2_structure(const Digraph& d, const OutBranching& t, Milliseconds oracle_budget,
                                     int oracle_up_to_n = 12);

Record verify_lemma2(const InstanceSpec& spec, const CampaignOptions& options);
Report verify_lemma2(const std::vector<InstanceSpec>& specs, const CampaignOptions& options);

/// Width and layer bounds of the constructive decompositions with k one
/// above the local-search witness.
Record verify_widths(const InstanceSpec& spec, const CampaignOptions& options);
Report verify_widths(const std::vector<InstanceSpec>& specs, const CampaignOptions& options);

/// Default instance lists, ordered by (family, parameters, seed).
std::vector<InstanceSpec> default_specs(const std::string& campaign, int count, std::uint64_t seed);

/// Runs fn(i) for i in [0, count) on `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace mlob
