#include "mlob/oracles.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "mlob/local_search.hpp"

namespace mlob {

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
public:
    explicit Deadline(Milliseconds budget) {
        if (budget != kNoBudget) end_ = Clock::now() + budget;
    }
    bool passed() const { return end_ && Clock::now() >= *end_; }

private:
    std::optional<Clock::time_point> end_;
};

// Builds an out-branching whose internal vertices are drawn from `internal`:
// breadth-first from root, only internal vertices expand.
std::optional<OutBranching> tree_from_internal_set(const Digraph& d, Vertex root,
                                                   const std::vector<char>& internal) {
    std::vector<Vertex> parent(d.n(), kAbsent);
    parent[root] = kNoVertex;
    std::deque<Vertex> queue{root};
    int reached = 1;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        if (!internal[u]) continue;
        for (Vertex w : d.out(u))
            if (parent[w] == kAbsent) {
                parent[w] = u;
                ++reached;
                queue.push_back(w);
            }
    }
    if (reached != d.n()) return std::nullopt;
    return OutBranching(root, std::move(parent));
}

// An out-branching rooted at r with internal vertex set I exists iff every
// vertex is dominated by I and I is grown from r; leaves >= n - |I|. The
// search repeatedly picks an attached, undecided vertex and branches on
// making it internal (expanding its out-neighbors) or fixing it as a leaf.
class BranchAndBound {
public:
    BranchAndBound(const Digraph& d, const Deadline& deadline) : d_(d), deadline_(deadline) {}

    // Improves `best` in place. Returns false when the deadline hit.
    bool run(Vertex root, int& best, std::optional<OutBranching>& witness, std::uint64_t& nodes) {
        const int n = d_.n();
        state_.assign(n, kUndominated);
        dom_count_.assign(n, 0);
        undominated_ = n - 1;
        internal_count_ = 0;
        state_[root] = kFrontier;
        if (n == 1) {
            if (best < 0) {
                best = 0;
                witness = OutTree::single_vertex(1, root);
            }
            return true;
        }
        root_ = root;
        best_ = &best;
        witness_ = &witness;
        nodes_ = &nodes;
        aborted_ = false;
        make_internal(root);
        search();
        return !aborted_;
    }

private:
    static constexpr char kUndominated = 0, kFrontier = 1, kInternal = 2, kLeaf = 3;

    int gain(Vertex v) const {
        int g = 0;
        for (Vertex w : d_.out(v))
            if (state_[w] == kUndominated) ++g;
        return g;
    }

    void make_internal(Vertex v) {
        state_[v] = kInternal;
        ++internal_count_;
        for (Vertex w : d_.out(v)) {
            if (dom_count_[w]++ == 0 && state_[w] == kUndominated) {
                state_[w] = kFrontier;
                --undominated_;
            }
        }
    }

    void undo_internal(Vertex v) {
        for (Vertex w : d_.out(v)) {
            if (--dom_count_[w] == 0 && state_[w] == kFrontier) {
                state_[w] = kUndominated;
                ++undominated_;
            }
        }
        --internal_count_;
        state_[v] = kFrontier;
    }

    void search() {
        if (aborted_) return;
        if ((++*nodes_ & 1023) == 0 && deadline_.passed()) {
            aborted_ = true;
            return;
        }
        const int n = d_.n();
        if (undominated_ == 0) {
            int value = n - internal_count_;
            if (value > *best_) {
                std::vector<char> internal(n, 0);
                for (Vertex v = 0; v < n; ++v) internal[v] = state_[v] == kInternal;
                auto t = tree_from_internal_set(d_, root_, internal);
                if (t) {
                    *best_ = std::max(value, t->leaf_count());
                    *witness_ = std::move(t);
                }
            }
            return;
        }

        // Bound: the remaining undominated vertices need at least as many new
        // internal vertices as it takes the largest current gains to cover them.
        gains_scratch_.clear();
        Vertex pick = kNoVertex;
        int pick_gain = 0;
        for (Vertex v = 0; v < n; ++v) {
            if (state_[v] != kUndominated && state_[v] != kFrontier) continue;
            int g = gain(v);
            if (g == 0) continue;
            gains_scratch_.push_back(g);
            if (state_[v] == kFrontier && g > pick_gain) {
                pick = v;
                pick_gain = g;
            }
        }
        if (pick == kNoVertex) return;  // undominated vertices are unreachable
        std::sort(gains_scratch_.begin(), gains_scratch_.end(), std::greater<>());
        int needed = 0, covered = 0;
        for (int g : gains_scratch_) {
            if (covered >= undominated_) break;
            covered += g;
            ++needed;
        }
        if (covered < undominated_) return;
        if (n - internal_count_ - needed <= *best_) return;

        make_internal(pick);
        search();
        undo_internal(pick);
        if (aborted_) return;

        state_[pick] = kLeaf;
        search();
        state_[pick] = kFrontier;
    }

    const Digraph& d_;
    const Deadline& deadline_;
    std::vector<char> state_;
    std::vector<int> dom_count_;
    std::vector<int> gains_scratch_;
    int undominated_ = 0;
    int internal_count_ = 0;
    Vertex root_ = kNoVertex;
    int* best_ = nullptr;
    std::optional<OutBranching>* witness_ = nullptr;
    std::uint64_t* nodes_ = nullptr;
    bool aborted_ = false;
};

MaxLeafResult max_leaf_over_roots(const Digraph& d, const std::vector<Vertex>& roots, Milliseconds budget,
                                  bool fixed_root) {
    Deadline deadline(budget);
    MaxLeafResult result;
    int best = -1;
    std::optional<OutBranching> witness;

    // incumbent from local search
    if (d.n() > 1) {
        auto start = bfs_out_branching(d, roots.front());
        if (start) {
            auto improved = improve_to_1ae(d, *start);
            // exchanges may move the root
            witness = fixed_root && improved.root() != start->root() ? std::move(*start) : std::move(improved);
            best = witness->leaf_count();
        }
    }
    BranchAndBound bb(d, deadline);
    for (Vertex r : roots) {
        // the search only reports strictly better solutions
        if (!bb.run(r, best, witness, result.nodes)) {
            result.status = OracleStatus::budget_exhausted;
            break;
        }
    }
    result.value = std::max(best, 0);
    result.witness = std::move(witness);
    return result;
}

}  // namespace

MaxLeafResult exact_max_leaf_branching(const Digraph& d, Milliseconds budget) {
    auto roots = out_branching_roots(d);
    if (!roots) return MaxLeafResult{0, std::nullopt, OracleStatus::no_branching, 0};
    return max_leaf_over_roots(d, *roots, budget, false);
}

MaxLeafResult exact_max_leaf_branching_rooted(const Digraph& d, Vertex root, Milliseconds budget) {
    if (!d.contains(root)) throw std::invalid_argument("root out of range");
    if (reachable_from(d, root).size() != static_cast<std::size_t>(d.n()))
        return MaxLeafResult{0, std::nullopt, OracleStatus::no_branching, 0};
    return max_leaf_over_roots(d, {root}, budget, true);
}

namespace {

MaxLeafResult max_leaf_tree_exhaustive(const Digraph& d) {
    // An out-tree with internal set I has at most |N+(I) \ I| leaves, and that
    // many are achieved whenever D[I] has a vertex reaching all of I.
    const int n = d.n();
    MaxLeafResult result;
    if (n == 0) return result;
    std::vector<std::uint32_t> out_mask(n, 0);
    for (const auto& [u, v] : d.arcs()) out_mask[u] |= 1u << v;

    int best = 0;
    std::uint32_t best_set = 1;
    Vertex best_root = 0;
    const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    for (std::uint32_t set = 1; set <= full && set != 0; ++set) {
        std::uint32_t nbrs = 0;
        for (std::uint32_t s = set; s; s &= s - 1) nbrs |= out_mask[std::countr_zero(s)];
        int value = std::popcount(nbrs & ~set);
        if (value <= best) continue;
        for (std::uint32_t s = set; s; s &= s - 1) {
            Vertex r = std::countr_zero(s);
            std::uint32_t reach = 1u << r, frontier = reach;
            while (frontier) {
                std::uint32_t next = 0;
                for (std::uint32_t f = frontier; f; f &= f - 1) next |= out_mask[std::countr_zero(f)];
                next &= set & ~reach;
                reach |= next;
                frontier = next;
            }
            if (reach == set) {
                best = value;
                best_set = set;
                best_root = r;
                break;
            }
        }
    }

    std::vector<Vertex> parent(n, kAbsent);
    parent[best_root] = kNoVertex;
    std::deque<Vertex> queue{best_root};
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        if (!(best_set >> u & 1u)) continue;
        for (Vertex w : d.out(u))
            if (parent[w] == kAbsent) {
                parent[w] = u;
                queue.push_back(w);
            }
    }
    // keep internal vertices and their out-neighbors only
    std::uint32_t keep = best_set;
    for (std::uint32_t s = best_set; s; s &= s - 1) keep |= out_mask[std::countr_zero(s)];
    for (Vertex v = 0; v < n; ++v)
        if (!(keep >> v & 1u)) parent[v] = kAbsent;
    result.value = best;
    result.witness = OutTree(best_root, std::move(parent));
    return result;
}

}  // namespace

MaxLeafResult exact_max_leaf_tree(const Digraph& d, Milliseconds budget) {
    if (d.n() <= 10) return max_leaf_tree_exhaustive(d);

    const auto start = std::chrono::steady_clock::now();
    MaxLeafResult result;
    result.value = -1;
    std::map<std::vector<Vertex>, bool> seen;
    for (Vertex v = 0; v < d.n(); ++v) {
        auto reach = reachable_from(d, v);
        if (!seen.emplace(reach, true).second) continue;
        Milliseconds left = kNoBudget;
        if (budget != kNoBudget) {
            auto used = std::chrono::duration_cast<Milliseconds>(std::chrono::steady_clock::now() - start);
            left = used >= budget ? Milliseconds(0) : budget - used;
        }
        auto sub = induced_subdigraph(d, reach);
        auto r = exact_max_leaf_branching(sub.graph, left);
        result.nodes += r.nodes;
        if (r.value > result.value && r.witness) {
            result.value = r.value;
            std::vector<Vertex> parent(d.n(), kAbsent);
            for (Vertex u = 0; u < sub.graph.n(); ++u) {
                Vertex p = r.witness->parent(u);
                parent[sub.to_original[u]] = p >= 0 ? sub.to_original[p] : p;
            }
            result.witness = OutTree(sub.to_original[r.witness->root()], std::move(parent));
        }
        if (!r.exact()) {
            result.status = OracleStatus::budget_exhausted;
            break;
        }
    }
    result.value = std::max(result.value, 0);
    return result;
}

int vertex_separation_cost(const UndirectedGraph& g, std::span<const Vertex> order) {
    const int n = g.n();
    if (static_cast<int>(order.size()) != n) throw std::invalid_argument("ordering is not a permutation");
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i) {
        Vertex v = order[i];
        if (v < 0 || v >= n || pos[v] != -1) throw std::invalid_argument("ordering is not a permutation");
        pos[v] = i;
    }
    // v is in the boundary of V_j for pos[v] <= j < last neighbor position
    std::vector<int> delta(n + 1, 0);
    for (Vertex v = 0; v < n; ++v) {
        int last = pos[v];
        for (Vertex w : g.neighbors(v)) last = std::max(last, pos[w]);
        if (last > pos[v]) {
            ++delta[pos[v]];
            --delta[last];
        }
    }
    int cur = 0, best = 0;
    for (int j = 0; j < n; ++j) {
        cur += delta[j];
        best = std::max(best, cur);
    }
    return best;
}

VertexOrdering exact_vertex_separation(const UndirectedGraph& g) {
    const int n = g.n();
    if (n > kMaxExactSeparationVertices)
        throw std::length_error("exact vertex separation is limited to " +
                                std::to_string(kMaxExactSeparationVertices) + " vertices");
    VertexOrdering result;
    if (n == 0) return result;
    std::vector<std::uint32_t> adj(n, 0);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w : g.neighbors(v)) adj[v] |= 1u << w;

    const std::uint32_t full = (1u << n) - 1;
    const std::size_t states = std::size_t{1} << n;
    std::vector<std::uint8_t> best(states, std::numeric_limits<std::uint8_t>::max());
    std::vector<std::uint8_t> last(states, 0);
    best[0] = 0;
    for (std::uint32_t set = 1; set <= full; ++set) {
        int boundary = 0;
        for (std::uint32_t s = set; s; s &= s - 1)
            if (adj[std::countr_zero(s)] & ~set) ++boundary;
        std::uint8_t b = std::numeric_limits<std::uint8_t>::max();
        std::uint8_t arg = 0;
        for (std::uint32_t s = set; s; s &= s - 1) {
            int v = std::countr_zero(s);
            std::uint8_t cand = std::max<std::uint8_t>(best[set & ~(1u << v)], static_cast<std::uint8_t>(boundary));
            if (cand < b) {
                b = cand;
                arg = static_cast<std::uint8_t>(v);
            }
        }
        best[set] = b;
        last[set] = arg;
    }
    result.cost = best[full];
    result.order.resize(n);
    std::uint32_t set = full;
    for (int i = n - 1; i >= 0; --i) {
        result.order[i] = last[set];
        set &= ~(1u << last[set]);
    }
    return result;
}

}  // namespace mlob
