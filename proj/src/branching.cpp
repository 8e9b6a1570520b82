#include "mlob/branching.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace mlob {

OutTree::OutTree(Vertex root, std::vector<Vertex> parent)
    : root_(root), parent_(std::move(parent)), children_(parent_.size()) {
    const int n = host_size();
    if (root < 0 || root >= n) throw std::invalid_argument("root out of range");
    for (Vertex v = 0; v < n; ++v) {
        Vertex p = parent_[v];
        if (p == kAbsent) continue;
        ++size_;
        if (p == kNoVertex) continue;
        if (p < 0 || p >= n) throw std::invalid_argument("parent of " + std::to_string(v) + " out of range");
        children_[p].push_back(v);
    }
}

OutTree OutTree::single_vertex(int n, Vertex root) {
    std::vector<Vertex> parent(n, kAbsent);
    parent.at(root) = kNoVertex;
    return OutTree(root, std::move(parent));
}

OutTree OutTree::from_arcs(int n, Vertex root, const std::vector<Arc>& arcs) {
    std::vector<Vertex> parent(n, kAbsent);
    parent.at(root) = kNoVertex;
    for (const auto& [u, v] : arcs) {
        if (v < 0 || v >= n || u < 0 || u >= n) throw std::invalid_argument("arc endpoint out of range");
        if (parent[v] != kAbsent) throw std::invalid_argument("vertex " + std::to_string(v) + " has two parents");
        parent[v] = u;
    }
    return OutTree(root, std::move(parent));
}

int OutTree::leaf_count() const {
    if (size_ <= 1) return 0;
    int count = 0;
    for (Vertex v = 0; v < host_size(); ++v)
        if (parent_[v] != kAbsent && children_[v].empty()) ++count;
    return count;
}

std::vector<Vertex> OutTree::vertices() const {
    std::vector<Vertex> vs;
    for (Vertex v = 0; v < host_size(); ++v)
        if (parent_[v] != kAbsent) vs.push_back(v);
    return vs;
}

std::vector<Arc> OutTree::arcs() const {
    std::vector<Arc> result;
    for (Vertex v = 0; v < host_size(); ++v)
        if (parent_[v] >= 0) result.emplace_back(parent_[v], v);
    std::sort(result.begin(), result.end());
    return result;
}

namespace {

std::optional<TreeViolation> check_tree(const Digraph& d, const OutTree& t, bool spanning) {
    auto fail = [](TreeViolationKind k, Vertex v, Arc a, std::string msg) {
        return TreeViolation{k, v, a, std::move(msg)};
    };
    if (t.host_size() != d.n())
        return fail(TreeViolationKind::host_mismatch, kNoVertex, {},
                    "tree host has " + std::to_string(t.host_size()) + " vertices, digraph has " +
                        std::to_string(d.n()));
    const Vertex r = t.root();
    if (!d.contains(r) || t.parent(r) != kNoVertex)
        return fail(TreeViolationKind::bad_root, r, {}, "root " + std::to_string(r) + " has a parent");
    for (Vertex v = 0; v < d.n(); ++v) {
        Vertex p = t.parent(v);
        if (v != r && p == kNoVertex)
            return fail(TreeViolationKind::missing_parent, v, {},
                        "vertex " + std::to_string(v) + " is a second parentless vertex");
        if (spanning && p == kAbsent)
            return fail(TreeViolationKind::missing_parent, v, {},
                        "vertex " + std::to_string(v) + " has no parent");
        if (p >= 0 && !d.has_arc(p, v))
            return fail(TreeViolationKind::non_host_arc, v, {p, v},
                        "non-host arc (" + std::to_string(p) + "," + std::to_string(v) + ")");
        if (p >= 0 && !t.contains(p))
            return fail(TreeViolationKind::unreachable_from_root, v, {p, v},
                        "parent of " + std::to_string(v) + " is outside the tree");
    }
    // every tree vertex must be reached from the root through child lists
    std::vector<char> seen(d.n(), 0);
    std::vector<Vertex> stack{r};
    seen[r] = 1;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex c : t.children(u))
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
    }
    for (Vertex v = 0; v < d.n(); ++v)
        if (t.contains(v) && !seen[v])
            return fail(TreeViolationKind::unreachable_from_root, v, {},
                        "vertex " + std::to_string(v) + " unreachable from root");
    return std::nullopt;
}

}  // namespace

std::optional<TreeViolation> validate(const Digraph& d, const OutBranching& t) {
    return check_tree(d, t, true);
}

std::optional<TreeViolation> validate_out_tree(const Digraph& d, const OutTree& t) {
    return check_tree(d, t, false);
}

AncestryIndex::AncestryIndex(const OutTree& t)
    : depth_(t.host_size(), -1), enter_(t.host_size(), -1), exit_(t.host_size(), -1) {
    int clock = 0;
    std::vector<std::pair<Vertex, std::size_t>> stack;
    stack.emplace_back(t.root(), 0);
    depth_[t.root()] = 0;
    enter_[t.root()] = clock++;
    preorder_.push_back(t.root());
    while (!stack.empty()) {
        auto& [v, pos] = stack.back();
        auto kids = t.children(v);
        if (pos < kids.size()) {
            Vertex c = kids[pos++];
            depth_[c] = depth_[v] + 1;
            enter_[c] = clock++;
            preorder_.push_back(c);
            stack.emplace_back(c, 0);
        } else {
            exit_[v] = clock++;
            stack.pop_back();
        }
    }
}

Classification classify(const OutTree& t) {
    Classification c;
    AncestryIndex anc(t);
    for (Vertex v : t.vertices()) {
        int deg = t.out_degree(v);
        if (deg == 0 && t.size() > 1)
            c.leaves.push_back(v);
        else if (deg == 1)
            c.links.push_back(v);
        else if (deg >= 2)
            c.branches.push_back(v);
    }
    // a maximal link path starts at a link vertex whose parent is not a link
    for (Vertex v : c.links) {
        Vertex p = t.parent(v);
        if (p >= 0 && t.out_degree(p) == 1) continue;
        std::vector<Vertex> path{v};
        Vertex cur = v;
        while (true) {
            Vertex next = t.children(cur).front();
            if (t.out_degree(next) != 1) break;
            path.push_back(next);
            cur = next;
        }
        c.link_paths.push_back(std::move(path));
    }
    std::sort(c.link_paths.begin(), c.link_paths.end(), [&](const auto& a, const auto& b) {
        return std::pair(anc.depth(a.front()), a.front()) < std::pair(anc.depth(b.front()), b.front());
    });
    for (const auto& p : c.link_paths) c.first_vertices.push_back(p.front());
    std::sort(c.first_vertices.begin(), c.first_vertices.end());

    const auto leaves = static_cast<long>(c.leaves.size());
    assert(t.size() <= 1 || static_cast<long>(c.branches.size()) <= leaves - 1);
    assert(t.size() <= 1 || static_cast<long>(c.link_paths.size()) <= 2 * leaves - 1);
    (void)leaves;
    return c;
}

bool siblings(const OutTree& t, Vertex u, Vertex v) {
    if (u == v) throw std::invalid_argument("siblings requires distinct vertices");
    return AncestryIndex(t).siblings(u, v);
}

std::optional<OutBranching> bfs_out_branching(const Digraph& d, Vertex root) {
    std::vector<Vertex> parent(d.n(), kAbsent);
    parent.at(root) = kNoVertex;
    std::deque<Vertex> queue{root};
    int reached = 1;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
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

std::optional<OutBranching> extend_to_branching(const Digraph& d, const OutTree& t) {
    std::vector<Vertex> parent = t.parents();
    std::deque<Vertex> queue;
    for (Vertex v = 0; v < d.n(); ++v)
        if (parent[v] != kAbsent) queue.push_back(v);
    int reached = static_cast<int>(queue.size());
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex w : d.out(u))
            if (parent[w] == kAbsent) {
                parent[w] = u;
                ++reached;
                queue.push_back(w);
            }
    }
    if (reached != d.n()) return std::nullopt;
    return OutBranching(t.root(), std::move(parent));
}

}  // namespace mlob
