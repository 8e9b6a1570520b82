#include "mlob/generators.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mlob/rng.hpp"

namespace mlob {

namespace {

std::uint32_t to_ppm(double density) {
    if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");
    return static_cast<std::uint32_t>(std::llround(density * 1'000'000.0));
}

// Arc set on n vertices that ignores repeated insertions.
class ArcSet {
public:
    explicit ArcSet(int n) : n_(n), present_(static_cast<std::size_t>(n) * n, 0) {}
    bool add(Vertex u, Vertex v) {
        char& slot = present_[static_cast<std::size_t>(u) * n_ + v];
        if (u == v || slot) return false;
        slot = 1;
        arcs_.emplace_back(u, v);
        return true;
    }
    bool has(Vertex u, Vertex v) const { return present_[static_cast<std::size_t>(u) * n_ + v] != 0; }
    Digraph build() && { return Digraph(n_, std::move(arcs_)); }

private:
    int n_;
    std::vector<char> present_;
    std::vector<Arc> arcs_;
};

std::vector<Vertex> random_order(int n, Rng& rng) {
    std::vector<Vertex> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    return order;
}

}  // namespace

Digraph gen_ht(int t) {
    if (t < 6) throw std::invalid_argument("gen_ht needs t >= 6");
    const int n = t * t + 1;
    auto u = [t](int i, int j) { return j == 0 ? 0 : 1 + (i - 1) * t + (j - 1); };
    ArcSet arcs(n);
    for (int i = 1; i <= t; ++i) {
        for (int j = 0; j <= t - 3; ++j) {
            arcs.add(u(i, j), u(i, j + 1));
            arcs.add(u(i, j + 1), u(i, j));
        }
        for (int j = 3; j <= t - 2; ++j) arcs.add(u(i, j), u(i, j - 2));
        for (int j = t - 3; j <= t; ++j)
            for (int q = t - 3; q <= t; ++q)
                if (j != q) arcs.add(u(i, j), u(i, q));
    }
    Digraph d = std::move(arcs).build();
    if (d.n() != n || !is_strongly_connected(d) || d.min_in_degree() < 3)
        throw std::logic_error("gen_ht: construction lost its defining properties");
    return d;
}

Digraph random_strong_min_in3(int n, std::uint64_t seed) {
    if (n < 4) throw std::invalid_argument("random_strong_min_in3 needs n >= 4");
    Rng rng(seed);
    std::vector<Vertex> cycle = random_order(n, rng);
    ArcSet arcs(n);
    std::vector<int> in_degree(n, 0);
    for (int i = 0; i < n; ++i) {
        arcs.add(cycle[i], cycle[(i + 1) % n]);
        ++in_degree[cycle[(i + 1) % n]];
    }
    for (Vertex v = 0; v < n; ++v)
        while (in_degree[v] < 3) {
            Vertex u = rng.below(n);
            if (arcs.add(u, v)) ++in_degree[v];
        }
    return std::move(arcs).build();
}

Digraph random_dag_single_source(int n, std::uint64_t seed, double density) {
    if (n < 1) throw std::invalid_argument("random_dag_single_source needs n >= 1");
    const std::uint32_t ppm = to_ppm(density);
    Rng rng(seed);
    std::vector<Vertex> order = random_order(n, rng);
    ArcSet arcs(n);
    for (int i = 1; i < n; ++i) arcs.add(order[rng.below(i)], order[i]);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.chance_ppm(ppm)) arcs.add(order[i], order[j]);
    return std::move(arcs).build();
}

Digraph random_dag_spines(int n, int spines, std::uint64_t seed, double density) {
    if (n < 1) throw std::invalid_argument("random_dag_spines needs n >= 1");
    if (spines < 1) throw std::invalid_argument("random_dag_spines needs spines >= 1");
    const std::uint32_t ppm = to_ppm(density);
    Rng rng(seed);
    std::vector<Vertex> order = random_order(n, rng);
    ArcSet arcs(n);
    std::vector<Vertex> tail(spines, order[0]);
    for (int i = 1; i < n; ++i) {
        Vertex& end = tail[rng.below(spines)];
        arcs.add(end, order[i]);
        end = order[i];
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.chance_ppm(ppm)) arcs.add(order[i], order[j]);
    return std::move(arcs).build();
}

Digraph random_digraph(int n, std::uint64_t seed, double density) {
    if (n < 0) throw std::invalid_argument("random_digraph needs n >= 0");
    const std::uint32_t ppm = to_ppm(density);
    Rng rng(seed);
    ArcSet arcs(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (u != v && rng.chance_ppm(ppm)) arcs.add(u, v);
    return std::move(arcs).build();
}

std::string to_string(Family f) {
    switch (f) {
        case Family::ht: return "ht";
        case Family::random_strong_min_in3: return "random_strong_min_in3";
        case Family::random_dag_single_source: return "random_dag_single_source";
        case Family::random_digraph: return "random_digraph";
    }
    return "?";
}

std::optional<Family> parse_family(const std::string& name) {
    for (Family f : {Family::ht, Family::random_strong_min_in3, Family::random_dag_single_source, Family::random_digraph})
        if (to_string(f) == name) return f;
    return std::nullopt;
}

std::string InstanceSpec::arguments() const {
    std::ostringstream out;
    out << "--family " << to_string(family);
    switch (family) {
        case Family::ht: out << " --t " << t; break;
        case Family::random_strong_min_in3: out << " --n " << n << " --seed " << seed; break;
        case Family::random_dag_single_source:
        case Family::random_digraph:
            out << " --n " << n << " --density " << std::setprecision(17) << density << " --seed " << seed;
            break;
    }
    return out.str();
}

Digraph generate(const InstanceSpec& spec) {
    switch (spec.family) {
        case Family::ht: return gen_ht(spec.t);
        case Family::random_strong_min_in3: return random_strong_min_in3(spec.n, spec.seed);
        case Family::random_dag_single_source: return random_dag_single_source(spec.n, spec.seed, spec.density);
        case Family::random_digraph: return random_digraph(spec.n, spec.seed, spec.density);
    }
    throw std::invalid_argument("unknown family");
}

}  // namespace mlob
