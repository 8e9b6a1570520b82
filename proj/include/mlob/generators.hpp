#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mlob/digraph.hpp"

namespace mlob {

/// The strong digraph H_t on t^2 + 1 vertices with minimum in-degree 3:
/// a root r shared by t spokes u_1..u_t. Spoke i holds the double path
/// r = u_0, u_1, ..., u_{t-2}, the arcs u_j -> u_{j-2} for 3 <= j <= t-2 and
/// a complete digraph on u_{t-3}..u_t. Vertex ids: r = 0 and
/// u^i_j = 1 + (i-1)t + (j-1). Throws std::invalid_argument for t < 6.
Digraph gen_ht(int t);

/// Random Hamiltonian cycle plus random extra in-arcs until every in-degree
/// is at least 3. Throws for n < 4.
Digraph random_strong_min_in3(int n, std::uint64_t seed);

/// Random acyclic digraph whose only source reaches everything: each
/// non-first vertex of a random order gets one earlier in-neighbor, and
/// every further forward pair becomes an arc with probability `density`.
Digraph random_dag_single_source(int n, std::uint64_t seed, double density = 0.2);

/// Single-source acyclic digraph with few leaves: the vertices after the
/// source of a random order are dealt onto `spines` directed paths leaving
/// the source, then every further forward pair becomes an arc with
/// probability `density`. Throws for n < 1 or spines < 1.
Digraph random_dag_spines(int n, int spines, std::uint64_t seed, double density = 0.05);

/// Every ordered pair becomes an arc with probability `density`.
Digraph random_digraph(int n, std::uint64_t seed, double density = 0.3);

enum class Family { ht, random_strong_min_in3, random_dag_single_source, random_digraph };

std::string to_string(Family f);
std::optional<Family> parse_family(const std::string& name);

/// Generator parameters; the same parameters always yield the same digraph.
struct InstanceSpec {
    Family family = Family::random_digraph;
    int t = 6;             // ht only
    int n = 10;            // the random families
    double density = 0.3;  // random_dag_single_source and random_digraph
    std::uint64_t seed = 1;

    /// Generator flags, e.g. "--family ht --t 6".
    std::string arguments() const;
    /// `mlob gen ...` reproducing this instance.
    std::string command_line() const { return "mlob gen " + arguments(); }
    friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

Digraph generate(const InstanceSpec& spec);

}  // namespace mlob
