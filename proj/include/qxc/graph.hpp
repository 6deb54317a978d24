#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qxc/bitvec.hpp"
#include "qxc/rational.hpp"

namespace qxc {

// Bipartite factor graph with adjacency kept in both directions.  d_left and
// d_right are degree bounds; for biregular graphs every vertex meets them
// with equality and n_left * d_left == n_right * d_right.
struct BipartiteGraph {
    std::uint32_t n_left = 0;
    std::uint32_t n_right = 0;
    std::uint32_t d_left = 0;
    std::uint32_t d_right = 0;
    std::vector<std::vector<std::uint32_t>> adj_left;   // sorted right neighbors per left vertex
    std::vector<std::vector<std::uint32_t>> adj_right;  // sorted left neighbors per right vertex

    static BipartiteGraph from_left_adjacency(std::uint32_t n_left, std::uint32_t n_right,
                                              std::vector<std::vector<std::uint32_t>> adj_left);

    std::size_t edge_count() const;
    bool is_biregular() const;
    // Checks both adjacency directions describe the same simple edge set and
    // degree bounds hold.
    void validate() const;
};

// Plain undirected graph, sorted adjacency lists, no self-loops.
struct Graph {
    std::uint32_t n = 0;
    std::uint32_t d_max = 0;
    std::vector<std::vector<std::uint32_t>> adj;

    static Graph from_edges(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

    std::size_t edge_count() const;
    void validate() const;
};

// Declared expansion parameters (gamma, delta) for each side of a bipartite
// graph.  These are recorded, not assumed: consumers decide which delta
// regime they require.
struct ExpansionParams {
    Rat gamma_left{0, 1};
    Rat delta_left{0, 1};
    Rat gamma_right{0, 1};
    Rat delta_right{0, 1};
};

enum class Side { Left, Right };

enum class AuditMode { Exhaustive, Probe };

struct AuditReport {
    AuditMode mode = AuditMode::Exhaustive;
    Side side = Side::Left;
    Rat gamma{0, 1};
    Rat delta{0, 1};
    std::uint32_t s_max = 0;
    // Largest set size for which expansion was certified (exhaustive mode
    // only; probe mode can only refute and reports 0 here).
    std::uint32_t verified_up_to = 0;
    std::optional<std::vector<std::uint32_t>> counterexample;
    std::uint64_t subsets_checked = 0;

    bool certified() const { return !counterexample.has_value(); }
};

// Random biregular bipartite graph via the configuration model: a random
// perfect matching of degree stubs, fully resampled whenever a multi-edge
// appears.  Deterministic per seed.  Throws DimensionMismatch if
// n_left*d_left != n_right*d_right, Unsatisfiable if a simple graph is
// impossible (d_left > n_right or d_right > n_left) or the retry cap is hit.
BipartiteGraph sample_biregular(std::uint32_t n_left, std::uint32_t n_right,
                                std::uint32_t d_left, std::uint32_t d_right,
                                std::uint64_t seed, std::uint32_t max_retries = 10'000);

// Audits |Gamma(S)| >= (1-delta) * d_side * |S| for subsets S of the chosen
// side.  Exhaustive mode enumerates all subsets of size <= s_max (requires
// s_max <= floor(gamma * n_side)) and either certifies or returns a smallest
// violating set.  Probe mode samples random subsets and can only refute.
AuditReport expansion_audit(const BipartiteGraph& g, Side side, const Rat& gamma, const Rat& delta,
                            std::uint32_t s_max, AuditMode mode, std::uint64_t probes = 0,
                            std::uint64_t seed = 0, std::uint64_t subset_budget = 100'000'000ull);

// Connected components of the subgraph induced by s.  Components are sorted
// internally and listed by smallest member.
std::vector<std::vector<std::uint32_t>> connected_components(const Graph& g, const BitVec& s);

using ConnectedSetVisitor = std::function<void(const std::vector<std::uint32_t>&)>;

// Exact per-size counts |C_s| of connected vertex sets of size 1..s_max,
// enumerated duplicate-free in deterministic order (anchor = smallest vertex,
// growth restricted to larger indices).  The optional visitor sees every set
// once.  Throws BudgetExceeded when the running count passes the budget.
std::vector<std::uint64_t> enumerate_connected_sets(const Graph& g, std::uint32_t s_max,
                                                    std::uint64_t budget = 100'000'000ull,
                                                    const ConnectedSetVisitor& visitor = nullptr);

// Rooted complete (d-1)-ary tree of the given edge-height: the root is at
// depth 0, leaves at depth `height`, so there are ((d-1)^(height+1) - 1)/(d-2)
// vertices; the root has degree d-1, internal vertices degree d, leaves 1.
Graph complete_tree(std::uint32_t d, std::uint32_t height, std::uint64_t vertex_cap = 30'000'000ull);

// Text round trips.  Format: "BIPARTITE n_left n_right d_left d_right" or
// "GRAPH n" header, one "u v" pair per line, 0-indexed, sorted; blank lines
// and '#' comments ignored.
void write_graph(std::ostream& os, const BipartiteGraph& g);
void write_graph(std::ostream& os, const Graph& g);
BipartiteGraph read_bipartite_graph(std::istream& is);
Graph read_graph(std::istream& is);

} // namespace qxc
