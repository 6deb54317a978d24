#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qxc/gf2.hpp"
#include "qxc/graph.hpp"
#include "qxc/rational.hpp"

namespace qxc {

// Hypergraph product of a seed bipartite graph G = (A u B) with itself.
//
// Qubits are indexed A^2 block first, row-major pairs (alpha, a), then the
// B^2 block, row-major pairs (b, beta).  Z-type generators (rows of H_X,
// checks of the X-error code) are pairs (alpha, beta) in A x B, row-major;
// X-type generators (rows of H_Z) are pairs (b, a) in B x A, row-major.
// The seed matrix H has rows indexed by B and columns by A, which is the
// orientation forced by the block shapes
//   H_X = (I_{n_A} (x) H | H^T (x) I_{n_B}),
//   H_Z = (H (x) I_{n_A} | I_{n_B} (x) H^T).
struct CssCode {
    std::uint32_t n_a = 0;  // |A|
    std::uint32_t n_b = 0;  // |B|
    std::uint32_t d_a = 0;  // max A-side degree of the seed graph
    std::uint32_t d_b = 0;  // max B-side degree
    BipartiteGraph seed;
    ExpansionParams expansion;  // declared, never assumed
    std::uint64_t build_seed = 0;

    ParityMatrix h_x;  // (n_a * n_b) x n
    ParityMatrix h_z;  // (n_b * n_a) x n

    std::uint32_t n_qubits() const { return n_a * n_a + n_b * n_b; }
    std::uint32_t n_x_checks() const { return n_a * n_b; }  // |C_X|, Z-type generators
    std::uint32_t n_z_checks() const { return n_b * n_a; }  // |C_Z|, X-type generators

    std::uint32_t qubit_aa(std::uint32_t alpha, std::uint32_t a) const { return alpha * n_a + a; }
    std::uint32_t qubit_bb(std::uint32_t b, std::uint32_t beta) const {
        return n_a * n_a + b * n_b + beta;
    }
    std::uint32_t xcheck_index(std::uint32_t alpha, std::uint32_t beta) const { return alpha * n_b + beta; }
    std::uint32_t zcheck_index(std::uint32_t b, std::uint32_t a) const { return b * n_a + a; }
};

struct CodeParams {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t n_a = 0, n_b = 0, d_a = 0, d_b = 0;
    Rat r{0, 1};  // d_a / d_b
    std::uint64_t w0_bound = 0;     // adversarial radius of the basic algorithm
    std::uint64_t t_ssf_bound = 0;  // adversarial radius of the beta-variant
    std::optional<std::uint32_t> d_min_exact;
};

// Builds the CSS code.  The seed may have irregular degrees (d_a, d_b are
// then the maxima); the CSS identity H_X H_Z^T = 0 is asserted on every
// build.  Throws DimensionMismatch on an empty graph.
CssCode hypergraph_product(const BipartiteGraph& seed, const ExpansionParams& expansion = {},
                           std::uint64_t build_seed = 0);

// Graph on qubits joining pairs that share an X- or Z-type generator.
Graph adjacency_graph(const CssCode& code);

// Worst-case degree bound for the adjacency graph.  The familiar form
// d_B^2 + 2 d_B (d_A - 1) is the d_B >= d_A case; the two qubit blocks give
// symmetric expressions and the max covers both.
std::uint64_t adjacency_degree_bound(std::uint32_t d_a, std::uint32_t d_b);

// n, k from actual GF(2) ranks, the closed-form correction radii, and the
// exact CSS minimum distance when the coset enumeration fits the budget.
CodeParams code_params(const CssCode& code, const Rat& gamma_a, const Rat& gamma_b, const Rat& beta,
                       std::uint64_t distance_budget = 1u << 22);

// Code bundle directory: seed graph, H_X/H_Z matrices and a JSON manifest
// carrying sizes, declared expansion and the ordering convention tag.
void save_code_bundle(const std::string& dir, const CssCode& code);
CssCode load_code_bundle(const std::string& dir);

} // namespace qxc
