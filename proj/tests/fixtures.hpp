#pragma once

// Shared test fixtures: small named graphs, the projective-plane incidence
// graphs used as certified expanders, and parity matrices for the two desk
// codes exercised throughout.

#include <array>
#include <cstdint>
#include <vector>

#include "qxc/errors.hpp"
#include "qxc/gf2.hpp"
#include "qxc/graph.hpp"
#include "qxc/rng.hpp"

namespace qxc::testing {

inline Graph path_graph(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(n, edges);
}

inline Graph cycle_graph(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, edges);
}

// Circulant C_n(1, n/2): a ring plus diameters, 3-regular for even n.
inline Graph cubic_ring(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    for (std::uint32_t i = 0; i < n / 2; ++i) edges.emplace_back(i, i + n / 2);
    return Graph::from_edges(n, edges);
}

// Random simple d-regular graph by the pairing model with resampling.
inline Graph random_regular_graph(std::uint32_t n, std::uint32_t d, std::uint64_t seed) {
    CounterRng rng = CounterRng::keyed(seed, 0, 0x52454752ull);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<std::uint32_t> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * d);
        for (std::uint32_t v = 0; v < n; ++v)
            for (std::uint32_t i = 0; i < d; ++i) stubs.push_back(v);
        for (std::size_t i = stubs.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(stubs[i], stubs[j]);
        }
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        bool ok = true;
        std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            auto u = stubs[i], v = stubs[i + 1];
            if (u == v || seen[u][v]) { ok = false; break; }
            seen[u][v] = seen[v][u] = true;
            edges.emplace_back(u, v);
        }
        if (ok) return Graph::from_edges(n, edges);
    }
    throw Unsatisfiable("random_regular_graph: retry cap");
}

// Point-line incidence graph of the projective plane PG(2, q): both sides
// have q^2+q+1 vertices of degree q+1, and no two points share two lines, so
// every pair expands with delta = 1/(2(q+1)) exactly.
inline BipartiteGraph projective_plane_incidence(std::uint32_t q) {
    // GF(q) multiplication/addition tables for q in {2, 3, 4}.
    std::vector<std::vector<std::uint32_t>> add, mul;
    if (q == 2 || q == 3) {
        add.assign(q, std::vector<std::uint32_t>(q));
        mul.assign(q, std::vector<std::uint32_t>(q));
        for (std::uint32_t a = 0; a < q; ++a)
            for (std::uint32_t b = 0; b < q; ++b) {
                add[a][b] = (a + b) % q;
                mul[a][b] = (a * b) % q;
            }
    } else if (q == 4) {
        // GF(4) = {0, 1, w, w+1} with w^2 = w + 1; addition is xor.
        add.assign(4, std::vector<std::uint32_t>(4));
        mul.assign(4, std::vector<std::uint32_t>(4));
        for (std::uint32_t a = 0; a < 4; ++a)
            for (std::uint32_t b = 0; b < 4; ++b) add[a][b] = a ^ b;
        const std::uint32_t table[4][4] = {
            {0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
        for (std::uint32_t a = 0; a < 4; ++a)
            for (std::uint32_t b = 0; b < 4; ++b) mul[a][b] = table[a][b];
    } else {
        throw PreconditionViolated("projective_plane_incidence: q must be 2, 3 or 4");
    }

    // canonical projective points: first nonzero coordinate equals 1
    std::vector<std::array<std::uint32_t, 3>> points;
    for (std::uint32_t x = 0; x < q; ++x)
        for (std::uint32_t y = 0; y < q; ++y)
            for (std::uint32_t z = 0; z < q; ++z) {
                if (x == 0 && y == 0 && z == 0) continue;
                std::array<std::uint32_t, 3> v{x, y, z};
                std::uint32_t lead = v[0] ? v[0] : (v[1] ? v[1] : v[2]);
                if (lead != 1) continue;
                points.push_back(v);
            }
    // lines are the same canonical triples; incidence = orthogonality
    std::vector<std::vector<std::uint32_t>> adj(points.size());
    for (std::uint32_t pi = 0; pi < points.size(); ++pi)
        for (std::uint32_t li = 0; li < points.size(); ++li) {
            const auto& pt = points[pi];
            const auto& ln = points[li];
            std::uint32_t dot = 0;
            for (int i = 0; i < 3; ++i) dot = add[dot][mul[pt[i]][ln[i]]];
            if (dot == 0) adj[pi].push_back(li);
        }
    return BipartiteGraph::from_left_adjacency(static_cast<std::uint32_t>(points.size()),
                                               static_cast<std::uint32_t>(points.size()), std::move(adj));
}

// The two desk parity matrices used across the decoder tests.
inline ParityMatrix h_single_edge() {
    ParityMatrix h(1, 1);
    h.set(0, 0);
    return h;
}

inline ParityMatrix h_two_cols() {  // [1 1]
    ParityMatrix h(1, 2);
    h.set(0, 0);
    h.set(0, 1);
    return h;
}

inline ParityMatrix h_chain_three() {  // [[1,1,0],[0,1,1]]
    ParityMatrix h(2, 3);
    h.set(0, 0);
    h.set(0, 1);
    h.set(1, 1);
    h.set(1, 2);
    return h;
}

// Seed bipartite graph whose B-side rows reproduce a given parity matrix
// (rows = B = right side, cols = A = left side).
inline BipartiteGraph seed_graph_from_matrix(const ParityMatrix& h) {
    std::vector<std::vector<std::uint32_t>> adj_left(h.cols);
    for (std::uint32_t b = 0; b < h.rows; ++b)
        h.row[b].for_each([&](std::uint32_t a) { adj_left[a].push_back(b); });
    return BipartiteGraph::from_left_adjacency(h.cols, h.rows, std::move(adj_left));
}

} // namespace qxc::testing
