#pragma once

// Test-only brute-force oracles.  Everything here is written for clarity and
// independence from the library's algorithmic paths: plain subset scans,
// direct summation, textbook DP.  Expected values frozen into tests are
// produced by these.

#include <cmath>
#include <cstdint>
#include <vector>

#include "qxc/bitvec.hpp"
#include "qxc/graph.hpp"

namespace qxc::testing {

inline bool subset_connected(const Graph& g, std::uint32_t mask_bits, std::uint32_t n) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t v = 0; v < n; ++v)
        if (mask_bits & (1u << v)) members.push_back(v);
    if (members.empty()) return false;
    std::vector<bool> seen(n, false);
    std::vector<std::uint32_t> stack{members[0]};
    seen[members[0]] = true;
    std::uint32_t reached = 0;
    while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        ++reached;
        for (auto v : g.adj[u])
            if ((mask_bits & (1u << v)) && !seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
    }
    return reached == members.size();
}

// Exact |C_s| for s = 1..s_max by scanning all 2^n subsets (n <= 25).
inline std::vector<std::uint64_t> naive_connected_set_counts(const Graph& g, std::uint32_t s_max) {
    std::vector<std::uint64_t> counts(s_max, 0);
    for (std::uint32_t mask = 1; mask < (1u << g.n); ++mask) {
        const auto size = static_cast<std::uint32_t>(__builtin_popcount(mask));
        if (size > s_max) continue;
        if (subset_connected(g, mask, g.n)) ++counts[size - 1];
    }
    return counts;
}

// Exact MaxConn_alpha by scanning all subsets; alpha = a_num/a_den.
inline std::uint32_t naive_max_conn(const Graph& g, const BitVec& e, std::int64_t a_num,
                                    std::int64_t a_den, std::uint32_t size_cap) {
    std::uint32_t best = 0;
    for (std::uint32_t mask = 1; mask < (1u << g.n); ++mask) {
        const auto size = static_cast<std::uint32_t>(__builtin_popcount(mask));
        if (size > size_cap || size <= best) continue;
        std::int64_t in_e = 0;
        for (std::uint32_t v = 0; v < g.n; ++v)
            if ((mask & (1u << v)) && e.test(v)) ++in_e;
        if (in_e * a_den < a_num * static_cast<std::int64_t>(size)) continue;
        if (subset_connected(g, mask, g.n)) best = size;
    }
    return best;
}

// P[Binomial(s, p) >= k] by direct summation.
inline double exact_binomial_tail(std::uint64_t s, std::uint64_t k, double p) {
    double tail = 0.0;
    for (std::uint64_t m = k; m <= s; ++m) {
        double log_term = 0.0;
        for (std::uint64_t i = 1; i <= m; ++i)
            log_term += std::log(static_cast<double>(s - m + i)) - std::log(static_cast<double>(i));
        log_term += m * std::log(p) + (s - m) * std::log1p(-p);
        tail += std::exp(log_term);
    }
    return tail;
}

// P[longest circular run of occupied sites >= t] on a cycle of n vertices
// with iid occupation probability p.  Conditioning on the first unoccupied
// vertex reduces the circle to a chain with a suffix-run cap; the chain is a
// textbook run-length DP.
inline double cycle_maxrun_tail_exact(std::uint32_t n, std::uint32_t t, double p) {
    if (t == 0) return 1.0;
    if (t > n) return 0.0;
    // chain_no_run(m, cap): P(chain of m sites has all runs < t and final
    // suffix run <= cap)
    auto chain_no_run = [&](std::uint32_t m, std::int64_t cap) -> double {
        std::vector<double> f(t, 0.0);
        f[0] = 1.0;
        for (std::uint32_t i = 0; i < m; ++i) {
            std::vector<double> nf(t, 0.0);
            for (std::uint32_t s = 0; s < t; ++s) {
                if (f[s] == 0.0) continue;
                nf[0] += f[s] * (1.0 - p);
                if (s + 1 < t) nf[s + 1] += f[s] * p;
            }
            f = std::move(nf);
        }
        double total = 0.0;
        for (std::uint32_t s = 0; s < t && static_cast<std::int64_t>(s) <= cap; ++s) total += f[s];
        return total;
    };
    double p_no = (n < t) ? std::pow(p, n) : 0.0;  // all occupied and still no run >= t
    for (std::uint32_t k = 0; k < t && k < n; ++k) {
        // vertices 0..k-1 occupied, k unoccupied; wrap run = suffix + k < t
        p_no += std::pow(p, k) * (1.0 - p) *
                chain_no_run(n - 1 - k, static_cast<std::int64_t>(t) - 1 - k);
    }
    return 1.0 - p_no;
}

} // namespace qxc::testing
