#pragma once

#include <cstdint>
#include <vector>

#include "qxc/bitvec.hpp"
#include "qxc/gf2.hpp"
#include "qxc/graph.hpp"

namespace qxc {

// Classical linear code seen through its factor graph (left = bits,
// right = checks).  The parity matrix is derived once and cached together
// with per-bit check neighborhoods.
struct ClassicalCodeView {
    BipartiteGraph graph;
    ParityMatrix h;  // rows = checks, cols = bits
    std::vector<std::vector<std::uint32_t>> bit_checks;  // Gamma(v) per bit

    static ClassicalCodeView from_graph(BipartiteGraph g);
    static ClassicalCodeView from_matrix(const ParityMatrix& h);

    std::uint32_t n_bits() const { return graph.n_left; }
    std::uint32_t n_checks() const { return graph.n_right; }
};

// sigma(E) = xor of check neighborhoods of the set bits.
BitVec syndrome(const ClassicalCodeView& code, const BitVec& error);

enum class BitflipTermination { Converged, Stalled };

struct BitflipRun {
    BitVec estimate;                        // bits flipped overall
    std::vector<std::uint32_t> flips;       // flip order
    std::vector<std::uint32_t> weights;     // syndrome weight before each flip, plus final
    BitflipTermination termination = BitflipTermination::Converged;
};

// Sipser-Spielman bit flip: sweep bits in ascending order, flip any bit that
// strictly reduces the syndrome weight, restart the sweep after each flip.
// Stalls (as data, not an error) when no single-bit flip helps and the
// residual is nonzero.
BitflipRun bitflip_decode(const ClassicalCodeView& code, const BitVec& target_syndrome,
                          std::uint32_t max_iters = UINT32_MAX);

} // namespace qxc
