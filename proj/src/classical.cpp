#include "qxc/classical.hpp"

#include "qxc/errors.hpp"

namespace qxc {

ClassicalCodeView ClassicalCodeView::from_graph(BipartiteGraph g) {
    ClassicalCodeView code;
    code.h = ParityMatrix(g.n_right, g.n_left);
    for (std::uint32_t c = 0; c < g.n_right; ++c)
        for (auto v : g.adj_right[c]) code.h.set(c, v);
    code.bit_checks = g.adj_left;
    code.graph = std::move(g);
    return code;
}

ClassicalCodeView ClassicalCodeView::from_matrix(const ParityMatrix& h) {
    std::vector<std::vector<std::uint32_t>> adj_left(h.cols);
    for (std::uint32_t r = 0; r < h.rows; ++r)
        h.row[r].for_each([&](std::uint32_t c) { adj_left[c].push_back(r); });
    auto g = BipartiteGraph::from_left_adjacency(h.cols, h.rows, std::move(adj_left));
    return from_graph(std::move(g));
}

BitVec syndrome(const ClassicalCodeView& code, const BitVec& error) {
    if (error.size() != code.n_bits()) throw DimensionMismatch("syndrome: error size != n_bits");
    BitVec sigma(code.n_checks());
    error.for_each([&](std::uint32_t v) {
        for (auto c : code.bit_checks[v]) sigma.flip(c);
    });
    return sigma;
}

BitflipRun bitflip_decode(const ClassicalCodeView& code, const BitVec& target_syndrome,
                          std::uint32_t max_iters) {
    if (target_syndrome.size() != code.n_checks())
        throw DimensionMismatch("bitflip_decode: syndrome size != n_checks");
    BitflipRun run;
    run.estimate = BitVec(code.n_bits());
    BitVec sigma = target_syndrome;
    auto weight = static_cast<std::uint32_t>(sigma.count());
    run.weights.push_back(weight);

    while (weight > 0 && run.flips.size() < max_iters) {
        bool flipped = false;
        for (std::uint32_t v = 0; v < code.n_bits() && !flipped; ++v) {
            // Flipping v toggles its check neighborhood; the weight drops by
            // (#satisfied-in-sigma) - (#newly-violated).
            std::int64_t gain = 0;
            for (auto c : code.bit_checks[v]) gain += sigma.test(c) ? 1 : -1;
            if (gain > 0) {
                for (auto c : code.bit_checks[v]) sigma.flip(c);
                run.estimate.flip(v);
                run.flips.push_back(v);
                weight = static_cast<std::uint32_t>(weight - gain);
                run.weights.push_back(weight);
                flipped = true;
            }
        }
        if (!flipped) break;
    }
    run.termination = (weight == 0) ? BitflipTermination::Converged : BitflipTermination::Stalled;
    return run;
}

} // namespace qxc
