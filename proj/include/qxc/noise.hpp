#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qxc/bitvec.hpp"
#include "qxc/graph.hpp"

namespace qxc {

enum class NoiseKind { Iid, Depolarizing, ClusterBurst };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Iid;
    double p = 0.0;
    // ClusterBurst knob: every burst is the first burst_size vertices of a
    // deterministic BFS from its anchor.
    std::uint32_t burst_size = 1;

    std::string kind_name() const {
        switch (kind) {
            case NoiseKind::Iid: return "iid";
            case NoiseKind::Depolarizing: return "depolarizing";
            case NoiseKind::ClusterBurst: return "cluster_burst";
        }
        return "iid";
    }
    // per-side iid marginal: depolarizing strength p gives 2p/3 on each side
    double side_p() const { return kind == NoiseKind::Depolarizing ? 2.0 * p / 3.0 : p; }
};

// Each index included independently with probability p.  Deterministic per
// (seed, trial, stream tag).
BitVec sample_iid(std::uint32_t n, double p, std::uint64_t seed, std::uint64_t trial = 0,
                  std::uint64_t tag = 0);

// X/Z-side marginals of a Pauli channel.  The depolarizing channel of
// strength p gives (2p/3, 2p/3); a general (p_X, p_Y, p_Z) channel gives
// (p_X + p_Y, p_Y + p_Z).
std::pair<double, double> depolarizing_marginals(double p_depol);
std::pair<double, double> pauli_marginals(double p_x, double p_y, double p_z);

// Analytic certificate shipped with every cluster-burst sampler: anchors are
// independent Bernoulli(anchor_rate); any fixed F needs at least
// ceil(|F|/burst_size) anchors among at most coverage*|F| candidates, so
//   P(F in E) <= binom(min(coverage*|F|, n), ceil(|F|/b)) * a^ceil(|F|/b),
// and anchor_rate is chosen (by bisection) as the largest value keeping that
// bound below p^|F| for every |F|.
struct BurstCertificate {
    double p = 0.0;                 // target local-stochastic parameter
    double anchor_rate = 0.0;       // a
    std::uint32_t burst_size = 1;   // b
    std::uint32_t coverage = 1;     // m = max #anchors whose burst covers a fixed vertex
    std::uint32_t n = 0;

    // The certified bound on P(F in E) for |F| = f.
    double inclusion_bound(std::uint32_t f) const;
    // True iff inclusion_bound(f) <= p^f for all 1 <= f <= n.
    bool valid() const;
};

class ClusterBurstSampler {
public:
    // Throws InfeasibleKnobs when no positive anchor rate satisfies the
    // certificate (only possible for p = 0 with bursts, handled as empty).
    ClusterBurstSampler(const Graph& g, double p, std::uint32_t burst_size);

    BitVec sample(std::uint64_t seed, std::uint64_t trial = 0, std::uint64_t tag = 0) const;
    const BurstCertificate& certificate() const { return cert_; }
    const std::vector<std::uint32_t>& burst(std::uint32_t anchor) const { return bursts_[anchor]; }

private:
    std::uint32_t n_ = 0;
    BurstCertificate cert_;
    std::vector<std::vector<std::uint32_t>> bursts_;  // BFS-prefix burst per anchor
};

// Empirical verification of P(F in E) <= p^|F| over all connected F with
// |F| <= f_max plus a sample of disconnected F.  A violation is flagged only
// when the one-sided Wilson lower bound clears the target.
struct LsCheckEntry {
    std::vector<std::uint32_t> f;
    bool connected = true;
    std::uint64_t hits = 0;
    double bound = 0.0;     // p^|F|
    double lower_ci = 0.0;  // Wilson lower bound of the empirical frequency
    bool violated = false;
};

struct LsCheckReport {
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    std::vector<LsCheckEntry> entries;
};

using SetSampler = std::function<BitVec(std::uint64_t trial)>;

LsCheckReport ls_empirical_check(const SetSampler& sampler, double p, const Graph& g,
                                 std::uint32_t f_max, std::uint64_t trials, std::uint64_t seed,
                                 double z = 3.2905267314919255,  // one-sided 99.95%
                                 std::uint64_t budget = 1'000'000);

} // namespace qxc
