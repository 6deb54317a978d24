#include "qxc/noise.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "qxc/errors.hpp"
#include "qxc/rng.hpp"
#include "qxc/stats.hpp"

namespace qxc {

BitVec sample_iid(std::uint32_t n, double p, std::uint64_t seed, std::uint64_t trial, std::uint64_t tag) {
    if (p < 0.0 || p >= 1.0) throw PreconditionViolated("sample_iid: p must lie in [0, 1)");
    CounterRng rng = CounterRng::keyed(seed, trial, tag);
    BitVec e(n);
    for (std::uint32_t i = 0; i < n; ++i)
        if (rng.bernoulli(p)) e.set(i);
    return e;
}

std::pair<double, double> depolarizing_marginals(double p_depol) {
    if (p_depol < 0.0 || p_depol >= 1.0)
        throw PreconditionViolated("depolarizing_marginals: p must lie in [0, 1)");
    return {2.0 * p_depol / 3.0, 2.0 * p_depol / 3.0};
}

std::pair<double, double> pauli_marginals(double p_x, double p_y, double p_z) {
    if (p_x < 0 || p_y < 0 || p_z < 0 || p_x + p_y + p_z >= 1.0)
        throw PreconditionViolated("pauli_marginals: probabilities out of range");
    return {p_x + p_y, p_y + p_z};
}

// ---------------------------------------------------------------------------
// Cluster bursts

namespace {

double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -HUGE_VAL;
    double r = 0.0;
    for (std::uint64_t i = 1; i <= k; ++i)
        r += std::log(static_cast<double>(n - k + i)) - std::log(static_cast<double>(i));
    return r;
}

} // namespace

double BurstCertificate::inclusion_bound(std::uint32_t f) const {
    if (f == 0) return 1.0;
    const std::uint64_t k = (f + burst_size - 1) / burst_size;
    const std::uint64_t m = std::min<std::uint64_t>(static_cast<std::uint64_t>(coverage) * f, n);
    const double log_bound = log_binomial(m, k) + k * std::log(anchor_rate);
    return std::exp(log_bound);
}

bool BurstCertificate::valid() const {
    if (anchor_rate <= 0.0) return p == 0.0;
    for (std::uint32_t f = 1; f <= n; ++f)
        if (inclusion_bound(f) > std::pow(p, f) * (1.0 + 1e-12)) return false;
    return true;
}

ClusterBurstSampler::ClusterBurstSampler(const Graph& g, double p, std::uint32_t burst_size) {
    if (p < 0.0 || p >= 1.0) throw PreconditionViolated("ClusterBurstSampler: p must lie in [0, 1)");
    if (burst_size == 0) throw InfeasibleKnobs("ClusterBurstSampler: burst_size must be >= 1");
    n_ = g.n;

    // Deterministic BFS-prefix burst per anchor (ties resolved by index).
    bursts_.assign(n_, {});
    std::vector<std::uint8_t> seen(n_, 0);
    for (std::uint32_t v = 0; v < n_; ++v) {
        auto& burst = bursts_[v];
        std::fill(seen.begin(), seen.end(), 0);
        std::queue<std::uint32_t> q;
        q.push(v);
        seen[v] = 1;
        while (!q.empty() && burst.size() < burst_size) {
            std::uint32_t u = q.front();
            q.pop();
            burst.push_back(u);
            for (auto w : g.adj[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
        }
    }

    std::uint32_t coverage = 0;
    {
        std::vector<std::uint32_t> cover_count(n_, 0);
        for (const auto& burst : bursts_)
            for (auto u : burst) ++cover_count[u];
        for (auto c : cover_count) coverage = std::max(coverage, c);
    }

    cert_.p = p;
    cert_.burst_size = burst_size;
    cert_.coverage = coverage;
    cert_.n = n_;
    if (p == 0.0) {
        cert_.anchor_rate = 0.0;
        return;
    }
    // Largest anchor rate whose certificate stays below p^|F| everywhere.
    auto feasible = [&](double a) {
        cert_.anchor_rate = a;
        return cert_.valid();
    };
    double lo = p;
    int halvings = 0;
    while (!feasible(lo)) {
        lo /= 2.0;
        if (++halvings > 2000) throw InfeasibleKnobs("ClusterBurstSampler: no feasible anchor rate");
    }
    double hi = p;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) lo = mid;
        else hi = mid;
    }
    cert_.anchor_rate = lo;
    if (!cert_.valid()) throw InfeasibleKnobs("ClusterBurstSampler: certificate failed at chosen rate");
}

BitVec ClusterBurstSampler::sample(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag) const {
    CounterRng rng = CounterRng::keyed(seed, trial, tag);
    BitVec e(n_);
    for (std::uint32_t v = 0; v < n_; ++v)
        if (rng.bernoulli(cert_.anchor_rate))
            for (auto u : bursts_[v]) e.set(u);
    return e;
}

// ---------------------------------------------------------------------------
// Local-stochastic empirical check

LsCheckReport ls_empirical_check(const SetSampler& sampler, double p, const Graph& g,
                                 std::uint32_t f_max, std::uint64_t trials, std::uint64_t seed,
                                 double z, std::uint64_t budget) {
    LsCheckReport rep;
    rep.trials = trials;

    std::vector<LsCheckEntry> entries;
    enumerate_connected_sets(g, f_max, budget, [&](const std::vector<std::uint32_t>& s) {
        LsCheckEntry e;
        e.f = s;
        std::sort(e.f.begin(), e.f.end());
        e.connected = true;
        entries.push_back(std::move(e));
    });
    // A handful of disconnected probes of each size (when the graph allows).
    CounterRng rng = CounterRng::keyed(seed, 0, /*tag=*/0x4C53444Bull);
    for (std::uint32_t s = 2; s <= f_max && s <= g.n; ++s) {
        for (int attempt = 0; attempt < 64 && entries.size() < budget; ++attempt) {
            std::vector<std::uint32_t> f;
            BitVec mark(g.n);
            while (f.size() < s) {
                auto v = static_cast<std::uint32_t>(rng.below(g.n));
                if (!mark.test(v)) {
                    mark.set(v);
                    f.push_back(v);
                }
            }
            if (connected_components(g, mark).size() < 2) continue;
            std::sort(f.begin(), f.end());
            LsCheckEntry e;
            e.f = std::move(f);
            e.connected = false;
            entries.push_back(std::move(e));
            if (entries.size() % 8 == 0) break;
        }
    }

    std::vector<BitVec> masks;
    masks.reserve(entries.size());
    for (const auto& e : entries) masks.push_back(BitVec::from_indices(g.n, e.f));

    for (std::uint64_t t = 0; t < trials; ++t) {
        const BitVec sample = sampler(t);
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (masks[i].subset_of(sample)) ++entries[i].hits;
    }

    for (auto& e : entries) {
        e.bound = std::pow(p, static_cast<double>(e.f.size()));
        e.lower_ci = wilson_lower(e.hits, trials, z);
        e.violated = e.lower_ci > e.bound;
        if (e.violated) ++rep.violations;
    }
    rep.entries = std::move(entries);
    return rep;
}

} // namespace qxc
