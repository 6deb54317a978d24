#include "qxc/percolation.hpp"

#include <algorithm>
#include <cmath>

#include "qxc/errors.hpp"
#include "qxc/rng.hpp"

namespace qxc {

// ---------------------------------------------------------------------------
// Entropy-style bounds

double entropy(double x) {
    if (x < 0.0 || x > 1.0) throw DomainError("entropy: argument outside [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double kl(double a, double p) {
    if (a < 0.0 || a > 1.0 || p <= 0.0 || p >= 1.0) throw DomainError("kl: arguments out of range");
    double r = 0.0;
    if (a > 0.0) r += a * std::log2(a / p);
    if (a < 1.0) r += (1.0 - a) * std::log2((1.0 - a) / (1.0 - p));
    return r;
}

double log2_K_d(std::uint32_t d) {
    if (d < 2) throw DomainError("K_d: d must be >= 2");
    if (d == 2) return 0.0;  // binom(s, s) = 1 regime
    return std::log2(static_cast<double>(d - 1)) +
           (d - 2) * std::log2(1.0 + 1.0 / static_cast<double>(d - 2));
}

double K_d(std::uint32_t d) { return std::exp2(log2_K_d(d)); }

double binom_entropy_bound(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw DomainError("binom_entropy_bound: k > n");
    if (n == 0) return 1.0;
    return std::exp2(static_cast<double>(n) * entropy(static_cast<double>(k) / static_cast<double>(n)));
}

double chernoff_tail(std::uint64_t s, std::uint64_t k, double p) {
    if (p <= 0.0 || p >= 1.0) throw DomainError("chernoff_tail: p outside (0, 1)");
    if (k > s) throw DomainError("chernoff_tail: k > s");
    const double a = static_cast<double>(k) / static_cast<double>(s);
    if (a < p) throw DomainError("chernoff_tail: requires k >= s p");
    return std::exp2(-static_cast<double>(s) * kl(a, p));
}

bool raney_bound_holds(std::uint64_t count, std::uint64_t n_vertices, std::uint32_t d, std::uint32_t s) {
    if (d < 2 || s < 1) throw DomainError("raney_bound_holds: need d >= 2, s >= 1");
    // count * s * [s(d-2)+2] <= |V| * d * binom(s(d-1), s-1), all exact.
    const std::uint64_t top = static_cast<std::uint64_t>(s) * (d - 1);
    __int128 binom = 1;
    bool saturated = false;
    for (std::uint64_t i = 1; i + 1 <= s; ++i) {
        binom = binom * (top - (s - 1) + i) / i;
        if (binom > (static_cast<__int128>(1) << 120)) { saturated = true; break; }
    }
    if (saturated) return true;  // bound astronomically large
    const __int128 lhs = static_cast<__int128>(count) * s * (static_cast<std::uint64_t>(s) * (d - 2) + 2);
    const __int128 rhs = static_cast<__int128>(n_vertices) * d * binom;
    return lhs <= rhs;
}

// ---------------------------------------------------------------------------
// Thresholds

double p_ls(std::uint32_t d, double alpha) {
    if (alpha <= 0.0 || alpha > 1.0) throw DomainError("p_ls: alpha outside (0, 1]");
    const double log2_pls = (-entropy(alpha) - log2_K_d(d)) / alpha;
    return std::exp2(log2_pls);
}

LsBound bound_ls(std::uint64_t n_vertices, double p, std::uint32_t d, double alpha, std::uint64_t t) {
    if (p < 0.0) throw DomainError("bound_ls: negative p");
    const double pls = p_ls(d, alpha);
    if (p >= pls) throw DomainError("bound_ls: requires p < p_ls");
    LsBound out;
    if (p == 0.0) {
        out.prefactor_c = 1.0;
        out.bound = 0.0;
        return out;
    }
    const double log2_ratio = std::log2(p) - std::log2(pls);  // < 0
    const double term1 = 1.0 - std::exp2(entropy(alpha) / alpha) * p;
    const double term2 = 1.0 - std::exp2(alpha * log2_ratio);
    out.prefactor_c = 1.0 / (term1 * term2);
    out.bound = out.prefactor_c * static_cast<double>(n_vertices) *
                std::exp2(alpha * static_cast<double>(t) * log2_ratio);
    return out;
}

double q_iid(double p, std::uint32_t d, double alpha) {
    if (alpha <= 0.0 || alpha > 1.0) throw DomainError("q_iid: alpha outside (0, 1]");
    if (p < 0.0 || p >= 1.0) throw DomainError("q_iid: p outside [0, 1)");
    if (p == 0.0) return 0.0;
    const double log2q = (static_cast<double>(d) - 1.0 - alpha) * std::log2(1.0 - p) +
                         alpha * std::log2(p) + entropy(alpha) + log2_K_d(d);
    return std::exp2(log2q);
}

double p_iid(std::uint32_t d, double alpha, double tol) {
    if (alpha <= 0.0 || alpha > 1.0) throw DomainError("p_iid: alpha outside (0, 1]");
    if (d < 3) throw DomainError("p_iid: d must be >= 3");
    const double hi0 = alpha / static_cast<double>(d - 1);
    // q is increasing on [0, alpha/(d-1)] with q(0) = 0 and q(hi0) >= 1.
    if (q_iid(hi0, d, alpha) < 1.0)
        throw InvariantViolation("p_iid: q(alpha/(d-1)) < 1 contradicts the bracketing lemma");
    double lo = 0.0, hi = hi0;
    while ((hi - lo) > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (q_iid(mid, d, alpha) < 1.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double bound_iid(std::uint64_t n_vertices, double p, std::uint32_t d, double alpha, std::uint64_t t) {
    if (d < 3) throw DomainError("bound_iid: d must be >= 3");
    const double q = q_iid(p, d, alpha);
    if (q >= 1.0) throw DomainError("bound_iid: requires q < 1");
    const double ratio = static_cast<double>(d - 1) / static_cast<double>(d - 2);
    return static_cast<double>(n_vertices) * ratio * ratio * std::pow(q, static_cast<double>(t)) /
           (1.0 - q);
}

// ---------------------------------------------------------------------------
// MaxConn

namespace {

// Branch-and-bound over connected sets intersecting E.  Each connected set X
// with X & E nonempty is enumerated once: its anchor is the smallest E-vertex
// it contains, growth allows any clean vertex but only E-vertices above the
// anchor.  A branch dies when even absorbing clean-budget many E-vertices
// cannot qualify at any admissible size above the current best.
struct MaxConnSearch {
    const Graph& g;
    const BitVec& e;
    std::int64_t a_num, a_den;
    std::uint32_t cap;
    std::uint64_t budget;
    std::uint64_t visited = 0;

    std::uint32_t best = 0;
    bool cap_hit = false;

    std::uint32_t anchor = 0;
    std::vector<std::uint32_t> current;
    std::uint32_t in_e_count = 0;
    BitVec in_neighborhood;

    MaxConnSearch(const Graph& g_, const BitVec& e_, const Rat& alpha, std::uint32_t cap_,
                  std::uint64_t budget_)
        : g(g_), e(e_), a_num(alpha.num), a_den(alpha.den), cap(cap_), budget(budget_),
          in_neighborhood(g_.n) {}

    bool eligible(std::uint32_t u) const { return !e.test(u) || u > anchor; }

    bool qualifies(std::uint32_t size, std::uint32_t in_e) const {
        return static_cast<std::int64_t>(in_e) * a_den >= a_num * static_cast<std::int64_t>(size);
    }

    // Can any extension of the current branch still improve on best?
    bool viable() const {
        if (best >= cap) return false;
        const auto s = static_cast<std::int64_t>(current.size());
        const auto in_e = static_cast<std::int64_t>(in_e_count);
        // optimistic completion: all additions are E-vertices, final size s'
        // in (best, cap]; slack is maximal at s' = cap
        const std::int64_t s_final = static_cast<std::int64_t>(cap);
        return (in_e - s + s_final) * a_den >= a_num * s_final;
    }

    void note(std::uint32_t size, std::uint32_t in_e) {
        if (qualifies(size, in_e) && size > best) {
            best = size;
            if (best == cap) cap_hit = true;
        }
    }

    void extend(std::vector<std::uint32_t> ext) {
        if (++visited > budget) throw BudgetExceeded("max_conn_alpha_exact: enumeration budget exceeded");
        note(static_cast<std::uint32_t>(current.size()), in_e_count);
        if (current.size() == cap || !viable()) return;
        while (!ext.empty() && viable()) {
            std::uint32_t w = ext.back();
            ext.pop_back();
            std::vector<std::uint32_t> next_ext = ext;
            std::vector<std::uint32_t> added;
            for (auto u : g.adj[w])
                if (eligible(u) && !in_neighborhood.test(u)) {
                    next_ext.push_back(u);
                    in_neighborhood.set(u);
                    added.push_back(u);
                }
            current.push_back(w);
            const bool w_in_e = e.test(w);
            in_e_count += w_in_e ? 1 : 0;
            extend(std::move(next_ext));
            in_e_count -= w_in_e ? 1 : 0;
            current.pop_back();
            for (auto u : added) in_neighborhood.reset(u);
        }
    }

    void run() {
        std::vector<std::uint32_t> anchors = e.indices();
        for (auto v : anchors) {
            if (best >= cap) break;
            anchor = v;
            current.assign(1, v);
            in_e_count = 1;
            in_neighborhood.clear();
            in_neighborhood.set(v);
            std::vector<std::uint32_t> ext;
            for (auto u : g.adj[v])
                if (eligible(u)) {
                    ext.push_back(u);
                    in_neighborhood.set(u);
                }
            extend(std::move(ext));
        }
    }
};

} // namespace

MaxConnResult max_conn_alpha_exact(const Graph& g, const BitVec& e, const Rat& alpha,
                                   std::uint32_t size_cap, std::uint64_t budget) {
    if (e.size() != g.n) throw DimensionMismatch("max_conn_alpha_exact: set size != n");
    if (!alpha.is_positive() || alpha > Rat(1))
        throw PreconditionViolated("max_conn_alpha_exact: alpha must lie in (0, 1]");
    MaxConnResult res;
    if (size_cap == 0 || e.none()) return res;
    MaxConnSearch search(g, e, alpha, size_cap, budget);
    search.run();
    res.value = search.best;
    res.cap_hit = search.cap_hit;
    return res;
}

BitVec alpha_closure(const Graph& g, const BitVec& x, const BitVec& e) {
    if (x.size() != g.n || e.size() != g.n) throw DimensionMismatch("alpha_closure: size mismatch");
    BitVec out = x;
    std::vector<std::uint32_t> frontier = x.indices();
    while (!frontier.empty()) {
        std::vector<std::uint32_t> next;
        for (auto u : frontier)
            for (auto v : g.adj[u])
                if (!out.test(v) && e.test(v)) {
                    out.set(v);
                    next.push_back(v);
                }
        frontier = std::move(next);
    }
    return out;
}

TailEstimate estimate_maxconn_tail(const Graph& g, const SetSampler& sampler, const Rat& alpha,
                                   std::uint32_t t, std::uint64_t trials, std::uint32_t size_cap,
                                   std::uint64_t budget) {
    if (size_cap < t) throw PreconditionViolated("estimate_maxconn_tail: size_cap < t");
    TailEstimate est;
    est.trials = trials;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const BitVec e = sampler(i);
        const auto res = max_conn_alpha_exact(g, e, alpha, size_cap, budget);
        if (res.value >= t || res.cap_hit) ++est.exceedances;
    }
    est.estimate = trials ? static_cast<double>(est.exceedances) / static_cast<double>(trials) : 0.0;
    est.ci = wilson_interval(est.exceedances, trials);
    return est;
}

// ---------------------------------------------------------------------------
// Tree lower bound (branching construction)

double branching_survival(std::uint64_t n_offspring, double p) {
    if (p < 0.0 || p > 1.0) throw DomainError("branching_survival: p outside [0, 1]");
    // extinction probability: smallest fixed point of q = (1 - p + p q)^n,
    // reached by monotone iteration from 0
    double q = 0.0;
    for (int it = 0; it < 100000; ++it) {
        const double next = std::pow(1.0 - p + p * q, static_cast<double>(n_offspring));
        if (std::abs(next - q) < 1e-15) { q = next; break; }
        q = next;
    }
    return 1.0 - q;
}

TreeExperimentResult tree_lower_bound_experiment(std::uint32_t d, std::uint32_t ell, std::uint32_t c,
                                                 std::uint32_t k, double p, std::uint64_t lineages,
                                                 std::uint64_t seed) {
    if (d < 3 || ell < 1 || c < 2 || k < 1) throw PreconditionViolated("tree experiment: bad shape");
    if (p < 0.0 || p >= 1.0) throw PreconditionViolated("tree experiment: p outside [0, 1)");

    TreeExperimentResult res;
    res.levels = c * k;
    // complete (d-1)-ary tree with depths 0 .. ck-1 (edge-height ck-1)
    const Graph tree = complete_tree(d, res.levels - 1);
    res.tree_vertices = tree.n;
    const std::uint64_t branch = d - 1;

    // level offsets
    std::vector<std::uint64_t> level_begin(res.levels + 1, 0);
    std::uint64_t width = 1;
    for (std::uint32_t lvl = 0; lvl < res.levels; ++lvl) {
        level_begin[lvl + 1] = level_begin[lvl] + width;
        width *= branch;
    }

    CounterRng rng = CounterRng::keyed(seed, 0, /*tag=*/0x54524545ull);
    BitVec e(tree.n);
    for (std::uint32_t v = 0; v < tree.n; ++v)
        if (rng.bernoulli(p)) e.set(v);

    // best_path[v] = max #E-vertices on a v -> leaf path (within the last k
    // levels), computed bottom-up
    const std::uint32_t top = (c - 1) * k;  // depth of the event vertices
    std::vector<std::uint16_t> best(tree.n, 0);
    for (std::uint32_t lvl = res.levels; lvl-- > top;) {
        for (std::uint64_t v = level_begin[lvl]; v < level_begin[lvl + 1]; ++v) {
            std::uint16_t child_best = 0;
            if (lvl + 1 < res.levels)
                for (std::uint64_t ch = branch * v + 1; ch <= branch * v + branch; ++ch)
                    child_best = std::max(child_best, best[ch]);
            best[v] = static_cast<std::uint16_t>(child_best + (e.test(static_cast<std::uint32_t>(v)) ? 1 : 0));
        }
    }

    // event: some path holds >= k/ell E-vertices (integer comparison)
    std::uint64_t holds = 0;
    std::uint64_t witness_in_e_paths = 0;
    for (std::uint64_t v = level_begin[top]; v < level_begin[top + 1]; ++v) {
        if (static_cast<std::uint64_t>(best[v]) * ell >= k) {
            ++holds;
            witness_in_e_paths += best[v];
        }
    }
    const std::uint64_t event_vertices = level_begin[top + 1] - level_begin[top];
    res.event_fraction = static_cast<double>(holds) / static_cast<double>(event_vertices);
    res.event_ci = wilson_interval(holds, event_vertices);

    // witness set: all levels above `top`, plus one qualifying path per event
    // vertex where the event holds
    std::uint64_t upper = level_begin[top];
    std::uint64_t upper_in_e = 0;
    for (std::uint64_t v = 0; v < upper; ++v)
        if (e.test(static_cast<std::uint32_t>(v))) ++upper_in_e;
    res.witness_size = upper + holds * k;
    res.witness_in_e = upper_in_e + witness_in_e_paths;
    res.witness_ratio = res.witness_size
                            ? static_cast<double>(res.witness_in_e) / static_cast<double>(res.witness_size)
                            : 0.0;

    // branching process with Binomial((d-1)^ell, p) offspring
    std::uint64_t offspring_n = 1;
    for (std::uint32_t i = 0; i < ell; ++i) offspring_n *= branch;
    res.survival_analytic = branching_survival(offspring_n, p);

    const std::uint32_t max_generations = 100;
    const std::uint64_t pop_cap = 1000;
    std::uint64_t survived = 0;
    for (std::uint64_t lin = 0; lin < lineages; ++lin) {
        CounterRng lr = CounterRng::keyed(seed, lin + 1, /*tag=*/0x4C494E45ull);
        std::uint64_t pop = 1;
        for (std::uint32_t gen = 0; gen < max_generations && pop > 0 && pop < pop_cap; ++gen) {
            std::uint64_t next = 0;
            for (std::uint64_t i = 0; i < pop; ++i)
                for (std::uint64_t j = 0; j < offspring_n; ++j)
                    if (lr.bernoulli(p)) ++next;
            pop = next;
        }
        if (pop > 0) ++survived;
    }
    res.lineages = lineages;
    res.survival_estimate = lineages ? static_cast<double>(survived) / static_cast<double>(lineages) : 0.0;
    res.survival_ci = wilson_interval(survived, lineages);
    return res;
}

} // namespace qxc
