#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qxc/bitvec.hpp"
#include "qxc/graph.hpp"
#include "qxc/noise.hpp"
#include "qxc/rational.hpp"
#include "qxc/stats.hpp"

namespace qxc {

// Binary entropy, base-2 KL divergence, and the connected-set growth rate
// K(d) = (d-1)(1 + 1/(d-2))^(d-2); all evaluated in the log domain where it
// matters.  entropy(0) = entropy(1) = 0 by continuity; K(2) = 1.
double entropy(double x);
double kl(double a, double p);
double log2_K_d(std::uint32_t d);
double K_d(std::uint32_t d);

// 2^(n h(k/n)) >= binom(n, k)
double binom_entropy_bound(std::uint64_t n, std::uint64_t k);
// 2^(-s D(k/s || p)) >= P[Binom(s, p) >= k], requires k >= s p
double chernoff_tail(std::uint64_t s, std::uint64_t k, double p);

// Exact Raney-number bound |V| * d/(s[s(d-2)+2]) * binom(s(d-1), s-1) on the
// number of connected sets of size s, as exact integer cross-comparison:
// true iff count <= bound.
bool raney_bound_holds(std::uint64_t count, std::uint64_t n_vertices, std::uint32_t d, std::uint32_t s);

// Thresholds and tail bounds, log-domain.
//   p_ls(d, alpha)  = (2^{-h(alpha)} / K(d))^{1/alpha}
//   bound_ls        = C |V| (p/p_ls)^{alpha t},
//                     1/C = (1 - 2^{h/alpha} p)(1 - (p/p_ls)^alpha)
//   q_iid           = (1-p)^{d-1-alpha} p^alpha 2^{h(alpha)} K(d)
//   bound_iid       = |V| ((d-1)/(d-2))^2 q^t / (1-q)
// bound_* throw DomainError when the prefactors blow up (p >= p_ls, q >= 1).
double p_ls(std::uint32_t d, double alpha);
struct LsBound {
    double bound = 0.0;
    double prefactor_c = 0.0;
};
LsBound bound_ls(std::uint64_t n_vertices, double p, std::uint32_t d, double alpha, std::uint64_t t);
double q_iid(double p, std::uint32_t d, double alpha);
// Unique root of q(p) = 1 in (0, alpha/(d-1)], by bisection to relative
// tolerance tol.  At alpha = 1 the root coincides with the stationary point
// of q, so achievable accuracy degrades to ~sqrt(machine epsilon) there.
double p_iid(std::uint32_t d, double alpha, double tol = 1e-12);
double bound_iid(std::uint64_t n_vertices, double p, std::uint32_t d, double alpha, std::uint64_t t);

struct MaxConnResult {
    std::uint32_t value = 0;  // max size of a connected alpha-subset, capped
    bool cap_hit = false;     // a qualifying set of size == size_cap exists
};

// Exact MaxConn_alpha(E) restricted to sizes <= size_cap, by branch-and-bound
// over the canonical connected-set enumeration anchored at E-vertices.
// cap_hit signals the true value may exceed the cap.
MaxConnResult max_conn_alpha_exact(const Graph& g, const BitVec& e, const Rat& alpha,
                                   std::uint32_t size_cap, std::uint64_t budget = 200'000'000ull);

// Smallest superset X' of x with boundary(X') disjoint from e, grown by
// repeatedly absorbing boundary vertices inside e.  Preserves connectivity
// and adds only e-vertices.
BitVec alpha_closure(const Graph& g, const BitVec& x, const BitVec& e);

struct TailEstimate {
    std::uint64_t trials = 0;
    std::uint64_t exceedances = 0;
    double estimate = 0.0;
    Interval ci;  // Wilson 99%
};

// Monte Carlo estimate of P[MaxConn_alpha(E) >= t] under the given sampler;
// a CapHit with size_cap >= t counts as exceedance.
TailEstimate estimate_maxconn_tail(const Graph& g, const SetSampler& sampler, const Rat& alpha,
                                   std::uint32_t t, std::uint64_t trials, std::uint32_t size_cap,
                                   std::uint64_t budget = 200'000'000ull);

struct TreeExperimentResult {
    std::uint32_t levels = 0;          // tree has depths 0 .. levels-1
    std::uint64_t tree_vertices = 0;
    double event_fraction = 0.0;       // fraction of depth-(c-1)k vertices whose path event holds
    Interval event_ci;
    std::uint64_t witness_size = 0;    // |S| of the constructed connected witness set
    std::uint64_t witness_in_e = 0;    // |S & E|
    double witness_ratio = 0.0;        // the alpha for which S is an alpha-subset
    double survival_analytic = 0.0;    // smallest fixed point of the offspring pgf
    double survival_estimate = 0.0;    // simulated branching lineages
    Interval survival_ci;
    std::uint64_t lineages = 0;
};

// Lower-bound construction on the complete (d-1)-tree with ck levels: path
// events at density 1/ell from depth (c-1)k down, the connected witness set
// they define, and the Binomial((d-1)^ell, p) branching process whose
// survival probability lower-bounds the event probability.
TreeExperimentResult tree_lower_bound_experiment(std::uint32_t d, std::uint32_t ell, std::uint32_t c,
                                                 std::uint32_t k, double p, std::uint64_t lineages,
                                                 std::uint64_t seed);

// Survival probability of a branching process with Binomial(n, p) offspring:
// 1 - q* with q* the smallest fixed point of q = (1 - p + p q)^n.
double branching_survival(std::uint64_t n_offspring, double p);

} // namespace qxc
