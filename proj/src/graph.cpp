#include "qxc/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "qxc/errors.hpp"
#include "qxc/rng.hpp"

namespace qxc {

// ---------------------------------------------------------------------------
// BipartiteGraph

BipartiteGraph BipartiteGraph::from_left_adjacency(std::uint32_t n_left, std::uint32_t n_right,
                                                   std::vector<std::vector<std::uint32_t>> adj_left) {
    if (adj_left.size() != n_left) throw DimensionMismatch("adjacency size != n_left");
    BipartiteGraph g;
    g.n_left = n_left;
    g.n_right = n_right;
    g.adj_left = std::move(adj_left);
    g.adj_right.assign(n_right, {});
    for (std::uint32_t u = 0; u < n_left; ++u) {
        std::sort(g.adj_left[u].begin(), g.adj_left[u].end());
        for (auto v : g.adj_left[u]) {
            if (v >= n_right) throw DimensionMismatch("right index out of range");
            g.adj_right[v].push_back(u);
        }
    }
    for (auto& lst : g.adj_right) std::sort(lst.begin(), lst.end());
    for (const auto& lst : g.adj_left)
        g.d_left = std::max<std::uint32_t>(g.d_left, static_cast<std::uint32_t>(lst.size()));
    for (const auto& lst : g.adj_right)
        g.d_right = std::max<std::uint32_t>(g.d_right, static_cast<std::uint32_t>(lst.size()));
    g.validate();
    return g;
}

std::size_t BipartiteGraph::edge_count() const {
    std::size_t m = 0;
    for (const auto& lst : adj_left) m += lst.size();
    return m;
}

bool BipartiteGraph::is_biregular() const {
    for (const auto& lst : adj_left)
        if (lst.size() != d_left) return false;
    for (const auto& lst : adj_right)
        if (lst.size() != d_right) return false;
    return static_cast<std::uint64_t>(n_left) * d_left == static_cast<std::uint64_t>(n_right) * d_right;
}

void BipartiteGraph::validate() const {
    if (adj_left.size() != n_left || adj_right.size() != n_right)
        throw InvariantViolation("adjacency sizes inconsistent");
    std::size_t m_left = 0, m_right = 0;
    for (std::uint32_t u = 0; u < n_left; ++u) {
        const auto& lst = adj_left[u];
        if (lst.size() > d_left) throw InvariantViolation("left degree above bound");
        for (std::size_t i = 0; i < lst.size(); ++i) {
            if (lst[i] >= n_right) throw InvariantViolation("right index out of range");
            if (i && lst[i] <= lst[i - 1]) throw InvariantViolation("unsorted or duplicate neighbor");
            if (!std::binary_search(adj_right[lst[i]].begin(), adj_right[lst[i]].end(), u))
                throw InvariantViolation("edge missing from right adjacency");
        }
        m_left += lst.size();
    }
    for (std::uint32_t v = 0; v < n_right; ++v) {
        const auto& lst = adj_right[v];
        if (lst.size() > d_right) throw InvariantViolation("right degree above bound");
        for (std::size_t i = 0; i < lst.size(); ++i) {
            if (lst[i] >= n_left) throw InvariantViolation("left index out of range");
            if (i && lst[i] <= lst[i - 1]) throw InvariantViolation("unsorted or duplicate neighbor");
        }
        m_right += lst.size();
    }
    if (m_left != m_right) throw InvariantViolation("edge sets disagree between directions");
}

// ---------------------------------------------------------------------------
// Graph

Graph Graph::from_edges(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    Graph g;
    g.n = n;
    g.adj.assign(n, {});
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw DimensionMismatch("vertex index out of range");
        if (u == v) throw DimensionMismatch("self-loop");
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& lst : g.adj) {
        std::sort(lst.begin(), lst.end());
        lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
        g.d_max = std::max<std::uint32_t>(g.d_max, static_cast<std::uint32_t>(lst.size()));
    }
    return g;
}

std::size_t Graph::edge_count() const {
    std::size_t m = 0;
    for (const auto& lst : adj) m += lst.size();
    return m / 2;
}

void Graph::validate() const {
    if (adj.size() != n) throw InvariantViolation("adjacency size != n");
    for (std::uint32_t u = 0; u < n; ++u) {
        const auto& lst = adj[u];
        if (lst.size() > d_max) throw InvariantViolation("degree above bound");
        for (std::size_t i = 0; i < lst.size(); ++i) {
            std::uint32_t v = lst[i];
            if (v >= n) throw InvariantViolation("vertex index out of range");
            if (v == u) throw InvariantViolation("self-loop");
            if (i && lst[i] <= lst[i - 1]) throw InvariantViolation("unsorted or duplicate neighbor");
            if (!std::binary_search(adj[v].begin(), adj[v].end(), u))
                throw InvariantViolation("asymmetric adjacency");
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration-model sampling

BipartiteGraph sample_biregular(std::uint32_t n_left, std::uint32_t n_right,
                                std::uint32_t d_left, std::uint32_t d_right,
                                std::uint64_t seed, std::uint32_t max_retries) {
    if (n_left == 0 || n_right == 0 || d_left == 0 || d_right == 0)
        throw DimensionMismatch("sample_biregular: zero size or degree");
    if (static_cast<std::uint64_t>(n_left) * d_left != static_cast<std::uint64_t>(n_right) * d_right)
        throw DimensionMismatch("sample_biregular: n_left*d_left != n_right*d_right");
    if (d_left > n_right || d_right > n_left)
        throw Unsatisfiable("sample_biregular: degree exceeds opposite side, no simple graph exists");

    const std::size_t m = static_cast<std::size_t>(n_left) * d_left;
    std::vector<std::uint32_t> right_stubs(m);
    for (std::uint32_t v = 0; v < n_right; ++v)
        for (std::uint32_t k = 0; k < d_right; ++k) right_stubs[static_cast<std::size_t>(v) * d_right + k] = v;

    CounterRng rng = CounterRng::keyed(seed, 0, /*tag=*/0x42495247ull);  // graph-sampling stream
    std::vector<std::vector<std::uint32_t>> adj(n_left);

    for (std::uint32_t attempt = 0; attempt < max_retries; ++attempt) {
        // Fisher-Yates over the right stubs; left stub k belongs to vertex k / d_left.
        for (std::size_t i = m - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(right_stubs[i], right_stubs[j]);
        }
        bool simple = true;
        for (std::uint32_t u = 0; u < n_left && simple; ++u) {
            auto& lst = adj[u];
            lst.assign(right_stubs.begin() + static_cast<std::ptrdiff_t>(u) * d_left,
                       right_stubs.begin() + (static_cast<std::ptrdiff_t>(u) + 1) * d_left);
            std::sort(lst.begin(), lst.end());
            for (std::size_t i = 1; i < lst.size(); ++i)
                if (lst[i] == lst[i - 1]) { simple = false; break; }
        }
        if (simple) {
            auto g = BipartiteGraph::from_left_adjacency(n_left, n_right, std::move(adj));
            g.d_left = d_left;
            g.d_right = d_right;
            return g;
        }
    }
    throw Unsatisfiable("sample_biregular: retry cap exceeded without a simple graph");
}

// ---------------------------------------------------------------------------
// Expansion audit

namespace {

struct SideView {
    std::uint32_t n = 0;
    std::uint32_t degree = 0;
    std::uint32_t opposite_n = 0;
    const std::vector<std::vector<std::uint32_t>>* adj = nullptr;
};

SideView side_view(const BipartiteGraph& g, Side side) {
    if (side == Side::Left) return {g.n_left, g.d_left, g.n_right, &g.adj_left};
    return {g.n_right, g.d_right, g.n_left, &g.adj_right};
}

// |Gamma(S)| * delta.den >= (delta.den - delta.num) * d * |S|
bool expands(const SideView& sv, const std::vector<std::uint32_t>& s, const Rat& delta, BitVec& scratch) {
    scratch.clear();
    std::size_t nbrs = 0;
    for (auto u : s)
        for (auto v : (*sv.adj)[u])
            if (!scratch.test(v)) { scratch.set(v); ++nbrs; }
    const __int128 lhs = static_cast<__int128>(nbrs) * delta.den;
    const __int128 rhs = static_cast<__int128>(delta.den - delta.num) * sv.degree * s.size();
    return lhs >= rhs;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > static_cast<__int128>(cap)) return cap + 1;
    }
    return static_cast<std::uint64_t>(r);
}

} // namespace

AuditReport expansion_audit(const BipartiteGraph& g, Side side, const Rat& gamma, const Rat& delta,
                            std::uint32_t s_max, AuditMode mode, std::uint64_t probes,
                            std::uint64_t seed, std::uint64_t subset_budget) {
    if (!(gamma.is_positive() && gamma <= Rat(1)) || !(delta.is_positive() && delta < Rat(1)))
        throw PreconditionViolated("expansion_audit: gamma, delta must lie in (0,1)");
    const SideView sv = side_view(g, side);
    if (s_max == 0 || s_max > sv.n) throw PreconditionViolated("expansion_audit: bad s_max");

    AuditReport rep;
    rep.mode = mode;
    rep.side = side;
    rep.gamma = gamma;
    rep.delta = delta;
    rep.s_max = s_max;

    BitVec scratch(sv.opposite_n);

    if (mode == AuditMode::Exhaustive) {
        // s_max must stay within the gamma*n regime being certified.
        if (Rat(s_max) > gamma * Rat(sv.n))
            throw PreconditionViolated("expansion_audit: s_max > floor(gamma * n_side)");
        std::uint64_t total = 0;
        for (std::uint32_t s = 1; s <= s_max; ++s) {
            total += binomial_capped(sv.n, s, subset_budget);
            if (total > subset_budget)
                throw BudgetExceeded("expansion_audit: subset count above budget");
        }
        std::vector<std::uint32_t> subset;
        for (std::uint32_t s = 1; s <= s_max; ++s) {
            subset.resize(s);
            for (std::uint32_t i = 0; i < s; ++i) subset[i] = i;
            while (true) {
                ++rep.subsets_checked;
                if (!expands(sv, subset, delta, scratch)) {
                    rep.counterexample = subset;
                    return rep;
                }
                // next combination in lexicographic order
                std::int32_t i = static_cast<std::int32_t>(s) - 1;
                while (i >= 0 && subset[static_cast<std::size_t>(i)] ==
                                     sv.n - s + static_cast<std::uint32_t>(i))
                    --i;
                if (i < 0) break;
                ++subset[static_cast<std::size_t>(i)];
                for (auto j = static_cast<std::uint32_t>(i) + 1; j < s; ++j)
                    subset[j] = subset[j - 1] + 1;
            }
            rep.verified_up_to = s;
        }
        return rep;
    }

    // Probe mode: random subsets, refute-only.
    CounterRng rng = CounterRng::keyed(seed, 0, /*tag=*/0x50524F42ull);
    std::vector<std::uint32_t> pool(sv.n);
    for (std::uint32_t i = 0; i < sv.n; ++i) pool[i] = i;
    std::vector<std::uint32_t> subset;
    for (std::uint64_t t = 0; t < probes; ++t) {
        const auto s = static_cast<std::uint32_t>(1 + rng.below(s_max));
        subset.clear();
        for (std::uint32_t i = 0; i < s; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(sv.n - i));
            std::swap(pool[i], pool[j]);
            subset.push_back(pool[i]);
        }
        std::sort(subset.begin(), subset.end());
        ++rep.subsets_checked;
        if (!expands(sv, subset, delta, scratch)) {
            rep.counterexample = subset;
            return rep;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Connected sets

std::vector<std::vector<std::uint32_t>> connected_components(const Graph& g, const BitVec& s) {
    if (s.size() != g.n) throw DimensionMismatch("connected_components: set size != n");
    std::vector<std::vector<std::uint32_t>> comps;
    BitVec seen(g.n);
    std::vector<std::uint32_t> stack;
    s.for_each([&](std::uint32_t start) {
        if (seen.test(start)) return;
        std::vector<std::uint32_t> comp;
        stack.push_back(start);
        seen.set(start);
        while (!stack.empty()) {
            std::uint32_t u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (auto v : g.adj[u])
                if (s.test(v) && !seen.test(v)) {
                    seen.set(v);
                    stack.push_back(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    });
    return comps;
}

namespace {

// ESU-style enumeration: every connected set is reached exactly once, rooted
// at its smallest vertex, extensions drawn from exclusive neighborhoods.
struct EsuState {
    const Graph& g;
    std::uint32_t s_max;
    std::uint64_t budget;
    const ConnectedSetVisitor& visitor;
    std::vector<std::uint64_t>& counts;
    std::uint64_t emitted = 0;
    std::vector<std::uint32_t> current;
    BitVec in_set;
    BitVec in_neighborhood;  // vertices in current set or adjacent to it

    EsuState(const Graph& g_, std::uint32_t s_max_, std::uint64_t budget_,
             const ConnectedSetVisitor& visitor_, std::vector<std::uint64_t>& counts_)
        : g(g_), s_max(s_max_), budget(budget_), visitor(visitor_), counts(counts_),
          in_set(g_.n), in_neighborhood(g_.n) {}

    void emit() {
        if (++emitted > budget) throw BudgetExceeded("enumerate_connected_sets: budget exceeded");
        ++counts[current.size()];
        if (visitor) visitor(current);
    }

    void extend(std::uint32_t anchor, std::vector<std::uint32_t> ext) {
        emit();
        if (current.size() == s_max) return;
        while (!ext.empty()) {
            std::uint32_t w = ext.back();
            ext.pop_back();
            std::vector<std::uint32_t> next_ext = ext;
            // Exclusive neighbors of w: not already in the set's closed
            // neighborhood, and above the anchor.
            std::vector<std::uint32_t> added;
            for (auto u : g.adj[w])
                if (u > anchor && !in_neighborhood.test(u)) {
                    next_ext.push_back(u);
                    in_neighborhood.set(u);
                    added.push_back(u);
                }
            current.push_back(w);
            in_set.set(w);
            extend(anchor, std::move(next_ext));
            in_set.reset(w);
            current.pop_back();
            for (auto u : added) in_neighborhood.reset(u);
        }
    }

    void run() {
        for (std::uint32_t v = 0; v < g.n; ++v) {
            current.assign(1, v);
            in_set.clear();
            in_neighborhood.clear();
            in_set.set(v);
            in_neighborhood.set(v);
            std::vector<std::uint32_t> ext;
            for (auto u : g.adj[v])
                if (u > v) {
                    ext.push_back(u);
                    in_neighborhood.set(u);
                }
            extend(v, std::move(ext));
        }
    }
};

} // namespace

std::vector<std::uint64_t> enumerate_connected_sets(const Graph& g, std::uint32_t s_max,
                                                    std::uint64_t budget,
                                                    const ConnectedSetVisitor& visitor) {
    if (s_max == 0) throw PreconditionViolated("enumerate_connected_sets: s_max must be >= 1");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(s_max) + 1, 0);
    EsuState state(g, s_max, budget, visitor, counts);
    state.run();
    counts.erase(counts.begin());  // drop size-0 slot
    return counts;
}

// ---------------------------------------------------------------------------
// Complete tree

Graph complete_tree(std::uint32_t d, std::uint32_t height, std::uint64_t vertex_cap) {
    if (d < 3) throw PreconditionViolated("complete_tree: d must be >= 3");
    if (height < 1) throw PreconditionViolated("complete_tree: height must be >= 1");
    const std::uint64_t branch = d - 1;
    std::uint64_t level_size = 1, total = 1;
    for (std::uint32_t h = 0; h < height; ++h) {
        level_size *= branch;
        total += level_size;
        if (total > vertex_cap) throw SizeOverflow("complete_tree: vertex count above cap");
    }
    Graph g;
    g.n = static_cast<std::uint32_t>(total);
    g.adj.assign(g.n, {});
    // children of node v (in BFS order) are branch*v + 1 .. branch*v + branch
    for (std::uint64_t v = 0; branch * v + 1 < total; ++v) {
        for (std::uint64_t c = branch * v + 1; c <= branch * v + branch && c < total; ++c) {
            g.adj[static_cast<std::size_t>(v)].push_back(static_cast<std::uint32_t>(c));
            g.adj[static_cast<std::size_t>(c)].push_back(static_cast<std::uint32_t>(v));
        }
    }
    for (auto& lst : g.adj) {
        std::sort(lst.begin(), lst.end());
        g.d_max = std::max<std::uint32_t>(g.d_max, static_cast<std::uint32_t>(lst.size()));
    }
    return g;
}

// ---------------------------------------------------------------------------
// Text format

void write_graph(std::ostream& os, const BipartiteGraph& g) {
    os << "BIPARTITE " << g.n_left << ' ' << g.n_right << ' ' << g.d_left << ' ' << g.d_right << '\n';
    for (std::uint32_t u = 0; u < g.n_left; ++u)
        for (auto v : g.adj_left[u]) os << u << ' ' << v << '\n';
}

void write_graph(std::ostream& os, const Graph& g) {
    os << "GRAPH " << g.n << '\n';
    for (std::uint32_t u = 0; u < g.n; ++u)
        for (auto v : g.adj[u])
            if (u < v) os << u << ' ' << v << '\n';
}

namespace {

bool next_content_line(std::istream& is, std::string& line) {
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (!blank) return true;
    }
    return false;
}

} // namespace

BipartiteGraph read_bipartite_graph(std::istream& is) {
    std::string line;
    if (!next_content_line(is, line)) throw DimensionMismatch("graph file: missing header");
    std::istringstream hdr(line);
    std::string tag;
    std::uint32_t n_left, n_right, d_left, d_right;
    if (!(hdr >> tag >> n_left >> n_right >> d_left >> d_right) || tag != "BIPARTITE")
        throw DimensionMismatch("graph file: bad BIPARTITE header");
    std::vector<std::vector<std::uint32_t>> adj(n_left);
    while (next_content_line(is, line)) {
        std::istringstream ls(line);
        std::uint32_t u, v;
        if (!(ls >> u >> v)) throw DimensionMismatch("graph file: bad edge line");
        if (u >= n_left || v >= n_right) throw DimensionMismatch("graph file: edge out of range");
        adj[u].push_back(v);
    }
    auto g = BipartiteGraph::from_left_adjacency(n_left, n_right, std::move(adj));
    g.d_left = std::max(g.d_left, d_left);
    g.d_right = std::max(g.d_right, d_right);
    return g;
}

Graph read_graph(std::istream& is) {
    std::string line;
    if (!next_content_line(is, line)) throw DimensionMismatch("graph file: missing header");
    std::istringstream hdr(line);
    std::string tag;
    std::uint32_t n;
    if (!(hdr >> tag >> n) || tag != "GRAPH") throw DimensionMismatch("graph file: bad GRAPH header");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    while (next_content_line(is, line)) {
        std::istringstream ls(line);
        std::uint32_t u, v;
        if (!(ls >> u >> v)) throw DimensionMismatch("graph file: bad edge line");
        edges.emplace_back(u, v);
    }
    return Graph::from_edges(n, edges);
}

} // namespace qxc
