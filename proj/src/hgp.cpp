#include "qxc/hgp.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qxc/errors.hpp"

namespace qxc {

CssCode hypergraph_product(const BipartiteGraph& seed, const ExpansionParams& expansion,
                           std::uint64_t build_seed) {
    if (seed.n_left == 0 || seed.n_right == 0)
        throw DimensionMismatch("hypergraph_product: empty seed graph");
    CssCode code;
    code.n_a = seed.n_left;
    code.n_b = seed.n_right;
    code.d_a = seed.d_left;
    code.d_b = seed.d_right;
    code.seed = seed;
    code.expansion = expansion;
    code.build_seed = build_seed;

    const std::uint32_t n = code.n_qubits();
    code.h_x = ParityMatrix(code.n_x_checks(), n);
    code.h_z = ParityMatrix(code.n_z_checks(), n);

    // H_X row (alpha, beta): A^2 qubits (alpha, a) for a ~ beta, B^2 qubits
    // (b, beta) for b ~ alpha.
    for (std::uint32_t alpha = 0; alpha < code.n_a; ++alpha) {
        for (std::uint32_t beta = 0; beta < code.n_b; ++beta) {
            auto& row = code.h_x.row[code.xcheck_index(alpha, beta)];
            for (auto a : seed.adj_right[beta]) row.set(code.qubit_aa(alpha, a));
            for (auto b : seed.adj_left[alpha]) row.set(code.qubit_bb(b, beta));
        }
    }
    // H_Z row (b, a): A^2 qubits (alpha, a) for alpha ~ b, B^2 qubits
    // (b, beta) for beta ~ a.
    for (std::uint32_t b = 0; b < code.n_b; ++b) {
        for (std::uint32_t a = 0; a < code.n_a; ++a) {
            auto& row = code.h_z.row[code.zcheck_index(b, a)];
            for (auto alpha : seed.adj_right[b]) row.set(code.qubit_aa(alpha, a));
            for (auto beta : seed.adj_left[a]) row.set(code.qubit_bb(b, beta));
        }
    }

    if (!product_is_zero(code.h_x, code.h_z))
        throw InvariantViolation("hypergraph_product: H_X * H_Z^T != 0");
    return code;
}

Graph adjacency_graph(const CssCode& code) {
    const std::uint32_t n = code.n_qubits();
    std::vector<std::vector<std::uint32_t>> adj(n);
    auto add_cliques = [&](const ParityMatrix& h) {
        for (std::uint32_t r = 0; r < h.rows; ++r) {
            auto support = h.row[r].indices();
            for (std::size_t i = 0; i < support.size(); ++i)
                for (std::size_t j = i + 1; j < support.size(); ++j) {
                    adj[support[i]].push_back(support[j]);
                    adj[support[j]].push_back(support[i]);
                }
        }
    };
    add_cliques(code.h_x);
    add_cliques(code.h_z);
    Graph g;
    g.n = n;
    g.adj = std::move(adj);
    for (auto& lst : g.adj) {
        std::sort(lst.begin(), lst.end());
        lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
        g.d_max = std::max<std::uint32_t>(g.d_max, static_cast<std::uint32_t>(lst.size()));
    }
    return g;
}

std::uint64_t adjacency_degree_bound(std::uint32_t d_a, std::uint32_t d_b) {
    const std::uint64_t from_bb = std::uint64_t(d_b) * d_b + 2ull * d_b * (d_a - 1);
    const std::uint64_t from_aa = std::uint64_t(d_a) * d_a + 2ull * d_a * (d_b - 1);
    return std::max(from_aa, from_bb);
}

CodeParams code_params(const CssCode& code, const Rat& gamma_a, const Rat& gamma_b, const Rat& beta,
                       std::uint64_t distance_budget) {
    if (!beta.is_positive()) throw PreconditionViolated("code_params: beta must be positive");
    CodeParams p;
    p.n = code.n_qubits();
    p.n_a = code.n_a;
    p.n_b = code.n_b;
    p.d_a = code.d_a;
    p.d_b = code.d_b;
    p.r = Rat(code.d_a, code.d_b);

    const std::uint32_t rank_x = rank_gf2(code.h_x);
    const std::uint32_t rank_z = rank_gf2(code.h_z);
    p.k = p.n - rank_x - rank_z;
    const std::int64_t lower = (std::int64_t(code.n_a) - code.n_b) * (std::int64_t(code.n_a) - code.n_b);
    if (std::int64_t(p.k) < lower)
        throw InvariantViolation("code_params: k below the (n_A - n_B)^2 bound");

    const Rat min_gn = std::min(gamma_a * Rat(code.n_a), gamma_b * Rat(code.n_b));
    p.w0_bound = static_cast<std::uint64_t>((min_gn / Rat(3 * (1 + std::int64_t(code.d_b)))).floor());
    p.t_ssf_bound = static_cast<std::uint64_t>((p.r * beta / (Rat(1) + beta) * min_gn).floor());

    try {
        auto dx = min_coset_weight_bruteforce(code.h_x, code.h_z, distance_budget);
        auto dz = min_coset_weight_bruteforce(code.h_z, code.h_x, distance_budget);
        if (dx && dz) p.d_min_exact = std::min(*dx, *dz);
        else if (dx) p.d_min_exact = dx;
        else if (dz) p.d_min_exact = dz;
    } catch (const BudgetExceeded&) {
        p.d_min_exact = std::nullopt;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Bundle I/O

namespace fs = std::filesystem;
using nlohmann::json;

void save_code_bundle(const std::string& dir, const CssCode& code) {
    fs::create_directories(dir);
    {
        std::ofstream os(fs::path(dir) / "seed_graph.txt");
        write_graph(os, code.seed);
    }
    {
        std::ofstream os(fs::path(dir) / "hx.txt");
        write_parity_matrix(os, code.h_x);
    }
    {
        std::ofstream os(fs::path(dir) / "hz.txt");
        write_parity_matrix(os, code.h_z);
    }
    ParityMatrix seed_h(code.n_b, code.n_a);
    for (std::uint32_t b = 0; b < code.n_b; ++b)
        for (auto a : code.seed.adj_right[b]) seed_h.set(b, a);
    const std::uint32_t seed_rank = rank_gf2(seed_h);
    json manifest = {
        {"schema", "qxc.code_bundle.v1"},
        {"n_a", code.n_a},
        {"n_b", code.n_b},
        {"d_a", code.d_a},
        {"d_b", code.d_b},
        {"build_seed", code.build_seed},
        {"qubit_order", "a2_row_major_then_b2_row_major"},
        {"check_order", "x_checks_AxB_row_major;z_checks_BxA_row_major"},
        {"seed_rank", seed_rank},
        {"seed_full_rank", seed_rank == std::min(code.n_a, code.n_b)},
        {"expansion",
         {{"gamma_left", code.expansion.gamma_left.str()},
          {"delta_left", code.expansion.delta_left.str()},
          {"gamma_right", code.expansion.gamma_right.str()},
          {"delta_right", code.expansion.delta_right.str()}}},
    };
    std::ofstream os(fs::path(dir) / "manifest.json");
    os << manifest.dump(2) << '\n';
}

namespace {

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

} // namespace

CssCode load_code_bundle(const std::string& dir) {
    std::ifstream ms(fs::path(dir) / "manifest.json");
    if (!ms) throw DimensionMismatch("load_code_bundle: missing manifest.json");
    json manifest = json::parse(ms);
    if (manifest.value("schema", "") != "qxc.code_bundle.v1")
        throw DimensionMismatch("load_code_bundle: unknown schema");

    std::ifstream gs(fs::path(dir) / "seed_graph.txt");
    if (!gs) throw DimensionMismatch("load_code_bundle: missing seed_graph.txt");
    BipartiteGraph seed = read_bipartite_graph(gs);

    ExpansionParams exp;
    if (manifest.contains("expansion")) {
        const auto& e = manifest["expansion"];
        exp.gamma_left = parse_rat(e.value("gamma_left", "0"));
        exp.delta_left = parse_rat(e.value("delta_left", "0"));
        exp.gamma_right = parse_rat(e.value("gamma_right", "0"));
        exp.delta_right = parse_rat(e.value("delta_right", "0"));
    }
    CssCode code = hypergraph_product(seed, exp, manifest.value("build_seed", 0ull));

    // Cross-check stored matrices against the rebuild.
    std::ifstream xs(fs::path(dir) / "hx.txt");
    std::ifstream zs(fs::path(dir) / "hz.txt");
    if (!xs || !zs) throw DimensionMismatch("load_code_bundle: missing matrix files");
    if (!(read_parity_matrix(xs) == code.h_x) || !(read_parity_matrix(zs) == code.h_z))
        throw InvariantViolation("load_code_bundle: stored matrices disagree with seed graph");
    return code;
}

} // namespace qxc
