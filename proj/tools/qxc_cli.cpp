// Command-line front end: code construction, decoding, Monte Carlo
// simulation, percolation estimates, bound tables, and trace audits.
//
// Exit codes: 0 success, 2 usage, 3 domain error, 4 budget exceeded,
// 5 invariant violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qxc/experiment.hpp"
#include "qxc/locality.hpp"
#include "qxc/percolation.hpp"
#include "qxc/ssf.hpp"

namespace fs = std::filesystem;
using namespace qxc;

namespace {

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// index-list file: "<TAG> n" header then one index per line
BitVec read_index_set(const std::string& path, const std::string& tag) {
    std::ifstream is(path);
    if (!is) throw PreconditionViolated("cannot open " + path);
    std::string t;
    std::uint32_t n;
    if (!(is >> t >> n) || t != tag) throw DimensionMismatch(path + ": expected '" + tag + " n' header");
    BitVec v(n);
    std::uint32_t idx;
    while (is >> idx) {
        if (idx >= n) throw DimensionMismatch(path + ": index out of range");
        v.set(idx);
    }
    return v;
}

DecoderParams decoder_from_flags(const std::string& mode, const std::string& beta) {
    if (mode == "alg1") return DecoderParams::alg1();
    if (mode == "alg2") return DecoderParams::alg2(parse_rat(beta));
    throw PreconditionViolated("--mode must be alg1 or alg2");
}

int cmd_build_code(std::uint32_t nl, std::uint32_t nr, std::uint32_t dl, std::uint32_t dr,
                   std::uint64_t seed, const std::string& out) {
    const auto g = sample_biregular(nl, nr, dl, dr, seed);
    const auto code = hypergraph_product(g, {}, seed);
    save_code_bundle(out, code);
    std::cout << code_identifier(code) << " n=" << code.n_qubits() << " written to " << out << "\n";
    return 0;
}

int cmd_decode(const std::string& bundle, const std::string& syndrome_path, const std::string& side,
               const std::string& mode, const std::string& beta, const std::string& out) {
    const auto code = load_code_bundle(bundle);
    const CodeSide cs = (side == "Z") ? CodeSide::Z : CodeSide::X;
    const auto catalog = FlipCatalog::build(code, cs);
    const BitVec sigma = read_index_set(syndrome_path, "SYNDROME");
    auto params = decoder_from_flags(mode, beta);
    const auto run = decode_ssf(catalog, sigma, params);
    if (!out.empty()) {
        std::ofstream os(out);
        write_decode_run(os, run);
    } else {
        write_decode_run(std::cout, run);
    }
    if (run.termination == Termination::Stalled && run.syndrome_reachable.has_value() &&
        !*run.syndrome_reachable)
        throw DomainError("unreachable syndrome: not in the column space of the side's parity matrix");
    return 0;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed_override, bool seed_set,
                 std::uint32_t threads_override, const std::string& out_override) {
    auto cfg = ExperimentConfig::from_json_file(config_path);
    if (seed_set) cfg.base_seed = seed_override;
    if (threads_override) cfg.threads = threads_override;
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (cfg.out_dir.empty()) {
        run_experiment(cfg, &std::cout);
        return 0;
    }
    fs::create_directories(cfg.out_dir);
    std::ofstream csv(fs::path(cfg.out_dir) / "results.csv");
    std::ofstream sidecar(fs::path(cfg.out_dir) / "config_echo.json");
    run_experiment(cfg, &csv, &sidecar);
    std::cout << "results written to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_percolation(const std::string& graph_path, const std::string& alpha_s, double p,
                    std::uint32_t t, std::uint64_t trials, std::uint32_t size_cap, std::uint64_t seed,
                    const std::string& format) {
    std::ifstream is(graph_path);
    if (!is) throw PreconditionViolated("cannot open " + graph_path);
    const Graph g = read_graph(is);
    const Rat alpha = parse_rat(alpha_s);
    if (size_cap < t) size_cap = t;
    auto sampler = [&](std::uint64_t trial) { return sample_iid(g.n, p, seed, trial, 0x50455243ull); };
    const auto est = estimate_maxconn_tail(g, sampler, alpha, t, trials, size_cap);
    const double alpha_d = alpha.to_double();

    BoundsRow row;
    row.d = g.d_max;
    row.alpha = alpha_d;
    row.t = t;
    row.p = p;
    try {
        row.p_ls = p_ls(g.d_max, alpha_d);
        row.p_iid = p_iid(g.d_max, alpha_d);
        row.bound_ls = bound_ls(g.n, p, g.d_max, alpha_d, t).bound;
        row.bound_iid = bound_iid(g.n, p, g.d_max, alpha_d, t);
    } catch (const DomainError& err) {
        row.error_tag = err.what();
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%llu,%llu", est.estimate, est.ci.lo, est.ci.hi,
                  static_cast<unsigned long long>(trials), static_cast<unsigned long long>(seed));
    if (format == "json") {
        nlohmann::json j = {{"d", row.d},
                            {"alpha", row.alpha},
                            {"t", row.t},
                            {"p", row.p},
                            {"estimate", est.estimate},
                            {"ci_low", est.ci.lo},
                            {"ci_high", est.ci.hi},
                            {"trials", trials},
                            {"seed", seed}};
        if (row.error_tag.empty()) {
            j["p_ls"] = *row.p_ls;
            j["p_iid"] = *row.p_iid;
            j["bound_ls"] = *row.bound_ls;
            j["bound_iid"] = *row.bound_iid;
        } else {
            j["error"] = row.error_tag;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << kBoundsCsvHeader << "\n" << bounds_row_csv(row, buf) << "\n";
    }
    return 0;
}

int cmd_bounds(std::uint32_t d, const std::string& alphas, const std::string& ps, const std::string& ts,
               std::uint64_t n_vertices) {
    std::vector<std::uint64_t> tgrid;
    for (double t : parse_grid(ts)) tgrid.push_back(static_cast<std::uint64_t>(t));
    const auto rows = bounds_table(d, parse_grid(alphas), parse_grid(ps), tgrid, n_vertices);
    std::cout << kBoundsCsvHeader << "\n";
    for (const auto& row : rows) std::cout << bounds_row_csv(row) << "\n";
    return 0;
}

int cmd_audit_locality(const std::string& bundle, const std::string& error_path,
                       const std::string& run_path, const std::string& mode, const std::string& beta,
                       const std::string& out) {
    const auto code = load_code_bundle(bundle);
    const auto catalog = FlipCatalog::build(code, CodeSide::X);
    const LocalityAuditor auditor(code, catalog);
    const BitVec error = read_index_set(error_path, "QUBITS");
    std::ifstream rs(run_path);
    if (!rs) throw PreconditionViolated("cannot open " + run_path);
    const DecodeRun run = read_decode_run(rs, code.n_qubits());
    const auto params = decoder_from_flags(mode, beta);
    const auto report = verify_locality(auditor, error, run, params);
    if (!out.empty()) {
        std::ofstream os(out);
        write_locality_report(os, report);
    } else {
        write_locality_report(std::cout, report);
    }
    if (!report.passed) throw ReplayMismatch("locality replay failed: " + report.failure);
    return 0;
}

int cmd_count_connected(const std::string& graph_path, std::uint32_t s_max, std::uint64_t budget) {
    std::ifstream is(graph_path);
    if (!is) throw PreconditionViolated("cannot open " + graph_path);
    const Graph g = read_graph(is);
    const auto counts = enumerate_connected_sets(g, s_max, budget);
    std::cout << "s,count,raney_ok,kd_bound\n";
    for (std::uint32_t s = 1; s <= counts.size(); ++s) {
        const bool ok = raney_bound_holds(counts[s - 1], g.n, std::max(2u, g.d_max), s);
        const double kd = static_cast<double>(g.n) * std::exp2(s * log2_K_d(std::max(2u, g.d_max)));
        std::cout << s << ',' << counts[s - 1] << ',' << (ok ? 1 : 0) << ',' << kd << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum expander codes: hypergraph products, small-set-flip decoding, percolation"};
    app.require_subcommand(1);

    // build-code
    auto* build = app.add_subcommand("build-code", "sample a seed graph and write a code bundle");
    std::uint32_t nl = 0, nr = 0, dl = 0, dr = 0;
    std::uint64_t seed = 0;
    std::string out;
    build->add_option("--n-left", nl)->required();
    build->add_option("--n-right", nr)->required();
    build->add_option("--d-left", dl)->required();
    build->add_option("--d-right", dr)->required();
    build->add_option("--seed", seed)->required();
    build->add_option("--out", out)->required();

    // decode
    auto* dec = app.add_subcommand("decode", "decode a syndrome file against a code bundle");
    std::string bundle, syndrome_path, side = "X", mode = "alg2", beta = "1/2", dec_out;
    dec->add_option("--bundle", bundle)->required();
    dec->add_option("--syndrome", syndrome_path)->required();
    dec->add_option("--side", side)->check(CLI::IsMember({"X", "Z"}));
    dec->add_option("--mode", mode)->check(CLI::IsMember({"alg1", "alg2"}));
    dec->add_option("--beta", beta);
    dec->add_option("--out", dec_out);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo experiment from a JSON config");
    std::string config_path, sim_out;
    std::uint64_t sim_seed = 0;
    std::uint32_t sim_threads = 0;
    bool sim_seed_set = false;
    sim->add_option("--config", config_path)->required();
    sim->add_option("--seed", sim_seed)->each([&](const std::string&) { sim_seed_set = true; });
    sim->add_option("--threads", sim_threads);
    sim->add_option("--out", sim_out);

    // percolation
    auto* perc = app.add_subcommand("percolation", "Monte Carlo MaxConn tail versus analytic bounds");
    std::string graph_path, alpha_s = "1", format = "csv";
    double perc_p = 0.0;
    std::uint32_t perc_t = 1, size_cap = 0;
    std::uint64_t perc_trials = 10000, perc_seed = 0;
    perc->add_option("--graph", graph_path)->required();
    perc->add_option("--alpha", alpha_s);
    perc->add_option("--p", perc_p)->required();
    perc->add_option("--t", perc_t)->required();
    perc->add_option("--trials", perc_trials);
    perc->add_option("--size-cap", size_cap);
    perc->add_option("--seed", perc_seed);
    perc->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    // bounds
    auto* bounds = app.add_subcommand("bounds", "closed-form threshold and tail-bound table");
    std::uint32_t bounds_d = 0;
    std::string alpha_grid, p_grid, t_grid;
    std::uint64_t n_vertices = 1;
    bounds->add_option("--d", bounds_d)->required();
    bounds->add_option("--alpha-grid", alpha_grid)->required();
    bounds->add_option("--p-grid", p_grid)->required();
    bounds->add_option("--t-grid", t_grid)->required();
    bounds->add_option("--n-vertices", n_vertices);

    // audit-locality
    auto* audit = app.add_subcommand("audit-locality", "replay a decode run against the locality theory");
    std::string audit_bundle, error_path, run_path, audit_mode = "alg2", audit_beta = "1/2", audit_out;
    audit->add_option("--bundle", audit_bundle)->required();
    audit->add_option("--error", error_path)->required();
    audit->add_option("--run", run_path)->required();
    audit->add_option("--mode", audit_mode)->check(CLI::IsMember({"alg1", "alg2"}));
    audit->add_option("--beta", audit_beta);
    audit->add_option("--out", audit_out);

    // count-connected
    auto* count = app.add_subcommand("count-connected", "exact connected-set counts with bound checks");
    std::string count_graph;
    std::uint32_t count_smax = 1;
    std::uint64_t count_budget = 100'000'000ull;
    count->add_option("--graph", count_graph)->required();
    count->add_option("--s-max", count_smax)->required();
    count->add_option("--budget", count_budget);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (build->parsed()) return cmd_build_code(nl, nr, dl, dr, seed, out);
        if (dec->parsed()) return cmd_decode(bundle, syndrome_path, side, mode, beta, dec_out);
        if (sim->parsed()) return cmd_simulate(config_path, sim_seed, sim_seed_set, sim_threads, sim_out);
        if (perc->parsed())
            return cmd_percolation(graph_path, alpha_s, perc_p, perc_t, perc_trials, size_cap,
                                   perc_seed, format);
        if (bounds->parsed()) return cmd_bounds(bounds_d, alpha_grid, p_grid, t_grid, n_vertices);
        if (audit->parsed())
            return cmd_audit_locality(audit_bundle, error_path, run_path, audit_mode, audit_beta,
                                      audit_out);
        if (count->parsed()) return cmd_count_connected(count_graph, count_smax, count_budget);
    } catch (const BudgetExceeded& e) {
        std::cerr << "{\"error\":\"budget_exceeded\",\"message\":\"" << e.what() << "\"}\n";
        return 4;
    } catch (const SizeOverflow& e) {
        std::cerr << "{\"error\":\"size_overflow\",\"message\":\"" << e.what() << "\"}\n";
        return 4;
    } catch (const InvariantViolation& e) {
        std::cerr << "{\"error\":\"invariant_violation\",\"message\":\"" << e.what() << "\"}\n";
        return 5;
    } catch (const ReplayMismatch& e) {
        std::cerr << "{\"error\":\"replay_mismatch\",\"message\":\"" << e.what() << "\"}\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"domain_error\",\"message\":\"" << e.what() << "\"}\n";
        return 3;
    }
    return 2;
}
