#include "qxc/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qxc/errors.hpp"
#include "qxc/locality.hpp"
#include "qxc/percolation.hpp"

namespace qxc {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

namespace {

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

} // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw PreconditionViolated("config: cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return from_json_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    if (j.value("schema", "") != "qxc.experiment.v1")
        throw PreconditionViolated("config: unknown or missing schema tag");
    ExperimentConfig cfg;

    const auto& code = j.at("code");
    if (code.contains("bundle_path")) {
        cfg.code.from_bundle = true;
        cfg.code.bundle_path = code.at("bundle_path").get<std::string>();
    } else {
        cfg.code.n_left = code.at("n_left").get<std::uint32_t>();
        cfg.code.n_right = code.at("n_right").get<std::uint32_t>();
        cfg.code.d_left = code.at("d_left").get<std::uint32_t>();
        cfg.code.d_right = code.at("d_right").get<std::uint32_t>();
        cfg.code.graph_seed = code.at("graph_seed").get<std::uint64_t>();
    }

    const auto& dec = j.at("decoder");
    const std::string mode = dec.value("mode", "alg2");
    if (mode == "alg1") cfg.decoder = DecoderParams::alg1();
    else if (mode == "alg2") cfg.decoder = DecoderParams::alg2(parse_rat(dec.value("beta", "1/2")));
    else throw PreconditionViolated("config: decoder.mode must be alg1 or alg2");
    cfg.decoder.full_scan = dec.value("full_scan", false);
    cfg.decoder.classify_stall = dec.value("classify_stall", false);

    const auto& noise = j.at("noise");
    const std::string kind = noise.value("kind", "iid");
    if (kind == "iid") cfg.noise.kind = NoiseKind::Iid;
    else if (kind == "depolarizing") cfg.noise.kind = NoiseKind::Depolarizing;
    else if (kind == "cluster_burst") cfg.noise.kind = NoiseKind::ClusterBurst;
    else throw PreconditionViolated("config: noise.kind must be iid, depolarizing or cluster_burst");
    cfg.noise.p = noise.value("p", 0.0);
    cfg.noise.burst_size = noise.value("burst_size", 1u);

    if (j.contains("p_grid")) cfg.p_grid = j["p_grid"].get<std::vector<double>>();
    else cfg.p_grid = {cfg.noise.p};
    if (cfg.p_grid.empty()) throw PreconditionViolated("config: empty p_grid");
    for (double p : cfg.p_grid)
        if (p < 0.0 || p >= 1.0) throw PreconditionViolated("config: grid p outside [0, 1)");

    cfg.trials = j.at("trials").get<std::uint64_t>();
    cfg.threads = j.value("threads", 1u);
    if (cfg.threads == 0) cfg.threads = 1;
    if (!j.contains("base_seed")) throw PreconditionViolated("config: base_seed is mandatory");
    cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
    cfg.base_seed_set = true;
    cfg.out_dir = j.value("out_dir", "");
    if (j.contains("audit")) {
        cfg.locality_audit_rate = j["audit"].value("locality_rate", 0.0);
        cfg.audit_maxconn_cap = j["audit"].value("maxconn_cap", 0u);
    }
    return cfg;
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["schema"] = "qxc.experiment.v1";
    if (code.from_bundle) {
        j["code"] = {{"bundle_path", code.bundle_path}};
    } else {
        j["code"] = {{"n_left", code.n_left},
                     {"n_right", code.n_right},
                     {"d_left", code.d_left},
                     {"d_right", code.d_right},
                     {"graph_seed", code.graph_seed}};
    }
    j["decoder"] = {{"mode", decoder.mode == SsfMode::Alg1 ? "alg1" : "alg2"},
                    {"beta", decoder.beta.str()},
                    {"full_scan", decoder.full_scan},
                    {"classify_stall", decoder.classify_stall}};
    j["noise"] = {{"kind", noise.kind_name()}, {"p", noise.p}, {"burst_size", noise.burst_size}};
    j["p_grid"] = p_grid;
    j["trials"] = trials;
    j["threads"] = threads;
    j["base_seed"] = base_seed;
    j["out_dir"] = out_dir;
    j["audit"] = {{"locality_rate", locality_audit_rate}, {"maxconn_cap", audit_maxconn_cap}};
    return j.dump(2);
}

CssCode build_code(const CodeSource& source) {
    if (source.from_bundle) return load_code_bundle(source.bundle_path);
    const BipartiteGraph seed =
        sample_biregular(source.n_left, source.n_right, source.d_left, source.d_right, source.graph_seed);
    return hypergraph_product(seed, {}, source.graph_seed);
}

std::string code_identifier(const CssCode& code) {
    std::ostringstream ss;
    ss << "hgp-" << code.n_a << 'x' << code.n_b << "-d" << code.d_a << '.' << code.d_b << "-s"
       << code.build_seed;
    return ss.str();
}

// ---------------------------------------------------------------------------
// CSV

const char* const kResultCsvHeader =
    "code_id,n,k,p,trials,x_failures,z_failures,either_failures,rate,ci_low,ci_high,"
    "mean_flips,mean_support_ratio,seed";

namespace {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

} // namespace

std::string result_row_csv(const ResultRow& row) {
    std::ostringstream ss;
    ss << row.code_id << ',' << row.n << ',' << row.k << ',' << fmt_double(row.p) << ',' << row.trials
       << ',' << row.x_failures << ',' << row.z_failures << ',' << row.either_failures << ','
       << fmt_double(row.rate) << ',' << fmt_double(row.ci.lo) << ',' << fmt_double(row.ci.hi) << ','
       << fmt_double(row.mean_flips) << ',' << fmt_double(row.mean_support_ratio) << ',' << row.seed;
    return ss.str();
}

// ---------------------------------------------------------------------------
// Runner

namespace {

struct TrialStat {
    bool x_fail = false;
    bool z_fail = false;
    std::uint32_t flips = 0;
    double support_ratio = 0.0;
    bool has_ratio = false;
};

// Stream tags: trial randomness is keyed by (base_seed, trial, tag) with
// tag = point_index * 2 + side, so every (point, trial, side) is its own
// stream no matter which worker runs it.
TrialStat run_trial(const CssCode& code, const FlipCatalog& cat_x, const FlipCatalog& cat_z,
                    const EquivalenceChecker& eq_x, const EquivalenceChecker& eq_z,
                    const ClusterBurstSampler* burst, const ExperimentConfig& cfg, double p,
                    std::size_t point_index, std::uint64_t trial) {
    const std::uint32_t n = code.n_qubits();
    const std::uint64_t tag_x = point_index * 2;
    const std::uint64_t tag_z = point_index * 2 + 1;
    NoiseSpec noise = cfg.noise;
    noise.p = p;
    const double side_p = noise.side_p();
    BitVec e_x = burst ? burst->sample(cfg.base_seed, trial, tag_x)
                       : sample_iid(n, side_p, cfg.base_seed, trial, tag_x);
    BitVec e_z = burst ? burst->sample(cfg.base_seed, trial, tag_z)
                       : sample_iid(n, side_p, cfg.base_seed, trial, tag_z);

    TrialStat stat;
    const DecodeRun run_x = decode_ssf(cat_x, code.h_x.multiply(e_x), cfg.decoder);
    const DecodeRun run_z = decode_ssf(cat_z, code.h_z.multiply(e_z), cfg.decoder);
    stat.x_fail = run_x.termination != Termination::Converged || !eq_x.equivalent(e_x, run_x.estimate);
    stat.z_fail = run_z.termination != Termination::Converged || !eq_z.equivalent(e_z, run_z.estimate);
    stat.flips = static_cast<std::uint32_t>(run_x.flip_count() + run_z.flip_count());
    const std::size_t e_size = e_x.count();
    if (e_size > 0) {
        stat.support_ratio =
            static_cast<double>(run_x.support(e_x).count()) / static_cast<double>(e_size);
        stat.has_ratio = true;
    }
    return stat;
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, std::ostream* csv,
                                      std::ostream* sidecar) {
    const CssCode code = build_code(config.code);
    const FlipCatalog cat_x = FlipCatalog::build(code, CodeSide::X);
    const FlipCatalog cat_z = FlipCatalog::build(code, CodeSide::Z);
    const EquivalenceChecker eq_x(code, CodeSide::X);
    const EquivalenceChecker eq_z(code, CodeSide::Z);
    const std::string code_id = code_identifier(code);

    std::optional<LocalityAuditor> auditor;
    std::uint64_t audit_every = 0;
    if (config.locality_audit_rate > 0.0) {
        auditor.emplace(code, cat_x);
        audit_every = std::max<std::uint64_t>(1, std::llround(1.0 / config.locality_audit_rate));
    }

    CodeParams params;
    {
        // ranks for k; gamma/beta only feed the bounds, which rows don't carry
        const Rat gamma(1, 10);
        params = code_params(code, gamma, gamma,
                             config.decoder.mode == SsfMode::Alg2 ? config.decoder.beta : Rat(1, 2),
                             /*distance_budget=*/2);
    }

    if (csv) {
        *csv << "# qxc.results.v1\n";
        *csv << "# code=" << code_id << " trials=" << config.trials << " base_seed=" << config.base_seed
             << " noise=" << config.noise.kind_name() << "\n";
        *csv << kResultCsvHeader << '\n';
    }

    std::vector<ResultRow> rows;
    std::vector<double> wall_times;
    std::uint32_t max_maxconn_observed = 0;
    std::optional<Graph> audit_graph;
    if (auditor && config.audit_maxconn_cap > 0) audit_graph = adjacency_graph(code);
    const Rat audit_alpha = config.decoder.mode == SsfMode::Alg2
                                ? config.decoder.beta / (Rat(1) + config.decoder.beta)
                                : Rat(1, 2);
    for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
        const double p = config.p_grid[pi];
        const auto t0 = std::chrono::steady_clock::now();

        std::optional<ClusterBurstSampler> burst;
        if (config.noise.kind == NoiseKind::ClusterBurst) {
            const Graph qubit_graph = adjacency_graph(code);
            burst.emplace(qubit_graph, p, config.noise.burst_size);
        }
        const ClusterBurstSampler* burst_ptr = burst ? &*burst : nullptr;

        std::vector<TrialStat> stats(config.trials);
        const std::uint32_t n_threads =
            static_cast<std::uint32_t>(std::min<std::uint64_t>(config.threads, std::max<std::uint64_t>(1, config.trials)));
        std::vector<std::thread> workers;
        std::atomic<std::uint64_t> next_trial{0};
        std::exception_ptr worker_error;
        std::mutex error_mutex;
        for (std::uint32_t w = 0; w < n_threads; ++w) {
            workers.emplace_back([&] {
                try {
                    while (true) {
                        const std::uint64_t t = next_trial.fetch_add(1);
                        if (t >= config.trials) break;
                        stats[t] = run_trial(code, cat_x, cat_z, eq_x, eq_z, burst_ptr, config, p, pi, t);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!worker_error) worker_error = std::current_exception();
                }
            });
        }
        for (auto& th : workers) th.join();
        if (worker_error) std::rethrow_exception(worker_error);

        // Optional locality audit on a deterministic subsample (X side).
        if (auditor && audit_every) {
            NoiseSpec audit_noise = config.noise;
            audit_noise.p = p;
            for (std::uint64_t t = 0; t < config.trials; t += audit_every) {
                BitVec e_x = burst_ptr
                                 ? burst_ptr->sample(config.base_seed, t, pi * 2)
                                 : sample_iid(code.n_qubits(), audit_noise.side_p(), config.base_seed,
                                              t, pi * 2);
                const DecodeRun run = decode_ssf(cat_x, code.h_x.multiply(e_x), config.decoder);
                const LocalityReport rep = verify_locality(*auditor, e_x, run, config.decoder);
                if (!rep.passed)
                    throw InvariantViolation("locality audit failed at trial " + std::to_string(t) +
                                             ": " + rep.failure);
                if (audit_graph) {
                    const auto mc = max_conn_alpha_exact(*audit_graph, e_x, audit_alpha,
                                                         config.audit_maxconn_cap);
                    max_maxconn_observed = std::max(max_maxconn_observed, mc.value);
                }
            }
        }

        // Deterministic merge in trial order.
        ResultRow row;
        row.code_id = code_id;
        row.n = params.n;
        row.k = params.k;
        row.p = p;
        row.trials = config.trials;
        row.seed = config.base_seed;
        std::uint64_t flips_total = 0;
        double ratio_sum = 0.0;
        std::uint64_t ratio_count = 0;
        for (const auto& s : stats) {
            row.x_failures += s.x_fail;
            row.z_failures += s.z_fail;
            row.either_failures += (s.x_fail || s.z_fail);
            flips_total += s.flips;
            if (s.has_ratio) {
                ratio_sum += s.support_ratio;
                ++ratio_count;
            }
        }
        if (row.either_failures > row.x_failures + row.z_failures)
            throw InvariantViolation("union bound violated in failure counters");
        row.rate = config.trials ? static_cast<double>(row.either_failures) / static_cast<double>(config.trials) : 0.0;
        row.ci = wilson_interval(row.either_failures, config.trials);
        row.mean_flips = config.trials ? static_cast<double>(flips_total) / static_cast<double>(config.trials) : 0.0;
        row.mean_support_ratio = ratio_count ? ratio_sum / static_cast<double>(ratio_count) : 0.0;
        const auto t1 = std::chrono::steady_clock::now();
        row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        wall_times.push_back(row.wall_ms);

        if (csv) {
            *csv << result_row_csv(row) << '\n';
            csv->flush();
        }
        rows.push_back(std::move(row));
    }

    if (csv) {
        *csv << "# end rows=" << rows.size() << " wall_ms=";
        for (std::size_t i = 0; i < wall_times.size(); ++i)
            *csv << (i ? ";" : "") << fmt_double(wall_times[i]);
        *csv << '\n';
    }
    if (sidecar) {
        json j = json::parse(config.to_json_text());
        j["code_id"] = code_id;
        j["n"] = params.n;
        j["k"] = params.k;
        if (audit_graph) j["max_maxconn_observed"] = max_maxconn_observed;
        *sidecar << j.dump(2) << '\n';
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Bounds table

const char* const kBoundsCsvHeader =
    "d,alpha,t,p,p_ls,p_iid,bound_ls,bound_iid,empirical,ci_low,ci_high,trials,seed";

std::vector<BoundsRow> bounds_table(std::uint32_t d, const std::vector<double>& alphas,
                                    const std::vector<double>& ps, const std::vector<std::uint64_t>& ts,
                                    std::uint64_t n_vertices) {
    if (alphas.empty() || ps.empty() || ts.empty())
        throw PreconditionViolated("bounds_table: empty grid");
    std::vector<BoundsRow> rows;
    for (double alpha : alphas) {
        for (std::uint64_t t : ts) {
            for (double p : ps) {
                BoundsRow row;
                row.d = d;
                row.alpha = alpha;
                row.t = t;
                row.p = p;
                try {
                    row.p_ls = p_ls(d, alpha);
                    row.p_iid = p_iid(d, alpha);
                    row.bound_ls = bound_ls(n_vertices, p, d, alpha, t).bound;
                    row.bound_iid = bound_iid(n_vertices, p, d, alpha, t);
                } catch (const DomainError& err) {
                    row.error_tag = err.what();
                } catch (const InvariantViolation& err) {
                    row.error_tag = err.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string bounds_row_csv(const BoundsRow& row, const std::string& empirical_cols) {
    std::ostringstream ss;
    auto opt = [&](const std::optional<double>& v) -> std::string {
        if (!row.error_tag.empty()) return "err";
        return v ? fmt_double(*v) : "na";
    };
    ss << row.d << ',' << fmt_double(row.alpha) << ',' << row.t << ',' << fmt_double(row.p) << ','
       << opt(row.p_ls) << ',' << opt(row.p_iid) << ',' << opt(row.bound_ls) << ',' << opt(row.bound_iid)
       << ',' << empirical_cols;
    return ss.str();
}

} // namespace qxc
