#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qxc/hgp.hpp"
#include "qxc/noise.hpp"
#include "qxc/rational.hpp"
#include "qxc/ssf.hpp"
#include "qxc/stats.hpp"

namespace qxc {

struct CodeSource {
    // Either sampled-seed-graph parameters or a bundle directory.
    bool from_bundle = false;
    std::string bundle_path;
    std::uint32_t n_left = 0, n_right = 0, d_left = 0, d_right = 0;
    std::uint64_t graph_seed = 0;
};

struct ExperimentConfig {
    CodeSource code;
    DecoderParams decoder;
    NoiseSpec noise;
    std::vector<double> p_grid;  // grid points override noise.p
    std::uint64_t trials = 1000;
    std::uint32_t threads = 1;
    std::uint64_t base_seed = 0;
    bool base_seed_set = false;  // base seed is mandatory in config files
    std::string out_dir;
    double locality_audit_rate = 0.0;  // audit every round(1/rate)-th trial when > 0
    // when > 0, audited trials also run the exact MaxConn oracle capped here;
    // the largest observed value is reported in the JSON sidecar
    std::uint32_t audit_maxconn_cap = 0;

    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
};

struct ResultRow {
    std::string code_id;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    double p = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t x_failures = 0;
    std::uint64_t z_failures = 0;
    std::uint64_t either_failures = 0;
    double rate = 0.0;
    Interval ci;
    double mean_flips = 0.0;
    double mean_support_ratio = 0.0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;  // not part of the deterministic CSV body
};

// Frozen CSV column set (schema qxc.results.v1); wall time goes to the
// footer so the body is byte-identical across runs and thread counts.
extern const char* const kResultCsvHeader;

std::string result_row_csv(const ResultRow& row);

// Runs the full grid.  Trials are statically partitioned by index across
// threads; every trial draws its randomness from a counter generator keyed
// by (base_seed, trial, grid-point/side tag), so rows are identical for any
// thread count.  When csv/sidecar streams are given, rows are appended as
// each grid point completes and a footer is written at the end.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, std::ostream* csv = nullptr,
                                      std::ostream* sidecar = nullptr);

struct BoundsRow {
    std::uint32_t d = 0;
    double alpha = 0.0;
    std::uint64_t t = 0;
    double p = 0.0;
    std::optional<double> p_ls;
    std::optional<double> p_iid;
    std::optional<double> bound_ls;
    std::optional<double> bound_iid;
    std::string error_tag;  // set when a formula's domain was violated
};

extern const char* const kBoundsCsvHeader;

// One row per (alpha, p, t) tuple; domain violations produce a tagged row
// instead of a crash.  Tail bounds are evaluated at n_vertices (1 gives the
// per-vertex bound).
std::vector<BoundsRow> bounds_table(std::uint32_t d, const std::vector<double>& alphas,
                                    const std::vector<double>& ps, const std::vector<std::uint64_t>& ts,
                                    std::uint64_t n_vertices = 1);

std::string bounds_row_csv(const BoundsRow& row, const std::string& empirical_cols = "na,na,na,na,na");

// Build the code described by a config's code source.
CssCode build_code(const CodeSource& source);
std::string code_identifier(const CssCode& code);

} // namespace qxc
