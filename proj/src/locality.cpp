#include "qxc/locality.hpp"

#include <ostream>

#include <json.hpp>

#include "qxc/errors.hpp"

namespace qxc {

LocalityAuditor::LocalityAuditor(const CssCode& code, const FlipCatalog& catalog)
    : code_(code), catalog_(catalog), adjacency_(adjacency_graph(code)) {
    const ParityMatrix& hs = catalog.syndrome_matrix();
    qubit_checks_.assign(code.n_qubits(), {});
    for (std::uint32_t r = 0; r < hs.rows; ++r)
        hs.row[r].for_each([&](std::uint32_t q) { qubit_checks_[q].push_back(r); });
}

BitVec LocalityAuditor::check_neighborhood(const BitVec& k) const {
    BitVec ck(catalog_.n_checks());
    k.for_each([&](std::uint32_t q) {
        for (auto c : qubit_checks_[q]) ck.set(c);
    });
    return ck;
}

namespace {

BitVec syndrome_of(const FlipCatalog& catalog, const BitVec& qubits) {
    return catalog.syndrome_matrix().multiply(qubits);
}

} // namespace

bool LocalityAuditor::verify_syndrome_restriction(const BitVec& w, const BitVec& k, const BitVec& u) const {
    if (!w.subset_of(u)) throw PreconditionViolated("verify_syndrome_restriction: w not inside u");
    const BitVec ck = check_neighborhood(k);
    const BitVec lhs = syndrome_of(catalog_, w & k);
    const BitVec rhs = syndrome_of(catalog_, w) & ck;
    return lhs == rhs;
}

bool LocalityAuditor::verify_delta_restriction(const BitVec& sigma, const BitVec& k) const {
    const BitVec ck = check_neighborhood(k);
    const BitVec restricted = sigma & ck;
    for (const auto& e : catalog_.entries()) {
        const std::int64_t full = catalog_.decrease(e, sigma);
        const std::int64_t part = catalog_.decrease(e, restricted);
        if (part > full) return false;
        bool inside = true;
        for (auto q : catalog_.entry_qubits(e))
            if (!k.test(q)) { inside = false; break; }
        if (inside && part != full) return false;
    }
    return true;
}

namespace {

bool passes_guard(const DecoderParams& params, std::int64_t dec, std::uint32_t weight, std::uint32_t d_b) {
    if (params.mode == SsfMode::Alg1) return dec >= 1;
    return static_cast<__int128>(dec) * params.beta.den >=
           static_cast<__int128>(params.beta.num) * d_b * weight;
}

// Delta comparison: dec_a/w_a < dec_b/w_b
bool delta_less(std::int64_t dec_a, std::uint32_t w_a, std::int64_t dec_b, std::uint32_t w_b) {
    return dec_a * static_cast<std::int64_t>(w_b) < dec_b * static_cast<std::int64_t>(w_a);
}

} // namespace

LocalityReport verify_locality(const LocalityAuditor& auditor, const BitVec& error,
                               const DecodeRun& run, const DecoderParams& params) {
    const FlipCatalog& catalog = auditor.catalog();
    LocalityReport report;

    const BitVec u = run.support(error);
    const auto components = connected_components(auditor.qubit_graph(), u);

    // E is inside U by construction; in Alg2 mode the support is an
    // alpha-subset of E, |U| * beta <= (1+beta) * |E & U|.
    if (params.mode == SsfMode::Alg2) {
        const auto u_size = static_cast<std::int64_t>(u.count());
        const auto e_in_u = static_cast<std::int64_t>(error.intersection_count(u));
        const __int128 lhs = static_cast<__int128>(u_size) * params.beta.num;
        const __int128 rhs = static_cast<__int128>(e_in_u) * (params.beta.num + params.beta.den);
        if (lhs > rhs) {
            report.support_ratio_ok = false;
            report.passed = false;
            report.failure = "support ratio |U| > (1+beta)/beta |E & U|";
        }
    }

    // Flip/component dichotomy, and assignment of flips to components.
    std::vector<BitVec> comp_masks;
    comp_masks.reserve(components.size());
    for (const auto& comp : components)
        comp_masks.push_back(BitVec::from_indices(u.size(), comp));

    std::vector<std::vector<std::uint32_t>> comp_flips(components.size());
    for (std::uint32_t i = 0; i < run.flips.size(); ++i) {
        const BitVec f = BitVec::from_indices(u.size(), run.flips[i].qubits);
        bool assigned = false;
        for (std::size_t c = 0; c < components.size(); ++c) {
            if (!f.intersects(comp_masks[c])) continue;
            if (!f.subset_of(comp_masks[c])) {
                report.dichotomy_ok = false;
                report.passed = false;
                report.failure = "flip straddles a component boundary";
                return report;
            }
            comp_flips[c].push_back(i);
            assigned = true;
            break;
        }
        if (!assigned) {
            report.dichotomy_ok = false;
            report.passed = false;
            report.failure = "flip outside the support";
            return report;
        }
    }

    // Per-component replay.
    for (std::size_t c = 0; c < components.size(); ++c) {
        ComponentRecord rec;
        rec.component = components[c];
        const BitVec& k = comp_masks[c];
        const BitVec ck = auditor.check_neighborhood(k);
        rec.check_set = ck.indices();
        rec.flip_indices = comp_flips[c];

        BitVec sigma_full = BitVec(catalog.n_checks());
        for (auto idx : run.input_syndrome) sigma_full.set(idx);

        // sigma'_0 = sigma(E & K), which must equal sigma_0 & C_K (the
        // syndrome-restriction identity).
        BitVec sigma_r = syndrome_of(catalog, error & k);
        if (sigma_r != (sigma_full & ck)) {
            rec.passed = false;
            rec.failure = "restricted input syndrome mismatch";
            report.components.push_back(std::move(rec));
            report.passed = false;
            if (report.failure.empty()) report.failure = report.components.back().failure;
            continue;
        }

        BitVec xor_acc(u.size());
        BitVec union_acc = error & k;
        bool ok = true;
        for (std::size_t j = 0; j < rec.flip_indices.size() && ok; ++j) {
            const auto& flip = run.flips[rec.flip_indices[j]];
            auto [b, e_end] = catalog.generator_entries(flip.generator);
            const FlipEntry* entry = nullptr;
            for (std::uint32_t idx = b; idx < e_end; ++idx)
                if (catalog.entries()[idx].mask == flip.mask) { entry = &catalog.entries()[idx]; break; }
            if (!entry) {
                rec.failure = "recorded flip not found in catalog";
                ok = false;
                break;
            }
            const std::int64_t dec = catalog.decrease(*entry, sigma_r);
            // (iv) guard
            if (!passes_guard(params, dec, entry->weight, catalog.d_b())) {
                rec.failure = "condition (iv): guard fails at step " + std::to_string(j);
                ok = false;
                break;
            }
            // (iii) maximality over the whole catalog
            for (const auto& other : catalog.entries()) {
                const std::int64_t odec = catalog.decrease(other, sigma_r);
                if (delta_less(dec, entry->weight, odec, other.weight)) {
                    rec.failure = "condition (iii): recorded flip not a maximizer at step " + std::to_string(j);
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
            // advance
            const std::uint32_t* s = catalog.entry_syndrome(*entry);
            for (std::uint32_t i2 = 0; i2 < entry->syndrome_len; ++i2) sigma_r.flip(s[i2]);
            for (auto q : flip.qubits) {
                xor_acc.flip(q);
                union_acc.set(q);
            }
        }
        if (ok) {
            // (v) no entry passes the guard at the final restricted syndrome
            for (const auto& other : catalog.entries()) {
                if (passes_guard(params, catalog.decrease(other, sigma_r), other.weight, catalog.d_b())) {
                    rec.failure = "condition (v): progress move remains at the final restricted syndrome";
                    ok = false;
                    break;
                }
            }
        }
        if (ok && !(xor_acc == (run.estimate & k))) {
            rec.failure = "condition (i): xor of subsequence != estimate & K";
            ok = false;
        }
        if (ok && !(union_acc == k)) {
            rec.failure = "condition (ii): (E & K) union flips != K";
            ok = false;
        }
        rec.passed = ok;
        if (!ok) {
            report.passed = false;
            if (report.failure.empty()) report.failure = rec.failure;
        }
        report.components.push_back(std::move(rec));
    }
    return report;
}

CorrectionCriterionResult verify_correction_criterion(const LocalityAuditor& auditor,
                                                      const EquivalenceChecker& checker,
                                                      const BitVec& error, const DecoderParams& params,
                                                      std::uint32_t t) {
    if (params.mode != SsfMode::Alg2)
        throw PreconditionViolated("verify_correction_criterion: needs Alg2 mode (alpha = beta/(1+beta))");
    CorrectionCriterionResult res;
    const Rat alpha = params.beta / (Rat(1) + params.beta);
    const auto mc = max_conn_alpha_exact(auditor.qubit_graph(), error, alpha, t + 1);
    res.max_conn = mc.value;
    res.cap_hit = mc.cap_hit;
    if (mc.cap_hit || mc.value > t) return res;  // hypothesis fails, nothing to check
    res.checked = true;
    const FlipCatalog& catalog = auditor.catalog();
    const BitVec sigma = catalog.syndrome_matrix().multiply(error);
    const DecodeRun run = decode_ssf(catalog, sigma, params);
    res.corrected = (run.termination == Termination::Converged) &&
                    checker.equivalent(error, run.estimate);
    return res;
}

void write_locality_report(std::ostream& os, const LocalityReport& report) {
    nlohmann::json j;
    j["schema"] = "qxc.locality_report.v1";
    j["passed"] = report.passed;
    j["dichotomy_ok"] = report.dichotomy_ok;
    j["support_ratio_ok"] = report.support_ratio_ok;
    j["failure"] = report.failure;
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& rec : report.components) {
        comps.push_back({{"component", rec.component},
                         {"check_set", rec.check_set},
                         {"flip_indices", rec.flip_indices},
                         {"passed", rec.passed},
                         {"failure", rec.failure}});
    }
    j["components"] = std::move(comps);
    os << j.dump(2) << '\n';
}

} // namespace qxc
