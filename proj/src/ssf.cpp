#include "qxc/ssf.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "qxc/errors.hpp"

namespace qxc {

// ---------------------------------------------------------------------------
// FlipCatalog

FlipCatalog FlipCatalog::build(const CssCode& code, CodeSide side, std::uint64_t max_entries) {
    FlipCatalog cat;
    cat.side_ = side;
    cat.n_qubits_ = code.n_qubits();
    cat.d_b_ = code.d_b;
    // Side X decodes X errors: flips live inside X-type generators (rows of
    // H_Z) and are scored through H_X.
    cat.h_side_ = (side == CodeSide::X) ? &code.h_x : &code.h_z;
    cat.h_other_ = (side == CodeSide::X) ? &code.h_z : &code.h_x;
    cat.n_checks_ = cat.h_side_->rows;

    if (code.d_a + code.d_b > 30)
        throw BudgetExceeded("FlipCatalog: generator weight d_A + d_B above 30");

    const ParityMatrix& gens = *cat.h_other_;
    const ParityMatrix& hs = *cat.h_side_;

    // column supports of the syndrome map, indexed by qubit
    std::vector<std::vector<std::uint32_t>> columns(cat.n_qubits_);
    for (std::uint32_t r = 0; r < hs.rows; ++r)
        hs.row[r].for_each([&](std::uint32_t q) { columns[q].push_back(r); });

    std::uint64_t total = 0;
    cat.supports_.reserve(gens.rows);
    for (std::uint32_t g = 0; g < gens.rows; ++g) {
        cat.supports_.push_back(gens.row[g].indices());
        const auto w = cat.supports_.back().size();
        if (w > 30) throw BudgetExceeded("FlipCatalog: generator support above 30");
        total += (std::uint64_t(1) << w) - 1;
        if (total > max_entries) throw BudgetExceeded("FlipCatalog: entry count above budget");
    }

    cat.entries_.reserve(total);
    cat.gen_entry_begin_.assign(gens.rows + 1, 0);
    std::vector<std::uint8_t> scratch(cat.n_checks_, 0);
    std::vector<std::uint32_t> touched;
    for (std::uint32_t g = 0; g < gens.rows; ++g) {
        cat.gen_entry_begin_[g] = static_cast<std::uint32_t>(cat.entries_.size());
        const auto& support = cat.supports_[g];
        const std::uint32_t w = static_cast<std::uint32_t>(support.size());
        for (std::uint32_t mask = 1; mask < (1u << w); ++mask) {
            touched.clear();
            for (std::uint32_t i = 0; i < w; ++i) {
                if (!(mask & (1u << i))) continue;
                for (auto c : columns[support[i]]) {
                    if (!scratch[c]) touched.push_back(c);
                    scratch[c] ^= 1;
                }
            }
            FlipEntry e;
            e.generator = g;
            e.mask = mask;
            e.weight = static_cast<std::uint32_t>(std::popcount(mask));
            e.syndrome_begin = static_cast<std::uint32_t>(cat.syndrome_pool_.size());
            for (auto c : touched) {
                if (scratch[c]) cat.syndrome_pool_.push_back(c);
                scratch[c] = 0;
            }
            e.syndrome_len = static_cast<std::uint32_t>(cat.syndrome_pool_.size()) - e.syndrome_begin;
            std::sort(cat.syndrome_pool_.begin() + e.syndrome_begin, cat.syndrome_pool_.end());
            cat.entries_.push_back(e);
        }
    }
    cat.gen_entry_begin_[gens.rows] = static_cast<std::uint32_t>(cat.entries_.size());

    cat.check_to_generators_.assign(cat.n_checks_, {});
    cat.local_begin_.assign(gens.rows + 1, 0);
    cat.local_words_.assign(gens.rows, 0);
    cat.mask_begin_.assign(gens.rows, 0);
    std::vector<std::uint32_t> nbhd;
    for (std::uint32_t g = 0; g < gens.rows; ++g) {
        nbhd.clear();
        for (auto q : cat.supports_[g])
            for (auto c : columns[q]) nbhd.push_back(c);
        std::sort(nbhd.begin(), nbhd.end());
        nbhd.erase(std::unique(nbhd.begin(), nbhd.end()), nbhd.end());
        for (auto c : nbhd) cat.check_to_generators_[c].push_back(g);

        // local evaluation table when the neighborhood fits
        cat.local_begin_[g] = static_cast<std::uint32_t>(cat.local_checks_.size());
        cat.mask_begin_[g] = static_cast<std::uint32_t>(cat.qubit_masks_.size());
        const auto words = static_cast<std::uint32_t>((nbhd.size() + 63) / 64);
        if (words >= 1 && words <= kMaxLocalWords) {
            cat.local_words_[g] = static_cast<std::uint8_t>(words);
            cat.local_checks_.insert(cat.local_checks_.end(), nbhd.begin(), nbhd.end());
            for (auto q : cat.supports_[g]) {
                std::uint64_t w[kMaxLocalWords] = {0, 0};
                for (auto c : columns[q]) {
                    const auto pos = static_cast<std::uint32_t>(
                        std::lower_bound(nbhd.begin(), nbhd.end(), c) - nbhd.begin());
                    w[pos >> 6] |= std::uint64_t(1) << (pos & 63);
                }
                for (std::uint32_t i = 0; i < words; ++i) cat.qubit_masks_.push_back(w[i]);
            }
        }
    }
    cat.local_begin_[gens.rows] = static_cast<std::uint32_t>(cat.local_checks_.size());
    return cat;
}

FlipCatalog::GenScan FlipCatalog::best_entry(std::uint32_t g, const BitVec& sigma) const {
    GenScan best;
    const std::uint32_t begin = gen_entry_begin_[g];
    const std::uint32_t words = local_words_[g];
    if (words == 0) {
        // generic fallback: scan the precomputed entries
        const std::uint32_t end = gen_entry_begin_[g + 1];
        for (std::uint32_t i = begin; i < end; ++i) {
            const std::int64_t dec = decrease(entries_[i], sigma);
            const FlipEntry& e = entries_[i];
            if (best.entry == UINT32_MAX) { best = {dec, i}; continue; }
            const FlipEntry& b = entries_[best.entry];
            const std::int64_t lhs = dec * b.weight, rhs = best.dec * e.weight;
            if (lhs > rhs || (lhs == rhs && e.weight < b.weight)) best = {dec, i};
        }
        return best;
    }
    // local-bitmask path: XOR down a Gray walk, one popcount per subset
    const std::uint32_t* checks = local_checks_.data() + local_begin_[g];
    const std::uint32_t n_local = local_begin_[g + 1] - local_begin_[g];
    std::uint64_t sig_local[kMaxLocalWords] = {0, 0};
    for (std::uint32_t i = 0; i < n_local; ++i)
        if (sigma.test(checks[i])) sig_local[i >> 6] |= std::uint64_t(1) << (i & 63);
    const std::uint64_t* masks = qubit_masks_.data() + mask_begin_[g];
    const auto w = static_cast<std::uint32_t>(supports_[g].size());
    std::uint64_t acc[kMaxLocalWords] = {0, 0};
    std::int64_t best_dec = 0;
    std::uint32_t best_mask = 0, best_weight = 0;
    for (std::uint32_t i = 1; i < (1u << w); ++i) {
        const auto bit = static_cast<std::uint32_t>(std::countr_zero(i));
        acc[0] ^= masks[bit * words];
        if (words == 2) acc[1] ^= masks[bit * words + 1];
        std::int64_t hit = std::popcount(acc[0] & sig_local[0]);
        std::int64_t len = std::popcount(acc[0]);
        if (words == 2) {
            hit += std::popcount(acc[1] & sig_local[1]);
            len += std::popcount(acc[1]);
        }
        const std::int64_t dec = 2 * hit - len;
        const std::uint32_t mask = i ^ (i >> 1);  // Gray code = visited subset
        const auto weight = static_cast<std::uint32_t>(std::popcount(mask));
        if (best_mask == 0) {
            best_dec = dec;
            best_mask = mask;
            best_weight = weight;
            continue;
        }
        const std::int64_t lhs = dec * best_weight, rhs = best_dec * weight;
        if (lhs > rhs || (lhs == rhs && (weight < best_weight ||
                                         (weight == best_weight && mask < best_mask)))) {
            best_dec = dec;
            best_mask = mask;
            best_weight = weight;
        }
    }
    best.dec = best_dec;
    best.entry = begin + best_mask - 1;
    return best;
}

std::vector<std::uint32_t> FlipCatalog::entry_qubits(const FlipEntry& e) const {
    std::vector<std::uint32_t> out;
    const auto& support = supports_[e.generator];
    for (std::uint32_t i = 0; i < support.size(); ++i)
        if (e.mask & (1u << i)) out.push_back(support[i]);
    return out;
}

std::int64_t FlipCatalog::decrease(const FlipEntry& e, const BitVec& sigma) const {
    std::int64_t hit = 0;
    const std::uint32_t* s = entry_syndrome(e);
    for (std::uint32_t i = 0; i < e.syndrome_len; ++i)
        if (sigma.test(s[i])) ++hit;
    return 2 * hit - static_cast<std::int64_t>(e.syndrome_len);
}

BitVec FlipCatalog::recompute_syndrome(const FlipEntry& e) const {
    BitVec f(n_qubits_);
    for (auto q : entry_qubits(e)) f.set(q);
    return h_side_->multiply(f);
}

Rat delta(const FlipCatalog& catalog, const FlipEntry& entry, const BitVec& sigma) {
    return Rat(catalog.decrease(entry, sigma), entry.weight);
}

// ---------------------------------------------------------------------------
// Parameters

DecoderParams DecoderParams::alg1() {
    DecoderParams p;
    p.mode = SsfMode::Alg1;
    p.beta = Rat(0);
    return p;
}

DecoderParams DecoderParams::alg2(const Rat& beta) {
    if (!beta.is_positive() || beta > Rat(1))
        throw PreconditionViolated("DecoderParams: beta must lie in (0, 1]");
    DecoderParams p;
    p.mode = SsfMode::Alg2;
    p.beta = beta;
    return p;
}

std::pair<Rat, Rat> beta0(std::uint32_t d_a, std::uint32_t d_b, const Rat& delta_a, const Rat& delta_b) {
    if (!delta_a.is_positive() || delta_a >= Rat(1) || !delta_b.is_positive() || delta_b >= Rat(1))
        throw PreconditionViolated("beta0: deltas must lie in (0, 1)");
    const Rat r(d_a, d_b);
    const Rat diff = delta_b - delta_a;
    const Rat inner = delta_a + delta_b + diff * diff;
    const Rat b0 = r / Rat(2) * (Rat(1) - Rat(4) * inner);
    return {r, b0};
}

std::pair<Rat, Rat> beta0_guaranteed(std::uint32_t d_a, std::uint32_t d_b, const Rat& delta_a,
                                     const Rat& delta_b) {
    auto rb = beta0(d_a, d_b, delta_a, delta_b);
    if (!rb.second.is_positive())
        throw NegativeBeta("beta0 <= 0: expansion too weak (deltas too large) for guarantee mode");
    return rb;
}

std::uint64_t t_ssf_bound(const CodeParams& params, const Rat& beta, const Rat& gamma_a, const Rat& gamma_b) {
    if (!beta.is_positive()) throw PreconditionViolated("t_ssf_bound: beta must be positive");
    const Rat min_gn = std::min(gamma_a * Rat(params.n_a), gamma_b * Rat(params.n_b));
    const Rat bound = params.r * beta / (Rat(1) + beta) * min_gn;
    const auto f = bound.floor();
    return f > 0 ? static_cast<std::uint64_t>(f) : 0;
}

// ---------------------------------------------------------------------------
// Decoder

BitVec DecodeRun::support(const BitVec& known_error) const {
    BitVec u = known_error;
    for (const auto& f : flips)
        for (auto q : f.qubits) u.set(q);
    return u;
}

BitVec DecodeRun::support_no_error() const {
    BitVec u(estimate.size());
    for (const auto& f : flips)
        for (auto q : f.qubits) u.set(q);
    return u;
}

namespace {

// Ordering used by the argmax: larger Delta first, ties broken toward
// smaller |F|, then smaller generator index, then smaller subset mask.
bool better_candidate(std::int64_t dec_a, const FlipEntry& a, std::int64_t dec_b, const FlipEntry& b) {
    const std::int64_t lhs = dec_a * b.weight;
    const std::int64_t rhs = dec_b * a.weight;
    if (lhs != rhs) return lhs > rhs;
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.generator != b.generator) return a.generator < b.generator;
    return a.mask < b.mask;
}

struct GenBest {
    std::int64_t dec = 0;
    std::uint32_t entry = UINT32_MAX;  // UINT32_MAX = not computed
};

bool passes_guard(const DecoderParams& params, std::int64_t dec, std::uint32_t weight, std::uint32_t d_b) {
    if (params.mode == SsfMode::Alg1) return dec >= 1;
    // dec >= beta * d_B * |F|, compared exactly
    return static_cast<__int128>(dec) * params.beta.den >=
           static_cast<__int128>(params.beta.num) * d_b * weight;
}

} // namespace

DecodeRun decode_ssf(const FlipCatalog& catalog, const BitVec& sigma0, const DecoderParams& params) {
    if (sigma0.size() != catalog.n_checks())
        throw DimensionMismatch("decode_ssf: syndrome size mismatch");
    if (params.mode == SsfMode::Alg2 && !params.beta.is_positive())
        throw PreconditionViolated("decode_ssf: Alg2 requires beta > 0");

    DecodeRun run;
    run.input_syndrome = sigma0.indices();
    run.estimate = BitVec(catalog.n_qubits());

    BitVec sigma = sigma0;
    auto weight = static_cast<std::uint64_t>(sigma.count());
    run.syndrome_weights.push_back(static_cast<std::uint32_t>(weight));

    std::uint64_t flip_cap = params.max_flips;
    const bool cap_is_default = (flip_cap == 0);
    if (cap_is_default) {
        if (params.mode == SsfMode::Alg1) {
            flip_cap = weight + 1;
        } else {
            // ceil(|sigma_0| * beta.den / (beta.num * d_B)) + 1
            const std::uint64_t denom = static_cast<std::uint64_t>(params.beta.num) * catalog.d_b();
            flip_cap = (weight * params.beta.den + denom - 1) / denom + 1;
        }
    }

    const std::uint32_t n_gens = catalog.n_generators();
    std::vector<GenBest> best(n_gens);
    std::vector<std::uint8_t> dirty(n_gens, 0);
    std::vector<std::uint32_t> candidates;

    // Generators whose syndrome neighborhood misses sigma have every entry
    // at negative decrease: they can never win a guard-passing argmax, so
    // only touched generators are tracked.  Marking is monotone; a touched
    // generator whose neighborhood later clears just recomputes to a
    // negative best.
    auto touch = [&](std::uint32_t c) {
        for (auto g : catalog.generators_touching_check(c)) {
            if (!dirty[g] && best[g].entry == UINT32_MAX) candidates.push_back(g);
            dirty[g] = 1;
        }
    };
    sigma.for_each([&](std::uint32_t c) { touch(c); });

    auto recompute = [&](std::uint32_t g) {
        const auto scan = catalog.best_entry(g, sigma);
        best[g] = GenBest{scan.dec, scan.entry};
        dirty[g] = 0;
    };

    if (params.full_scan)
        for (std::uint32_t g = 0; g < n_gens; ++g)
            if (best[g].entry == UINT32_MAX && !dirty[g]) candidates.push_back(g);

    while (true) {
        if (sigma.none()) {
            run.termination = Termination::Converged;
            break;
        }
        std::uint32_t win_gen = UINT32_MAX;
        for (auto g : candidates) {
            if (params.full_scan || dirty[g] || best[g].entry == UINT32_MAX) recompute(g);
            if (best[g].entry == UINT32_MAX) continue;
            if (win_gen == UINT32_MAX ||
                better_candidate(best[g].dec, catalog.entries()[best[g].entry], best[win_gen].dec,
                                 catalog.entries()[best[win_gen].entry]))
                win_gen = g;
        }
        if (win_gen == UINT32_MAX) {
            run.termination = Termination::Stalled;
            break;
        }
        const FlipEntry& e = catalog.entries()[best[win_gen].entry];
        const std::int64_t dec = best[win_gen].dec;
        if (!passes_guard(params, dec, e.weight, catalog.d_b())) {
            run.termination = Termination::Stalled;
            break;
        }
        if (run.flips.size() >= flip_cap) {
            if (cap_is_default)
                throw InvariantViolation("decode_ssf: default flip cap exceeded");
            run.termination = Termination::FlipCapHit;
            break;
        }

        // apply the flip
        const std::uint32_t* s = catalog.entry_syndrome(e);
        for (std::uint32_t i = 0; i < e.syndrome_len; ++i) {
            const std::uint32_t c = s[i];
            sigma.flip(c);
            touch(c);
        }
        weight = static_cast<std::uint64_t>(weight - dec);
        DecodeRun::Flip flip;
        flip.generator = e.generator;
        flip.mask = e.mask;
        flip.qubits = catalog.entry_qubits(e);
        for (auto q : flip.qubits) run.estimate.flip(q);
        run.flips.push_back(std::move(flip));
        run.syndrome_weights.push_back(static_cast<std::uint32_t>(weight));
        if (weight != sigma.count())
            throw InvariantViolation("decode_ssf: syndrome weight bookkeeping broken");
    }

    if (run.termination == Termination::Stalled && params.classify_stall) {
        RowBasis colspace(catalog.syndrome_matrix().transposed());
        run.syndrome_reachable = colspace.contains(sigma0);
    }
    return run;
}

std::optional<FlipEntry> find_progress_move(const FlipCatalog& catalog, const BitVec& sigma,
                                            const Rat& beta) {
    if (sigma.size() != catalog.n_checks())
        throw DimensionMismatch("find_progress_move: syndrome size mismatch");
    // Entries of generators not touching sigma have decrease < 0 and can
    // never pass either guard, so only touched generators are scanned.
    std::vector<std::uint32_t> gens;
    sigma.for_each([&](std::uint32_t c) {
        for (auto g : catalog.generators_touching_check(c)) gens.push_back(g);
    });
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    DecoderParams guard = beta.is_positive() ? DecoderParams::alg2(beta) : DecoderParams::alg1();
    for (auto g : gens) {
        auto [b, e] = catalog.generator_entries(g);
        for (std::uint32_t i = b; i < e; ++i) {
            const FlipEntry& entry = catalog.entries()[i];
            if (passes_guard(guard, catalog.decrease(entry, sigma), entry.weight, catalog.d_b()))
                return entry;
        }
    }
    return std::nullopt;
}

EquivalenceChecker::EquivalenceChecker(const CssCode& code, CodeSide side)
    : basis_(side == CodeSide::X ? code.h_z : code.h_x) {}

bool EquivalenceChecker::equivalent(const BitVec& e, const BitVec& e_hat) const {
    return basis_.contains(e ^ e_hat);
}

// ---------------------------------------------------------------------------
// JSON round trip

using nlohmann::json;

void write_decode_run(std::ostream& os, const DecodeRun& run) {
    json j;
    j["schema"] = "qxc.decode_run.v1";
    j["input_syndrome"] = run.input_syndrome;
    j["syndrome_weights"] = run.syndrome_weights;
    switch (run.termination) {
        case Termination::Converged: j["termination"] = "converged"; break;
        case Termination::Stalled: j["termination"] = "stalled"; break;
        case Termination::FlipCapHit: j["termination"] = "flip_cap_hit"; break;
    }
    if (run.syndrome_reachable.has_value()) j["syndrome_reachable"] = *run.syndrome_reachable;
    json flips = json::array();
    for (const auto& f : run.flips)
        flips.push_back({{"generator", f.generator}, {"mask", f.mask}, {"qubits", f.qubits}});
    j["flips"] = std::move(flips);
    j["estimate"] = run.estimate.indices();
    os << j.dump(2) << '\n';
}

DecodeRun read_decode_run(std::istream& is, std::uint32_t n_qubits) {
    json j = json::parse(is);
    DecodeRun run;
    run.input_syndrome = j.at("input_syndrome").get<std::vector<std::uint32_t>>();
    run.syndrome_weights = j.at("syndrome_weights").get<std::vector<std::uint32_t>>();
    const std::string term = j.at("termination").get<std::string>();
    if (term == "converged") run.termination = Termination::Converged;
    else if (term == "stalled") run.termination = Termination::Stalled;
    else run.termination = Termination::FlipCapHit;
    if (j.contains("syndrome_reachable")) run.syndrome_reachable = j["syndrome_reachable"].get<bool>();
    run.estimate = BitVec(n_qubits);
    for (const auto& f : j.at("flips")) {
        DecodeRun::Flip flip;
        flip.generator = f.at("generator").get<std::uint32_t>();
        flip.mask = f.at("mask").get<std::uint32_t>();
        flip.qubits = f.at("qubits").get<std::vector<std::uint32_t>>();
        run.flips.push_back(std::move(flip));
    }
    for (auto q : j.at("estimate").get<std::vector<std::uint32_t>>()) run.estimate.set(q);
    return run;
}

} // namespace qxc
