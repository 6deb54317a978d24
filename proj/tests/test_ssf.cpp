#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "qxc/rng.hpp"
#include "qxc/ssf.hpp"

using namespace qxc;
using namespace qxc::testing;

namespace {

CssCode two_cols_code() { return hypergraph_product(seed_graph_from_matrix(h_two_cols())); }
CssCode chain_code() { return hypergraph_product(seed_graph_from_matrix(h_chain_three())); }

BitVec error_of(std::uint32_t n, std::initializer_list<std::uint32_t> qs) {
    BitVec e(n);
    for (auto q : qs) e.set(q);
    return e;
}

} // namespace

TEST_CASE("catalog: single-edge code has one generator with three subsets") {
    const auto code = hypergraph_product(seed_graph_from_matrix(h_single_edge()));
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    CHECK(cat.n_generators() == 1);
    CHECK(cat.entries().size() == 3);  // 2^2 - 1
    for (const auto& e : cat.entries()) CHECK((1u << cat.generator_support(e.generator).size()) - 1 >= e.mask);
}

TEST_CASE("catalog: entry count is 2^w - 1 per generator and budget guard works") {
    const auto code = chain_code();
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    for (std::uint32_t g = 0; g < cat.n_generators(); ++g) {
        auto [b, e] = cat.generator_entries(g);
        CHECK(e - b == (1u << cat.generator_support(g).size()) - 1);
    }
    CHECK_THROWS_AS(FlipCatalog::build(code, CodeSide::X, /*max_entries=*/3), BudgetExceeded);
}

TEST_CASE("catalog spot audit: stored syndromes equal column xors") {
    const auto g = sample_biregular(8, 6, 3, 4, 4);
    const auto code = hypergraph_product(g);
    for (auto side : {CodeSide::X, CodeSide::Z}) {
        const auto cat = FlipCatalog::build(code, side);
        CounterRng rng = CounterRng::keyed(11, 0, 0);
        for (int i = 0; i < 100; ++i) {
            const auto& e = cat.entries()[rng.below(cat.entries().size())];
            const BitVec direct = cat.recompute_syndrome(e);
            BitVec stored(cat.n_checks());
            const std::uint32_t* s = cat.entry_syndrome(e);
            for (std::uint32_t j = 0; j < e.syndrome_len; ++j) stored.set(s[j]);
            REQUIRE(stored == direct);
        }
    }
}

TEST_CASE("delta: disjoint, contained, half-overlap") {
    const auto code = two_cols_code();
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    // find an entry with syndrome weight 2
    const FlipEntry* pick = nullptr;
    for (const auto& e : cat.entries())
        if (e.syndrome_len == 2 && e.weight == 1) { pick = &e; break; }
    REQUIRE(pick != nullptr);
    BitVec empty(cat.n_checks());
    CHECK(delta(cat, *pick, empty) == Rat(-2, 1));  // -|sigma(F)|/|F|
    BitVec full(cat.n_checks());
    const std::uint32_t* s = cat.entry_syndrome(*pick);
    full.set(s[0]);
    full.set(s[1]);
    CHECK(delta(cat, *pick, full) == Rat(2, 1));
    BitVec half(cat.n_checks());
    half.set(s[0]);
    CHECK(delta(cat, *pick, half) == Rat(0));
}

TEST_CASE("beta0: appendix values and algebraic collapses") {
    const auto [r, b0] = beta0(38, 39, Rat(1, 38), Rat(1, 39));
    CHECK(r == Rat(38, 39));
    CHECK(std::abs(b0.to_double() - 0.386) < 1e-3);
    const double alpha = b0.to_double() / (1.0 + b0.to_double());
    CHECK(std::abs(alpha - 0.278) < 1e-3);
    // delta = 1/8 on both sides kills the guarantee exactly
    CHECK(beta0(4, 4, Rat(1, 8), Rat(1, 8)).second == Rat(0));
    CHECK_THROWS_AS(beta0_guaranteed(4, 4, Rat(1, 8), Rat(1, 8)), NegativeBeta);
    // equal deltas: beta0 = r (1 - 8 delta) / 2
    const Rat d(1, 20);
    CHECK(beta0(3, 4, d, d).second == Rat(3, 4) * (Rat(1) - Rat(8) * d) / Rat(2));
}

TEST_CASE("t_ssf_bound: zero limit, linearity, sqrt-n scaling") {
    const auto c1 = code_params(hypergraph_product(sample_biregular(8, 6, 3, 4, 1)),
                                Rat(1, 2), Rat(1, 2), Rat(1, 2), 2);
    CHECK(t_ssf_bound(c1, Rat(1, 1000000), Rat(1, 2), Rat(1, 2)) == 0);
    const auto c2 = code_params(hypergraph_product(sample_biregular(32, 24, 3, 4, 1)),
                                Rat(1, 2), Rat(1, 2), Rat(1, 2), 2);
    const auto t1 = t_ssf_bound(c1, Rat(1, 2), Rat(1, 2), Rat(1, 2));
    const auto t2 = t_ssf_bound(c2, Rat(1, 2), Rat(1, 2), Rat(1, 2));
    // n grows 16x, the bound grows ~4x (with min(gamma n) growing 4x)
    CHECK(t2 >= 4 * t1);
    CHECK(t2 <= 4 * t1 + 4);
}

TEST_CASE("decode_ssf: empty syndrome converges with no flips") {
    const auto code = two_cols_code();
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    const auto run = decode_ssf(cat, BitVec(cat.n_checks()), DecoderParams::alg2(Rat(1, 2)));
    CHECK(run.termination == Termination::Converged);
    CHECK(run.flip_count() == 0);
    CHECK(run.estimate.none());
}

TEST_CASE("decode_ssf on the five-qubit code: weight-1 errors and the degenerate pairs") {
    // This code has minimum distance 2: A^2 qubits 0,1 (and likewise 2,3)
    // sit in exactly the same checks, and both {0,1} and {2,3} represent the
    // single logical.  Any decoder maps each shared syndrome to one fixed
    // estimate, so exactly one error of each pair fails equivalence; the
    // other three weight-1 errors are clean.
    const auto code = two_cols_code();
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    const EquivalenceChecker eq(code, CodeSide::X);
    const auto params = DecoderParams::alg2(Rat(1, 2));

    CHECK(code.h_x.column_support(0) == code.h_x.column_support(1));
    CHECK(code.h_x.column_support(2) == code.h_x.column_support(3));

    int equivalent_count = 0;
    std::vector<std::uint32_t> failing;
    for (std::uint32_t q = 0; q < 5; ++q) {
        const BitVec e = error_of(5, {q});
        const auto run = decode_ssf(cat, code.h_x.multiply(e), params);
        REQUIRE(run.termination == Termination::Converged);
        // Alg2 flip-count bound f <= |sigma_0| / (beta d_B)
        const double cap = static_cast<double>(run.syndrome_weights.front()) /
                           (params.beta.to_double() * cat.d_b());
        REQUIRE(static_cast<double>(run.flip_count()) <= cap + 1e-9);
        if (eq.equivalent(e, run.estimate)) ++equivalent_count;
        else failing.push_back(q);
    }
    CHECK(equivalent_count == 3);
    REQUIRE(failing == std::vector<std::uint32_t>{1, 3});
    // each failure differs from its estimate by a degenerate-pair logical
    RowBasis stab(code.h_z);
    for (auto q : failing) {
        const BitVec e = error_of(5, {q});
        const auto run = decode_ssf(cat, code.h_x.multiply(e), params);
        const BitVec diff = e ^ run.estimate;
        CHECK(diff == error_of(5, {q - 1, q}));
        CHECK(code.h_x.multiply(diff).none());  // in the kernel
        CHECK_FALSE(stab.contains(diff));       // but not a stabilizer: a logical
    }
}

TEST_CASE("chain code corrects all weight-1 errors on both sides") {
    const auto code = chain_code();
    for (auto side : {CodeSide::X, CodeSide::Z}) {
        const auto cat = FlipCatalog::build(code, side);
        const EquivalenceChecker eq(code, side);
        const ParityMatrix& h = (side == CodeSide::X) ? code.h_x : code.h_z;
        for (std::uint32_t q = 0; q < code.n_qubits(); ++q) {
            const BitVec e = error_of(code.n_qubits(), {q});
            const auto run = decode_ssf(cat, h.multiply(e), DecoderParams::alg2(Rat(1, 2)));
            REQUIRE(run.termination == Termination::Converged);
            REQUIRE(eq.equivalent(e, run.estimate));
        }
    }
}

TEST_CASE("recorded trace is re-checkable: argmax and guard hold at every step") {
    const auto g = sample_biregular(8, 6, 3, 4, 23);
    const auto code = hypergraph_product(g);
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    const auto params = DecoderParams::alg2(Rat(1, 2));
    CounterRng rng = CounterRng::keyed(5, 0, 0);
    for (int trial = 0; trial < 50; ++trial) {
        BitVec e(code.n_qubits());
        for (std::uint32_t q = 0; q < code.n_qubits(); ++q)
            if (rng.bernoulli(0.03)) e.set(q);
        const auto run = decode_ssf(cat, code.h_x.multiply(e), params);
        // replay: sigma_{i+1} = sigma_i ^ sigma(F_i), decrease maximal, guard met
        BitVec sigma(cat.n_checks());
        for (auto c : run.input_syndrome) sigma.set(c);
        for (std::size_t i = 0; i < run.flips.size(); ++i) {
            const auto& flip = run.flips[i];
            auto [b, eend] = cat.generator_entries(flip.generator);
            const FlipEntry* entry = nullptr;
            for (std::uint32_t idx = b; idx < eend; ++idx)
                if (cat.entries()[idx].mask == flip.mask) { entry = &cat.entries()[idx]; break; }
            REQUIRE(entry != nullptr);
            const auto dec = cat.decrease(*entry, sigma);
            // guard
            REQUIRE(Rat(dec, 1) >= params.beta * Rat(cat.d_b()) * Rat(entry->weight));
            // maximality of Delta over the entire catalog
            for (const auto& other : cat.entries()) {
                const auto odec = cat.decrease(other, sigma);
                REQUIRE(dec * static_cast<std::int64_t>(other.weight) >=
                        odec * static_cast<std::int64_t>(entry->weight));
            }
            REQUIRE(run.syndrome_weights[i] - run.syndrome_weights[i + 1] == dec);
            const std::uint32_t* s = cat.entry_syndrome(*entry);
            for (std::uint32_t j = 0; j < entry->syndrome_len; ++j) sigma.flip(s[j]);
        }
        if (run.termination == Termination::Converged) {
            REQUIRE(sigma.none());
            REQUIRE(code.h_x.multiply(run.estimate) == code.h_x.multiply(e));
        }
    }
}

TEST_CASE("dirty-set and full-scan decoders produce identical runs") {
    const auto g = sample_biregular(8, 6, 3, 4, 31);
    const auto code = hypergraph_product(g);
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    auto fast = DecoderParams::alg2(Rat(1, 2));
    auto slow = fast;
    slow.full_scan = true;
    CounterRng rng = CounterRng::keyed(6, 0, 0);
    for (int trial = 0; trial < 50; ++trial) {
        BitVec e(code.n_qubits());
        for (std::uint32_t q = 0; q < code.n_qubits(); ++q)
            if (rng.bernoulli(0.05)) e.set(q);
        const BitVec sigma = code.h_x.multiply(e);
        const auto r1 = decode_ssf(cat, sigma, fast);
        const auto r2 = decode_ssf(cat, sigma, slow);
        REQUIRE(r1.estimate == r2.estimate);
        REQUIRE(r1.syndrome_weights == r2.syndrome_weights);
        REQUIRE(r1.flips.size() == r2.flips.size());
        for (std::size_t i = 0; i < r1.flips.size(); ++i) {
            REQUIRE(r1.flips[i].generator == r2.flips[i].generator);
            REQUIRE(r1.flips[i].mask == r2.flips[i].mask);
        }
    }
}

TEST_CASE("alg1 and alg2 guards differ; alg2 success implies alg1 success empirically") {
    const auto code = chain_code();
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    const EquivalenceChecker eq(code, CodeSide::X);
    CounterRng rng = CounterRng::keyed(9, 0, 0);
    int alg2_wins = 0;
    for (int trial = 0; trial < 500; ++trial) {
        BitVec e(code.n_qubits());
        for (std::uint32_t q = 0; q < code.n_qubits(); ++q)
            if (rng.bernoulli(0.08)) e.set(q);
        const BitVec sigma = code.h_x.multiply(e);
        const auto r2 = decode_ssf(cat, sigma, DecoderParams::alg2(Rat(1, 2)));
        const bool ok2 = r2.termination == Termination::Converged && eq.equivalent(e, r2.estimate);
        if (!ok2) continue;
        ++alg2_wins;
        const auto r1 = decode_ssf(cat, sigma, DecoderParams::alg1());
        REQUIRE(r1.termination == Termination::Converged);
        REQUIRE(eq.equivalent(e, r1.estimate));
    }
    CHECK(alg2_wins > 100);
}

TEST_CASE("unreachable syndromes are classified on stall") {
    // A rank-deficient seed (K_{2,2}, whose parity matrix has two equal
    // rows) leaves H_X with rank 3 out of 4 checks, so half the syndrome
    // space is unreachable.
    const auto seed = BipartiteGraph::from_left_adjacency(2, 2, {{0, 1}, {0, 1}});
    const auto code = hypergraph_product(seed);
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    RowBasis colspace(code.h_x.transposed());
    REQUIRE(colspace.rank() < cat.n_checks());
    BitVec target(cat.n_checks());
    bool found = false;
    for (std::uint32_t mask = 1; mask < (1u << cat.n_checks()) && !found; ++mask) {
        BitVec cand(cat.n_checks());
        for (std::uint32_t i = 0; i < cat.n_checks(); ++i)
            if (mask & (1u << i)) cand.set(i);
        if (!colspace.contains(cand)) {
            target = cand;
            found = true;
        }
    }
    REQUIRE(found);
    const auto run = decode_ssf(cat, target, DecoderParams::alg2(Rat(1, 2)));
    CHECK(run.termination == Termination::Stalled);
    REQUIRE(run.syndrome_reachable.has_value());
    CHECK_FALSE(*run.syndrome_reachable);
    // a reachable syndrome that converges never gets the flag
    BitVec e(code.n_qubits());
    e.set(0);
    const auto ok = decode_ssf(cat, code.h_x.multiply(e), DecoderParams::alg2(Rat(1, 2)));
    if (ok.termination == Termination::Converged) CHECK_FALSE(ok.syndrome_reachable.has_value());
}

TEST_CASE("check_equivalence: identity, stabilizer, logical") {
    const auto code = two_cols_code();
    const EquivalenceChecker eq(code, CodeSide::X);
    const BitVec e = error_of(5, {2});
    CHECK(eq.equivalent(e, e));
    // add one X-generator support (row of H_Z)
    BitVec gen(5);
    code.h_z.row[0].for_each([&](std::uint32_t q) { gen.set(q); });
    CHECK(eq.equivalent(e, e ^ gen));
    // brute-force minimum-weight logical: kernel(H_X) \ rowspace(H_Z)
    RowBasis stab(code.h_z);
    BitVec logical(5);
    std::uint32_t best = UINT32_MAX;
    for (std::uint32_t mask = 1; mask < 32; ++mask) {
        BitVec v(5);
        for (std::uint32_t q = 0; q < 5; ++q)
            if (mask & (1u << q)) v.set(q);
        if (code.h_x.multiply(v).any()) continue;
        if (stab.contains(v)) continue;
        if (v.count() < best) {
            best = static_cast<std::uint32_t>(v.count());
            logical = v;
        }
    }
    REQUIRE(best == 2);
    CHECK_FALSE(eq.equivalent(e, e ^ logical));
}

TEST_CASE("find_progress_move agrees with the decoder's stall predicate") {
    const auto code = chain_code();
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    const Rat beta(1, 2);
    CHECK_FALSE(find_progress_move(cat, BitVec(cat.n_checks()), beta).has_value());
    // weight-1 error always leaves a progress move
    for (std::uint32_t q = 0; q < code.n_qubits(); ++q) {
        const BitVec sigma = code.h_x.multiply(error_of(code.n_qubits(), {q}));
        CHECK(find_progress_move(cat, sigma, beta).has_value());
    }
    // random syndromes: decode stalls exactly when no progress move exists
    CounterRng rng = CounterRng::keyed(14, 0, 0);
    auto params = DecoderParams::alg2(beta);
    params.classify_stall = false;
    for (int trial = 0; trial < 300; ++trial) {
        BitVec e(code.n_qubits());
        for (std::uint32_t q = 0; q < code.n_qubits(); ++q)
            if (rng.bernoulli(0.2)) e.set(q);
        const BitVec sigma0 = code.h_x.multiply(e);
        const auto run = decode_ssf(cat, sigma0, params);
        if (run.termination != Termination::Stalled) continue;
        // rebuild the final syndrome and check no move remains
        BitVec sigma = sigma0 ^ code.h_x.multiply(run.estimate);
        REQUIRE_FALSE(find_progress_move(cat, sigma, beta).has_value());
    }
}

TEST_CASE("progress moves exist for small reduced errors on a certified expander") {
    // PG(2,4) incidence: 21+21 vertices, 5-regular, girth 6, so both sides
    // are exhaustively (2/21, 1/10)-expanding and beta_0 = 1/10 > 0.
    const auto g = projective_plane_incidence(4);
    REQUIRE(g.n_left == 21);
    REQUIRE(g.is_biregular());
    REQUIRE(g.d_left == 5);
    const Rat delta(1, 10);
    const auto audit_l = expansion_audit(g, Side::Left, Rat(2, 21), delta, 2, AuditMode::Exhaustive);
    const auto audit_r = expansion_audit(g, Side::Right, Rat(2, 21), delta, 2, AuditMode::Exhaustive);
    REQUIRE(audit_l.certified());
    REQUIRE(audit_r.certified());
    const auto [r, b0] = beta0_guaranteed(5, 5, delta, delta);
    REQUIRE(b0 == Rat(1, 10));
    // r * min(gamma_A n_A, gamma_B n_B) = 2: reduced errors of weight <= 2
    const auto code = hypergraph_product(g);
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    const RowBasis stab(code.h_z);
    const std::uint32_t n = code.n_qubits();

    // all weight-1 errors (always reduced unless they are stabilizers)
    for (std::uint32_t q = 0; q < n; ++q) {
        const BitVec e = error_of(n, {q});
        if (stab.contains(e)) continue;
        REQUIRE(find_progress_move(cat, code.h_x.multiply(e), b0).has_value());
    }
    // random weight-2 errors, reduced-checked against weight <= 1 equivalents
    CounterRng rng = CounterRng::keyed(20, 0, 0);
    int tested = 0;
    for (int trial = 0; trial < 4000 && tested < 1000; ++trial) {
        const auto q1 = static_cast<std::uint32_t>(rng.below(n));
        const auto q2 = static_cast<std::uint32_t>(rng.below(n));
        if (q1 == q2) continue;
        const BitVec e = error_of(n, {q1, q2});
        if (stab.contains(e)) continue;
        bool reduced = true;
        for (std::uint32_t q = 0; q < n && reduced; ++q) {
            BitVec diff = e;
            diff.flip(q);
            if (stab.contains(diff)) reduced = false;  // equivalent weight-1 exists
        }
        if (!reduced) continue;
        ++tested;
        REQUIRE(find_progress_move(cat, code.h_x.multiply(e), b0).has_value());
    }
    CHECK(tested == 1000);
}

TEST_CASE("DecodeRun JSON round trip") {
    const auto code = chain_code();
    const auto cat = FlipCatalog::build(code, CodeSide::X);
    const BitVec e = error_of(code.n_qubits(), {1, 7});
    const auto run = decode_ssf(cat, code.h_x.multiply(e), DecoderParams::alg2(Rat(1, 2)));
    std::stringstream ss;
    write_decode_run(ss, run);
    ss.seekg(0);
    const auto back = read_decode_run(ss, code.n_qubits());
    CHECK(back.input_syndrome == run.input_syndrome);
    CHECK(back.syndrome_weights == run.syndrome_weights);
    CHECK(back.estimate == run.estimate);
    CHECK(back.termination == run.termination);
    REQUIRE(back.flips.size() == run.flips.size());
    for (std::size_t i = 0; i < run.flips.size(); ++i)
        CHECK(back.flips[i].qubits == run.flips[i].qubits);
}

TEST_CASE("t* is monotone nondecreasing as beta decreases (monitored)") {
    // weaker guards can only widen the exhaustively corrected radius
    const auto code = chain_code();
    auto tstar_at = [&](const Rat& beta) {
        const auto cat = FlipCatalog::build(code, CodeSide::X);
        const EquivalenceChecker eq(code, CodeSide::X);
        const auto params = DecoderParams::alg2(beta);
        const std::uint32_t n = code.n_qubits();
        std::uint32_t tstar = 0;
        for (std::uint32_t w = 1; w <= 3; ++w) {
            bool all_ok = true;
            std::vector<std::uint32_t> idx;
            std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t start,
                                                                        std::uint32_t left) {
                if (!all_ok) return;
                if (left == 0) {
                    BitVec e(n);
                    for (auto q : idx) e.set(q);
                    const auto run = decode_ssf(cat, code.h_x.multiply(e), params);
                    if (run.termination != Termination::Converged || !eq.equivalent(e, run.estimate))
                        all_ok = false;
                    return;
                }
                for (std::uint32_t q = start; q + left <= n; ++q) {
                    idx.push_back(q);
                    rec(q + 1, left - 1);
                    idx.pop_back();
                }
            };
            rec(0, w);
            if (!all_ok) break;
            tstar = w;
        }
        return tstar;
    };
    const auto t_half = tstar_at(Rat(1, 2));
    const auto t_third = tstar_at(Rat(1, 3));
    const auto t_quarter = tstar_at(Rat(1, 4));
    CHECK(t_half >= 1);
    CHECK(t_third >= t_half);
    CHECK(t_quarter >= t_third);
}
