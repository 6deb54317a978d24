#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qxc/bitvec.hpp"
#include "qxc/hgp.hpp"
#include "qxc/percolation.hpp"
#include "qxc/ssf.hpp"

namespace qxc {

// Machine checks of the decoder's locality structure on recorded runs.  The
// auditor replays recorded flip subsequences against restricted syndromes;
// it never re-runs the argmax fresh, so tie-break choices cannot diverge
// from the recorded witness.
class LocalityAuditor {
public:
    LocalityAuditor(const CssCode& code, const FlipCatalog& catalog);

    const Graph& qubit_graph() const { return adjacency_; }

    // C_K: checks of the syndrome side adjacent to K in the factor graph.
    BitVec check_neighborhood(const BitVec& k) const;

    // sigma(W & K) == sigma(W) & C_K for W inside the run support U and K a
    // connected component of U.  Throws PreconditionViolated if w is not
    // inside u.
    bool verify_syndrome_restriction(const BitVec& w, const BitVec& k, const BitVec& u) const;

    // Delta(sigma & C_K, F) <= Delta(sigma, F) for every catalog entry, with
    // equality whenever F is inside K.
    bool verify_delta_restriction(const BitVec& sigma, const BitVec& k) const;

    const CssCode& code() const { return code_; }
    const FlipCatalog& catalog() const { return catalog_; }

private:
    const CssCode& code_;
    const FlipCatalog& catalog_;
    Graph adjacency_;
    std::vector<std::vector<std::uint32_t>> qubit_checks_;  // syndrome-side Gamma(v)
};

struct ComponentRecord {
    std::vector<std::uint32_t> component;     // K
    std::vector<std::uint32_t> check_set;     // C_K
    std::vector<std::uint32_t> flip_indices;  // i with F_i inside K
    bool passed = true;
    std::string failure;  // first failing condition, empty when passed
};

struct LocalityReport {
    bool passed = true;
    bool dichotomy_ok = true;  // every F_i inside one component or disjoint from it
    // support-ratio bound over the whole run: |U| <= (1+beta)/beta |E & U|, E in U.
    bool support_ratio_ok = true;
    std::vector<ComponentRecord> components;
    std::string failure;
};

// Full locality replay: for each component K of the support U, the
// restricted subsequence must form a valid execution on input sigma(E & K):
//   (i)   xor of the subsequence equals estimate & K
//   (ii)  (E & K) union the subsequence covers K
//   (iii) each flip maximizes Delta over the catalog at the restricted syndrome
//   (iv)  each flip passes the mode's guard
//   (v)   no catalog entry passes the guard at the final restricted syndrome
LocalityReport verify_locality(const LocalityAuditor& auditor, const BitVec& error,
                               const DecodeRun& run, const DecoderParams& params);

struct CorrectionCriterionResult {
    bool checked = false;    // MaxConn_alpha(E) <= t held, so the criterion applied
    bool corrected = true;   // decode succeeded (only meaningful when checked)
    std::uint32_t max_conn = 0;
    bool cap_hit = false;
};

// Correction criterion: whenever MaxConn_{beta/(1+beta)}(E) <= t, the decoder must
// correct E (equivalence-checked).  Returns the measured MaxConn alongside.
CorrectionCriterionResult verify_correction_criterion(const LocalityAuditor& auditor,
                                                      const EquivalenceChecker& checker,
                                                      const BitVec& error, const DecoderParams& params,
                                                      std::uint32_t t);

void write_locality_report(std::ostream& os, const LocalityReport& report);

} // namespace qxc
