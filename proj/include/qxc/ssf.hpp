#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qxc/bitvec.hpp"
#include "qxc/hgp.hpp"
#include "qxc/rational.hpp"

namespace qxc {

enum class CodeSide { X, Z };  // which error type the catalog decodes

// One flippable small set: a nonempty subset of a single generator support,
// with its precomputed syndrome (as a sparse check-index list).
struct FlipEntry {
    std::uint32_t generator = 0;   // index into the generator list
    std::uint32_t mask = 0;        // subset of the generator support, bit i = support[i]
    std::uint32_t weight = 0;      // |F|
    std::uint32_t syndrome_begin = 0;
    std::uint32_t syndrome_len = 0;
};

// All small sets for one side of a code: for every generator g, every
// nonempty F inside its support, with sigma(F) precomputed.  Immutable and
// shareable across concurrent decodes.
class FlipCatalog {
public:
    // side X: generators are rows of H_Z (X-type generators), syndromes are
    // taken through H_X.  Side Z is the mirror image.
    static FlipCatalog build(const CssCode& code, CodeSide side, std::uint64_t max_entries = 8'000'000);

    CodeSide side() const { return side_; }
    std::uint32_t n_qubits() const { return n_qubits_; }
    std::uint32_t n_checks() const { return n_checks_; }
    std::uint32_t d_b() const { return d_b_; }
    std::uint32_t n_generators() const { return static_cast<std::uint32_t>(supports_.size()); }

    const std::vector<std::uint32_t>& generator_support(std::uint32_t g) const { return supports_[g]; }
    const std::vector<FlipEntry>& entries() const { return entries_; }
    // entry range [begin, end) for one generator
    std::pair<std::uint32_t, std::uint32_t> generator_entries(std::uint32_t g) const {
        return {gen_entry_begin_[g], gen_entry_begin_[g + 1]};
    }

    std::vector<std::uint32_t> entry_qubits(const FlipEntry& e) const;
    const std::uint32_t* entry_syndrome(const FlipEntry& e) const { return syndrome_pool_.data() + e.syndrome_begin; }

    // |sigma| - |sigma ^ sigma(F)| == 2|sigma(F) & sigma| - |sigma(F)|
    std::int64_t decrease(const FlipEntry& e, const BitVec& sigma) const;

    // Generators whose precomputed syndromes touch the given check; drives
    // the dirty-set rescan inside the decoder.
    const std::vector<std::uint32_t>& generators_touching_check(std::uint32_t check) const {
        return check_to_generators_[check];
    }

    // Full column xor through the parity matrix, for spot audits.
    BitVec recompute_syndrome(const FlipEntry& e) const;

    const ParityMatrix& syndrome_matrix() const { return *h_side_; }
    const ParityMatrix& stabilizer_matrix() const { return *h_other_; }

    // Best entry of one generator against sigma under the argmax ordering
    // (larger Delta, then smaller |F|, then smaller mask), together with its
    // decrease.  Uses the per-generator local-bitmask table when the
    // generator's check neighborhood fits a few words.
    struct GenScan {
        std::int64_t dec = 0;
        std::uint32_t entry = UINT32_MAX;
    };
    GenScan best_entry(std::uint32_t g, const BitVec& sigma) const;

private:
    CodeSide side_ = CodeSide::X;
    std::uint32_t n_qubits_ = 0;
    std::uint32_t n_checks_ = 0;
    std::uint32_t d_b_ = 0;
    const ParityMatrix* h_side_ = nullptr;   // syndrome map for this side
    const ParityMatrix* h_other_ = nullptr;  // generators flipped by this side
    std::vector<std::vector<std::uint32_t>> supports_;
    std::vector<FlipEntry> entries_;
    std::vector<std::uint32_t> gen_entry_begin_;
    std::vector<std::uint32_t> syndrome_pool_;
    std::vector<std::vector<std::uint32_t>> check_to_generators_;

    // local evaluation tables: per generator, the sorted union of its
    // columns' checks and one mask per support qubit over that union
    static constexpr std::uint32_t kMaxLocalWords = 2;
    std::vector<std::uint32_t> local_begin_;       // into local_checks_, per gen (+1 sentinel)
    std::vector<std::uint32_t> local_checks_;
    std::vector<std::uint8_t> local_words_;        // words per gen; 0 = entry-scan fallback
    std::vector<std::uint32_t> mask_begin_;        // into qubit_masks_, per gen
    std::vector<std::uint64_t> qubit_masks_;       // support.size() * words per gen
};

// Exact rational Delta(sigma, F) = (|sigma| - |sigma ^ sigma(F)|) / |F|.
Rat delta(const FlipCatalog& catalog, const FlipEntry& entry, const BitVec& sigma);

enum class SsfMode { Alg1, Alg2 };

struct DecoderParams {
    SsfMode mode = SsfMode::Alg2;
    Rat beta{1, 2};           // used by Alg2 only
    std::uint64_t max_flips = 0;  // 0 = derive the mode's cap from |sigma_0|
    bool full_scan = false;       // disable the dirty-set optimization (verification mode)
    // On a stall, test whether sigma_0 lies in the column space at all
    // (UnreachableSyndrome detection).  Costs one elimination per stall.
    bool classify_stall = true;

    static DecoderParams alg1();
    static DecoderParams alg2(const Rat& beta);
};

// r = d_A/d_B and beta_0 = r/2 [1 - 4(delta_A + delta_B + (delta_B-delta_A)^2)],
// evaluated exactly.
std::pair<Rat, Rat> beta0(std::uint32_t d_a, std::uint32_t d_b, const Rat& delta_a, const Rat& delta_b);

// Like beta0 but throws NegativeBeta unless beta_0 > 0 (guarantee mode).
std::pair<Rat, Rat> beta0_guaranteed(std::uint32_t d_a, std::uint32_t d_b, const Rat& delta_a,
                                     const Rat& delta_b);

// floor( r * beta/(1+beta) * min(gamma_A n_A, gamma_B n_B) )
std::uint64_t t_ssf_bound(const CodeParams& params, const Rat& beta, const Rat& gamma_a, const Rat& gamma_b);

enum class Termination { Converged, Stalled, FlipCapHit };

struct DecodeRun {
    std::vector<std::uint32_t> input_syndrome;  // set check indices of sigma_0
    struct Flip {
        std::uint32_t generator;
        std::uint32_t mask;
        std::vector<std::uint32_t> qubits;
    };
    std::vector<Flip> flips;
    std::vector<std::uint32_t> syndrome_weights;  // |sigma_0| .. |sigma_f|
    BitVec estimate;                              // xor of all flips
    Termination termination = Termination::Converged;
    // Filled on stall (when classify_stall is set): false means sigma_0 lies
    // outside the column space of the syndrome map, i.e. no error explains it.
    std::optional<bool> syndrome_reachable;

    std::size_t flip_count() const { return flips.size(); }
    BitVec support(const BitVec& known_error) const;  // E u F_0 u ... u F_{f-1}
    BitVec support_no_error() const;
};

// The small-set-flip loop: repeatedly flips the catalog entry maximizing
// Delta over the whole catalog, while the maximizer passes the mode's guard
// (Alg1: integer decrease >= 1; Alg2: decrease >= beta d_B |F|).  Ties are
// broken by smaller |F|, then generator index, then subset mask.
DecodeRun decode_ssf(const FlipCatalog& catalog, const BitVec& sigma0, const DecoderParams& params);

// Any catalog entry meeting the Alg2 guard at beta (or the Alg1 guard when
// beta is zero), found by an independent scan; nullopt when none exists.
std::optional<FlipEntry> find_progress_move(const FlipCatalog& catalog, const BitVec& sigma,
                                            const Rat& beta);

// Equivalence test: e ^ e_hat lies in the row space of the stabilizer matrix
// of that side (H_Z for X errors, H_X for Z errors).
class EquivalenceChecker {
public:
    EquivalenceChecker(const CssCode& code, CodeSide side);
    bool equivalent(const BitVec& e, const BitVec& e_hat) const;

private:
    RowBasis basis_;
};

// DecodeRun JSON round trip (input syndrome as index list, flips as qubit
// index lists, termination tag, per-step syndrome weights).
void write_decode_run(std::ostream& os, const DecodeRun& run);
DecodeRun read_decode_run(std::istream& is, std::uint32_t n_qubits);

} // namespace qxc
