#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qxc/bitvec.hpp"

namespace qxc {

// Row-major GF(2) matrix, rows stored as machine-word-packed bit vectors.
struct ParityMatrix {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<BitVec> row;

    ParityMatrix() = default;
    ParityMatrix(std::uint32_t r, std::uint32_t c) : rows(r), cols(c), row(r, BitVec(c)) {}

    bool get(std::uint32_t r, std::uint32_t c) const { return row[r].test(c); }
    void set(std::uint32_t r, std::uint32_t c) { row[r].set(c); }

    // Column support materialized on demand.
    std::vector<std::uint32_t> column_support(std::uint32_t c) const;

    ParityMatrix transposed() const;

    // y = M x (x over columns, result over rows).
    BitVec multiply(const BitVec& x) const;

    bool operator==(const ParityMatrix& o) const { return rows == o.rows && cols == o.cols && row == o.row; }
};

std::uint32_t rank_gf2(const ParityMatrix& m);

// True iff H_X * H_Z^T == 0.
bool product_is_zero(const ParityMatrix& hx, const ParityMatrix& hz);

// Row space of a matrix held in reduced echelon form, for membership tests
// and syndrome-reachability checks.
class RowBasis {
public:
    explicit RowBasis(const ParityMatrix& m);

    std::uint32_t rank() const { return static_cast<std::uint32_t>(rows_.size()); }
    std::uint32_t width() const { return cols_; }

    // True iff v lies in the row space.
    bool contains(const BitVec& v) const;

    // Residual of v after reduction against the basis (zero iff contained).
    BitVec reduce(const BitVec& v) const;

private:
    std::uint32_t cols_ = 0;
    std::vector<BitVec> rows_;
    std::vector<std::uint32_t> pivot_;
};

// Basis of the kernel {x : Mx = 0}.
std::vector<BitVec> kernel_basis(const ParityMatrix& m);

// Exact minimum weight of a nonzero kernel vector, by enumerating the kernel
// span (2^dim words).  Returns nullopt if the minimum exceeds weight_cap or
// the kernel is trivial; throws BudgetExceeded if 2^dim > span_budget.
std::optional<std::uint32_t> min_distance_bruteforce(const ParityMatrix& m, std::uint32_t weight_cap,
                                                     std::uint64_t span_budget = 1u << 26);

// Minimum weight over kernel(h) \ rowspace(l): the CSS coset distance.
// Same enumeration budget contract as min_distance_bruteforce.
std::optional<std::uint32_t> min_coset_weight_bruteforce(const ParityMatrix& h, const ParityMatrix& l,
                                                         std::uint64_t span_budget = 1u << 26);

// Text format: "H rows cols" header, then one row per line as a 0/1 string.
void write_parity_matrix(std::ostream& os, const ParityMatrix& m);
ParityMatrix read_parity_matrix(std::istream& is);

} // namespace qxc
