#include "qxc/gf2.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qxc/errors.hpp"

namespace qxc {

std::vector<std::uint32_t> ParityMatrix::column_support(std::uint32_t c) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t r = 0; r < rows; ++r)
        if (row[r].test(c)) out.push_back(r);
    return out;
}

ParityMatrix ParityMatrix::transposed() const {
    ParityMatrix t(cols, rows);
    for (std::uint32_t r = 0; r < rows; ++r)
        row[r].for_each([&](std::uint32_t c) { t.row[c].set(r); });
    return t;
}

BitVec ParityMatrix::multiply(const BitVec& x) const {
    if (x.size() != cols) throw DimensionMismatch("ParityMatrix::multiply: size mismatch");
    BitVec y(rows);
    for (std::uint32_t r = 0; r < rows; ++r)
        if (row[r].intersection_count(x) & 1) y.set(r);
    return y;
}

std::uint32_t rank_gf2(const ParityMatrix& m) {
    std::vector<BitVec> work(m.row);
    std::uint32_t rank = 0;
    for (std::uint32_t c = 0; c < m.cols && rank < m.rows; ++c) {
        std::uint32_t pivot = rank;
        while (pivot < m.rows && !work[pivot].test(c)) ++pivot;
        if (pivot == m.rows) continue;
        std::swap(work[rank], work[pivot]);
        for (std::uint32_t r = 0; r < m.rows; ++r)
            if (r != rank && work[r].test(c)) work[r] ^= work[rank];
        ++rank;
    }
    return rank;
}

bool product_is_zero(const ParityMatrix& hx, const ParityMatrix& hz) {
    if (hx.cols != hz.cols) throw DimensionMismatch("product_is_zero: column mismatch");
    for (std::uint32_t i = 0; i < hx.rows; ++i)
        for (std::uint32_t j = 0; j < hz.rows; ++j)
            if (hx.row[i].intersection_count(hz.row[j]) & 1) return false;
    return true;
}

RowBasis::RowBasis(const ParityMatrix& m) : cols_(m.cols) {
    for (const auto& r : m.row) {
        BitVec v = reduce(r);
        if (v.none()) continue;
        // leading set bit becomes the pivot
        std::uint32_t p = v.indices().front();
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (rows_[i].test(p)) rows_[i] ^= v;
        rows_.push_back(std::move(v));
        pivot_.push_back(p);
    }
}

BitVec RowBasis::reduce(const BitVec& v) const {
    if (v.size() != cols_) throw DimensionMismatch("RowBasis::reduce: size mismatch");
    BitVec r = v;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (r.test(pivot_[i])) r ^= rows_[i];
    return r;
}

bool RowBasis::contains(const BitVec& v) const { return reduce(v).none(); }

std::vector<BitVec> kernel_basis(const ParityMatrix& m) {
    // Gauss-Jordan on a copy, tracking pivot columns.
    std::vector<BitVec> work(m.row);
    std::vector<std::uint32_t> pivot_col;
    std::uint32_t rank = 0;
    for (std::uint32_t c = 0; c < m.cols && rank < m.rows; ++c) {
        std::uint32_t pivot = rank;
        while (pivot < m.rows && !work[pivot].test(c)) ++pivot;
        if (pivot == m.rows) continue;
        std::swap(work[rank], work[pivot]);
        for (std::uint32_t r = 0; r < m.rows; ++r)
            if (r != rank && work[r].test(c)) work[r] ^= work[rank];
        pivot_col.push_back(c);
        ++rank;
    }
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<BitVec> basis;
    for (std::uint32_t c = 0; c < m.cols; ++c) {
        if (is_pivot[c]) continue;
        BitVec v(m.cols);
        v.set(c);
        for (std::uint32_t r = 0; r < rank; ++r)
            if (work[r].test(c)) v.set(pivot_col[r]);
        basis.push_back(std::move(v));
    }
    return basis;
}

namespace {

// Enumerates the span of a basis in Gray-code order, calling fn on each
// nonzero element.  Stops early if fn returns false.
template <typename Fn>
void walk_span(const std::vector<BitVec>& basis, std::uint32_t width, std::uint64_t span_budget, Fn&& fn) {
    const std::size_t dim = basis.size();
    if (dim == 0) return;
    if (dim >= 63 || (std::uint64_t(1) << dim) > span_budget)
        throw BudgetExceeded("kernel span enumeration above budget");
    const std::uint64_t total = std::uint64_t(1) << dim;
    BitVec cur(width);
    for (std::uint64_t i = 1; i < total; ++i) {
        cur ^= basis[static_cast<std::size_t>(std::countr_zero(i))];
        if (!fn(cur)) return;
    }
}

} // namespace

std::optional<std::uint32_t> min_distance_bruteforce(const ParityMatrix& m, std::uint32_t weight_cap,
                                                     std::uint64_t span_budget) {
    auto basis = kernel_basis(m);
    std::uint32_t best = UINT32_MAX;
    walk_span(basis, m.cols, span_budget, [&](const BitVec& v) {
        auto w = static_cast<std::uint32_t>(v.count());
        if (w < best) best = w;
        return best > 1;  // weight 1 cannot be beaten
    });
    if (best == UINT32_MAX || best > weight_cap) return std::nullopt;
    return best;
}

std::optional<std::uint32_t> min_coset_weight_bruteforce(const ParityMatrix& h, const ParityMatrix& l,
                                                         std::uint64_t span_budget) {
    if (h.cols != l.cols) throw DimensionMismatch("min_coset_weight: column mismatch");
    auto basis = kernel_basis(h);
    RowBasis rowspace(l);
    std::uint32_t best = UINT32_MAX;
    walk_span(basis, h.cols, span_budget, [&](const BitVec& v) {
        auto w = static_cast<std::uint32_t>(v.count());
        if (w < best && !rowspace.contains(v)) best = w;
        return best > 1;
    });
    if (best == UINT32_MAX) return std::nullopt;
    return best;
}

void write_parity_matrix(std::ostream& os, const ParityMatrix& m) {
    os << "H " << m.rows << ' ' << m.cols << '\n';
    std::string line;
    for (std::uint32_t r = 0; r < m.rows; ++r) {
        line.assign(m.cols, '0');
        m.row[r].for_each([&](std::uint32_t c) { line[c] = '1'; });
        os << line << '\n';
    }
}

ParityMatrix read_parity_matrix(std::istream& is) {
    std::string line;
    std::string tag;
    std::uint32_t rows = 0, cols = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream hdr(line);
        if (!(hdr >> tag >> rows >> cols) || tag != "H")
            throw DimensionMismatch("matrix file: bad header");
        break;
    }
    ParityMatrix m(rows, cols);
    std::uint32_t r = 0;
    while (r < rows && std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.size() < cols) throw DimensionMismatch("matrix file: short row");
        for (std::uint32_t c = 0; c < cols; ++c) {
            if (line[c] == '1') m.set(r, c);
            else if (line[c] != '0') throw DimensionMismatch("matrix file: bad character");
        }
        ++r;
    }
    if (r != rows) throw DimensionMismatch("matrix file: missing rows");
    return m;
}

} // namespace qxc
