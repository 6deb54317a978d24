#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qxc/errors.hpp"

namespace qxc {

// Dense fixed-width bit vector over qubit or check indices.  Trailing bits
// of the last word are kept zero so that popcount and equality are plain
// word scans.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static BitVec from_indices(std::size_t n, const std::vector<std::uint32_t>& idx) {
        BitVec v(n);
        for (auto i : idx) v.set(i);
        return v;
    }

    std::size_t size() const { return n_; }

    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    void clear() { for (auto& w : w_) w = 0; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }
    bool any() const {
        for (auto w : w_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    BitVec& operator^=(const BitVec& o) {
        check_size(o);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    BitVec& operator|=(const BitVec& o) {
        check_size(o);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    BitVec& operator&=(const BitVec& o) {
        check_size(o);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }
    friend BitVec operator|(BitVec a, const BitVec& b) { a |= b; return a; }
    friend BitVec operator&(BitVec a, const BitVec& b) { a &= b; return a; }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const BitVec& o) const { return !(*this == o); }

    std::size_t intersection_count(const BitVec& o) const {
        check_size(o);
        std::size_t c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
        return c;
    }
    bool intersects(const BitVec& o) const {
        check_size(o);
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    bool subset_of(const BitVec& o) const {
        check_size(o);
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    std::vector<std::uint32_t> indices() const {
        std::vector<std::uint32_t> out;
        out.reserve(count());
        for (std::size_t wi = 0; wi < w_.size(); ++wi) {
            std::uint64_t w = w_[wi];
            while (w) {
                out.push_back(static_cast<std::uint32_t>((wi << 6) + std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t wi = 0; wi < w_.size(); ++wi) {
            std::uint64_t w = w_[wi];
            while (w) {
                fn(static_cast<std::uint32_t>((wi << 6) + std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

private:
    void check_size(const BitVec& o) const {
        if (n_ != o.n_) throw DimensionMismatch("BitVec: size mismatch");
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace qxc
