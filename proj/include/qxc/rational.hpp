#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "qxc/errors.hpp"

namespace qxc {

// Exact rational with int64 numerator/denominator, always normalized
// (gcd 1, denominator > 0).  Intermediate products go through __int128;
// a result that does not fit back into int64 throws DomainError.  All
// decoder thresholds and expansion parameters live comfortably below
// that range.
struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rat() = default;
    Rat(std::int64_t n) : num(n), den(1) {}
    Rat(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw DomainError("Rat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static Rat from_i128(__int128 n, __int128 d) {
        if (d == 0) throw DomainError("Rat: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        const __int128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi) throw DomainError("Rat: overflow");
        Rat r;
        r.num = static_cast<std::int64_t>(n);
        r.den = static_cast<std::int64_t>(d);
        return r;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool is_zero() const { return num == 0; }
    bool is_positive() const { return num > 0; }

    Rat operator+(const Rat& o) const {
        return from_i128((__int128)num * o.den + (__int128)o.num * den, (__int128)den * o.den);
    }
    Rat operator-(const Rat& o) const {
        return from_i128((__int128)num * o.den - (__int128)o.num * den, (__int128)den * o.den);
    }
    Rat operator*(const Rat& o) const {
        return from_i128((__int128)num * o.num, (__int128)den * o.den);
    }
    Rat operator/(const Rat& o) const {
        if (o.num == 0) throw DomainError("Rat: division by zero");
        return from_i128((__int128)num * o.den, (__int128)den * o.num);
    }
    Rat operator-() const { Rat r; r.num = -num; r.den = den; return r; }

    // Exact comparison by cross multiplication.
    int cmp(const Rat& o) const {
        __int128 lhs = (__int128)num * o.den;
        __int128 rhs = (__int128)o.num * den;
        if (lhs < rhs) return -1;
        if (lhs > rhs) return 1;
        return 0;
    }
    bool operator==(const Rat& o) const { return cmp(o) == 0; }
    bool operator!=(const Rat& o) const { return cmp(o) != 0; }
    bool operator<(const Rat& o) const { return cmp(o) < 0; }
    bool operator<=(const Rat& o) const { return cmp(o) <= 0; }
    bool operator>(const Rat& o) const { return cmp(o) > 0; }
    bool operator>=(const Rat& o) const { return cmp(o) >= 0; }

    // Largest integer <= num/den.
    std::int64_t floor() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

} // namespace qxc
