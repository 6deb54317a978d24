#pragma once

#include <cmath>
#include <cstdint>

namespace qxc {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson score interval for a binomial proportion.  z defaults to the
// two-sided 99% quantile.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 2.5758293035489004) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = phat + z2 / (2.0 * n);
    const double margin = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    Interval iv;
    iv.lo = (center - margin) / denom;
    iv.hi = (center + margin) / denom;
    if (iv.lo < 0.0) iv.lo = 0.0;
    if (iv.hi > 1.0) iv.hi = 1.0;
    return iv;
}

inline double wilson_lower(std::uint64_t successes, std::uint64_t trials, double z = 2.5758293035489004) {
    return wilson_interval(successes, trials, z).lo;
}
inline double wilson_upper(std::uint64_t successes, std::uint64_t trials, double z = 2.5758293035489004) {
    return wilson_interval(successes, trials, z).hi;
}

} // namespace qxc
