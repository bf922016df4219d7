#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cfc {

// Precondition check; message should name the violated contract.
inline void require(bool cond, const std::string& msg) {
    if (!cond)
        throw std::invalid_argument(msg);
}

// Invariant that only a bug can violate.
inline void internal_check(bool cond, const std::string& msg) {
    if (!cond)
        throw std::logic_error("internal invariant violated: " + msg);
}

// Smallest k >= 0 with 2^k >= x (x >= 1).
inline int ceil_log2(long long x) {
    require(x >= 1, "ceil_log2: argument must be positive");
    int k = 0;
    while ((1LL << k) < x)
        ++k;
    return k;
}

// log2(d) + 3*log2(log2(d)) + 9; NaN when the expression is undefined.
inline double asymptotic_color_bound(int max_degree) {
    if (max_degree < 2)
        return std::nan("");
    double l = std::log2(static_cast<double>(max_degree));
    return l + 3.0 * std::log2(l) + 9.0;
}

} // namespace cfc
