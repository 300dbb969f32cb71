#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace privopt {

// Sentinel for log(0). A large negative *finite* value: unlike -inf it cannot
// turn into NaN through a stray subtraction inside log-sum-exp.
inline constexpr double kLogZero = -std::numeric_limits<double>::max();

inline bool is_log_zero(double v) {
    return v <= -0.25 * std::numeric_limits<double>::max();
}

// log(exp(a) + exp(b)), sentinel-aware.
inline double log_add(double a, double b) {
    if (is_log_zero(a)) return b;
    if (is_log_zero(b)) return a;
    if (a < b) {
        const double t = a;
        a = b;
        b = t;
    }
    return a + std::log1p(std::exp(b - a));
}

// log Σ exp(v) with max shift; sentinel entries are skipped.
inline double log_sum_exp(std::span<const double> values) {
    double max_term = kLogZero;
    for (double v : values) {
        if (!is_log_zero(v) && v > max_term) max_term = v;
    }
    if (is_log_zero(max_term)) return kLogZero;
    double acc = 0.0;
    for (double v : values) {
        if (!is_log_zero(v)) acc += std::exp(v - max_term);
    }
    return max_term + std::log(acc);
}

// ln C(n, k) via log-gamma; raw factorials overflow past n = 170.
inline double log_choose(int n, int k) {
    if (k < 0 || k > n) return kLogZero;
    if (k == 0 || k == n) return 0.0;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace privopt
