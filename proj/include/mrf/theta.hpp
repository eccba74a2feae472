// Occupancy-potential vectors theta_0..theta_delta, the named parameter
// families, and the convexity predicates that gate the uniqueness theory.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrf/common.hpp"

namespace mrf {

inline constexpr int kMaxDelta = 60;       // binomial table limit in doubles
inline constexpr int kMaxExactDelta = 25;  // exact integer binomial path

// Row C(n, 0..n) by the multiplicative recurrence; exact integers up to
// n = 25, correctly rounded doubles up to n = 60.
inline std::vector<double> binomial_row(int n) {
    if (n < 0 || n > kMaxDelta)
        throw std::invalid_argument("binomial_row: n out of supported range");
    std::vector<double> row(static_cast<std::size_t>(n) + 1);
    row[0] = 1.0;
    for (int k = 1; k <= n; ++k)
        row[static_cast<std::size_t>(k)] =
            row[static_cast<std::size_t>(k - 1)] * (n - k + 1) / k;
    return row;
}

// Exact C(n, k); the intermediate product stays below 2^64 for n <= 60.
inline unsigned long long binomial_exact(int n, int k) {
    if (n < 0 || n > kMaxDelta || k < 0 || k > n)
        throw std::invalid_argument("binomial_exact: arguments out of range");
    if (k > n - k) k = n - k;
    unsigned long long c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<unsigned long long>(n - k + i) /
            static_cast<unsigned long long>(i);
    }
    return c;
}

struct theta_vector {
    int delta = 0;
    std::vector<double> values;  // theta_0 .. theta_delta, all > 0

    double at(int k) const { return values[static_cast<std::size_t>(k)]; }
};

inline theta_vector make_theta(int delta, std::vector<double> values) {
    if (delta < 3) throw std::invalid_argument("theta: delta must be >= 3");
    if (delta > kMaxDelta)
        throw std::invalid_argument("theta: delta exceeds supported maximum 60");
    if (static_cast<int>(values.size()) != delta + 1)
        throw std::invalid_argument("theta: expected delta+1 entries");
    for (double t : values)
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::invalid_argument("theta: entries must be strictly positive");
    return theta_vector{delta, std::move(values)};
}

inline theta_vector all_ones_theta(int delta) {
    return make_theta(delta, std::vector<double>(static_cast<std::size_t>(delta) + 1, 1.0));
}

// max(theta) / min(theta); drives the log-space evaluation dispatch.
inline double theta_spread(const theta_vector& t) {
    double lo = t.values[0], hi = t.values[0];
    for (double v : t.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi / lo;
}

// Log-convexity of a positive vector: theta_{i-1} * theta_{i+1} >= theta_i^2,
// with 1e-12 relative slack so exact-boundary cases (all-ones) pass.
inline bool is_log_convex(const theta_vector& t) {
    for (int i = 1; i < t.delta; ++i) {
        double lhs = t.at(i - 1) * t.at(i + 1);
        double rhs = t.at(i) * t.at(i);
        if (lhs < rhs * (1.0 - 1e-12)) return false;
    }
    return true;
}

// Discrete convexity of an arbitrary real vector, same slack policy.
inline bool is_convex(const std::vector<double>& c) {
    double scale = 1.0;
    for (double v : c) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        if (c[i + 1] - 2.0 * c[i] + c[i - 1] < -1e-12 * scale) return false;
    }
    return true;
}

inline theta_vector theta_for_family(const std::string& family, int delta) {
    if (delta < 3) throw std::invalid_argument("theta_for_family: delta must be >= 3");
    std::vector<double> v(static_cast<std::size_t>(delta) + 1);
    if (family == "binomial") {
        for (auto& x : v) x = 1.0;
    } else if (family == "truncated_poisson") {
        // theta_k = 1 / (k! C(delta,k)); induced law proportional to x^k/k!.
        auto binom = binomial_row(delta);
        double fact = 1.0;
        for (int k = 0; k <= delta; ++k) {
            if (k > 0) fact *= k;
            v[static_cast<std::size_t>(k)] = 1.0 / (fact * binom[static_cast<std::size_t>(k)]);
        }
    } else if (family == "truncated_geometric") {
        auto binom = binomial_row(delta);
        for (int k = 0; k <= delta; ++k)
            v[static_cast<std::size_t>(k)] = 1.0 / binom[static_cast<std::size_t>(k)];
    } else {
        throw std::invalid_argument("unknown theta family: " + family);
    }
    return make_theta(delta, std::move(v));
}

}  // namespace mrf
