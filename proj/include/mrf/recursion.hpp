// Depth recursions over the regular tree: sandwiching lower/upper sequences,
// the all-included extremal boundary sequence, parity-gap limits, contraction
// verification below the lower activity bound, and finite-depth conditional
// occupancy laws.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mrf/common.hpp"
#include "mrf/fixed_point.hpp"
#include "mrf/model.hpp"
#include "mrf/phase.hpp"
#include "mrf/theta.hpp"

namespace mrf {

inline constexpr int kDefaultDepthMax = 2000;

struct depth_sequences {
    int start_depth = 5;                // depth of lower[0] and upper[0]
    std::vector<double> lower;          // nondecreasing for log-convex theta
    std::vector<double> upper;          // nonincreasing for log-convex theta
    std::vector<double> extremal;       // all-included boundary, indexed from depth 3
};

namespace detail {

inline double two_step(const model_spec& m, double prev, double prev2) {
    return m.lambda * g_scalar(m.theta, prev) *
           std::pow(f_scalar(m.theta, prev2), m.theta.delta - 1);
}

// 20 consecutive sub-1e-12 moves on both parities; mirrors the calm rule of
// the two-cycle iterator so limits are read consistently across modules.
class parity_calm {
  public:
    void feed(std::size_t index, double prev, double cur) {
        int& count = (index % 2 == 0) ? even_ : odd_;
        count = (std::fabs(cur - prev) < 1e-12) ? count + 1 : 0;
    }
    bool settled() const { return even_ >= 20 && odd_ >= 20; }

  private:
    int even_ = 0;
    int odd_ = 0;
};

}  // namespace detail

inline depth_sequences bounding_sequences(const model_spec& m, int d_max = kDefaultDepthMax) {
    if (d_max < 7)
        throw precondition_error("bounding_sequences: d_max must be at least 7");
    depth_sequences out;
    double top = search_upper(m);
    out.lower = {0.0, 0.0};
    out.upper = {top, top};
    detail::parity_calm calm_lower, calm_upper;
    for (int d = 7; d <= d_max; ++d) {
        std::size_t i = out.lower.size();
        double lo = detail::two_step(m, out.upper[i - 1], out.lower[i - 2]);
        double up = detail::two_step(m, out.lower[i - 1], out.upper[i - 2]);
        calm_lower.feed(i, out.lower[i - 1], lo);
        calm_upper.feed(i, out.upper[i - 1], up);
        out.lower.push_back(lo);
        out.upper.push_back(up);
        if (calm_lower.settled() && calm_upper.settled()) break;
    }
    return out;
}

inline std::vector<double> extremal_boundary_seq(const model_spec& m,
                                                 int d_max = kDefaultDepthMax) {
    if (d_max < 5)
        throw precondition_error("extremal_boundary_seq: d_max must be at least 5");
    const theta_vector& t = m.theta;
    std::vector<double> seq;
    seq.reserve(64);
    seq.push_back(search_upper(m));   // depth 3: all of the bottom layer included
    seq.push_back(m.lambda * std::pow(t.at(1) / t.at(0), t.delta - 1) *
                  g_scalar(t, seq[0]));
    detail::parity_calm calm;
    for (int d = 5; d <= d_max; ++d) {
        std::size_t i = seq.size();
        double next = detail::two_step(m, seq[i - 1], seq[i - 2]);
        calm.feed(i, seq[i - 2], next);
        seq.push_back(next);
        if (calm.settled()) break;
    }
    return seq;
}

// Free boundary: no constraint on the bottom layers. The depth-2 seed is the
// closed form of the two bottom partition functions (lambda against the sum
// of the neighbor weights), after which the usual two-step recursion applies
// with the depth-1 ratio equal to one.
inline std::vector<double> free_boundary_seq(const model_spec& m,
                                             int d_max = kDefaultDepthMax) {
    if (d_max < 3)
        throw precondition_error("free_boundary_seq: d_max must be at least 3");
    std::vector<double> seq;
    seq.reserve(64);
    seq.push_back(m.lambda * g_scalar(m.theta, 1.0));   // depth 2
    seq.push_back(detail::two_step(m, seq[0], 1.0));    // depth 3
    detail::parity_calm calm;
    for (int d = 4; d <= d_max; ++d) {
        std::size_t i = seq.size();
        double next = detail::two_step(m, seq[i - 1], seq[i - 2]);
        calm.feed(i, seq[i - 2], next);
        seq.push_back(next);
        if (calm.settled()) break;
    }
    return seq;
}

struct parity_limits {
    double even_limit = 0.0;
    double odd_limit = 0.0;
    double gap = 0.0;
    bool determined = false;
};

inline parity_limits parity_gap(const model_spec& m, int d_max = kDefaultDepthMax) {
    if (d_max < 100)
        throw precondition_error("parity_gap: d_max must be at least 100");
    std::vector<double> seq;
    seq.push_back(search_upper(m));
    seq.push_back(m.lambda * std::pow(m.theta.at(1) / m.theta.at(0), m.theta.delta - 1) *
                  g_scalar(m.theta, seq[0]));
    int calm_even = 0, calm_odd = 0;
    parity_limits out;
    for (int d = 5; d <= d_max; ++d) {
        std::size_t i = seq.size();
        double next = detail::two_step(m, seq[i - 1], seq[i - 2]);
        int& count = (d % 2 == 0) ? calm_even : calm_odd;
        count = (std::fabs(next - seq[i - 2]) < 1e-12) ? count + 1 : 0;
        seq.push_back(next);
        if (calm_even >= 20 && calm_odd >= 20) {
            out.determined = true;
            break;
        }
    }
    if (!out.determined) return out;
    double last = seq.back();
    double second = seq[seq.size() - 2];
    int last_depth = 3 + static_cast<int>(seq.size()) - 1;
    out.even_limit = (last_depth % 2 == 0) ? last : second;
    out.odd_limit = (last_depth % 2 == 0) ? second : last;
    out.gap = std::fabs(out.odd_limit - out.even_limit);
    return out;
}

struct contraction_report {
    bool holds = false;
    double worst_ratio = 0.0;
};

inline contraction_report contraction_check(const model_spec& m) {
    double lam_lo = lambda_lower(m.theta);
    if (!(m.lambda < lam_lo))
        throw precondition_error("contraction_check: requires lambda below lambda_lower");
    double factor = m.lambda / lam_lo;
    double top = search_upper(m);
    std::vector<double> lower = {0.0, 0.0};
    std::vector<double> upper = {top, top};
    contraction_report out;
    out.holds = true;
    for (int d = 7; d <= 200; ++d) {
        std::size_t i = lower.size();
        lower.push_back(detail::two_step(m, upper[i - 1], lower[i - 2]));
        upper.push_back(detail::two_step(m, lower[i - 1], upper[i - 2]));
        double gap = upper[i] - lower[i];
        double prev = std::max(upper[i - 1] - lower[i - 1], upper[i - 2] - lower[i - 2]);
        if (gap > factor * prev + 1e-12) out.holds = false;
        // Ratios are meaningful until the gaps hit the floating-point noise
        // floor; past that the absolute slack above carries the check.
        if (prev > 1e-12) out.worst_ratio = std::max(out.worst_ratio, gap / prev);
    }
    return out;
}

enum class boundary_kind { all_included, all_excluded, free_boundary };

inline boundary_kind boundary_from_string(const std::string& name) {
    if (name == "all_included") return boundary_kind::all_included;
    if (name == "all_excluded") return boundary_kind::all_excluded;
    if (name == "free") return boundary_kind::free_boundary;
    throw precondition_error("unknown boundary label: " + name);
}

inline std::string to_string(boundary_kind b) {
    switch (b) {
        case boundary_kind::all_included: return "all_included";
        case boundary_kind::all_excluded: return "all_excluded";
        default: return "free";
    }
}

inline limit_probs finite_depth_conditional(const model_spec& m, int d, boundary_kind b) {
    if (d < 5)
        throw precondition_error("finite_depth_conditional: depth must be at least 5");
    std::vector<double> seq;
    int first_depth = 0;
    switch (b) {
        case boundary_kind::all_included:
            seq = extremal_boundary_seq(m, d);
            first_depth = 3;
            break;
        case boundary_kind::free_boundary:
            seq = free_boundary_seq(m, d);
            first_depth = 2;
            break;
        default:
            throw precondition_error(
                "finite_depth_conditional: supported boundaries are all_included and free");
    }
    // Sequences stop early once settled; reuse the last pair beyond that.
    auto at_depth = [&](int depth) {
        std::size_t i = static_cast<std::size_t>(depth - first_depth);
        return i < seq.size() ? seq[i] : seq[seq.size() - 2 + (depth - first_depth - seq.size()) % 2];
    };
    return detail::occupancy_from(m, at_depth(d - 1), at_depth(d));
}

}  // namespace mrf
