// Perturbative analysis of the uniqueness boundary at the hardcore critical
// activity around the all-ones weight vector: the pi coefficient vector, the
// direction dichotomy pi.c < 0 vs pi.c > 0, the identity checks behind it,
// first-order slopes of the root and of the criterion gap, and the
// non-monotonicity scan along the e0 axis.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mrf/common.hpp"
#include "mrf/fixed_point.hpp"
#include "mrf/phase.hpp"
#include "mrf/polynomials.hpp"
#include "mrf/theta.hpp"

namespace mrf {

// C(D,j) (D-2)^{-j}, the binomial weights of the perturbation coefficients.
inline double lambda_capital(int delta, int j) {
    if (delta < 3)
        throw precondition_error("lambda_capital: degree must be at least 3");
    if (j < 0 || j > delta)
        throw precondition_error("lambda_capital: index out of range");
    auto row = binomial_row(delta);
    return row[static_cast<std::size_t>(j)] *
           std::pow(static_cast<double>(delta - 2), -j);
}

// pi_j = Lambda_{D,j} ((D-2) + (6-5D) j + 2(D-1) j^2). The sign of pi.c
// decides whether the direction c preserves or breaks uniqueness.
inline std::vector<double> pi_vector(int delta) {
    if (delta < 3)
        throw precondition_error("pi_vector: degree must be at least 3");
    std::vector<double> out(static_cast<std::size_t>(delta) + 1);
    for (int j = 0; j <= delta; ++j) {
        double quad = (delta - 2) + (6.0 - 5.0 * delta) * j +
                      2.0 * (delta - 1) * j * static_cast<double>(j);
        out[static_cast<std::size_t>(j)] = lambda_capital(delta, j) * quad;
    }
    return out;
}

// Convex sequence: nondecreasing increments. Perturbing the all-ones vector
// along a convex direction keeps theta log-convex for small step sizes.
inline bool is_convex_vector(const std::vector<double>& c) {
    double scale = 1.0;
    for (double v : c) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 1; i + 1 < c.size(); ++i)
        if (c[i + 1] - 2.0 * c[i] + c[i - 1] < -1e-12 * scale) return false;
    return true;
}

enum class direction_class { uniqueness, non_uniqueness, boundary };

inline const char* to_string(direction_class d) {
    switch (d) {
        case direction_class::uniqueness: return "Uniqueness";
        case direction_class::non_uniqueness: return "NonUniqueness";
        default: return "Boundary";
    }
}

struct perturbation_report {
    int delta = 0;
    std::vector<double> c;
    bool convex = false;    // the dichotomy is only proven for convex c
    std::vector<double> pi;
    double dot = 0.0;
    direction_class classification = direction_class::boundary;
};

inline perturbation_report classify_direction(int delta,
                                              const std::vector<double>& c) {
    if (c.size() != static_cast<std::size_t>(delta) + 1)
        throw precondition_error("classify_direction: c must have delta+1 entries");
    perturbation_report rep;
    rep.delta = delta;
    rep.c = c;
    rep.convex = is_convex_vector(c);
    rep.pi = pi_vector(delta);
    for (std::size_t j = 0; j < c.size(); ++j) rep.dot += rep.pi[j] * c[j];
    if (rep.dot < -1e-12)
        rep.classification = direction_class::uniqueness;
    else if (rep.dot > 1e-12)
        rep.classification = direction_class::non_uniqueness;
    else
        rep.classification = direction_class::boundary;
    return rep;
}

// The six closed forms behind the dichotomy proof: the critical root of the
// all-ones model and five weighted sums of Lambda and pi. All must hold to
// 1e-10 relative.
inline bool goodxis_check(int delta) {
    if (delta < 3)
        throw precondition_error("goodxis_check: degree must be at least 3");
    auto rel_ok = [](double lhs, double rhs) {
        return std::fabs(lhs - rhs) <= 1e-10 * std::fabs(rhs);
    };

    double x_star = solve_diagonal(make_model(all_ones_theta(delta),
                                              hardcore_critical(delta))).x;
    if (!rel_ok(x_star, 1.0 / (delta - 2))) return false;

    double sum_l = 0.0, sum_il = 0.0, sum_iil = 0.0;
    for (int j = 0; j <= delta; ++j) {
        double lam = lambda_capital(delta, j);
        sum_l += lam;
        sum_il += j * lam;
        sum_iil += static_cast<double>(j) * j * lam;
    }
    double ratio = (delta - 1.0) / (delta - 2.0);
    double tilt = delta * std::pow(delta - 1.0, delta - 1) /
                  std::pow(delta - 2.0, delta);
    if (!rel_ok(sum_l, std::pow(ratio, delta))) return false;
    if (!rel_ok(sum_il, tilt)) return false;
    if (!rel_ok(sum_iil, 2.0 * tilt)) return false;

    auto pi = pi_vector(delta);
    double sum_p = 0.0, sum_ip = 0.0;
    for (int j = 0; j <= delta; ++j) {
        sum_p += pi[static_cast<std::size_t>(j)];
        sum_ip += j * pi[static_cast<std::size_t>(j)];
    }
    double side = std::pow(ratio, delta - 1);
    return rel_ok(sum_p, -side) && rel_ok(sum_ip, delta * side);
}

struct slope_report {
    // Each slope operation fills its own pair; the other pair stays zero.
    double x_c_formula = 0.0;
    double x_c_numeric = 0.0;
    double gap_slope_formula = 0.0;
    double gap_slope_numeric = 0.0;
};

namespace detail {

// z_{l,c} = sum C(D-1,i) x1^i c_{i+l} and w_{l,c} = sum C(D-1,i) i x1^{i-1}
// c_{i+l}, evaluated at the critical root x1 = 1/(D-2) of the all-ones model.
inline double z_lc(int delta, int l, const std::vector<double>& c) {
    double x1 = 1.0 / (delta - 2);
    auto row = binomial_row(delta - 1);
    double acc = 0.0, pw = 1.0;
    for (int i = 0; i <= delta - 1; ++i) {
        acc += row[static_cast<std::size_t>(i)] * pw *
               c[static_cast<std::size_t>(i + l)];
        pw *= x1;
    }
    return acc;
}

inline double w_lc(int delta, int l, const std::vector<double>& c) {
    double x1 = 1.0 / (delta - 2);
    auto row = binomial_row(delta - 1);
    double acc = 0.0;
    for (int i = 1; i <= delta - 1; ++i)
        acc += row[static_cast<std::size_t>(i)] * i * std::pow(x1, i - 1) *
               c[static_cast<std::size_t>(i + l)];
    return acc;
}

inline theta_vector perturbed_theta(int delta, const std::vector<double>& c,
                                    double h) {
    std::vector<double> vals(static_cast<std::size_t>(delta) + 1);
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = 1.0 + c[k] * h;
    return make_theta(delta, std::move(vals));
}

// Two-level Richardson extrapolation of (F(h) - F(0))/h on the step grid
// {h0, h0/2, h0/4}: cancels the O(h) and O(h^2) error terms of the forward
// difference, leaving o(h^2).
template <typename F>
double forward_slope(F&& eval, double base, double h0) {
    double s1 = (eval(h0) - base) / h0;
    double s2 = (eval(h0 / 2) - base) / (h0 / 2);
    double s3 = (eval(h0 / 4) - base) / (h0 / 4);
    double r1 = 2.0 * s2 - s1;
    double r2 = 2.0 * s3 - s2;
    return (4.0 * r2 - r1) / 3.0;
}

}  // namespace detail

// First-order response of the diagonal root to theta = 1 + c h at the
// critical activity: closed form against a Richardson-extrapolated finite
// difference of the actual solver.
inline slope_report x_c_slope(int delta, const std::vector<double>& c) {
    if (delta < 3)
        throw precondition_error("x_c_slope: degree must be at least 3");
    if (c.size() != static_cast<std::size_t>(delta) + 1)
        throw precondition_error("x_c_slope: c must have delta+1 entries");
    slope_report rep;
    double z0 = detail::z_lc(delta, 0, c);
    double z1 = detail::z_lc(delta, 1, c);
    rep.x_c_formula = 0.5 * std::pow(delta - 2.0, delta - 2) /
                      std::pow(delta - 1.0, delta - 1) *
                      ((delta - 1.0) * z1 - delta * z0);

    double lam = hardcore_critical(delta);
    auto root_at = [&](double h) {
        return solve_diagonal(make_model(detail::perturbed_theta(delta, c, h), lam)).x;
    };
    rep.x_c_numeric = detail::forward_slope(root_at, root_at(0.0), 1e-4);
    return rep;
}

// First-order response of the uniqueness margin d/dx p + lambda d/dx g at the
// perturbed root. The margin is zero at h = 0; its slope is
// -(1/2)((D-2)/(D-1))^D pi.c, so the sign of pi.c decides the dichotomy.
inline slope_report criterion_gap_slope(int delta, const std::vector<double>& c) {
    if (delta < 3)
        throw precondition_error("criterion_gap_slope: degree must be at least 3");
    if (c.size() != static_cast<std::size_t>(delta) + 1)
        throw precondition_error("criterion_gap_slope: c must have delta+1 entries");
    slope_report rep;
    auto pi = pi_vector(delta);
    double dot = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) dot += pi[j] * c[j];
    rep.gap_slope_formula =
        -0.5 * std::pow((delta - 2.0) / (delta - 1.0), delta) * dot;

    double lam = hardcore_critical(delta);
    auto margin_at = [&](double h) {
        theta_vector t = detail::perturbed_theta(delta, c, h);
        double x = solve_diagonal(make_model(t, lam)).x;
        return p_jet(t, x).d1 + lam * g_jet(t, x).d1;
    };
    rep.gap_slope_numeric = detail::forward_slope(margin_at, margin_at(0.0), 1e-4);
    return rep;
}

struct scan_point {
    double h = 0.0;
    verdict v = verdict::undetermined;
};

// Classify (lambda_D, 1 + e0 h) along a grid of step sizes. The uniqueness
// region along this axis is non-monotone: unique at h = 0, broken for small
// positive h, unique again once h is large. Undetermined entries are
// recorded as such rather than raised.
inline std::vector<scan_point> nonmonotonicity_scan(int delta,
                                                    const std::vector<double>& h_grid) {
    if (delta < 3)
        throw precondition_error("nonmonotonicity_scan: degree must be at least 3");
    double lam = hardcore_critical(delta);
    std::vector<double> e0(static_cast<std::size_t>(delta) + 1, 0.0);
    e0[0] = 1.0;
    std::vector<scan_point> out;
    out.reserve(h_grid.size());
    for (double h : h_grid) {
        if (h < 0.0)
            throw precondition_error("nonmonotonicity_scan: steps must be nonnegative");
        scan_point pt;
        pt.h = h;
        pt.v = classify_uniqueness(
                   make_model(detail::perturbed_theta(delta, e0, h), lam)).v;
        out.push_back(pt);
    }
    return out;
}

}  // namespace mrf
