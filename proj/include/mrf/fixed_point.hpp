// Solvers for the two-equation system
//   x = lambda g(y) f^{D-1}(x),   y = lambda g(x) f^{D-1}(y)
// whose solution structure characterizes uniqueness: diagonal root finding
// on eta(x) = x - lambda g(x) f^{D-1}(x), the decreasing map
// q(x) = p_inverse(lambda g(x)) with p(x) = x f^{-(D-1)}(x) whose two-cycles
// are exactly the off-diagonal solutions, the r-criterion |g'|/p' <= 1/lambda,
// Schwarzian diagnostics, and the uniqueness classifier built from them.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mrf/common.hpp"
#include "mrf/model.hpp"
#include "mrf/polynomials.hpp"

namespace mrf {

inline double p_func(const theta_vector& t, double x) {
    detail::require_nonneg(x, "p_func");
    return x * std::pow(f_scalar(t, x), -(t.delta - 1));
}

// Analytic value/derivative bundle for p = x * f^{-(D-1)} via the jet of f
// and Faa di Bruno for u -> u^{-(D-1)}. Valid at x = 0 as well.
inline func_jet p_jet(const theta_vector& t, double x) {
    func_jet f = f_jet(t, x);
    double n = t.delta - 1;
    double u = f.v;
    double g0 = std::pow(u, -n);
    double g1 = -n * g0 / u;
    double g2 = n * (n + 1) * g0 / (u * u);
    double g3 = -n * (n + 1) * (n + 2) * g0 / (u * u * u);
    // F = f^{-(D-1)} composed derivatives.
    double F0 = g0;
    double F1 = g1 * f.d1;
    double F2 = g2 * f.d1 * f.d1 + g1 * f.d2;
    double F3 = g3 * f.d1 * f.d1 * f.d1 + 3.0 * g2 * f.d1 * f.d2 + g1 * f.d3;
    func_jet p;
    p.v = x * F0;
    p.d1 = F0 + x * F1;
    p.d2 = 2.0 * F1 + x * F2;
    p.d3 = 3.0 * F2 + x * F3;
    return p;
}

inline bool p_is_increasing(const theta_vector& t, double lambda) {
    model_spec m{t, lambda};
    double upper = search_upper(m);
    // Composite probe grid: linear spacing resolves the bulk of [0, upper],
    // logarithmic spacing resolves dips at scales far below upper.
    const int n = 2048;
    std::vector<double> grid;
    grid.reserve(2 * n + 1);
    grid.push_back(0.0);
    for (int i = 1; i <= n; ++i) grid.push_back(upper * i / n);
    double lo = upper * 1e-9;
    double step = std::pow(1e9, 1.0 / n);
    for (int i = 0; i < n; ++i, lo *= step) grid.push_back(lo);
    std::sort(grid.begin(), grid.end());
    double prev = p_func(t, grid[0]);
    double prev_x = grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] - prev_x < 1e-12 * grid[i]) continue;
        double cur = p_func(t, grid[i]);
        if (cur <= prev) return false;
        prev = cur;
        prev_x = grid[i];
    }
    return true;
}

namespace detail {

// Largest adjacent ratio of theta; bounds f from above for any positive theta.
inline double max_theta_ratio(const theta_vector& t) {
    double r = 0.0;
    for (int k = 0; k + 1 <= t.delta; ++k) r = std::max(r, t.at(k + 1) / t.at(k));
    return r;
}

}  // namespace detail

inline double p_inverse(const theta_vector& t, double y) {
    if (!(y >= 0.0)) throw std::range_error("p_inverse: target below the range of p");
    if (y == 0.0) return 0.0;
    // p(x) >= x / rmax^{D-1}, so this initial hi already satisfies p(hi) >= y
    // whenever that bound is tight; expand geometrically otherwise.
    double rmax = detail::max_theta_ratio(t);
    double hi = y * std::pow(rmax, t.delta - 1);
    hi = std::max(hi, 1e-300);
    int guard = 0;
    while (p_func(t, hi) < y) {
        hi *= 2.0;
        if (++guard > 2000 || !std::isfinite(hi))
            throw std::range_error("p_inverse: target above the range of p");
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (p_func(t, mid) < y ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    // Newton polish against the analytic derivative.
    for (int i = 0; i < 3; ++i) {
        func_jet pj = p_jet(t, x);
        if (!(pj.d1 > 0.0)) break;
        double step = (pj.v - y) / pj.d1;
        double next = x - step;
        if (!(next >= lo && next <= hi)) break;
        x = next;
    }
    return x;
}

// Decreasing inverse of g on (0, 1/theta_0]; used by the fallback scan.
inline double g_inverse(const theta_vector& t, double y) {
    if (!(y > 0.0) || y > 1.0 / t.at(0) * (1.0 + 1e-12))
        throw std::range_error("g_inverse: target outside the range of g");
    if (y >= 1.0 / t.at(0)) return 0.0;
    double hi = 1.0;
    int guard = 0;
    while (g_scalar(t, hi) > y) {
        hi *= 2.0;
        if (++guard > 2000) throw std::range_error("g_inverse: bracketing failed");
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (g_scalar(t, mid) > y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double q_func(const model_spec& m, double x) {
    return p_inverse(m.theta, m.lambda * g_scalar(m.theta, x));
}

struct diagonal_root {
    double x = 0.0;
    double residual = 0.0;
    bool multiple = false;    // more than one sign change in the grid scan
    int sign_changes = 0;
    long iterations = 0;
};

inline double eta_func(const model_spec& m, double x) {
    return x - m.lambda * g_scalar(m.theta, x) *
                   std::pow(f_scalar(m.theta, x), m.theta.delta - 1);
}

inline diagonal_root solve_diagonal(const model_spec& m) {
    const theta_vector& t = m.theta;
    double upper = search_upper(m);
    // For log-convex theta every solution lies in [0, upper]; for general
    // theta extend to the bound implied by the largest adjacent ratio.
    double hard_upper =
        m.lambda / t.at(0) * std::pow(detail::max_theta_ratio(t), t.delta - 1);
    double scan_hi = std::max(upper, hard_upper) * (1.0 + 1e-9) + 1e-300;

    const int n = 2048;
    diagonal_root out;
    double x0 = 0.0, e0 = eta_func(m, 0.0);
    double first_lo = -1.0, first_hi = -1.0;
    for (int i = 1; i <= n; ++i) {
        double x1 = scan_hi * i / n;
        double e1 = eta_func(m, x1);
        ++out.iterations;
        if ((e0 <= 0.0 && e1 > 0.0) || (e0 >= 0.0 && e1 < 0.0)) {
            ++out.sign_changes;
            if (first_lo < 0.0) {
                first_lo = x0;
                first_hi = x1;
            }
        }
        x0 = x1;
        e0 = e1;
    }
    if (first_lo < 0.0) {
        // eta(0) < 0 always; a missing sign change means the root sits at the
        // far end within noise. Fall back to the full interval.
        first_lo = 0.0;
        first_hi = scan_hi;
        out.sign_changes = 1;
    }
    out.multiple = out.sign_changes > 1;

    double lo = first_lo, hi = first_hi;
    double elo = eta_func(m, lo);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double em = eta_func(m, mid);
        ++out.iterations;
        if ((em <= 0.0) == (elo <= 0.0)) {
            lo = mid;
            elo = em;
        } else {
            hi = mid;
        }
    }
    out.x = 0.5 * (lo + hi);
    out.residual = std::fabs(eta_func(m, out.x));
    return out;
}

struct r_report {
    double r = 0.0;
    double inv_lambda = 0.0;
    double x_star = 0.0;
    bool satisfied = false;
};

namespace detail {

inline r_report r_criterion_at(const model_spec& m, double x_star) {
    double h = 1e-6 * std::max(1.0, x_star);
    double xm = std::max(0.0, x_star - h);
    double xp = x_star + h;
    double span = xp - xm;
    double gp = (g_scalar(m.theta, xp) - g_scalar(m.theta, xm)) / span;
    double pp = (p_func(m.theta, xp) - p_func(m.theta, xm)) / span;
    if (pp < 1e-12)
        throw std::domain_error("r_criterion: p' at the fixed point is degenerate");
    r_report rep;
    rep.r = std::fabs(gp) / pp;
    rep.inv_lambda = 1.0 / m.lambda;
    rep.x_star = x_star;
    rep.satisfied = rep.r <= rep.inv_lambda + 1e-9;
    return rep;
}

// Classifier-internal variant of the r-criterion with analytic derivatives
// and a near-machine dead zone. Keeping this sharper than the documented
// finite-difference version lets the phase bracket straddle the true
// threshold instead of inheriting a one-sided bias of the dead zone.
inline r_report r_criterion_sharp(const model_spec& m, double x_star) {
    func_jet gj = g_jet(m.theta, x_star);
    func_jet pj = p_jet(m.theta, x_star);
    if (pj.d1 < 1e-12)
        throw std::domain_error("r_criterion: p' at the fixed point is degenerate");
    r_report rep;
    rep.r = std::fabs(gj.d1) / pj.d1;
    rep.inv_lambda = 1.0 / m.lambda;
    rep.x_star = x_star;
    rep.satisfied = rep.r <= rep.inv_lambda + 1e-12 * std::max(1.0, rep.inv_lambda);
    return rep;
}

}  // namespace detail

enum class cycle_status { converged_fixed, converged_pair, budget_exhausted };

struct two_cycle_result {
    std::optional<std::pair<double, double>> cycle;
    cycle_status status = cycle_status::budget_exhausted;
    long iterations = 0;
    double z_even = 0.0, z_odd = 0.0;
    std::pair<double, double> residuals{0.0, 0.0};
};

// Iterate q from 0. The even iterates increase and the odd iterates decrease
// toward limits that bracket every two-cycle, so the limits either coincide
// (no cycle anywhere) or form the outermost cycle.
inline two_cycle_result iterate_two_cycle(const model_spec& m, long max_iter) {
    two_cycle_result out;
    double prev_even = 0.0;
    double prev_odd = q_func(m, 0.0);
    out.iterations = 1;
    int calm_even = 0, calm_odd = 0;
    double cur = prev_odd;
    bool cur_is_odd = true;
    while (out.iterations < max_iter) {
        cur = q_func(m, cur);
        ++out.iterations;
        cur_is_odd = !cur_is_odd;
        if (cur_is_odd) {
            calm_odd = (std::fabs(cur - prev_odd) < 1e-12) ? calm_odd + 1 : 0;
            prev_odd = cur;
        } else {
            calm_even = (std::fabs(cur - prev_even) < 1e-12) ? calm_even + 1 : 0;
            prev_even = cur;
        }
        if (calm_even >= 20 && calm_odd >= 20) break;
    }
    out.z_even = prev_even;
    out.z_odd = prev_odd;
    if (calm_even < 20 || calm_odd < 20) {
        out.status = cycle_status::budget_exhausted;
        return out;
    }
    double gap = std::fabs(out.z_odd - out.z_even);
    if (gap <= 1e-9) {
        out.status = cycle_status::converged_fixed;
        return out;
    }
    // Calm parities alone cannot tell a genuine pair from an orbit stalled
    // near an almost-neutral fixed point, where per-step movement drops below
    // the calm threshold while the even/odd gap is still closing. Keep
    // iterating and watch the gap itself: a pair holds its separation, a
    // stall keeps losing it.
    for (int i = 0; i < 4000; ++i) {
        cur = q_func(m, cur);
        ++out.iterations;
        cur_is_odd = !cur_is_odd;
        (cur_is_odd ? prev_odd : prev_even) = cur;
    }
    out.z_even = prev_even;
    out.z_odd = prev_odd;
    double gap2 = std::fabs(out.z_odd - out.z_even);
    if (gap2 <= 1e-9) {
        out.status = cycle_status::converged_fixed;
        return out;
    }
    if (gap2 < gap * (1.0 - 1e-3)) {
        out.status = cycle_status::budget_exhausted;
        return out;
    }
    double a = std::min(out.z_even, out.z_odd);
    double b = std::max(out.z_even, out.z_odd);
    double ra = std::fabs(q_func(m, a) - b);
    double rb = std::fabs(q_func(m, b) - a);
    out.residuals = {ra, rb};
    double scale = std::max(1.0, b);
    if (ra > 1e-9 * scale || rb > 1e-9 * scale) {
        // A stalled orbit masquerading as converged; report no pair.
        out.status = cycle_status::budget_exhausted;
        return out;
    }
    if (b - a < 1e-4 * scale) {
        // In the near-critical sliver even a stable-looking separation can be
        // a slow stall; accept the pair only if the fixed point is repelling.
        try {
            if (detail::r_criterion_sharp(m, solve_diagonal(m).x).satisfied) {
                out.status = cycle_status::budget_exhausted;
                return out;
            }
        } catch (const std::domain_error&) {
            out.status = cycle_status::budget_exhausted;
            return out;
        }
    }
    out.status = cycle_status::converged_pair;
    out.cycle = std::make_pair(a, b);
    return out;
}

inline two_cycle_result find_two_cycle(const model_spec& m, long max_iter = 1000000) {
    if (!p_is_increasing(m.theta, m.lambda))
        throw precondition_error("find_two_cycle: p is not strictly increasing");
    return iterate_two_cycle(m, max_iter);
}

inline r_report r_criterion(const model_spec& m) {
    if (!p_is_increasing(m.theta, m.lambda))
        throw precondition_error("r_criterion: p is not strictly increasing");
    return detail::r_criterion_at(m, solve_diagonal(m).x);
}

// Generic 5-point-stencil Schwarzian of a callable; the documented default.
template <class F>
double schwarzian_fd(F&& fn, double x, double h) {
    double fm2 = fn(x - 2 * h), fm1 = fn(x - h), f0 = fn(x);
    double fp1 = fn(x + h), fp2 = fn(x + 2 * h);
    double d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
    double d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
    double d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h * h * h);
    if (std::fabs(d1) <= 1e-10)
        throw std::domain_error("schwarzian: q' vanishes at the evaluation point");
    double ratio = d2 / d1;
    return d3 / d1 - 1.5 * ratio * ratio;
}

namespace detail {

// g evaluated without the nonnegativity gate: the Schwarzian stencil reaches
// slightly below 0 where the denominator polynomial is still positive.
inline double g_unchecked(const theta_vector& t, double x) {
    double den = poly_eval(f_den_coeffs(t), x);
    if (!(den > 0.0)) throw std::domain_error("g: denominator vanished");
    return 1.0 / den;
}

}  // namespace detail

inline double schwarzian(const model_spec& m, double x) {
    if (!p_is_increasing(m.theta, m.lambda))
        throw precondition_error("schwarzian: p is not strictly increasing");
    double h = 1e-4 * search_upper(m);
    auto q = [&](double v) {
        return p_inverse(m.theta, m.lambda * detail::g_unchecked(m.theta, v));
    };
    return schwarzian_fd(q, x, h);
}

// High-precision variant: analytic jets of g and p plus the inverse-function
// derivatives of p at y = q(x). Used as the derivative oracle in tests and by
// the classifier's negativity gate.
inline double schwarzian_analytic(const model_spec& m, double x) {
    func_jet gj = g_jet(m.theta, x);
    double v = m.lambda * gj.v;
    double v1 = m.lambda * gj.d1;
    double v2 = m.lambda * gj.d2;
    double v3 = m.lambda * gj.d3;
    double y = p_inverse(m.theta, v);
    func_jet pj = p_jet(m.theta, y);
    double ip = pj.d1;
    double F1 = 1.0 / ip;
    double F2 = -pj.d2 / (ip * ip * ip);
    double F3 = (3.0 * pj.d2 * pj.d2 - ip * pj.d3) / (ip * ip * ip * ip * ip);
    double q1 = F1 * v1;
    double q2 = F2 * v1 * v1 + F1 * v2;
    double q3 = F3 * v1 * v1 * v1 + 3.0 * F2 * v1 * v2 + F1 * v3;
    // q' < 0 everywhere in exact arithmetic; only a genuine underflow of the
    // analytic value warrants a refusal (the stencil variant guards at 1e-10
    // because its accuracy is noise-limited, this one is not).
    if (!(std::fabs(q1) > 1e-200))
        throw std::domain_error("schwarzian: q' vanishes at the evaluation point");
    double ratio = q2 / q1;
    return q3 / q1 - 1.5 * ratio * ratio;
}

struct fixed_point_report {
    verdict v = verdict::undetermined;
    double diagonal_x = 0.0;
    bool diagonal_multiple = false;
    std::optional<std::pair<double, double>> two_cycle;
    long iterations = 0;
    std::pair<double, double> residuals{0.0, 0.0};
    std::pair<double, double> search_interval{0.0, 0.0};
    std::string note;
};

namespace detail {

// Fallback when p is not strictly increasing: with R(x) = g_inverse(p(x)/lambda)
// (g is always strictly decreasing, hence invertible), fixed points of the
// two-step map R(R(x)) are exactly the solutions of the system with x-coordinate
// in range, so sign changes of h(x) = R(R(x)) - x locate all of them.
inline void classify_by_scan(const model_spec& m, fixed_point_report& rep) {
    const theta_vector& t = m.theta;
    double scan_hi = std::max(search_upper(m),
                              m.lambda / t.at(0) * std::pow(max_theta_ratio(t), t.delta - 1));
    double cap = m.lambda / t.at(0);  // R is defined where p(x) <= lambda/theta_0

    // At large activity the outermost solution pair sits so close to the edges
    // of the scan domain that no grid can bracket the crossings. The parity
    // iteration usually lands on that pair anyway; accept it whenever the two
    // system equations check out directly.
    try {
        two_cycle_result probe = iterate_two_cycle(m, 40000);
        rep.iterations += probe.iterations;
        if (probe.status == cycle_status::converged_pair) {
            double a = probe.cycle->first, b = probe.cycle->second;
            double rhs_a = m.lambda * g_scalar(t, b) * std::pow(f_scalar(t, a), t.delta - 1);
            double rhs_b = m.lambda * g_scalar(t, a) * std::pow(f_scalar(t, b), t.delta - 1);
            double rel_a = std::fabs(a - rhs_a) / std::max({a, rhs_a, 1e-300});
            double rel_b = std::fabs(b - rhs_b) / std::max({b, rhs_b, 1e-300});
            if (rel_a <= 1e-7 && rel_b <= 1e-7 && b - a > 1e-9 * std::max(1.0, b)) {
                rep.v = verdict::non_unique;
                rep.two_cycle = std::make_pair(a, b);
                rep.residuals.second =
                    std::max(std::fabs(a - rhs_a), std::fabs(b - rhs_b));
                rep.note = "off-diagonal pair located by parity iteration";
                return;
            }
        }
    } catch (const std::exception&) {
        // The inverse of a non-monotone p can wander out of range; the grid
        // scan below remains the decider.
    }

    auto R = [&](double x) { return g_inverse(t, p_func(t, x) / m.lambda); };
    // h(x) = R(R(x)) - x where both applications of R stay inside the range
    // of g; out-of-range points are flagged invalid instead of throwing.
    auto h = [&](double x, bool& ok) -> double {
        ok = p_func(t, x) <= cap * (1.0 + 1e-12);
        if (!ok) return 0.0;
        try {
            return R(R(x)) - x;
        } catch (const std::range_error&) {
            ok = false;
            return 0.0;
        }
    };

    const int n = 4096;
    // Linear grid over the whole domain, dyadic points toward zero for roots
    // far below scale, and dyadic points toward the outer validity edge where
    // the large-activity branch of the solution pair accumulates.
    std::vector<double> xs;
    xs.reserve(n + 1 + 60 + 54);
    for (int i = 0; i <= n; ++i) xs.push_back(scan_hi * i / n);
    for (int k = 1; k <= 60; ++k) xs.push_back(scan_hi * std::ldexp(1.0, -k));
    double xedge = scan_hi;
    if (!(p_func(t, scan_hi) <= cap * (1.0 + 1e-12))) {
        double lov = 0.0, hiv = scan_hi;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lov + hiv);
            if (mid == lov || mid == hiv) break;
            (p_func(t, mid) <= cap * (1.0 + 1e-12) ? lov : hiv) = mid;
        }
        xedge = lov;
    }
    xs.push_back(xedge);
    for (int k = 1; k <= 52; ++k) xs.push_back(xedge * (1.0 - std::ldexp(1.0, -k)));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> roots;
    double x0 = xs[0];
    bool v0 = false;
    double h0 = h(x0, v0);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double x1 = xs[i];
        bool v1 = false;
        double h1 = h(x1, v1);
        ++rep.iterations;
        if (v0 && v1 && ((h0 <= 0.0 && h1 > 0.0) || (h0 >= 0.0 && h1 < 0.0))) {
            double lo = x0, hi = x1, hlo = h0;
            for (int b = 0; b < 200; ++b) {
                double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                bool vm = false;
                double hm = h(mid, vm);
                if (!vm) break;
                if ((hm <= 0.0) == (hlo <= 0.0)) {
                    lo = mid;
                    hlo = hm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        v0 = v1;
        h0 = h1;
    }
    // The diagonal solution is always a fixed point of R; make sure it is in.
    roots.push_back(rep.diagonal_x);
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (merged.empty() || r - merged.back() > 1e-9 * std::max(1.0, r))
            merged.push_back(r);
    }

    for (double r : merged) {
        double partner = R(r);
        if (std::fabs(partner - r) > 1e-9 * std::max(1.0, std::fabs(r))) {
            double a = std::min(r, partner), b = std::max(r, partner);
            rep.v = verdict::non_unique;
            rep.two_cycle = std::make_pair(a, b);
            double fa = std::pow(f_scalar(t, a), t.delta - 1);
            double fb = std::pow(f_scalar(t, b), t.delta - 1);
            rep.residuals.second =
                std::max(std::fabs(a - m.lambda * g_scalar(t, b) * fa),
                         std::fabs(b - m.lambda * g_scalar(t, a) * fb));
            rep.note = "off-diagonal solution located by two-step scan";
            return;
        }
    }
    if (merged.size() >= 2) {
        rep.v = verdict::non_unique;
        rep.note = "multiple diagonal solutions located by two-step scan";
        return;
    }
    if (merged.size() == 1) {
        rep.v = verdict::unique;
        rep.note = "two-step scan found a single solution";
        return;
    }
    rep.v = verdict::undetermined;
    rep.note = "two-step scan found no solution; numerical pathologies suspected";
}

}  // namespace detail

inline fixed_point_report classify_uniqueness(const model_spec& m) {
    fixed_point_report rep;
    rep.search_interval = {0.0, search_upper(m)};
    diagonal_root diag = solve_diagonal(m);
    rep.diagonal_x = diag.x;
    rep.diagonal_multiple = diag.multiple;
    rep.residuals.first = diag.residual;
    rep.iterations = diag.iterations;

    if (!is_log_convex(m.theta)) {
        rep.v = verdict::undetermined;
        rep.note = "theta is not log-convex; the uniqueness equivalence does not apply";
        return rep;
    }

    if (!p_is_increasing(m.theta, m.lambda)) {
        detail::classify_by_scan(m, rep);
        return rep;
    }

    // Iteration decides outright when it converges within a modest cap;
    // near-critical models where the contraction factor approaches 1 fall
    // through to the derivative criterion at the fixed point.
    two_cycle_result tc = iterate_two_cycle(m, 40000);
    rep.iterations += tc.iterations;
    if (tc.status == cycle_status::converged_pair) {
        rep.v = verdict::non_unique;
        rep.two_cycle = tc.cycle;
        rep.residuals.second = std::max(tc.residuals.first, tc.residuals.second);
        return rep;
    }
    if (tc.status == cycle_status::converged_fixed) {
        rep.v = verdict::unique;
        return rep;
    }

    r_report rc;
    try {
        rc = detail::r_criterion_sharp(m, diag.x);
    } catch (const std::domain_error&) {
        rep.v = verdict::undetermined;
        rep.note = "iteration budget exhausted and p' degenerate at the fixed point";
        return rep;
    }
    if (!rc.satisfied) {
        // |q'(x*)| = lambda * r > 1: the fixed point is repelling, and the
        // monotone even/odd iteration brackets a genuine two-cycle.
        rep.v = verdict::non_unique;
        rep.note = "fixed point repelling (r > 1/lambda); cycle not iterated to tolerance";
        return rep;
    }
    // r <= 1/lambda: conclusive for uniqueness when S[q] < 0 across the interval.
    bool s_negative = true;
    double upper = rep.search_interval.second;
    for (int i = 0; i <= 64 && s_negative; ++i) {
        double x = upper * (0.005 + 0.99 * i / 64.0);
        try {
            if (schwarzian_analytic(m, x) >= 0.0) s_negative = false;
        } catch (const std::domain_error&) {
            s_negative = false;
        }
    }
    if (s_negative) {
        rep.v = verdict::unique;
        rep.note = "r-criterion satisfied with negative Schwarzian";
        return rep;
    }
    two_cycle_result full = iterate_two_cycle(m, 1000000);
    rep.iterations += full.iterations;
    if (full.status == cycle_status::converged_pair) {
        rep.v = verdict::non_unique;
        rep.two_cycle = full.cycle;
        rep.residuals.second = std::max(full.residuals.first, full.residuals.second);
    } else if (full.status == cycle_status::converged_fixed) {
        rep.v = verdict::unique;
    } else {
        rep.v = verdict::undetermined;
        rep.note = "iteration budget exhausted; Schwarzian sign indefinite";
    }
    return rep;
}

struct limit_probs {
    int delta = 0;
    std::vector<double> p;   // mass of "excluded with k included neighbors"
    double p_plus = 0.0;     // inclusion probability

    // The neighbor law conditioned on exclusion; equals induced_mu(theta, ., zeta).
    neighbor_distribution conditional_law() const {
        std::vector<double> cond(p.size());
        double total = 0.0;
        for (double v : p) total += v;
        for (std::size_t k = 0; k < p.size(); ++k) cond[k] = p[k] / total;
        return neighbor_distribution{delta, std::move(cond)};
    }
};

namespace detail {

// Occupancy law of the root from a neighbor ratio zeta_cur at the root's depth
// and zeta_prev one layer shallower: excluded masses theta_k C(D,k) zeta_cur^k,
// included mass lambda f^D(zeta_prev). The limit law passes the same ratio twice.
inline limit_probs occupancy_from(const model_spec& m, double zeta_prev, double zeta_cur) {
    const theta_vector& t = m.theta;
    auto coeffs = big_l_coeffs(t);
    limit_probs out;
    out.delta = t.delta;
    out.p.resize(coeffs.size());
    double fz = f_scalar(t, zeta_prev);
    double included = m.lambda * std::pow(fz, t.delta);
    double total = included;
    double pw = 1.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        out.p[k] = coeffs[k] * pw;
        total += out.p[k];
        pw *= zeta_cur;
    }
    if (std::isfinite(total) && total > 0.0) {
        for (double& v : out.p) v /= total;
        out.p_plus = included / total;
        return out;
    }
    // Overflow or underflow in the plain evaluation; renormalize in log space.
    std::vector<double> lt(coeffs.size() + 1);
    double lz = std::log(zeta_cur);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        lt[k] = std::log(coeffs[k]) + static_cast<double>(k) * lz;
    lt.back() = std::log(m.lambda) + t.delta * std::log(fz);
    double peak = *std::max_element(lt.begin(), lt.end());
    double acc = 0.0;
    for (double v : lt) acc += std::exp(v - peak);
    double log_total = peak + std::log(acc);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        out.p[k] = std::exp(lt[k] - log_total);
    out.p_plus = std::exp(lt.back() - log_total);
    return out;
}

}  // namespace detail

inline limit_probs limit_probabilities(const model_spec& m) {
    fixed_point_report rep = classify_uniqueness(m);
    if (rep.v != verdict::unique)
        throw contract_error(std::string("limit_probabilities: verdict is ") +
                             to_string(rep.v) + "; defined only in the uniqueness regime");
    return detail::occupancy_from(m, rep.diagonal_x, rep.diagonal_x);
}

}  // namespace mrf
