// Explicit critical-activity bounds and numerical bracketing of the
// uniqueness transition: psi, lambda_lower, lambda_upper, the classifier-
// driven bracket scan, and the robustness inequalities they satisfy.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mrf/common.hpp"
#include "mrf/fixed_point.hpp"
#include "mrf/model.hpp"
#include "mrf/theta.hpp"

namespace mrf {

inline double psi(const theta_vector& t) {
    double m = 0.0;
    for (int k = 0; k <= t.delta - 2; ++k)
        m = std::max(m, (t.delta - (k + 1)) * t.at(k + 1) / t.at(k));
    return m;
}

inline double lambda_lower(const theta_vector& t) {
    double top = t.at(t.delta) / t.at(t.delta - 1);
    double inner = top + (t.delta - 1) * (top - t.at(1) / t.at(0));
    return 1.0 / (2.0 * psi(t) / t.at(0) * std::pow(top, t.delta - 2) * inner);
}

inline double lambda_upper(const theta_vector& t) {
    double top = t.at(t.delta) / t.at(t.delta - 1);
    double base = t.at(0) / t.at(1);
    return 3.0 * t.at(0) / t.delta * std::pow(base, t.delta) *
           std::exp(3.0 * top * base);
}

// Critical activity of the all-ones model: (D-1)^{D-1} / (D-2)^D. The formula
// is plain arithmetic, so any degree is fine; evaluate large degrees in log
// space to dodge overflow of the separate powers.
inline double hardcore_critical(int delta) {
    if (delta < 3)
        throw std::invalid_argument("hardcore_critical: degree out of range");
    if (delta <= 40)
        return std::pow(delta - 1.0, delta - 1) / std::pow(delta - 2.0, delta);
    return std::exp((delta - 1) * std::log(delta - 1.0) - delta * std::log(delta - 2.0));
}

struct phase_bracket {
    double lambda_lower_bound = 0.0;
    double lambda_upper_bound = 0.0;
    double last_unique = 0.0;
    double first_nonunique = 0.0;
    std::vector<std::pair<double, double>> sign_changes;
    std::vector<std::pair<double, verdict>> grid;
    bool partial = false;    // some grid classification came back Undetermined
};

inline int default_jobs() {
    if (const char* env = std::getenv("MRF_PHASE_JOBS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Scan a geometric grid over [lambda_lower, lambda_upper], classify each
// point, and refine every Unique/NonUnique flip by bisection to width tol.
// All flips are recorded; monotonicity in lambda is not assumed.
inline phase_bracket critical_bracket(const theta_vector& t, double tol,
                                      int jobs = default_jobs()) {
    if (!is_log_convex(t))
        throw precondition_error("critical_bracket: theta must be log-convex");
    if (!(tol > 0.0))
        throw precondition_error("critical_bracket: tolerance must be positive");

    phase_bracket out;
    out.lambda_lower_bound = lambda_lower(t);
    out.lambda_upper_bound = lambda_upper(t);

    const int n = 64;
    double lo = out.lambda_lower_bound, hi = out.lambda_upper_bound;
    double ratio = std::pow(hi / lo, 1.0 / (n - 1));
    std::vector<double> lams(n);
    for (int i = 0; i < n; ++i) lams[i] = lo * std::pow(ratio, i);
    lams.back() = hi;

    std::vector<verdict> verdicts(n, verdict::undetermined);
    auto classify = [&](double lam) { return classify_uniqueness(make_model(t, lam)).v; };
    int workers = std::max(1, std::min(jobs, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) verdicts[i] = classify(lams[i]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int i = w; i < n; i += workers) verdicts[i] = classify(lams[i]);
            });
        }
        for (auto& th : pool) th.join();
    }

    out.grid.reserve(n);
    for (int i = 0; i < n; ++i) {
        out.grid.emplace_back(lams[i], verdicts[i]);
        if (verdicts[i] == verdict::undetermined) out.partial = true;
    }

    std::vector<std::pair<double, verdict>> evals(out.grid);
    for (int i = 0; i + 1 < n; ++i) {
        verdict va = verdicts[i], vb = verdicts[i + 1];
        bool flip = (va == verdict::unique && vb == verdict::non_unique) ||
                    (va == verdict::non_unique && vb == verdict::unique);
        if (!flip) continue;
        double a = lams[i], b = lams[i + 1];
        while (b - a > tol) {
            double mid = 0.5 * (a + b);
            verdict vm = classify(mid);
            evals.emplace_back(mid, vm);
            if (vm == verdict::undetermined) {
                out.partial = true;
                break;
            }
            if (vm == va)
                a = mid;
            else
                b = mid;
        }
        out.sign_changes.emplace_back(a, b);
    }

    // last_unique is the largest activity classified Unique anywhere; the
    // bracket partner is the smallest NonUnique activity above it, so the
    // pair straddles the outermost transition even if verdicts flip more
    // than once along the grid.
    double last_u = -1.0;
    for (const auto& [lam, v] : evals)
        if (v == verdict::unique) last_u = std::max(last_u, lam);
    double first_n = -1.0;
    for (const auto& [lam, v] : evals)
        if (v == verdict::non_unique && lam > last_u)
            first_n = (first_n < 0.0) ? lam : std::min(first_n, lam);
    out.last_unique = last_u;
    out.first_nonunique = first_n;
    return out;
}

// Constant-factor robustness of the bounds near theta = 1: with both extreme
// ratios at most 1 + c/D, lambda_lower and lambda_upper match theta_0/D up to
// explicit constants.
inline bool robustness_check(const theta_vector& t, double c_param) {
    int d = t.delta;
    double worst = std::max(t.at(d) / t.at(d - 1), t.at(0) / t.at(1));
    if (!(c_param >= 0.0 && c_param <= d))
        throw precondition_error("robustness_check: c must lie in [0, delta]");
    if (!(worst <= 1.0 + c_param / d))
        throw precondition_error("robustness_check: theta ratios exceed 1 + c/delta");
    double scale = t.at(0) / d;
    bool lower_ok =
        lambda_lower(t) >= scale / (2.0 * std::exp(c_param) * (1.0 + 5.0 * c_param));
    bool upper_ok = lambda_upper(t) <= 3.0 * std::exp(12.0 + c_param) * scale;
    return lower_ok && upper_ok;
}

// At lambda = lambda_upper the diagonal root is pinned away from zero.
inline bool verify1_check(const theta_vector& t) {
    if (!is_log_convex(t))
        throw precondition_error("verify1_check: theta must be log-convex");
    model_spec m = make_model(t, lambda_upper(t));
    double x_star = solve_diagonal(m).x;
    return x_star >= 3.0 / t.delta * (t.at(0) / t.at(1)) - 1e-9;
}

}  // namespace mrf
