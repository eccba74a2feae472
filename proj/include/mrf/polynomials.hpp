// The occupancy generating polynomials behind the tree recursions:
//   f(x) = sum_k theta_{k+1} C(D-1,k) x^k / sum_k theta_k C(D-1,k) x^k
//   g(x) = 1 / sum_k theta_k C(D-1,k) x^k
//   L(z) = sum_i theta_i C(D,i) z^i
// plus multi-variable versions via elementary symmetric polynomials and
// log-sum-exp variants for large degree or widely spread theta. All
// coefficients are positive and arguments nonnegative, so Horner evaluation
// has no cancellation.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mrf/theta.hpp"

namespace mrf {

inline std::vector<double> f_num_coeffs(const theta_vector& t) {
    auto binom = binomial_row(t.delta - 1);
    std::vector<double> c(static_cast<std::size_t>(t.delta));
    for (int k = 0; k < t.delta; ++k)
        c[static_cast<std::size_t>(k)] = t.at(k + 1) * binom[static_cast<std::size_t>(k)];
    return c;
}

inline std::vector<double> f_den_coeffs(const theta_vector& t) {
    auto binom = binomial_row(t.delta - 1);
    std::vector<double> c(static_cast<std::size_t>(t.delta));
    for (int k = 0; k < t.delta; ++k)
        c[static_cast<std::size_t>(k)] = t.at(k) * binom[static_cast<std::size_t>(k)];
    return c;
}

inline std::vector<double> big_l_coeffs(const theta_vector& t) {
    auto binom = binomial_row(t.delta);
    std::vector<double> c(static_cast<std::size_t>(t.delta) + 1);
    for (int k = 0; k <= t.delta; ++k)
        c[static_cast<std::size_t>(k)] = t.at(k) * binom[static_cast<std::size_t>(k)];
    return c;
}

inline double poly_eval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

// Value and first three derivatives in one synthetic-division pass.
struct poly_jet {
    double v = 0, d1 = 0, d2 = 0, d3 = 0;
};

inline poly_jet poly_eval_jet(const std::vector<double>& c, double x) {
    double d0 = 0, d1 = 0, d2 = 0, d3 = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        d3 = d3 * x + d2;
        d2 = d2 * x + d1;
        d1 = d1 * x + d0;
        d0 = d0 * x + c[i];
    }
    return poly_jet{d0, d1, 2.0 * d2, 6.0 * d3};
}

// log of sum_k c_k x^k for positive coefficients, stable for huge values.
inline double poly_eval_log(const std::vector<double>& c, double x) {
    if (x == 0.0) return std::log(c[0]);
    double lx = std::log(x);
    double m = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        terms[k] = std::log(c[k]) + static_cast<double>(k) * lx;
        m = std::max(m, terms[k]);
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

namespace detail {
inline void require_nonneg(double x, const char* who) {
    if (!(x >= 0.0)) throw std::domain_error(std::string(who) + ": negative argument rejected");
}
inline bool wants_log_space(const theta_vector& t) {
    return t.delta > 40 || theta_spread(t) > 1e8;
}
}  // namespace detail

inline double f_scalar(const theta_vector& t, double x) {
    detail::require_nonneg(x, "f_scalar");
    if (!detail::wants_log_space(t)) {
        double num = poly_eval(f_num_coeffs(t), x);
        double den = poly_eval(f_den_coeffs(t), x);
        if (std::isfinite(num) && std::isfinite(den) && den > 0.0) return num / den;
    }
    return std::exp(poly_eval_log(f_num_coeffs(t), x) - poly_eval_log(f_den_coeffs(t), x));
}

inline double g_scalar(const theta_vector& t, double x) {
    detail::require_nonneg(x, "g_scalar");
    if (!detail::wants_log_space(t)) {
        double den = poly_eval(f_den_coeffs(t), x);
        if (std::isfinite(den) && den > 0.0) return 1.0 / den;
    }
    return std::exp(-poly_eval_log(f_den_coeffs(t), x));
}

inline double big_L(const theta_vector& t, double z) {
    detail::require_nonneg(z, "big_L");
    if (!detail::wants_log_space(t)) {
        double v = poly_eval(big_l_coeffs(t), z);
        if (std::isfinite(v)) return v;
    }
    return std::exp(poly_eval_log(big_l_coeffs(t), z));
}

inline double big_L_log(const theta_vector& t, double z) {
    detail::require_nonneg(z, "big_L");
    return poly_eval_log(big_l_coeffs(t), z);
}

// Elementary symmetric polynomials sigma_0..sigma_n by the stable
// one-element-at-a-time recurrence.
inline std::vector<double> sym_polys(const std::vector<double>& x) {
    std::vector<double> e(x.size() + 1, 0.0);
    e[0] = 1.0;
    std::size_t used = 0;
    for (double xi : x) {
        ++used;
        for (std::size_t k = used; k >= 1; --k) e[k] += xi * e[k - 1];
    }
    return e;
}

namespace detail {
inline void check_multi_arg(const theta_vector& t, const std::vector<double>& x, const char* who) {
    if (static_cast<int>(x.size()) != t.delta - 1)
        throw std::invalid_argument(std::string(who) + ": expected delta-1 coordinates");
    for (double xi : x) require_nonneg(xi, who);
}
}  // namespace detail

inline double f_multi(const theta_vector& t, const std::vector<double>& x) {
    detail::check_multi_arg(t, x, "f_multi");
    auto sig = sym_polys(x);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < t.delta; ++k) {
        num += t.at(k + 1) * sig[static_cast<std::size_t>(k)];
        den += t.at(k) * sig[static_cast<std::size_t>(k)];
    }
    return num / den;
}

inline double g_multi(const theta_vector& t, const std::vector<double>& x) {
    detail::check_multi_arg(t, x, "g_multi");
    auto sig = sym_polys(x);
    double den = 0.0;
    for (int k = 0; k < t.delta; ++k) den += t.at(k) * sig[static_cast<std::size_t>(k)];
    return 1.0 / den;
}

// Analytic jets of f and g, used by the high-precision Schwarzian path and
// by derivative cross-checks. With N = f*D the quotient rule telescopes:
//   f' = (N' - f D')/D, f'' = (N'' - 2f'D' - f D'')/D, ...
struct func_jet {
    double v = 0, d1 = 0, d2 = 0, d3 = 0;
};

inline func_jet f_jet(const theta_vector& t, double x) {
    detail::require_nonneg(x, "f_jet");
    poly_jet n = poly_eval_jet(f_num_coeffs(t), x);
    poly_jet d = poly_eval_jet(f_den_coeffs(t), x);
    func_jet j;
    j.v = n.v / d.v;
    j.d1 = (n.d1 - j.v * d.d1) / d.v;
    j.d2 = (n.d2 - 2.0 * j.d1 * d.d1 - j.v * d.d2) / d.v;
    j.d3 = (n.d3 - 3.0 * j.d2 * d.d1 - 3.0 * j.d1 * d.d2 - j.v * d.d3) / d.v;
    return j;
}

inline func_jet g_jet(const theta_vector& t, double x) {
    detail::require_nonneg(x, "g_jet");
    poly_jet d = poly_eval_jet(f_den_coeffs(t), x);
    func_jet j;
    j.v = 1.0 / d.v;
    j.d1 = -j.v * d.d1 / d.v;
    j.d2 = -(2.0 * j.d1 * d.d1 + j.v * d.d2) / d.v;
    j.d3 = -(3.0 * j.d2 * d.d1 + 3.0 * j.d1 * d.d2 + j.v * d.d3) / d.v;
    return j;
}

}  // namespace mrf
