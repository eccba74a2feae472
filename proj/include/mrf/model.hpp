// Model specification (theta, lambda) and neighbor-count distributions,
// including the induced occupancy law mu(k) ~ c * theta_k C(D,k) x^k and its
// reverse ultra log-concavity predicate.
#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mrf/polynomials.hpp"
#include "mrf/theta.hpp"

namespace mrf {

struct model_spec {
    theta_vector theta;
    double lambda = 0.0;
};

inline model_spec make_model(theta_vector theta, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("model: lambda must be strictly positive");
    return model_spec{std::move(theta), lambda};
}

// Right endpoint of the solution search interval: every solution coordinate
// of the two-equation system lies in [0, lambda * (th_D/th_{D-1})^{D-1} / th_0].
inline double search_upper(const model_spec& m) {
    const theta_vector& t = m.theta;
    double ratio = t.at(t.delta) / t.at(t.delta - 1);
    return m.lambda / t.at(0) * std::pow(ratio, t.delta - 1);
}

struct neighbor_distribution {
    int delta = 0;
    std::vector<double> probs;  // index k = number of included neighbors

    double at(int k) const { return probs[static_cast<std::size_t>(k)]; }
};

inline neighbor_distribution make_neighbor_distribution(int delta, std::vector<double> probs) {
    if (static_cast<int>(probs.size()) != delta + 1)
        throw std::invalid_argument("neighbor_distribution: expected delta+1 entries");
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0 || !std::isfinite(p))
            throw std::invalid_argument("neighbor_distribution: entries must be nonnegative");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("neighbor_distribution: probabilities must sum to 1");
    return neighbor_distribution{delta, std::move(probs)};
}

inline neighbor_distribution induced_mu(const theta_vector& t, double c, double x) {
    if (!(c > 0.0) || !(x > 0.0))
        throw std::invalid_argument("induced_mu: c and x must be strictly positive");
    auto coeffs = big_l_coeffs(t);
    std::vector<double> mu(coeffs.size());
    double pw = 1.0, sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        mu[k] = c * coeffs[k] * pw;
        sum += mu[k];
        pw *= x;
    }
    for (double& v : mu) v /= sum;
    return neighbor_distribution{t.delta, std::move(mu)};
}

// mu is reverse ultra log-concave iff {mu(k)/C(D,k)} is log-convex, which for
// the induced law holds exactly when theta itself is log-convex.
inline bool is_reverse_ultra_log_concave(const neighbor_distribution& mu) {
    auto binom = binomial_row(mu.delta);
    std::vector<double> ratio(mu.probs.size());
    for (std::size_t k = 0; k < mu.probs.size(); ++k) {
        if (!(mu.probs[k] > 0.0))
            throw std::invalid_argument("is_reverse_ultra_log_concave: zero entries rejected");
        ratio[k] = mu.probs[k] / binom[k];
    }
    for (std::size_t i = 1; i + 1 < ratio.size(); ++i) {
        if (ratio[i - 1] * ratio[i + 1] < ratio[i] * ratio[i] * (1.0 - 1e-12)) return false;
    }
    return true;
}

}  // namespace mrf
