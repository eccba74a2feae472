// Seeded random model generators used by the built-in verification suite and
// the randomized test harnesses.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mrf/rng.hpp"
#include "mrf/theta.hpp"

namespace mrf {

// Log-convex theta with max/min ratio at most `spread`: sorted random slopes
// for log theta give nondecreasing increments, then rescale to the cap.
inline theta_vector random_log_convex_theta(int delta, double spread, rng_stream& rng) {
    std::vector<double> slopes(static_cast<std::size_t>(delta));
    for (auto& s : slopes) s = rng.uniform(-1.0, 1.0);
    std::sort(slopes.begin(), slopes.end());
    std::vector<double> logs(static_cast<std::size_t>(delta) + 1, 0.0);
    for (int k = 1; k <= delta; ++k)
        logs[static_cast<std::size_t>(k)] =
            logs[static_cast<std::size_t>(k - 1)] + slopes[static_cast<std::size_t>(k - 1)];
    double lo = logs[0], hi = logs[0];
    for (double v : logs) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double scale = (hi > lo) ? std::min(1.0, std::log(spread) / (hi - lo)) : 1.0;
    std::vector<double> vals(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) vals[i] = std::exp(scale * (logs[i] - lo));
    return make_theta(delta, std::move(vals));
}

inline theta_vector random_positive_theta(int delta, rng_stream& rng) {
    std::vector<double> vals(static_cast<std::size_t>(delta) + 1);
    for (auto& v : vals) v = std::exp(rng.uniform(-1.5, 1.5));
    return make_theta(delta, std::move(vals));
}

// Random convex direction with unit sup-norm: integrate nonnegative second
// differences from a random start and slope, then rescale.
inline std::vector<double> random_convex_direction(int delta, rng_stream& rng) {
    std::vector<double> c(static_cast<std::size_t>(delta) + 1);
    c[0] = rng.uniform(-1.0, 1.0);
    double slope = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 1; i < c.size(); ++i) {
        c[i] = c[i - 1] + slope;
        slope += rng.uniform(0.0, 1.0);
    }
    double sup = 0.0;
    for (double v : c) sup = std::max(sup, std::fabs(v));
    if (sup > 1.0)
        for (double& v : c) v /= sup;
    return c;
}

}  // namespace mrf
