// Single-site heat-bath dynamics on finite regular graphs, the empirical
// included-neighbor law of excluded nodes with batch-means errors, and the
// log-linear shape fit that checks the sampled law against c theta_k C(D,k) x^k.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mrf/common.hpp"
#include "mrf/graph.hpp"
#include "mrf/model.hpp"
#include "mrf/rng.hpp"
#include "mrf/theta.hpp"

namespace mrf {

struct chain_state {
    std::vector<std::uint8_t> occupancy;
    std::vector<int> counts;      // included neighbors per node, kept incrementally
    std::uint64_t seed = 0;
    long sweeps = 0;
    rng_stream rng{0};
    std::vector<int> order;       // scratch permutation reused across sweeps
};

inline chain_state make_chain(const regular_graph& g, std::uint64_t seed) {
    chain_state s;
    s.occupancy.assign(static_cast<std::size_t>(g.n), 0);
    s.counts.assign(static_cast<std::size_t>(g.n), 0);
    s.seed = seed;
    s.rng = rng_stream(seed);
    s.order.resize(static_cast<std::size_t>(g.n));
    std::iota(s.order.begin(), s.order.end(), 0);
    return s;
}

// Recount the cache and the independence constraint from scratch.
inline bool chain_consistent(const regular_graph& g, const chain_state& s) {
    for (int v = 0; v < g.n; ++v) {
        int c = 0;
        const int* nb = g.neighbors(v);
        for (int k = 0; k < g.delta; ++k) c += s.occupancy[static_cast<std::size_t>(nb[k])];
        if (c != s.counts[static_cast<std::size_t>(v)]) return false;
        if (s.occupancy[static_cast<std::size_t>(v)] && c > 0) return false;
    }
    return true;
}

// One pass over the nodes in fresh random order. A node whose neighbors are
// all excluded is resampled from the conditional law: included with
// probability r/(1+r), r = (lambda/theta_0) prod_u theta_{m_u+1}/theta_{m_u}
// over its neighbors' own counts m_u (not counting the node itself). A node
// with an included neighbor is pinned excluded. Stationarity with respect to
// the graph weight follows from detailed balance of each resampling.
inline void heat_bath_sweep(const model_spec& m, const regular_graph& g, chain_state& s) {
    const theta_vector& t = m.theta;
    std::vector<double> ratio(static_cast<std::size_t>(g.delta));
    for (int k = 0; k < g.delta; ++k) ratio[static_cast<std::size_t>(k)] = t.at(k + 1) / t.at(k);
    const double base = m.lambda / t.at(0);

    s.rng.shuffle(s.order);
    for (int v : s.order) {
        const std::size_t sv = static_cast<std::size_t>(v);
        const int* nb = g.neighbors(v);
        const int self = s.occupancy[sv];
        if (!self && s.counts[sv] > 0) continue;

        double r = base;
        for (int k = 0; k < g.delta; ++k) {
            int mu = s.counts[static_cast<std::size_t>(nb[k])] - self;
            r *= ratio[static_cast<std::size_t>(mu)];
        }
        const int want = s.rng.uniform() < r / (1.0 + r) ? 1 : 0;
        if (want != self) {
            s.occupancy[sv] = static_cast<std::uint8_t>(want);
            const int d = want ? 1 : -1;
            for (int k = 0; k < g.delta; ++k)
                s.counts[static_cast<std::size_t>(nb[k])] += d;
        }
    }
    ++s.sweeps;
#ifndef NDEBUG
    if (!chain_consistent(g, s))
        throw contract_error("heat_bath_sweep: cache or independence violated");
#endif
}

struct mcmc_estimate {
    neighbor_distribution law;        // law of the count, conditioned on excluded
    std::vector<double> law_se;       // batch-means standard error per entry
    double inclusion = 0.0;           // average included fraction of the graph
    double inclusion_se = 0.0;
    long samples = 0;
    int chains = 0;
};

inline constexpr long kThinSweeps = 10;
inline constexpr long kDefaultBurnIn = 100000;
inline constexpr long kCacheAuditPeriod = 10000;

namespace detail {

// Standard error from batch means: split the series into sqrt-many batches
// and take the spread of the batch averages.
inline double spread_of(const std::vector<double>& means) {
    if (means.size() < 2) return 0.0;
    double grand = 0.0;
    for (double x : means) grand += x;
    grand /= static_cast<double>(means.size());
    double var = 0.0;
    for (double x : means) var += (x - grand) * (x - grand);
    var /= static_cast<double>(means.size() - 1);
    return std::sqrt(var / static_cast<double>(means.size()));
}

inline double batch_means_se(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 4) return 0.0;
    std::size_t batches = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    std::size_t len = n / batches;
    std::vector<double> means;
    means.reserve(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        double acc = 0.0;
        for (std::size_t i = b * len; i < (b + 1) * len; ++i) acc += series[i];
        means.push_back(acc / static_cast<double>(len));
    }
    return spread_of(means);
}

// Batch-means error of a pooled ratio: each batch contributes its own
// numerator-over-denominator estimate.
inline double batch_ratio_se(const std::vector<long>& num, const std::vector<long>& den) {
    const std::size_t n = num.size();
    if (n < 4) return 0.0;
    std::size_t batches = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    std::size_t len = n / batches;
    std::vector<double> means;
    means.reserve(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        long top = 0, bottom = 0;
        for (std::size_t i = b * len; i < (b + 1) * len; ++i) {
            top += num[i];
            bottom += den[i];
        }
        if (bottom > 0) means.push_back(static_cast<double>(top) / static_cast<double>(bottom));
    }
    return spread_of(means);
}

}  // namespace detail

// Run `chains` independent chains, each for `sweeps` sweeps with the first
// `burn_in` discarded, sampling every tenth sweep after burn-in. All
// (sample, excluded node) pairs are pooled, so the law is the total count
// histogram over the total number of excluded sightings; per-sample
// normalization would bias small graphs, where the excluded count swings.
// Batch-means errors use the same pooled ratio per batch. The count cache is
// audited against a full recount every ten thousand sweeps.
inline mcmc_estimate estimate_neighbor_law(const model_spec& m, const regular_graph& g,
                                           long sweeps, long burn_in, int chains,
                                           std::uint64_t seed) {
    if (m.theta.delta != g.delta)
        throw precondition_error("estimate_neighbor_law: model degree differs from graph");
    if (sweeps <= burn_in)
        throw precondition_error("estimate_neighbor_law: need sweeps > burn_in");
    if (chains < 1)
        throw precondition_error("estimate_neighbor_law: need at least one chain");

    const std::size_t bins = static_cast<std::size_t>(g.delta) + 1;
    std::vector<std::vector<long>> hists(bins);   // per-sample bin counts
    std::vector<long> excludeds;                  // per-sample excluded totals
    std::vector<double> incl_series;

    for (int c = 0; c < chains; ++c) {
        chain_state s = make_chain(g, derive_seed(seed, static_cast<std::uint64_t>(c)));
        while (s.sweeps < sweeps) {
            heat_bath_sweep(m, g, s);
            if (s.sweeps % kCacheAuditPeriod == 0 && !chain_consistent(g, s))
                throw contract_error("estimate_neighbor_law: count cache drifted");
            if (s.sweeps <= burn_in || s.sweeps % kThinSweeps != 0) continue;

            std::vector<long> hist(bins, 0);
            long excluded = 0, included = 0;
            for (int v = 0; v < g.n; ++v) {
                if (s.occupancy[static_cast<std::size_t>(v)]) {
                    ++included;
                } else {
                    ++excluded;
                    ++hist[static_cast<std::size_t>(s.counts[static_cast<std::size_t>(v)])];
                }
            }
            for (std::size_t k = 0; k < bins; ++k) hists[k].push_back(hist[k]);
            excludeds.push_back(excluded);
            incl_series.push_back(static_cast<double>(included) / static_cast<double>(g.n));
        }
    }

    mcmc_estimate out;
    out.chains = chains;
    out.samples = static_cast<long>(incl_series.size());
    out.law.delta = g.delta;
    out.law.probs.resize(bins);
    out.law_se.resize(bins);
    long total_excluded = 0;
    for (long e : excludeds) total_excluded += e;
    for (std::size_t k = 0; k < bins; ++k) {
        long total = 0;
        for (long h : hists[k]) total += h;
        out.law.probs[k] = static_cast<double>(total) / static_cast<double>(total_excluded);
        out.law_se[k] = detail::batch_ratio_se(hists[k], excludeds);
    }
    double acc = 0.0;
    for (double x : incl_series) acc += x;
    out.inclusion = acc / static_cast<double>(incl_series.size());
    out.inclusion_se = detail::batch_means_se(incl_series);
    return out;
}

struct mu_fit {
    double c = 0.0;
    double x = 0.0;
    double residual = 0.0;        // root-mean-square log residual over fitted points
    std::vector<int> masked;      // bins skipped because the empirical mass was zero
};

// Least squares of log mu(k) - log(theta_k C(D,k)) against log c + k log x.
// Points are weighted by their empirical mass: the variance of an empirical
// log mass scales like the inverse of the count behind it, so an unweighted
// fit would let the emptiest bin's sampling noise swamp the residual. A
// perfect induced law sits exactly on the line under any weighting, so the
// residual still measures distance from the predicted shape.
inline mu_fit fit_mu_shape(const neighbor_distribution& empirical, const theta_vector& t) {
    if (empirical.delta != t.delta)
        throw precondition_error("fit_mu_shape: degree mismatch");
    auto binom = binomial_row(t.delta);
    std::vector<double> ks, ys, ws;
    mu_fit out;
    for (int k = 0; k <= t.delta; ++k) {
        double weight = t.at(k) * binom[static_cast<std::size_t>(k)];
        double mass = empirical.probs[static_cast<std::size_t>(k)];
        if (weight <= 0.0) continue;
        if (mass <= 0.0) {
            out.masked.push_back(k);
            continue;
        }
        ks.push_back(static_cast<double>(k));
        ys.push_back(std::log(mass) - std::log(weight));
        ws.push_back(mass);
    }
    if (ks.size() < 2)
        throw precondition_error("fit_mu_shape: fewer than two positive bins");

    double sw = 0.0, sk = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        sw += ws[i];
        sk += ws[i] * ks[i];
        sy += ws[i] * ys[i];
    }
    const double kbar = sk / sw, ybar = sy / sw;
    double skk = 0.0, sky = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        skk += ws[i] * (ks[i] - kbar) * (ks[i] - kbar);
        sky += ws[i] * (ks[i] - kbar) * (ys[i] - ybar);
    }
    const double slope = sky / skk;
    const double intercept = ybar - slope * kbar;
    double ss = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        double r = ys[i] - (intercept + slope * ks[i]);
        ss += ws[i] * r * r;
    }
    out.c = std::exp(intercept);
    out.x = std::exp(slope);
    out.residual = std::sqrt(ss / sw);
    return out;
}

inline double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw precondition_error("tv_distance: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
    return 0.5 * acc;
}

inline double tv_distance(const neighbor_distribution& a, const neighbor_distribution& b) {
    return tv_distance(a.probs, b.probs);
}

}  // namespace mrf
