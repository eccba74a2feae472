// Ground-truth engines: exhaustive weighted independent-set enumeration on
// small graphs (double and exact-rational paths) and the depth-recursion DP
// for the rooted trees, both used to validate the analytic recursions and
// probability formulas against first principles.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "mrf/common.hpp"
#include "mrf/fixed_point.hpp"
#include "mrf/graph.hpp"
#include "mrf/model.hpp"
#include "mrf/recursion.hpp"
#include "mrf/theta.hpp"

namespace mrf {

using rational = boost::multiprecision::cpp_rational;

inline constexpr int kEnumerationBudget = 26;

namespace detail {

// Walk every independent set compatible with the clamps (-1 free, 0 forced
// excluded, 1 forced included), keeping per-node included-neighbor counts,
// and hand each complete assignment's weight to the visitor. The weight of a
// set multiplies lambda per included degree-delta node, theta_k per excluded
// degree-delta node with k included neighbors, and 1 for every other node.
template <typename Num, typename Visit>
void enumerate_sets(const std::vector<Num>& theta, const Num& lambda, int delta,
                    const finite_graph& g, const std::vector<int>& clamps,
                    Visit&& visit) {
    if (g.n > kEnumerationBudget)
        throw precondition_error("enumerate_sets: graph exceeds enumeration budget");
    if (!clamps.empty() && clamps.size() != static_cast<std::size_t>(g.n))
        throw precondition_error("enumerate_sets: clamp vector size mismatch");
    std::vector<int> incl(static_cast<std::size_t>(g.n), 0);
    std::vector<int> cnt(static_cast<std::size_t>(g.n), 0);

    std::function<void(int)> walk = [&](int v) {
        if (v == g.n) {
            Num w(1);
            for (int u = 0; u < g.n; ++u) {
                if (g.degree(u) != delta) continue;
                if (incl[static_cast<std::size_t>(u)])
                    w *= lambda;
                else
                    w *= theta[static_cast<std::size_t>(cnt[static_cast<std::size_t>(u)])];
            }
            visit(w, incl, cnt);
            return;
        }
        int clamp = clamps.empty() ? -1 : clamps[static_cast<std::size_t>(v)];
        if (clamp != 1) walk(v + 1);
        if (clamp != 0 && cnt[static_cast<std::size_t>(v)] == 0) {
            incl[static_cast<std::size_t>(v)] = 1;
            for (int u : g.adj[static_cast<std::size_t>(v)]) ++cnt[static_cast<std::size_t>(u)];
            walk(v + 1);
            for (int u : g.adj[static_cast<std::size_t>(v)]) --cnt[static_cast<std::size_t>(u)];
            incl[static_cast<std::size_t>(v)] = 0;
        }
    };
    walk(0);
}

inline std::vector<double> theta_values(const theta_vector& t) {
    std::vector<double> vals(static_cast<std::size_t>(t.delta) + 1);
    for (int k = 0; k <= t.delta; ++k) vals[static_cast<std::size_t>(k)] = t.at(k);
    return vals;
}

}  // namespace detail

struct weighted_count {
    double log_z = 0.0;
    double log_root_excluded = 0.0;   // mass restricted to node `root` excluded
    double log_root_included = 0.0;   // and included; -inf when empty
    long sets = 0;                    // number of compatible independent sets
};

inline weighted_count enumerate_Z(const model_spec& m, const finite_graph& g,
                                  const std::vector<int>& clamps = {}, int root = 0) {
    double z = 0.0, z_out = 0.0, z_in = 0.0;
    long sets = 0;
    detail::enumerate_sets<double>(
        detail::theta_values(m.theta), m.lambda, m.theta.delta, g, clamps,
        [&](double w, const std::vector<int>& incl, const std::vector<int>&) {
            z += w;
            ++sets;
            (incl[static_cast<std::size_t>(root)] ? z_in : z_out) += w;
        });
    weighted_count out;
    out.log_z = std::log(z);
    out.log_root_excluded = std::log(z_out);
    out.log_root_included = std::log(z_in);
    out.sets = sets;
    return out;
}

// Exact-rational totals: the whole sum plus the restriction to each state of
// an ordered node pair, which is what the depth recursion's Z(i,j,B) means
// when the pair is (root, its child).
struct pair_count_exact {
    rational z = 0, z00 = 0, z01 = 0, z10 = 0, z11 = 0;
};

inline pair_count_exact enumerate_pair_exact(int delta,
                                             const std::vector<rational>& theta,
                                             const rational& lambda,
                                             const finite_graph& g, int v0, int v1,
                                             const std::vector<int>& clamps = {}) {
    if (theta.size() != static_cast<std::size_t>(delta) + 1)
        throw precondition_error("enumerate_pair_exact: theta size mismatch");
    pair_count_exact out;
    detail::enumerate_sets<rational>(
        theta, lambda, delta, g, clamps,
        [&](const rational& w, const std::vector<int>& incl, const std::vector<int>&) {
            out.z += w;
            int a = incl[static_cast<std::size_t>(v0)];
            int b = incl[static_cast<std::size_t>(v1)];
            (a ? (b ? out.z11 : out.z10) : (b ? out.z01 : out.z00)) += w;
        });
    return out;
}

// Depth recursion for the rooted tree whose root has one child: the three
// partition masses keyed by the (root, child) states, advanced one level at
// a time in log space so deep trees cannot overflow.
struct dp_report {
    int depth = 0;
    boundary_kind boundary = boundary_kind::free_boundary;
    double log_z00 = 0.0;
    double log_z01 = 0.0;
    double log_z10 = 0.0;
    double zeta = 0.0;    // Z(0,1)/Z(0,0), the ratio driving the recursion
};

namespace detail {

struct dp_logs {
    double z00 = 0.0, z01 = 0.0, z10 = 0.0;
};

inline dp_logs dp_base(const model_spec& m, boundary_kind b, int* base_depth) {
    const theta_vector& t = m.theta;
    int dm1 = t.delta - 1;
    dp_logs base;
    switch (b) {
        case boundary_kind::free_boundary:
            // Depth-1 tree: two nodes of degree one, every weight is 1.
            *base_depth = 1;
            break;
        case boundary_kind::all_included:
            // Depth 3, bottom layer included, next layer excluded.
            *base_depth = 3;
            base.z00 = std::log(t.at(0)) + dm1 * std::log(t.at(dm1));
            base.z01 = std::log(m.lambda) + dm1 * std::log(t.at(t.delta));
            base.z10 = std::log(t.at(1)) + dm1 * std::log(t.at(dm1));
            break;
        case boundary_kind::all_excluded:
            // Depth 3, both bottom layers excluded.
            *base_depth = 3;
            base.z00 = (t.delta) * std::log(t.at(0));
            base.z01 = std::log(m.lambda) + dm1 * std::log(t.at(1));
            base.z10 = std::log(t.at(1)) + dm1 * std::log(t.at(0));
            break;
    }
    return base;
}

inline dp_logs dp_step(const model_spec& m, const dp_logs& prev) {
    const theta_vector& t = m.theta;
    int dm1 = t.delta - 1;
    auto binom = binomial_row(dm1);
    std::vector<double> terms0, terms1;
    terms0.reserve(static_cast<std::size_t>(dm1) + 1);
    terms1.reserve(static_cast<std::size_t>(dm1) + 1);
    for (int k = 0; k <= dm1; ++k) {
        double shared = std::log(binom[static_cast<std::size_t>(k)]) +
                        k * prev.z01 + (dm1 - k) * prev.z00;
        terms0.push_back(std::log(t.at(k)) + shared);
        terms1.push_back(std::log(t.at(k + 1)) + shared);
    }
    auto logsum = [](const std::vector<double>& v) {
        double peak = v[0];
        for (double x : v) peak = std::max(peak, x);
        double acc = 0.0;
        for (double x : v) acc += std::exp(x - peak);
        return peak + std::log(acc);
    };
    dp_logs next;
    next.z00 = logsum(terms0);
    next.z10 = logsum(terms1);
    next.z01 = std::log(m.lambda) + dm1 * prev.z10;
    return next;
}

}  // namespace detail

inline dp_report dp_partition(const model_spec& m, int d, boundary_kind b) {
    if (d < 3) throw precondition_error("dp_partition: depth must be at least 3");
    int at = 0;
    detail::dp_logs cur = detail::dp_base(m, b, &at);
    for (; at < d; ++at) cur = detail::dp_step(m, cur);
    dp_report rep;
    rep.depth = d;
    rep.boundary = b;
    rep.log_z00 = cur.z00;
    rep.log_z01 = cur.z01;
    rep.log_z10 = cur.z10;
    rep.zeta = std::exp(cur.z01 - cur.z00);
    return rep;
}

// Exact-rational twin of dp_partition for bit-exact comparisons against
// enumeration on small instances.
struct dp_exact_values {
    rational z00 = 0, z01 = 0, z10 = 0;
};

inline dp_exact_values dp_partition_exact(int delta,
                                          const std::vector<rational>& theta,
                                          const rational& lambda, int d,
                                          boundary_kind b) {
    if (delta < 3 || delta > kMaxExactDelta)
        throw precondition_error("dp_partition_exact: degree out of range");
    if (theta.size() != static_cast<std::size_t>(delta) + 1)
        throw precondition_error("dp_partition_exact: theta size mismatch");
    if (d < 3) throw precondition_error("dp_partition_exact: depth must be at least 3");
    int dm1 = delta - 1;
    auto ipow = [](rational base, int e) {
        rational acc = 1;
        for (int i = 0; i < e; ++i) acc *= base;
        return acc;
    };
    dp_exact_values cur;
    int at = 0;
    switch (b) {
        case boundary_kind::free_boundary:
            cur.z00 = cur.z01 = cur.z10 = 1;
            at = 1;
            break;
        case boundary_kind::all_included:
            cur.z00 = theta[0] * ipow(theta[static_cast<std::size_t>(dm1)], dm1);
            cur.z01 = lambda * ipow(theta[static_cast<std::size_t>(delta)], dm1);
            cur.z10 = theta[1] * ipow(theta[static_cast<std::size_t>(dm1)], dm1);
            at = 3;
            break;
        case boundary_kind::all_excluded:
            cur.z00 = ipow(theta[0], delta);
            cur.z01 = lambda * ipow(theta[1], dm1);
            cur.z10 = theta[1] * ipow(theta[0], dm1);
            at = 3;
            break;
    }
    for (; at < d; ++at) {
        dp_exact_values next;
        for (int k = 0; k <= dm1; ++k) {
            rational shared = rational(binomial_exact(dm1, k)) *
                              ipow(cur.z01, k) * ipow(cur.z00, dm1 - k);
            next.z00 += theta[static_cast<std::size_t>(k)] * shared;
            next.z10 += theta[static_cast<std::size_t>(k) + 1] * shared;
        }
        next.z01 = lambda * ipow(cur.z10, dm1);
        cur = next;
    }
    return cur;
}

// Root law of the full depth-d tree (root of degree delta) under a uniform
// boundary, from the DP masses of its delta identical subtrees:
// p_k ~ theta_k C(D,k) Z01^k Z00^{D-k} and p_+ ~ lambda Z10^D, normalized.
inline limit_probs conditional_pk_exact(const model_spec& m, int d, boundary_kind b) {
    dp_report z = dp_partition(m, d, b);
    const theta_vector& t = m.theta;
    auto binom = binomial_row(t.delta);
    std::vector<double> lg(static_cast<std::size_t>(t.delta) + 2);
    for (int k = 0; k <= t.delta; ++k)
        lg[static_cast<std::size_t>(k)] = std::log(t.at(k)) +
                                          std::log(binom[static_cast<std::size_t>(k)]) +
                                          k * z.log_z01 + (t.delta - k) * z.log_z00;
    lg.back() = std::log(m.lambda) + t.delta * z.log_z10;
    double peak = lg[0];
    for (double x : lg) peak = std::max(peak, x);
    double acc = 0.0;
    for (double x : lg) acc += std::exp(x - peak);
    double log_total = peak + std::log(acc);
    limit_probs out;
    out.delta = t.delta;
    out.p.resize(static_cast<std::size_t>(t.delta) + 1);
    for (int k = 0; k <= t.delta; ++k)
        out.p[static_cast<std::size_t>(k)] = std::exp(lg[static_cast<std::size_t>(k)] - log_total);
    out.p_plus = std::exp(lg.back() - log_total);
    return out;
}

// Exact stationary law on a small graph: P(excluded with k included
// neighbors) averaged over the degree-delta nodes, plus P(included).
inline limit_probs small_graph_neighbor_law(const model_spec& m, const finite_graph& g) {
    int watched = 0;
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) == m.theta.delta) ++watched;
    if (watched == 0)
        throw precondition_error("small_graph_neighbor_law: no degree-delta node");

    std::vector<double> acc(static_cast<std::size_t>(m.theta.delta) + 1, 0.0);
    double acc_plus = 0.0, z = 0.0;
    detail::enumerate_sets<double>(
        detail::theta_values(m.theta), m.lambda, m.theta.delta, g, {},
        [&](double w, const std::vector<int>& incl, const std::vector<int>& cnt) {
            z += w;
            for (int v = 0; v < g.n; ++v) {
                if (g.degree(v) != m.theta.delta) continue;
                if (incl[static_cast<std::size_t>(v)])
                    acc_plus += w;
                else
                    acc[static_cast<std::size_t>(cnt[static_cast<std::size_t>(v)])] += w;
            }
        });
    limit_probs out;
    out.delta = m.theta.delta;
    out.p.resize(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) out.p[k] = acc[k] / (z * watched);
    out.p_plus = acc_plus / (z * watched);
    return out;
}

}  // namespace mrf
