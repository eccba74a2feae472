#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <mrf/fixed_point.hpp>
#include <mrf/recursion.hpp>
#include <mrf/rng.hpp>

#include "test_util.hpp"

using namespace mrf;
using mrf_test::random_log_convex_theta;

namespace {

model_spec ones_model(int delta, double lambda) {
    return make_model(all_ones_theta(delta), lambda);
}

}  // namespace

TEST_CASE("bounding sequence seeds and shape") {
    auto m = make_model(make_theta(4, {1.0, 0.9, 1.1, 1.6, 3.0}), 0.7);
    depth_sequences s = bounding_sequences(m, 50);
    REQUIRE(s.start_depth == 5);
    REQUIRE(s.lower.size() == s.upper.size());
    REQUIRE(s.lower[0] == 0.0);
    REQUIRE(s.lower[1] == 0.0);
    REQUIRE(s.upper[0] == Catch::Approx(search_upper(m)).epsilon(1e-15));
    REQUIRE(s.upper[1] == s.upper[0]);

    // First recursed terms follow the displayed two-step updates.
    double lo7 = m.lambda * g_scalar(m.theta, s.upper[1]) *
                 std::pow(f_scalar(m.theta, s.lower[0]), m.theta.delta - 1);
    double up7 = m.lambda * g_scalar(m.theta, s.lower[1]) *
                 std::pow(f_scalar(m.theta, s.upper[0]), m.theta.delta - 1);
    REQUIRE(s.lower[2] == Catch::Approx(lo7).epsilon(1e-15));
    REQUIRE(s.upper[2] == Catch::Approx(up7).epsilon(1e-15));

    REQUIRE_THROWS_AS(bounding_sequences(m, 6), precondition_error);
}

TEST_CASE("bounding sequences share a limit in the uniqueness regime") {
    auto m = ones_model(3, 3.0);
    depth_sequences s = bounding_sequences(m, 500);
    double lo = s.lower.back();
    double up = s.upper.back();
    double x_star = solve_diagonal(m).x;
    REQUIRE(lo == Catch::Approx(x_star).margin(1e-10));
    REQUIRE(up == Catch::Approx(x_star).margin(1e-10));

    // The pair of limits satisfies the coupled system.
    double r1 = lo - m.lambda * g_scalar(m.theta, up) *
                         std::pow(f_scalar(m.theta, lo), m.theta.delta - 1);
    double r2 = up - m.lambda * g_scalar(m.theta, lo) *
                         std::pow(f_scalar(m.theta, up), m.theta.delta - 1);
    REQUIRE(std::fabs(r1) < 1e-9);
    REQUIRE(std::fabs(r2) < 1e-9);
}

TEST_CASE("bounding sequences split at the two-cycle above the threshold") {
    auto m = ones_model(3, 5.0);
    depth_sequences s = bounding_sequences(m, 2000);
    two_cycle_result tc = find_two_cycle(m);
    REQUIRE(tc.status == cycle_status::converged_pair);
    REQUIRE(s.lower.back() == Catch::Approx(tc.cycle->first).margin(1e-9));
    REQUIRE(s.upper.back() == Catch::Approx(tc.cycle->second).margin(1e-9));

    double r1 = s.lower.back() -
                m.lambda * g_scalar(m.theta, s.upper.back()) *
                    std::pow(f_scalar(m.theta, s.lower.back()), m.theta.delta - 1);
    REQUIRE(std::fabs(r1) < 1e-9);
}

TEST_CASE("extremal boundary sequence seeds") {
    auto unit = ones_model(3, 1.0);
    std::vector<double> seq = extremal_boundary_seq(unit, 40);
    REQUIRE(seq[0] == Catch::Approx(1.0).epsilon(1e-15));    // depth 3
    REQUIRE(seq[1] == Catch::Approx(0.25).epsilon(1e-15));   // depth 4

    auto m = make_model(make_theta(3, {2.0, 1.5, 1.3, 1.2}), 0.8);
    std::vector<double> s2 = extremal_boundary_seq(m, 40);
    double z3 = m.lambda / m.theta.at(0) *
                std::pow(m.theta.at(3) / m.theta.at(2), m.theta.delta - 1);
    double z4 = m.lambda * std::pow(m.theta.at(1) / m.theta.at(0), m.theta.delta - 1) *
                g_scalar(m.theta, z3);
    REQUIRE(s2[0] == Catch::Approx(z3).epsilon(1e-15));
    REQUIRE(s2[1] == Catch::Approx(z4).epsilon(1e-15));
    double z5 = m.lambda * g_scalar(m.theta, s2[1]) *
                std::pow(f_scalar(m.theta, s2[0]), m.theta.delta - 1);
    REQUIRE(s2[2] == Catch::Approx(z5).epsilon(1e-15));

    REQUIRE_THROWS_AS(extremal_boundary_seq(unit, 4), precondition_error);
}

TEST_CASE("extremal sequence converges below the threshold and splits above") {
    // Unique regime: the sequence approaches the diagonal root.
    auto low = ones_model(3, 3.0);
    std::vector<double> seq = extremal_boundary_seq(low, 2000);
    REQUIRE(std::fabs(seq.back() - solve_diagonal(low).x) < 1e-9);

    parity_limits pl = parity_gap(low);
    REQUIRE(pl.determined);
    REQUIRE(pl.gap < 1e-9);

    // Non-unique regime: parities settle on the two-cycle, odd on top.
    auto high = ones_model(3, 5.0);
    parity_limits ph = parity_gap(high);
    REQUIRE(ph.determined);
    REQUIRE(ph.gap > 0.1);
    REQUIRE(ph.odd_limit > ph.even_limit);
    two_cycle_result tc = find_two_cycle(high);
    REQUIRE(ph.even_limit == Catch::Approx(tc.cycle->first).margin(1e-9));
    REQUIRE(ph.odd_limit == Catch::Approx(tc.cycle->second).margin(1e-9));
    REQUIRE(classify_uniqueness(high).v == verdict::non_unique);

    REQUIRE_THROWS_AS(parity_gap(low, 99), precondition_error);
}

TEST_CASE("contraction below the lower activity bound") {
    auto slow = ones_model(3, 0.1);   // lambda_lower = 1/4
    contraction_report r = contraction_check(slow);
    REQUIRE(r.holds);
    REQUIRE(r.worst_ratio <= 0.4 + 1e-9);

    double lam_lo = lambda_lower(all_ones_theta(3));
    contraction_report r2 = contraction_check(ones_model(3, 0.9 * lam_lo));
    REQUIRE(r2.holds);
    REQUIRE(r2.worst_ratio <= 0.9 + 1e-9);

    REQUIRE_THROWS_AS(contraction_check(ones_model(3, 1.1 * lam_lo)), precondition_error);

    rng_stream rng(5150);
    for (int trial = 0; trial < 10; ++trial) {
        int delta = 3 + static_cast<int>(rng.below(4));
        auto t = random_log_convex_theta(delta, 10.0, rng);
        auto m = make_model(t, 0.5 * lambda_lower(t));
        contraction_report rc = contraction_check(m);
        REQUIRE(rc.holds);
        REQUIRE(rc.worst_ratio <= 0.5 + 1e-9);
    }
}

TEST_CASE("sandwich and monotonicity across random models") {
    rng_stream rng(6021);
    for (int trial = 0; trial < 200; ++trial) {
        int delta = 3 + static_cast<int>(rng.below(4));
        auto t = random_log_convex_theta(delta, 10.0, rng);
        double lambda = std::exp(rng.uniform(-2.5, 2.5));
        auto m = make_model(t, lambda);

        depth_sequences s = bounding_sequences(m, 400);
        std::vector<double> ex = extremal_boundary_seq(m, 400);

        double scale = std::max(1.0, s.upper[0]);
        for (std::size_t i = 1; i < s.lower.size(); ++i) {
            REQUIRE(s.lower[i] >= s.lower[i - 1] - 1e-12 * scale);
            REQUIRE(s.upper[i] <= s.upper[i - 1] + 1e-12 * scale);
            REQUIRE(s.lower[i] <= s.upper[i] + 1e-12 * scale);
        }
        // extremal index 0 is depth 3; bounding index 0 is depth 5.
        std::size_t common = std::min(s.lower.size(), ex.size() - 2);
        for (std::size_t i = 0; i < common; ++i) {
            REQUIRE(ex[i + 2] >= s.lower[i] - 1e-12 * scale);
            REQUIRE(ex[i + 2] <= s.upper[i] + 1e-12 * scale);
        }
    }
}

TEST_CASE("gap agreement with the uniqueness classifier") {
    rng_stream rng(9414);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        int delta = 3 + static_cast<int>(rng.below(4));
        auto t = random_log_convex_theta(delta, 10.0, rng);
        double lambda = std::exp(rng.uniform(-2.5, 2.5));
        auto m = make_model(t, lambda);
        fixed_point_report rep = classify_uniqueness(m);
        if (rep.v == verdict::undetermined) continue;
        depth_sequences s = bounding_sequences(m);
        double gap = s.upper.back() - s.lower.back();
        if (gap < 1e-9) {
            REQUIRE(rep.v == verdict::unique);
        } else if (gap > 1e-6) {
            REQUIRE(rep.v == verdict::non_unique);
        }
        ++checked;
    }
    REQUIRE(checked >= 25);
}

TEST_CASE("free boundary seeds") {
    auto unit = ones_model(3, 1.0);
    std::vector<double> seq = free_boundary_seq(unit, 30);
    REQUIRE(seq[0] == Catch::Approx(0.25).epsilon(1e-15));   // depth 2: lambda * g(1)
    REQUIRE(seq[1] == Catch::Approx(0.64).epsilon(1e-15));   // depth 3
    double z4 = unit.lambda * g_scalar(unit.theta, seq[1]) *
                std::pow(f_scalar(unit.theta, seq[0]), 2);
    REQUIRE(seq[2] == Catch::Approx(z4).epsilon(1e-15));
}

TEST_CASE("finite depth conditional laws") {
    auto m = ones_model(3, 1.0);

    for (boundary_kind b : {boundary_kind::all_included, boundary_kind::free_boundary}) {
        limit_probs law = finite_depth_conditional(m, 6, b);
        REQUIRE(law.delta == 3);
        REQUIRE(law.p.size() == 4);
        double mass = law.p_plus;
        for (double v : law.p) mass += v;
        REQUIRE(mass == Catch::Approx(1.0).epsilon(1e-12));
    }

    // Direct closed form at depth 6 under the all-included boundary.
    std::vector<double> seq = extremal_boundary_seq(m, 6);
    double z5 = seq[2], z6 = seq[3];
    double denom = m.lambda * std::pow(f_scalar(m.theta, z5), 3) +
                   big_L(m.theta, z6);
    limit_probs law = finite_depth_conditional(m, 6, boundary_kind::all_included);
    REQUIRE(law.p[0] == Catch::Approx(1.0 / denom).epsilon(1e-13));
    REQUIRE(law.p[1] == Catch::Approx(3.0 * z6 / denom).epsilon(1e-13));
    REQUIRE(law.p_plus ==
            Catch::Approx(m.lambda * std::pow(f_scalar(m.theta, z5), 3) / denom)
                .epsilon(1e-13));

    // Deep in the uniqueness regime the law approaches the limit law.
    limit_probs lim = limit_probabilities(m);
    limit_probs deep = finite_depth_conditional(m, 400, boundary_kind::all_included);
    limit_probs deep_free = finite_depth_conditional(m, 400, boundary_kind::free_boundary);
    for (std::size_t k = 0; k < lim.p.size(); ++k) {
        REQUIRE(deep.p[k] == Catch::Approx(lim.p[k]).margin(1e-9));
        REQUIRE(deep_free.p[k] == Catch::Approx(lim.p[k]).margin(1e-9));
    }
    REQUIRE(deep.p_plus == Catch::Approx(lim.p_plus).margin(1e-9));

    // Above the upper activity bound the inclusion mass keeps a parity gap:
    // odd depths stay below even depths.
    auto hot = ones_model(3, 25.0);
    for (int d : {100, 200, 300}) {
        double even = finite_depth_conditional(hot, d, boundary_kind::all_included).p_plus;
        double odd =
            finite_depth_conditional(hot, d + 1, boundary_kind::all_included).p_plus;
        REQUIRE(odd < even - 1e-3);
    }

    REQUIRE_THROWS_AS(finite_depth_conditional(m, 4, boundary_kind::all_included),
                      precondition_error);
    REQUIRE_THROWS_AS(finite_depth_conditional(m, 6, boundary_kind::all_excluded),
                      precondition_error);
    REQUIRE_THROWS_AS(boundary_from_string("diagonal"), precondition_error);
    REQUIRE(boundary_from_string("free") == boundary_kind::free_boundary);
    REQUIRE(to_string(boundary_kind::all_included) == "all_included");
}
