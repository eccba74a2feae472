// Critical-activity bounds, the bracket scan, and the robustness checks.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "mrf/fixed_point.hpp"
#include "mrf/phase.hpp"
#include "mrf/theta.hpp"
#include "test_util.hpp"

using namespace mrf;
using mrf_test::random_log_convex_theta;

TEST_CASE("psi") {
    for (int delta : {3, 4, 5, 6, 10})
        REQUIRE(psi(all_ones_theta(delta)) == Catch::Approx(delta - 1.0));
    REQUIRE(psi(make_theta(3, {1, 1, 1, 2})) == Catch::Approx(2.0));

    // Scaling theta leaves every ratio, hence psi, unchanged.
    auto t = make_theta(4, {1, 0.5, 0.5, 0.7, 1.4});
    auto scaled = make_theta(4, {2.5, 1.25, 1.25, 1.75, 3.5});
    REQUIRE(psi(scaled) == Catch::Approx(psi(t)).epsilon(1e-13));
}

TEST_CASE("activity bounds") {
    auto ones3 = all_ones_theta(3);
    REQUIRE(lambda_lower(ones3) == Catch::Approx(0.25).epsilon(1e-14));
    REQUIRE(lambda_upper(ones3) == Catch::Approx(std::exp(3.0)).epsilon(1e-14));
    for (int delta : {3, 4, 5, 6})
        REQUIRE(lambda_lower(all_ones_theta(delta)) ==
                Catch::Approx(1.0 / (2.0 * (delta - 1))).epsilon(1e-13));

    // The proven bounds sandwich the known all-ones threshold.
    REQUIRE(lambda_lower(ones3) < 4.0);
    REQUIRE(lambda_upper(ones3) > 4.0);

    auto tp3 = theta_for_family("truncated_poisson", 3);
    REQUIRE(lambda_lower(tp3) == Catch::Approx(9.0 / 28.0).epsilon(1e-13));
    for (int delta = 3; delta <= 12; ++delta)
        REQUIRE(lambda_lower(theta_for_family("truncated_poisson", delta)) >=
                1.0 / (2.0 * delta));

    // Both bounds scale linearly with theta while psi stays fixed.
    auto t = make_theta(4, {1, 0.8, 0.8, 1.0, 1.6});
    std::vector<double> sv;
    for (double v : t.values) sv.push_back(2.5 * v);
    auto scaled = make_theta(4, std::move(sv));
    REQUIRE(lambda_lower(scaled) == Catch::Approx(2.5 * lambda_lower(t)).epsilon(1e-12));
    REQUIRE(lambda_upper(scaled) == Catch::Approx(2.5 * lambda_upper(t)).epsilon(1e-12));
}

TEST_CASE("all-ones critical activity") {
    REQUIRE(hardcore_critical(3) == Catch::Approx(4.0).epsilon(1e-15));
    REQUIRE(hardcore_critical(4) == Catch::Approx(27.0 / 16.0).epsilon(1e-15));
    REQUIRE(hardcore_critical(5) == Catch::Approx(256.0 / 243.0).epsilon(1e-15));
    REQUIRE(hardcore_critical(6) == Catch::Approx(3125.0 / 4096.0).epsilon(1e-15));
    REQUIRE_THROWS_AS(hardcore_critical(2), std::invalid_argument);

    // D * lambda_D approaches e from above.
    double v = 100.0 * hardcore_critical(100);
    REQUIRE(std::fabs(v - std::exp(1.0)) / std::exp(1.0) < 0.05);
}

TEST_CASE("bracket scan recovers the all-ones threshold") {
    phase_bracket b3 = critical_bracket(all_ones_theta(3), 1e-6);
    REQUIRE_FALSE(b3.partial);
    REQUIRE(b3.lambda_lower_bound == Catch::Approx(0.25));
    REQUIRE(b3.grid.size() == 64);
    REQUIRE(b3.sign_changes.size() == 1);
    REQUIRE(b3.first_nonunique - b3.last_unique <= 1e-6);
    REQUIRE(b3.last_unique <= 4.0);
    REQUIRE(b3.first_nonunique >= 4.0);
    REQUIRE(4.0 - b3.last_unique <= 1e-6);
    REQUIRE(b3.first_nonunique - 4.0 <= 1e-6);

    phase_bracket b4 = critical_bracket(all_ones_theta(4), 1e-4);
    double target = 27.0 / 16.0;
    REQUIRE(b4.last_unique <= target);
    REQUIRE(b4.first_nonunique >= target);
    REQUIRE(b4.first_nonunique - b4.last_unique <= 1e-4);

    phase_bracket bg = critical_bracket(theta_for_family("truncated_geometric", 3), 1e-3);
    REQUIRE_FALSE(bg.partial);
    REQUIRE(bg.last_unique > bg.lambda_lower_bound);
    REQUIRE(bg.first_nonunique > bg.last_unique);
    REQUIRE(bg.first_nonunique <= bg.lambda_upper_bound * (1 + 1e-12));
    REQUIRE(bg.first_nonunique - bg.last_unique <= 1e-3);

    REQUIRE_THROWS_AS(critical_bracket(all_ones_theta(3), 0.0), precondition_error);
    REQUIRE_THROWS_AS(critical_bracket(make_theta(3, {1, 10, 1, 10}), 1e-3),
                      precondition_error);
}

TEST_CASE("bracket scan is deterministic across jobs") {
    phase_bracket one = critical_bracket(all_ones_theta(3), 1e-3, 1);
    phase_bracket two = critical_bracket(all_ones_theta(3), 1e-3, 2);
    REQUIRE(one.last_unique == two.last_unique);
    REQUIRE(one.first_nonunique == two.first_nonunique);
    REQUIRE(one.sign_changes.size() == two.sign_changes.size());

    setenv("MRF_PHASE_JOBS", "3", 1);
    REQUIRE(default_jobs() == 3);
    unsetenv("MRF_PHASE_JOBS");
    REQUIRE(default_jobs() >= 1);
}

TEST_CASE("bounds sandwich the classifier verdicts") {
    rng_stream rng(8201);
    for (int trial = 0; trial < 12; ++trial) {
        int delta = 3 + static_cast<int>(rng.below(4));
        auto t = random_log_convex_theta(delta, 10.0, rng);
        REQUIRE(classify_uniqueness(make_model(t, 0.99 * lambda_lower(t))).v ==
                verdict::unique);
        REQUIRE(classify_uniqueness(make_model(t, 1.01 * lambda_upper(t))).v ==
                verdict::non_unique);
    }
}

TEST_CASE("robustness of the bounds near all-ones") {
    for (int delta = 3; delta <= 10; ++delta)
        REQUIRE(robustness_check(all_ones_theta(delta), 0.0));

    // Ratios within 1 + c/delta for c = 1.
    auto mild = make_theta(3, {1.0, 0.9, 0.9, 1.08});
    REQUIRE(robustness_check(mild, 1.0));

    REQUIRE_THROWS_AS(robustness_check(make_theta(3, {1, 1, 1, 2}), 1.0),
                      precondition_error);
    REQUIRE_THROWS_AS(robustness_check(all_ones_theta(3), -0.5), precondition_error);
    REQUIRE_THROWS_AS(robustness_check(all_ones_theta(3), 4.0), precondition_error);
}

TEST_CASE("diagonal root at the upper bound stays large") {
    model_spec m3 = make_model(all_ones_theta(3), lambda_upper(all_ones_theta(3)));
    REQUIRE(solve_diagonal(m3).x >= 1.0);
    REQUIRE(verify1_check(all_ones_theta(3)));

    model_spec m4 = make_model(all_ones_theta(4), lambda_upper(all_ones_theta(4)));
    REQUIRE(solve_diagonal(m4).x >= 0.75);
    REQUIRE(verify1_check(all_ones_theta(4)));

    rng_stream rng(8202);
    for (int trial = 0; trial < 50; ++trial) {
        int delta = 3 + static_cast<int>(rng.below(4));
        auto t = random_log_convex_theta(delta, 10.0, rng);
        REQUIRE(verify1_check(t));
    }

    REQUIRE_THROWS_AS(verify1_check(make_theta(3, {1, 10, 1, 10})), precondition_error);
}
