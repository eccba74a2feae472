#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <mrf/oracle.hpp>
#include <mrf/rng.hpp>
#include <sstream>

#include "test_util.hpp"

using namespace mrf;
using mrf_test::random_log_convex_theta;

namespace {

// Clamp vector for a uniform boundary on the bottom two layers of a rooted
// tree: depth-d nodes and depth-(d-1) nodes pinned, everything else free.
std::vector<int> boundary_clamps(const finite_graph& g, int depth, boundary_kind b) {
    std::vector<int> depths = bfs_depths(g, 0);
    std::vector<int> clamps(static_cast<std::size_t>(g.n), -1);
    if (b == boundary_kind::free_boundary) return clamps;
    int bottom = (b == boundary_kind::all_included) ? 1 : 0;
    for (int v = 0; v < g.n; ++v) {
        if (depths[static_cast<std::size_t>(v)] == depth)
            clamps[static_cast<std::size_t>(v)] = bottom;
        else if (depths[static_cast<std::size_t>(v)] == depth - 1)
            clamps[static_cast<std::size_t>(v)] = 0;
    }
    return clamps;
}

std::vector<rational> random_rational_theta(int delta, rng_stream& rng) {
    std::vector<rational> t(static_cast<std::size_t>(delta) + 1);
    for (auto& v : t)
        v = rational(1 + static_cast<int>(rng.below(8)),
                     1 + static_cast<int>(rng.below(4)));
    return t;
}

model_spec to_double_model(int delta, const std::vector<rational>& theta,
                           const rational& lambda) {
    std::vector<double> vals(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k)
        vals[k] = static_cast<double>(theta[k]);
    return make_model(make_theta(delta, std::move(vals)), static_cast<double>(lambda));
}

}  // namespace

TEST_CASE("enumeration on named small graphs") {
    auto m = make_model(all_ones_theta(3), 1.0);

    weighted_count star = enumerate_Z(m, star_graph(3));
    REQUIRE(star.sets == 9);
    REQUIRE(std::exp(star.log_z) == Catch::Approx(9.0).epsilon(1e-14));

    weighted_count k4 = enumerate_Z(m, complete_graph(4));
    REQUIRE(k4.sets == 5);
    REQUIRE(std::exp(k4.log_z) == Catch::Approx(5.0).epsilon(1e-14));
    // Each singleton carries 1/5 of the mass; the root-restricted masses see
    // one included set and four (empty plus three other singletons) excluded.
    REQUIRE(std::exp(k4.log_root_included - k4.log_z) ==
            Catch::Approx(0.2).epsilon(1e-14));
    REQUIRE(std::exp(k4.log_root_excluded - k4.log_z) ==
            Catch::Approx(0.8).epsilon(1e-14));

    weighted_count lone = enumerate_Z(m, make_graph(1, {}));
    REQUIRE(std::exp(lone.log_z) == Catch::Approx(2.0).epsilon(1e-14));

    REQUIRE_THROWS_AS(enumerate_Z(m, complete_graph(27)), precondition_error);
}

TEST_CASE("depth-3 closed forms under the pinned boundary") {
    rng_stream rng(404);
    finite_graph g = tree_tprime(3, 3);
    auto clamps = boundary_clamps(g, 3, boundary_kind::all_included);
    for (int trial = 0; trial < 5; ++trial) {
        auto theta = random_rational_theta(3, rng);
        rational lambda(1 + static_cast<int>(rng.below(6)),
                        1 + static_cast<int>(rng.below(3)));
        pair_count_exact e = enumerate_pair_exact(3, theta, lambda, g, 0, 1, clamps);
        REQUIRE(e.z00 == theta[0] * theta[2] * theta[2]);
        REQUIRE(e.z01 == lambda * theta[3] * theta[3]);
        REQUIRE(e.z10 == theta[1] * theta[2] * theta[2]);
        REQUIRE(e.z11 == 0);
    }
}

TEST_CASE("depth recursion equals enumeration exactly") {
    rng_stream rng(20260815);
    for (int trial = 0; trial < 20; ++trial) {
        auto theta = random_rational_theta(3, rng);
        rational lambda(1 + static_cast<int>(rng.below(6)),
                        1 + static_cast<int>(rng.below(3)));
        for (int d : {3, 4}) {
            finite_graph g = tree_tprime(3, d);
            for (boundary_kind b : {boundary_kind::all_included,
                                    boundary_kind::all_excluded,
                                    boundary_kind::free_boundary}) {
                auto clamps = boundary_clamps(g, d, b);
                pair_count_exact e =
                    enumerate_pair_exact(3, theta, lambda, g, 0, 1, clamps);
                dp_exact_values z = dp_partition_exact(3, theta, lambda, d, b);
                REQUIRE(z.z00 == e.z00);
                REQUIRE(z.z01 == e.z01);
                REQUIRE(z.z10 == e.z10);

                // Float path against the exact values.
                model_spec m = to_double_model(3, theta, lambda);
                dp_report f = dp_partition(m, d, b);
                REQUIRE(f.log_z00 ==
                        Catch::Approx(std::log(static_cast<double>(e.z00))).epsilon(1e-12));
                REQUIRE(f.log_z01 ==
                        Catch::Approx(std::log(static_cast<double>(e.z01))).epsilon(1e-12));
                REQUIRE(f.log_z10 ==
                        Catch::Approx(std::log(static_cast<double>(e.z10))).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("recursion ratios reproduce the boundary sequences") {
    rng_stream rng(515);
    for (int trial = 0; trial < 10; ++trial) {
        int delta = 3 + static_cast<int>(rng.below(3));
        auto t = random_log_convex_theta(delta, 8.0, rng);
        auto m = make_model(t, std::exp(rng.uniform(-1.5, 1.5)));
        for (int d = 3; d <= 12; ++d) {
            double zeta = dp_partition(m, d, boundary_kind::all_included).zeta;
            // Log-space DP and direct ratio recursion are the same map; above
            // the uniqueness threshold the map amplifies rounding, so allow a
            // few orders above machine precision.
            std::vector<double> seq = extremal_boundary_seq(m, std::max(d, 5));
            REQUIRE(zeta ==
                    Catch::Approx(seq[static_cast<std::size_t>(d) - 3]).epsilon(1e-8));

            double zfree = dp_partition(m, d, boundary_kind::free_boundary).zeta;
            std::vector<double> fseq = free_boundary_seq(m, d);
            REQUIRE(zfree == Catch::Approx(fseq.back()).epsilon(1e-8));
        }
    }
}

TEST_CASE("root law from the recursion masses") {
    auto m = make_model(all_ones_theta(3), 1.0);

    for (boundary_kind b : {boundary_kind::all_included,
                            boundary_kind::all_excluded,
                            boundary_kind::free_boundary}) {
        limit_probs law = conditional_pk_exact(m, 7, b);
        double mass = law.p_plus;
        for (double v : law.p) mass += v;
        REQUIRE(mass == Catch::Approx(1.0).epsilon(1e-12));
    }

    // Same numbers as the sequence-based conditional law.
    for (boundary_kind b : {boundary_kind::all_included, boundary_kind::free_boundary}) {
        limit_probs dp = conditional_pk_exact(m, 5, b);
        limit_probs seq = finite_depth_conditional(m, 5, b);
        for (std::size_t k = 0; k < dp.p.size(); ++k)
            REQUIRE(dp.p[k] == Catch::Approx(seq.p[k]).epsilon(1e-10));
        REQUIRE(dp.p_plus == Catch::Approx(seq.p_plus).epsilon(1e-10));
    }

    // Identical subtrees make the excluded masses proportional to
    // theta_k C(D,k) zeta^k.
    auto skew = make_model(make_theta(3, {2.0, 1.5, 1.3, 1.2}), 0.7);
    dp_report z = dp_partition(skew, 6, boundary_kind::all_included);
    limit_probs law = conditional_pk_exact(skew, 6, boundary_kind::all_included);
    for (int k = 1; k <= 3; ++k) {
        double expected = skew.theta.at(k) / skew.theta.at(0) *
                          binomial_row(3)[static_cast<std::size_t>(k)] *
                          std::pow(z.zeta, k);
        REQUIRE(law.p[static_cast<std::size_t>(k)] / law.p[0] ==
                Catch::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("root law agrees with direct enumeration at depth three") {
    rng_stream rng(8181);
    std::vector<model_spec> models = {
        make_model(all_ones_theta(3), 1.0),
        make_model(make_theta(3, {2.0, 1.5, 1.3, 1.2}), 0.7),
        make_model(random_log_convex_theta(3, 6.0, rng), 1.4),
    };
    finite_graph g = tree_tfull(3, 3);
    for (const auto& m : models) {
        for (boundary_kind b : {boundary_kind::all_included,
                                boundary_kind::all_excluded,
                                boundary_kind::free_boundary}) {
            auto clamps = boundary_clamps(g, 3, b);
            std::vector<double> acc(4, 0.0);
            double acc_plus = 0.0, z = 0.0;
            detail::enumerate_sets<double>(
                detail::theta_values(m.theta), m.lambda, 3, g, clamps,
                [&](double w, const std::vector<int>& incl, const std::vector<int>& cnt) {
                    z += w;
                    if (incl[0])
                        acc_plus += w;
                    else
                        acc[static_cast<std::size_t>(cnt[0])] += w;
                });
            limit_probs law = conditional_pk_exact(m, 3, b);
            for (std::size_t k = 0; k < 4; ++k)
                REQUIRE(law.p[k] == Catch::Approx(acc[k] / z).margin(1e-12));
            REQUIRE(law.p_plus == Catch::Approx(acc_plus / z).margin(1e-12));
        }
    }
}

TEST_CASE("exact neighbor law on small graphs") {
    auto m = make_model(all_ones_theta(3), 1.0);

    limit_probs k4 = small_graph_neighbor_law(m, complete_graph(4));
    REQUIRE(k4.p_plus == Catch::Approx(0.2).epsilon(1e-14));
    REQUIRE(k4.p[0] == Catch::Approx(0.2).epsilon(1e-14));
    REQUIRE(k4.p[1] == Catch::Approx(0.6).epsilon(1e-14));
    REQUIRE(k4.p[2] == 0.0);
    REQUIRE(k4.p[3] == 0.0);
    neighbor_distribution cond = k4.conditional_law();
    REQUIRE(cond.probs[0] == Catch::Approx(0.25).epsilon(1e-14));
    REQUIRE(cond.probs[1] == Catch::Approx(0.75).epsilon(1e-14));

    // Petersen: 76 independent sets with total size 180, so the per-node
    // inclusion probability is 180/760.
    limit_probs pet = small_graph_neighbor_law(m, petersen_graph());
    REQUIRE(pet.p_plus == Catch::Approx(9.0 / 38.0).epsilon(1e-13));
    double mass = pet.p_plus;
    for (double v : pet.p) mass += v;
    REQUIRE(mass == Catch::Approx(1.0).epsilon(1e-13));

    // Vanishing activity empties the graph.
    auto cold = make_model(all_ones_theta(3), 1e-12);
    limit_probs empty = small_graph_neighbor_law(cold, petersen_graph());
    REQUIRE(empty.p_plus < 1e-11);
    REQUIRE(empty.p[0] == Catch::Approx(1.0).margin(1e-10));

    REQUIRE_THROWS_AS(small_graph_neighbor_law(m, star_graph(2)), precondition_error);
}

TEST_CASE("graph structure helpers") {
    finite_graph pet = petersen_graph();
    REQUIRE(pet.n == 10);
    for (int v = 0; v < 10; ++v) REQUIRE(pet.degree(v) == 3);
    REQUIRE(girth(pet) == 5);
    REQUIRE(girth_at_least(pet, 5));
    REQUIRE_FALSE(girth_at_least(pet, 6));

    REQUIRE(girth(complete_graph(4)) == 3);
    REQUIRE(girth(prism_graph()) == 3);
    REQUIRE(girth(tree_tprime(3, 4)) == 0);

    finite_graph tp = tree_tprime(3, 4);
    REQUIRE(tp.n == 16);
    REQUIRE(tp.degree(0) == 1);
    REQUIRE(tp.degree(1) == 3);
    finite_graph tf = tree_tfull(3, 3);
    REQUIRE(tf.n == 22);
    REQUIRE(tf.degree(0) == 3);

    REQUIRE_THROWS_AS(make_graph(3, {{0, 0}}), precondition_error);
    REQUIRE_THROWS_AS(make_graph(3, {{0, 1}, {1, 0}}), precondition_error);
    REQUIRE_THROWS_AS(make_graph(2, {{0, 5}}), precondition_error);
}

TEST_CASE("edge list round trip") {
    finite_graph g = prism_graph();
    std::stringstream buf;
    write_edge_list(buf, g);
    finite_graph back = read_edge_list(buf);
    REQUIRE(back.n == g.n);
    REQUIRE(back.edges == g.edges);

    std::stringstream bad("4");
    REQUIRE_THROWS_AS(read_edge_list(bad), precondition_error);
    std::stringstream trunc("4 2\n0 1\n");
    REQUIRE_THROWS_AS(read_edge_list(trunc), precondition_error);
}
