#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <mrf/serialize.hpp>
#include <sstream>

using namespace mrf;

TEST_CASE("decimal strings round-trip doubles exactly") {
    for (double v : {1.0, 0.1, 1.0 / 3.0, 2.2250738585072014e-308, 1e300,
                     -0.0, 4.9406564584124654e-324, 3.141592653589793}) {
        REQUIRE(parse_double(double_repr(v)) == v);
    }
    REQUIRE_THROWS_AS(parse_double("1.2.3"), precondition_error);
    REQUIRE_THROWS_AS(parse_double("abc"), precondition_error);
    REQUIRE_THROWS_AS(parse_double("1.5 "), precondition_error);
}

TEST_CASE("theta and model json round-trip") {
    auto t = make_theta(3, {1.0, 1.0 / 3.0, 0.1, 2.2});
    json arr = theta_to_json(t);
    REQUIRE(arr.is_array());
    REQUIRE(arr[0].is_string());
    theta_vector back = theta_from_json(arr);
    REQUIRE(back.delta == 3);
    REQUIRE(back.values == t.values);

    auto m = make_model(t, 0.7);
    json jm = model_to_json(m);
    model_spec mback = model_from_json(jm);
    REQUIRE(mback.lambda == m.lambda);
    REQUIRE(mback.theta.values == m.theta.values);

    // Inline numeric arrays are accepted on input.
    json inline_theta = json::parse("[1, 1, 1, 2]");
    theta_vector ti = theta_from_json(inline_theta);
    REQUIRE(ti.at(3) == 2.0);

    REQUIRE_THROWS_AS(theta_from_json(json::parse("[1, 2]")), precondition_error);
    REQUIRE_THROWS_AS(theta_from_json(json::parse("{\"a\": 1}")), precondition_error);
    REQUIRE_THROWS_AS(theta_from_json(json::parse("[1, true, 1, 1]")), precondition_error);
    REQUIRE_THROWS_AS(model_from_json(json::parse("{\"lambda\": 1}")), precondition_error);
    json bad = model_to_json(m);
    bad["delta"] = 5;
    REQUIRE_THROWS_AS(model_from_json(bad), precondition_error);
}

TEST_CASE("report shapes carry the advertised fields") {
    auto m = make_model(all_ones_theta(3), 5.0);
    fixed_point_report rep = classify_uniqueness(m);
    json j = fixed_point_report_to_json(rep);
    REQUIRE(j.at("verdict").get<std::string>() == "NonUnique");
    REQUIRE(j.contains("diagonal_x"));
    REQUIRE(j.contains("iterations"));
    REQUIRE(j.at("residuals").size() == 2);
    REQUIRE(j.at("two_cycle").is_array());
    REQUIRE(j.at("two_cycle")[0].get<double>() < j.at("two_cycle")[1].get<double>());

    auto unique_m = make_model(all_ones_theta(3), 3.0);
    json ju = fixed_point_report_to_json(classify_uniqueness(unique_m));
    REQUIRE(ju.at("verdict").get<std::string>() == "Unique");
    REQUIRE(ju.at("two_cycle").is_null());

    json lp = limit_probs_to_json(limit_probabilities(unique_m));
    REQUIRE(lp.at("p").size() == 4);
    double mass = lp.at("p_plus").get<double>();
    for (const auto& v : lp.at("p")) mass += v.get<double>();
    REQUIRE(mass == Catch::Approx(1.0).epsilon(1e-12));

    json pb = phase_bracket_to_json(critical_bracket(all_ones_theta(3), 1e-4));
    REQUIRE(pb.at("last_unique").get<double>() < 4.0);
    REQUIRE(pb.at("first_nonunique").get<double>() > 4.0);
    REQUIRE_FALSE(pb.at("partial").get<bool>());

    json pr = perturbation_report_to_json(classify_direction(3, {1.0, 0.0, 0.0, 0.0}));
    REQUIRE(pr.at("classification").get<std::string>() == "NonUniqueness");
    REQUIRE(pr.at("dot").get<double>() == Catch::Approx(1.0));
    REQUIRE(pr.at("pi").size() == 4);
    REQUIRE(pr.at("convex").get<bool>());

    json sr = slope_report_to_json(x_c_slope(3, {1.0, 0.0, 0.0, 0.0}));
    REQUIRE(sr.at("x_c_formula").get<double>() == Catch::Approx(-3.0 / 8.0));
}

TEST_CASE("mcmc summary json") {
    auto m = make_model(all_ones_theta(3), 1.0);
    regular_graph g = regular_from(complete_graph(4), 3);
    mcmc_estimate est = estimate_neighbor_law(m, g, 2000, 100, 2, 9);
    json j = mcmc_estimate_to_json(est);
    REQUIRE(j.at("chains").get<int>() == 2);
    REQUIRE(j.at("samples").get<long>() == est.samples);
    REQUIRE(j.at("law").at("probs").size() == 4);
    REQUIRE(j.at("law_se").size() == 4);
    REQUIRE(j.at("inclusion").get<double>() == est.inclusion);
}

TEST_CASE("csv rows carry the schema version") {
    std::stringstream buf;
    csv_writer csv(buf, {"lambda", "verdict"});
    csv.row({"1.5", "Unique"});
    csv.row({"5", "NonUnique"});
    std::string text = buf.str();
    REQUIRE(text == "schema_version,lambda,verdict\n1,1.5,Unique\n1,5,NonUnique\n");
}
