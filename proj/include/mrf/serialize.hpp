// JSON report shapes and versioned CSV output for the command-line surface.
// Theta vectors travel as arrays of decimal strings so a written model parses
// back bit-identical; everything else is ordinary JSON.
#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "mrf/common.hpp"
#include "mrf/fixed_point.hpp"
#include "mrf/mcmc.hpp"
#include "mrf/model.hpp"
#include "mrf/perturbation.hpp"
#include "mrf/phase.hpp"
#include "mrf/theta.hpp"

namespace mrf {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Shortest decimal string that parses back to exactly the same double.
inline std::string double_repr(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw precondition_error("parse_double: not a decimal number: " + s);
    return v;
}

inline json theta_to_json(const theta_vector& t) {
    json arr = json::array();
    for (double v : t.values) arr.push_back(double_repr(v));
    return arr;
}

// Accepts decimal strings (the exact round-trip form) or plain numbers, which
// is what hand-typed inline arrays look like.
inline std::vector<double> doubles_from_json(const json& arr, const char* what) {
    if (!arr.is_array())
        throw precondition_error(std::string(what) + ": expected a JSON array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (v.is_string())
            out.push_back(parse_double(v.get<std::string>()));
        else if (v.is_number())
            out.push_back(v.get<double>());
        else
            throw precondition_error(std::string(what) + ": entries must be numbers or decimal strings");
    }
    return out;
}

inline theta_vector theta_from_json(const json& arr) {
    std::vector<double> vals = doubles_from_json(arr, "theta_from_json");
    if (vals.size() < 4)
        throw precondition_error("theta_from_json: need at least four entries (delta >= 3)");
    int delta = static_cast<int>(vals.size()) - 1;
    return make_theta(delta, std::move(vals));
}

inline json model_to_json(const model_spec& m) {
    return json{{"delta", m.theta.delta},
                {"lambda", double_repr(m.lambda)},
                {"theta", theta_to_json(m.theta)}};
}

inline model_spec model_from_json(const json& j) {
    if (!j.contains("theta") || !j.contains("lambda"))
        throw precondition_error("model_from_json: need theta and lambda fields");
    theta_vector t = theta_from_json(j.at("theta"));
    double lambda = j.at("lambda").is_string()
                        ? parse_double(j.at("lambda").get<std::string>())
                        : j.at("lambda").get<double>();
    if (j.contains("delta") && j.at("delta").get<int>() != t.delta)
        throw precondition_error("model_from_json: delta disagrees with theta length");
    return make_model(std::move(t), lambda);
}

inline json fixed_point_report_to_json(const fixed_point_report& r) {
    json j{{"verdict", to_string(r.v)},
           {"diagonal_x", r.diagonal_x},
           {"iterations", r.iterations},
           {"residuals", {r.residuals.first, r.residuals.second}}};
    if (r.two_cycle)
        j["two_cycle"] = {r.two_cycle->first, r.two_cycle->second};
    else
        j["two_cycle"] = nullptr;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json neighbor_distribution_to_json(const neighbor_distribution& d) {
    return json{{"delta", d.delta}, {"probs", d.probs}};
}

inline json limit_probs_to_json(const limit_probs& l) {
    return json{{"delta", l.delta}, {"p", l.p}, {"p_plus", l.p_plus}};
}

inline json phase_bracket_to_json(const phase_bracket& b) {
    json changes = json::array();
    for (const auto& [lo, hi] : b.sign_changes) changes.push_back({lo, hi});
    return json{{"lambda_lower_bound", b.lambda_lower_bound},
                {"lambda_upper_bound", b.lambda_upper_bound},
                {"last_unique", b.last_unique},
                {"first_nonunique", b.first_nonunique},
                {"sign_changes", changes},
                {"partial", b.partial}};
}

inline json perturbation_report_to_json(const perturbation_report& r) {
    return json{{"delta", r.delta},
                {"c", r.c},
                {"convex", r.convex},
                {"pi", r.pi},
                {"dot", r.dot},
                {"classification", to_string(r.classification)}};
}

inline json slope_report_to_json(const slope_report& r) {
    return json{{"x_c_formula", r.x_c_formula},
                {"x_c_numeric", r.x_c_numeric},
                {"gap_slope_formula", r.gap_slope_formula},
                {"gap_slope_numeric", r.gap_slope_numeric}};
}

inline json mcmc_estimate_to_json(const mcmc_estimate& e) {
    return json{{"law", neighbor_distribution_to_json(e.law)},
                {"law_se", e.law_se},
                {"inclusion", e.inclusion},
                {"inclusion_se", e.inclusion_se},
                {"samples", e.samples},
                {"chains", e.chains}};
}

// CSV with a leading schema_version column in the header and every row.
class csv_writer {
  public:
    csv_writer(std::ostream& out, const std::vector<std::string>& columns) : out_(out) {
        out_ << "schema_version";
        for (const auto& c : columns) out_ << ',' << c;
        out_ << '\n';
    }

    void row(const std::vector<std::string>& cells) {
        out_ << kSchemaVersion;
        for (const auto& c : cells) out_ << ',' << c;
        out_ << '\n';
    }

  private:
    std::ostream& out_;
};

}  // namespace mrf
