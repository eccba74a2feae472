// mrf: command line front end for the tree MRF toolkit. One subcommand per
// library layer: analyze (single model report), sweep (verdict grids as CSV),
// phase (critical-activity bracket), perturb (directional studies at the
// hardcore critical point), oracle (exact enumeration and depth recursion),
// mcmc (finite-graph sampler), verify (built-in check suite).
//
// Exit codes: 0 success, 1 failed check or runtime failure, 2 usage error.
// Every run echoes its full configuration as one JSON line on stderr (off
// with --quiet), so a run is reproducible from the echo alone.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mrf/mcmc.hpp"
#include "mrf/oracle.hpp"
#include "mrf/perturbation.hpp"
#include "mrf/phase.hpp"
#include "mrf/serialize.hpp"
#include "mrf/verification.hpp"

namespace {

using mrf::json;

void echo_config(const json& cfg, bool quiet) {
    if (!quiet) std::cerr << cfg.dump() << '\n';
}

// Model weights come from exactly one source: an inline JSON array, a JSON
// file, or a named family (which needs --delta to size it).
struct theta_options {
    std::string inline_json;
    std::string file;
    std::string family;
    int delta = 0;
    CLI::Option* delta_opt = nullptr;

    void attach(CLI::App& cmd) {
        cmd.add_option("--theta", inline_json,
                       "weight vector as a JSON array of delta+1 numbers");
        cmd.add_option("--theta-file", file, "JSON file holding the weight array");
        cmd.add_option(
            "--family", family,
            "named weight family: binomial, truncated_poisson, truncated_geometric");
        delta_opt = cmd.add_option("--delta", delta, "branching degree");
    }

    bool any_weight_source() const {
        return !inline_json.empty() || !file.empty() || !family.empty();
    }

    mrf::theta_vector resolve(json& cfg) const {
        int sources = (inline_json.empty() ? 0 : 1) + (file.empty() ? 0 : 1) +
                      (family.empty() ? 0 : 1);
        if (sources != 1)
            throw mrf::precondition_error(
                "model weights: provide exactly one of --theta, --theta-file, --family");
        std::optional<mrf::theta_vector> t;
        if (!inline_json.empty()) {
            t = mrf::theta_from_json(json::parse(inline_json));
        } else if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw mrf::precondition_error("cannot open theta file: " + file);
            t = mrf::theta_from_json(json::parse(in));
            cfg["theta_file"] = file;
        } else {
            if (delta_opt->count() == 0)
                throw mrf::precondition_error("--family requires --delta");
            t = mrf::theta_for_family(family, delta);
            cfg["family"] = family;
        }
        if (delta_opt->count() > 0 && delta != t->delta)
            throw mrf::precondition_error(
                "--delta disagrees with the weight vector length");
        cfg["delta"] = t->delta;
        cfg["theta"] = mrf::theta_to_json(*t);
        return std::move(*t);
    }
};

// Report destination: stdout unless --out names a file.
struct output_options {
    std::string path;
    std::ofstream file;

    void attach(CLI::App& cmd) {
        cmd.add_option("--out", path, "write the report here instead of stdout");
    }

    std::ostream& open(json& cfg) {
        if (path.empty()) return std::cout;
        cfg["out"] = path;
        file.open(path);
        if (!file) throw mrf::precondition_error("cannot open output file: " + path);
        return file;
    }
};

struct grid_options {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    bool log_spaced = false;

    void attach(CLI::App& cmd, const char* what, bool required) {
        auto* o_min = cmd.add_option("--min", lo, std::string("grid start (") + what + ")");
        auto* o_max = cmd.add_option("--max", hi, std::string("grid end (") + what + ")");
        auto* o_cnt = cmd.add_option("--count", count, "number of grid points");
        cmd.add_flag("--log", log_spaced, "space points logarithmically");
        if (required) {
            o_min->required();
            o_max->required();
            o_cnt->required();
        }
    }

    json to_json() const {
        return json{{"min", mrf::double_repr(lo)},
                    {"max", mrf::double_repr(hi)},
                    {"count", count},
                    {"spacing", log_spaced ? "log" : "linear"}};
    }

    std::vector<double> build() const {
        if (count < 0) throw mrf::precondition_error("grid: count must be nonnegative");
        std::vector<double> pts;
        if (count == 0) return pts;
        if (!(hi >= lo)) throw mrf::precondition_error("grid: max must be at least min");
        pts.reserve(static_cast<std::size_t>(count));
        if (count == 1) {
            pts.push_back(lo);
            return pts;
        }
        if (log_spaced) {
            if (!(lo > 0.0))
                throw mrf::precondition_error("grid: log spacing needs positive endpoints");
            double llo = std::log(lo), lhi = std::log(hi);
            for (int i = 0; i < count; ++i)
                pts.push_back(std::exp(llo + (lhi - llo) * i / (count - 1)));
        } else {
            for (int i = 0; i < count; ++i)
                pts.push_back(lo + (hi - lo) * i / (count - 1));
        }
        return pts;
    }
};

// Run fn(0..total-1) on up to `jobs` threads. Callers index into preallocated
// row storage, so completion order never affects output order.
template <typename Fn>
void parallel_rows(std::size_t total, int jobs, Fn&& fn) {
    int workers = std::max(1, std::min(jobs, static_cast<int>(total)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < total;) fn(i);
        });
    for (auto& th : pool) th.join();
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_analyze(const theta_options& to, double lambda, output_options& oo, bool quiet) {
    json cfg{{"command", "analyze"}};
    mrf::theta_vector t = to.resolve(cfg);
    cfg["lambda"] = mrf::double_repr(lambda);
    std::ostream& out = oo.open(cfg);
    echo_config(cfg, quiet);

    mrf::model_spec m = mrf::make_model(std::move(t), lambda);
    mrf::fixed_point_report rep = mrf::classify_uniqueness(m);

    json j;
    j["config"] = cfg;
    j["model"] = mrf::model_to_json(m);
    j["log_convex"] = mrf::is_log_convex(m.theta);
    j["psi"] = mrf::double_repr(mrf::psi(m.theta));
    j["lambda_lower"] = mrf::double_repr(mrf::lambda_lower(m.theta));
    j["lambda_upper"] = mrf::double_repr(mrf::lambda_upper(m.theta));
    j["search_upper"] = mrf::double_repr(mrf::search_upper(m));
    j["fixed_point"] = mrf::fixed_point_report_to_json(rep);
    j["limit"] = rep.v == mrf::verdict::unique
                     ? mrf::limit_probs_to_json(mrf::limit_probabilities(m))
                     : json(nullptr);
    j["induced_mu"] = mrf::neighbor_distribution_to_json(
        mrf::induced_mu(m.theta, 1.0, rep.diagonal_x));
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const theta_options& to, const grid_options& go, bool e0, int jobs,
              output_options& oo, bool quiet) {
    json cfg{{"command", "sweep"}, {"grid", go.to_json()}, {"jobs", jobs}};
    std::optional<mrf::theta_vector> t;
    int delta = 0;
    if (e0) {
        if (to.delta_opt->count() == 0)
            throw mrf::precondition_error("sweep --e0 requires --delta");
        if (to.any_weight_source())
            throw mrf::precondition_error(
                "sweep --e0 fixes the weights to 1 + h e0; drop the weight flags");
        delta = to.delta;
        cfg["e0"] = true;
        cfg["delta"] = delta;
    } else {
        t = to.resolve(cfg);
    }
    std::ostream& out = oo.open(cfg);
    echo_config(cfg, quiet);

    std::vector<double> grid = go.build();
    std::vector<double> e0_dir;
    double lam_crit = 0.0;
    if (e0) {
        e0_dir.assign(static_cast<std::size_t>(delta) + 1, 0.0);
        e0_dir[0] = 1.0;
        lam_crit = mrf::hardcore_critical(delta);
    }

    std::vector<std::vector<std::string>> rows(grid.size());
    parallel_rows(grid.size(), jobs, [&](std::size_t i) {
        double x = grid[i];
        std::vector<std::string> cells{mrf::double_repr(x)};
        try {
            mrf::model_spec m =
                e0 ? mrf::make_model(mrf::detail::perturbed_theta(delta, e0_dir, x),
                                     lam_crit)
                   : mrf::make_model(*t, x);
            mrf::fixed_point_report rep = mrf::classify_uniqueness(m);
            mrf::parity_limits pl = mrf::parity_gap(m);
            cells.push_back(mrf::to_string(rep.v));
            cells.push_back(mrf::double_repr(rep.diagonal_x));
            if (pl.determined) {
                cells.push_back(mrf::double_repr(pl.gap));
                cells.push_back(mrf::double_repr(pl.even_limit));
                cells.push_back(mrf::double_repr(pl.odd_limit));
            } else {
                cells.insert(cells.end(), {"", "", ""});
            }
        } catch (const std::exception&) {
            cells.resize(1);
            cells.insert(cells.end(),
                         {mrf::to_string(mrf::verdict::undetermined), "", "", "", ""});
        }
        rows[i] = std::move(cells);
    });

    mrf::csv_writer w(out, {e0 ? "h" : "lambda", "verdict", "x_star", "gap",
                            "zeta_even", "zeta_odd"});
    for (const auto& r : rows) w.row(r);
    return 0;
}

int cmd_phase(const theta_options& to, double tol, int jobs, const std::string& grid_out,
              output_options& oo, bool quiet) {
    json cfg{{"command", "phase"}, {"tol", mrf::double_repr(tol)}, {"jobs", jobs}};
    mrf::theta_vector t = to.resolve(cfg);
    if (!grid_out.empty()) cfg["grid_out"] = grid_out;
    std::ostream& out = oo.open(cfg);
    echo_config(cfg, quiet);

    mrf::phase_bracket b = mrf::critical_bracket(t, tol, jobs);
    json j = mrf::phase_bracket_to_json(b);
    j["config"] = cfg;
    out << j.dump(2) << '\n';

    if (!grid_out.empty()) {
        std::ofstream gf(grid_out);
        if (!gf) throw mrf::precondition_error("cannot open grid file: " + grid_out);
        mrf::csv_writer w(gf, {"lambda", "verdict"});
        for (const auto& [lam, v] : b.grid)
            w.row({mrf::double_repr(lam), mrf::to_string(v)});
    }
    return 0;
}

int cmd_perturb(int delta, const std::string& c_json, bool e0, bool scan_e0,
                const grid_options& go, output_options& oo, bool quiet) {
    json cfg{{"command", "perturb"}, {"delta", delta}};
    if (scan_e0) {
        cfg["scan"] = "e0";
        cfg["grid"] = go.to_json();
        std::ostream& out = oo.open(cfg);
        echo_config(cfg, quiet);
        mrf::csv_writer w(out, {"h", "verdict"});
        for (const mrf::scan_point& p : mrf::nonmonotonicity_scan(delta, go.build()))
            w.row({mrf::double_repr(p.h), mrf::to_string(p.v)});
        return 0;
    }

    std::vector<double> c;
    if (e0) {
        if (!c_json.empty())
            throw mrf::precondition_error("perturb: --e0 and --c are exclusive");
        c.assign(static_cast<std::size_t>(delta) + 1, 0.0);
        c[0] = 1.0;
        cfg["direction"] = "e0";
    } else if (!c_json.empty()) {
        c = mrf::doubles_from_json(json::parse(c_json), "perturb direction");
        json arr = json::array();
        for (double v : c) arr.push_back(mrf::double_repr(v));
        cfg["c"] = arr;
    } else {
        throw mrf::precondition_error("perturb: provide --c, --e0, or --scan-e0");
    }
    std::ostream& out = oo.open(cfg);
    echo_config(cfg, quiet);

    mrf::perturbation_report rep = mrf::classify_direction(delta, c);
    json j = mrf::perturbation_report_to_json(rep);
    j["config"] = cfg;
    if (rep.convex) {
        mrf::slope_report s = mrf::x_c_slope(delta, c);
        mrf::slope_report g = mrf::criterion_gap_slope(delta, c);
        s.gap_slope_formula = g.gap_slope_formula;
        s.gap_slope_numeric = g.gap_slope_numeric;
        j["slopes"] = mrf::slope_report_to_json(s);
    } else {
        j["slopes"] = nullptr;
    }
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_oracle(const theta_options& to, double lambda, int depth, bool dp_mode,
               const std::string& boundary, const std::string& graph_file, int root,
               output_options& oo, bool quiet) {
    json cfg{{"command", "oracle"}};
    mrf::theta_vector t = to.resolve(cfg);
    cfg["lambda"] = mrf::double_repr(lambda);
    if (dp_mode == !graph_file.empty())
        throw mrf::precondition_error(
            "oracle: provide exactly one of --depth, --graph-file");
    mrf::model_spec m = mrf::make_model(std::move(t), lambda);

    json j;
    if (dp_mode) {
        mrf::boundary_kind b = mrf::boundary_from_string(boundary);
        cfg["depth"] = depth;
        cfg["boundary"] = boundary;
        std::ostream& out = oo.open(cfg);
        echo_config(cfg, quiet);
        mrf::dp_report rep = mrf::dp_partition(m, depth, b);
        j["config"] = cfg;
        j["dp"] = json{{"depth", rep.depth},
                       {"boundary", mrf::to_string(rep.boundary)},
                       {"log_z00", mrf::double_repr(rep.log_z00)},
                       {"log_z01", mrf::double_repr(rep.log_z01)},
                       {"log_z10", mrf::double_repr(rep.log_z10)},
                       {"zeta", mrf::double_repr(rep.zeta)}};
        j["law"] = mrf::limit_probs_to_json(mrf::conditional_pk_exact(m, depth, b));
        out << j.dump(2) << '\n';
    } else {
        cfg["graph_file"] = graph_file;
        cfg["root"] = root;
        std::ostream& out = oo.open(cfg);
        echo_config(cfg, quiet);
        std::ifstream in(graph_file);
        if (!in) throw mrf::precondition_error("cannot open graph file: " + graph_file);
        mrf::finite_graph g = mrf::read_edge_list(in);
        if (root < 0 || root >= g.n)
            throw mrf::precondition_error("oracle: root node out of range");
        mrf::weighted_count wc = mrf::enumerate_Z(m, g, {}, root);
        j["config"] = cfg;
        j["enumeration"] = json{{"nodes", g.n},
                                {"sets", wc.sets},
                                {"log_z", mrf::double_repr(wc.log_z)},
                                {"log_root_excluded", mrf::double_repr(wc.log_root_excluded)},
                                {"log_root_included", mrf::double_repr(wc.log_root_included)}};
        bool full_degree_node = false;
        for (int v = 0; v < g.n; ++v)
            if (g.degree(v) == m.theta.delta) full_degree_node = true;
        j["neighbor_law"] =
            full_degree_node
                ? mrf::limit_probs_to_json(mrf::small_graph_neighbor_law(m, g))
                : json(nullptr);
        out << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_mcmc(const theta_options& to, double lambda, int n, const std::string& graph_file,
             int min_girth, long sweeps, long burnin, int chains, std::uint64_t seed,
             const std::string& graph_out, output_options& oo, bool quiet) {
    json cfg{{"command", "mcmc"}, {"sweeps", sweeps}, {"burnin", burnin},
             {"chains", chains}, {"seed", seed}};
    mrf::theta_vector t = to.resolve(cfg);
    cfg["lambda"] = mrf::double_repr(lambda);
    if (graph_file.empty() == (n == 0))
        throw mrf::precondition_error("mcmc: provide exactly one of --n, --graph-file");

    mrf::model_spec m = mrf::make_model(t, lambda);
    mrf::regular_graph g;
    if (!graph_file.empty()) {
        cfg["graph_file"] = graph_file;
        std::ifstream in(graph_file);
        if (!in) throw mrf::precondition_error("cannot open graph file: " + graph_file);
        g = mrf::regular_from(mrf::read_edge_list(in), m.theta.delta);
    } else {
        cfg["n"] = n;
        cfg["min_girth"] = min_girth;
        g = mrf::gen_random_regular(n, m.theta.delta, seed, min_girth);
    }
    if (!graph_out.empty()) cfg["graph_out"] = graph_out;
    std::ostream& out = oo.open(cfg);
    echo_config(cfg, quiet);

    if (!graph_out.empty()) {
        std::ofstream gf(graph_out);
        if (!gf) throw mrf::precondition_error("cannot open graph output: " + graph_out);
        mrf::write_edge_list(gf, mrf::to_finite(g));
    }

    mrf::mcmc_estimate est = mrf::estimate_neighbor_law(m, g, sweeps, burnin, chains, seed);
    json j = mrf::mcmc_estimate_to_json(est);
    j["config"] = cfg;
    j["graph"] = json{{"nodes", g.n}, {"degree", g.delta}, {"girth_floor", g.girth_floor}};
    try {
        mrf::mu_fit f = mrf::fit_mu_shape(est.law, m.theta);
        j["fit"] = json{{"c", mrf::double_repr(f.c)},
                        {"x", mrf::double_repr(f.x)},
                        {"residual", mrf::double_repr(f.residual)},
                        {"masked", f.masked}};
    } catch (const mrf::precondition_error&) {
        // Too few occupied bins to fit a two-parameter line; report without it.
        j["fit"] = nullptr;
    }
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_verify(const std::string& only, output_options& oo, bool quiet) {
    json cfg{{"command", "verify"}};
    if (!only.empty()) cfg["only"] = only;
    std::ostream& out = oo.open(cfg);
    echo_config(cfg, quiet);

    std::vector<mrf::check_result> results = mrf::run_verification(only);
    int failed = 0;
    for (const mrf::check_result& r : results) {
        if (!r.pass) ++failed;
        json line{{"family", r.family},
                  {"name", r.name},
                  {"pass", r.pass},
                  {"seconds", r.seconds},
                  {"detail", r.detail}};
        out << line.dump() << '\n';
    }
    if (!quiet)
        std::cerr << results.size() - failed << '/' << results.size()
                  << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"second-order Markov random fields on regular trees"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress the config echo on stderr");

    CLI::App* analyze =
        app.add_subcommand("analyze", "classify one model and report its limit law");
    analyze->fallthrough();
    theta_options an_theta;
    an_theta.attach(*analyze);
    double an_lambda = 0.0;
    analyze->add_option("--lambda", an_lambda, "activity")->required();
    output_options an_out;
    an_out.attach(*analyze);

    CLI::App* sweep = app.add_subcommand("sweep", "verdict grid as CSV");
    sweep->fallthrough();
    theta_options sw_theta;
    sw_theta.attach(*sweep);
    grid_options sw_grid;
    sw_grid.attach(*sweep, "lambda, or h with --e0", true);
    bool sw_e0 = false;
    sweep->add_flag("--e0", sw_e0,
                    "sweep the flat-direction step h at the hardcore critical "
                    "activity instead of lambda");
    int sw_jobs = mrf::default_jobs();
    sweep->add_option("--jobs", sw_jobs, "parallel row evaluations");
    output_options sw_out;
    sw_out.attach(*sweep);

    CLI::App* phase =
        app.add_subcommand("phase", "bracket the critical activity by bisection");
    phase->fallthrough();
    theta_options ph_theta;
    ph_theta.attach(*phase);
    double ph_tol = 1e-6;
    phase->add_option("--tol", ph_tol, "bracket width target");
    int ph_jobs = mrf::default_jobs();
    phase->add_option("--jobs", ph_jobs, "parallel classifications per refinement");
    std::string ph_grid_out;
    phase->add_option("--grid-out", ph_grid_out, "also write the probed grid as CSV");
    output_options ph_out;
    ph_out.attach(*phase);

    CLI::App* perturb = app.add_subcommand(
        "perturb", "directional uniqueness analysis at the hardcore critical point");
    perturb->fallthrough();
    int pe_delta = 0;
    perturb->add_option("--delta", pe_delta, "branching degree")->required();
    std::string pe_c;
    perturb->add_option("--c", pe_c, "direction as a JSON array of delta+1 numbers");
    bool pe_e0 = false;
    perturb->add_flag("--e0", pe_e0, "use the unit direction along the zero entry");
    bool pe_scan = false;
    perturb->add_flag("--scan-e0", pe_scan,
                      "CSV of verdicts along theta = 1 + h e0 over the step grid");
    grid_options pe_grid;
    pe_grid.attach(*perturb, "step h", false);
    output_options pe_out;
    pe_out.attach(*perturb);

    CLI::App* oracle = app.add_subcommand(
        "oracle", "exact enumeration and depth recursion on small instances");
    oracle->fallthrough();
    theta_options or_theta;
    or_theta.attach(*oracle);
    double or_lambda = 0.0;
    oracle->add_option("--lambda", or_lambda, "activity")->required();
    int or_depth = 0;
    CLI::Option* or_depth_opt =
        oracle->add_option("--depth", or_depth, "depth recursion on the rooted tree");
    std::string or_boundary = "free";
    oracle->add_option("--boundary", or_boundary,
                       "boundary condition: all_included, all_excluded, free");
    std::string or_graph;
    oracle->add_option("--graph-file", or_graph, "enumerate an edge-list graph instead");
    int or_root = 0;
    oracle->add_option("--root", or_root, "root node for enumeration totals");
    output_options or_out;
    or_out.attach(*oracle);

    CLI::App* mcmc =
        app.add_subcommand("mcmc", "heat-bath sampling of the neighbor law on a graph");
    mcmc->fallthrough();
    theta_options mc_theta;
    mc_theta.attach(*mcmc);
    double mc_lambda = 0.0;
    mcmc->add_option("--lambda", mc_lambda, "activity")->required();
    int mc_n = 0;
    mcmc->add_option("--n", mc_n, "nodes in a generated random regular graph");
    std::string mc_graph;
    mcmc->add_option("--graph-file", mc_graph, "sample on this edge-list graph instead");
    int mc_girth = 0;
    mcmc->add_option("--min-girth", mc_girth, "regenerate until the girth reaches this");
    long mc_sweeps = 200000;
    mcmc->add_option("--sweeps", mc_sweeps, "total sweeps per chain");
    long mc_burnin = mrf::kDefaultBurnIn;
    mcmc->add_option("--burnin", mc_burnin, "sweeps discarded before sampling");
    int mc_chains = 1;
    mcmc->add_option("--chains", mc_chains, "independent chains");
    std::uint64_t mc_seed = 1;
    mcmc->add_option("--seed", mc_seed, "seed for graph generation and chains");
    std::string mc_graph_out;
    mcmc->add_option("--graph-out", mc_graph_out, "write the sampled graph as an edge list");
    output_options mc_out;
    mc_out.attach(*mcmc);

    CLI::App* verify = app.add_subcommand("verify", "run the built-in check suite");
    verify->fallthrough();
    std::string vf_only;
    verify->add_option("--only", vf_only, "run just this check family");
    output_options vf_out;
    vf_out.attach(*verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) return cmd_analyze(an_theta, an_lambda, an_out, quiet);
        if (*sweep) return cmd_sweep(sw_theta, sw_grid, sw_e0, sw_jobs, sw_out, quiet);
        if (*phase)
            return cmd_phase(ph_theta, ph_tol, ph_jobs, ph_grid_out, ph_out, quiet);
        if (*perturb)
            return cmd_perturb(pe_delta, pe_c, pe_e0, pe_scan, pe_grid, pe_out, quiet);
        if (*oracle)
            return cmd_oracle(or_theta, or_lambda, or_depth, or_depth_opt->count() > 0,
                              or_boundary, or_graph, or_root, or_out, quiet);
        if (*mcmc)
            return cmd_mcmc(mc_theta, mc_lambda, mc_n, mc_graph, mc_girth, mc_sweeps,
                            mc_burnin, mc_chains, mc_seed, mc_graph_out, mc_out, quiet);
        if (*verify) return cmd_verify(vf_only, vf_out, quiet);
    } catch (const json::exception& e) {
        std::cerr << "mrf: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "mrf: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mrf: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
