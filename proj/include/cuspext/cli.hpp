#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cuspext/common.hpp"
#include "cuspext/distortion.hpp"
#include "cuspext/eigen.hpp"
#include "cuspext/extension.hpp"
#include "cuspext/geometry.hpp"
#include "cuspext/maps.hpp"
#include "cuspext/run_config.hpp"
#include "cuspext/version.hpp"

namespace cuspext::cli {

using nlohmann::json;

// Exit codes: 0 success, 1 usage error, 2 validation error, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

inline json jet_to_json(const maps::MapJet& jet) {
    json j;
    j["image"] = std::vector<double>(jet.image.c.begin(), jet.image.c.begin() + jet.image.n);
    json diff = json::array();
    for (int i = 0; i < jet.differential.n; ++i) {
        json row = json::array();
        for (int k = 0; k < jet.differential.n; ++k) row.push_back(jet.differential.at(i, k));
        diff.push_back(row);
    }
    j["differential"] = diff;
    j["op_norm"] = jet.op_norm;
    j["jacobian"] = jet.jacobian;
    return j;
}

inline json report_to_json(const distortion::DistortionReport& rep) {
    json j;
    j["estimate"] = rep.estimate;
    json series = json::array();
    for (const auto& [N, est] : rep.refinement_series) series.push_back({{"N", N}, {"estimate", est}});
    j["refinement_series"] = series;
    j["converged"] = rep.converged;
    j["diverged"] = rep.diverged;
    if (rep.closed_form_bound) j["closed_form_bound"] = *rep.closed_form_bound;
    return j;
}

inline void write_refinement_csv(const std::string& path,
                                 const distortion::DistortionReport& rep) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open CSV output file '" + path + "'");
    out << "N,estimate\n";
    for (const auto& [N, est] : rep.refinement_series) out << N << "," << est << "\n";
}

inline json domain_to_json(const geometry::DomainSpec& d) {
    json j;
    j["kind"] = geometry::to_string(d.kind);
    j["n"] = d.n;
    if (d.is_cusp_kind()) {
        j["gamma_tilde"] = d.gamma_tilde;
        j["gamma"] = d.gamma;
    }
    return j;
}

/// Wraps results into the versioned report envelope and emits it.
inline void emit_report(const std::string& command, const json& config, const json& results,
                        double wall_seconds, const std::string& json_path, std::ostream& out) {
    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["library_version"] = kVersion;
    report["command"] = command;
    report["config"] = config;
    report["results"] = results;
    report["wall_time_seconds"] = wall_seconds;
    const std::string text = report.dump(2) + "\n";
    if (json_path.empty()) {
        out << text;
    } else {
        std::ofstream f(json_path);
        if (!f) throw validation_error("cannot open JSON output file '" + json_path + "'");
        f << text;
    }
}

struct MapChoice {
    std::string kind;
    double gamma = 0.0;
    int n = 2;
    std::vector<double> alphas;
};

inline MapChoice parse_map(const std::string& text) {
    const config::ParsedSpec s = config::parse_spec_string(text);
    MapChoice m;
    m.kind = s.kind;
    if (s.kind == "cusp2d" || s.kind == "cusp2d-inverse") {
        m.gamma = (1.0 - config::resolve_gamma_tilde(s.params)) /
                  config::resolve_gamma_tilde(s.params);
        m.n = 2;
    } else if (s.kind == "pick" || s.kind == "ridge") {
        m.gamma = (1.0 - config::resolve_gamma_tilde(s.params)) /
                  config::resolve_gamma_tilde(s.params);
        const auto it = s.params.find("n");
        if (it == s.params.end()) throw validation_error(s.kind + " map requires n");
        m.n = static_cast<int>(config::parse_number(it->second, "n"));
        if (m.n < (s.kind == "ridge" ? 3 : 2) || m.n > kMaxDim - 1)
            throw validation_error("map dimension n out of range");
    } else if (s.kind == "identity") {
        m.n = 2;
        const auto it = s.params.find("n");
        if (it != s.params.end()) m.n = static_cast<int>(config::parse_number(it->second, "n"));
    } else if (s.kind == "radial") {
        const auto it = s.params.find("alphas");
        if (it == s.params.end()) throw validation_error("radial map requires alphas=a|b|...");
        std::stringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, '|'))
            m.alphas.push_back(config::parse_number(tok, "alpha component"));
        m.n = static_cast<int>(m.alphas.size());
    } else {
        throw validation_error("unknown map kind '" + s.kind + "'");
    }
    return m;
}

}  // namespace detail

struct CliOptions {
    std::string map_spec, domain_spec, point_spec, grid_spec;
    std::string functions_path, json_path, csv_path, section;
    double p = 2.0, q = 1.0, alpha = 0.0, r = 2.0, gamma_tilde = 0.5, gamma = 0.0;
    double mu_ball = 0.0;
    int n = 2, threads = 0, restarts = 5, max_iters = 4000;
    std::uint64_t seed = 42;
    bool require_converged = false;
};

/// Full command dispatch; never calls exit(), so it can be fuzzed in-process.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"composition-reflection extension operators and Neumann eigenvalue bounds"};
    app.set_config("--config", "", "key=value config file mirroring the flags");
    CliOptions o;
    app.add_option("--threads", o.threads, "worker threads (0 = hardware)");
    app.set_version_flag("--version", std::string(kVersion));

    auto* maps_cmd = app.add_subcommand("maps", "closed-form map evaluation");
    auto* maps_eval = maps_cmd->add_subcommand("eval", "evaluate a map jet at a point");
    maps_eval->add_option("--map", o.map_spec, "map spec, e.g. cusp2d:gamma=1")->required();
    maps_eval->add_option("--point", o.point_spec, "point spec, e.g. r=0.5,s=0.7854")->required();
    maps_eval->add_option("--json", o.json_path, "write the JSON report to a file");

    auto* dist_cmd = app.add_subcommand("distortion", "distortion functionals");
    auto* dist_kpq = dist_cmd->add_subcommand("kpq", "graded-quadrature distortion norm");
    dist_kpq->add_option("--map", o.map_spec)->required();
    dist_kpq->add_option("--p", o.p)->required();
    dist_kpq->add_option("--q", o.q)->required();
    dist_kpq->add_option("--grid", o.grid_spec, "starting grid, e.g. N=32,beta=2");
    dist_kpq->add_option("--domain", o.domain_spec, "region override for the identity map");
    dist_kpq->add_option("--json", o.json_path);
    dist_kpq->add_option("--csv", o.csv_path, "write the refinement series as CSV");
    dist_kpq->add_flag("--require-converged", o.require_converged,
                       "exit with code 3 if the refinement does not converge");

    auto* alpha_cmd = app.add_subcommand("alpha-range", "admissible correction-factor interval");
    alpha_cmd->add_option("--gamma", o.gamma);
    alpha_cmd->add_option("--gamma-tilde", o.gamma_tilde);
    alpha_cmd->add_option("--n", o.n);
    alpha_cmd->add_option("--p", o.p)->required();
    alpha_cmd->add_option("--json", o.json_path);

    auto* ext_cmd = app.add_subcommand("extend", "extension operator checks");
    auto* ext_verify = ext_cmd->add_subcommand("verify", "verify the extension inequality");
    ext_verify->add_option("--domain", o.domain_spec)->required();
    ext_verify->add_option("--p", o.p)->required();
    ext_verify->add_option("--q", o.q)->required();
    ext_verify->add_option("--grid", o.grid_spec);
    ext_verify->add_option("--functions", o.functions_path, "battery manifest file");
    ext_verify->add_option("--json", o.json_path);

    auto* eig_cmd = app.add_subcommand("eigen", "Neumann eigenvalue estimation");
    auto* eig_min = eig_cmd->add_subcommand("min", "Rayleigh quotient minimization");
    eig_min->add_option("--domain", o.domain_spec)->required();
    eig_min->add_option("--p", o.p)->required();
    eig_min->add_option("--q", o.q)->required();
    eig_min->add_option("--grid", o.grid_spec);
    eig_min->add_option("--restarts", o.restarts);
    eig_min->add_option("--seed", o.seed);
    eig_min->add_option("--max-iters", o.max_iters);
    eig_min->add_option("--json", o.json_path);

    auto* eig_bound = eig_cmd->add_subcommand("bound", "closed-form eigenvalue lower bound");
    eig_bound->add_option("--domain", o.domain_spec)->required();
    eig_bound->add_option("--p", o.p)->required();
    eig_bound->add_option("--alpha", o.alpha)->required();
    eig_bound->add_option("--r", o.r);
    eig_bound->add_option("--mu-ball", o.mu_ball, "ball eigenvalue input (computed when omitted)");
    eig_bound->add_option("--grid", o.grid_spec);
    eig_bound->add_option("--seed", o.seed);
    eig_bound->add_option("--json", o.json_path);

    auto* paper = app.add_subcommand("paper-reproduce", "reproduce the worked constants");
    paper->add_option("--section", o.section, "2.3-2d | 2.3-picks | 2.3-ridges | 4-eigen")
        ->required();
    paper->add_option("--gamma-tilde", o.gamma_tilde);
    paper->add_option("--p", o.p);
    paper->add_option("--q", o.q);
    paper->add_option("--alpha", o.alpha);
    paper->add_option("--n", o.n);
    paper->add_option("--seed", o.seed);
    paper->add_option("--json", o.json_path);

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        set_thread_count(config::resolve_threads(o.threads));

        if (maps_eval->parsed()) {
            const auto m = detail::parse_map(o.map_spec);
            const auto pt = config::parse_point(o.point_spec);
            maps::MapJet jet;
            if (m.kind == "cusp2d") {
                jet = maps::cusp_reflection_2d(m.gamma, pt.at("r"), pt.at("s"));
            } else if (m.kind == "cusp2d-inverse") {
                jet = maps::cusp_reflection_inverse_jet_2d(m.gamma, pt.at("r"), pt.at("s"));
            } else if (m.kind == "pick" || m.kind == "ridge") {
                PointND x;
                x.n = m.n;
                x[0] = pt.at("r");
                x[1] = pt.at("s");
                for (int i = 2; i < m.n - (m.kind == "ridge" ? 1 : 0); ++i)
                    x[i] = pt.at("theta" + std::to_string(i));
                if (m.kind == "ridge") {
                    x[m.n - 1] = pt.at("z");
                    jet = maps::ridge_reflection_nd(m.gamma, m.n, x);
                } else {
                    jet = maps::pick_reflection_nd(m.gamma, m.n, x);
                }
            } else if (m.kind == "radial") {
                std::vector<double> x(static_cast<std::size_t>(m.n));
                for (int i = 0; i < m.n; ++i) x[static_cast<std::size_t>(i)] = pt.at("x" + std::to_string(i + 1));
                jet = maps::radial_map(maps::RadialMapSpec(m.alphas), x);
            } else {
                throw validation_error("maps eval does not support the identity map");
            }
            json cfg{{"map", o.map_spec}, {"point", o.point_spec}, {"seed", o.seed}};
            detail::emit_report("maps-eval", cfg, detail::jet_to_json(jet), elapsed(), o.json_path, out);
            return kExitOk;
        }

        if (dist_kpq->parsed()) {
            config::check_pq(o.p, o.q);
            const auto m = detail::parse_map(o.map_spec);
            const config::GridParams grid =
                o.grid_spec.empty() ? config::GridParams{32, 2.0} : config::parse_grid(o.grid_spec);
            const distortion::ExponentPair exps(o.p, o.q);
            distortion::JetFn jet;
            geometry::Region region = geometry::Region::interior(geometry::DomainSpec::disc());
            std::optional<double> closed;
            if (m.kind == "cusp2d") {
                const auto d = geometry::DomainSpec::cusp_gamma(m.gamma);
                region = geometry::Region::complement(d);
                jet = distortion::cusp_reflection_jet(m.gamma);
                if (distortion::alpha_range(m.gamma, 2, o.p).contains(exps.alpha))
                    closed = distortion::kpq_bound_closed_form(m.gamma, exps, 2);
            } else if (m.kind == "cusp2d-inverse") {
                region = geometry::Region::interior(geometry::DomainSpec::cusp_gamma(m.gamma));
                jet = distortion::cusp_inverse_jet(m.gamma);
            } else if (m.kind == "pick") {
                const auto d = geometry::DomainSpec::pick(m.n, 1.0 / (m.gamma + 1.0));
                region = geometry::Region::complement(d);
                jet = distortion::pick_reflection_jet(m.gamma, m.n);
                if (distortion::alpha_range(m.gamma, m.n, o.p).contains(exps.alpha))
                    closed = distortion::kpq_bound_closed_form(m.gamma, exps, m.n);
            } else if (m.kind == "ridge") {
                const auto d = geometry::DomainSpec::ridge(m.n, 1.0 / (m.gamma + 1.0));
                region = geometry::Region::complement(d);
                jet = distortion::ridge_reflection_jet(m.gamma, m.n);
                if (distortion::alpha_range(m.gamma, m.n - 1, o.p).contains(exps.alpha))
                    closed = distortion::kpq_bound_closed_form(m.gamma, exps, m.n - 1);
            } else if (m.kind == "identity") {
                jet = distortion::identity_jet(m.n);
                if (!o.domain_spec.empty())
                    region = geometry::Region::interior(config::parse_domain(o.domain_spec));
            } else {
                throw validation_error("distortion kpq does not support map '" + m.kind + "'");
            }
            geometry::GradedGrid seed_grid;
            seed_grid.N = grid.N;
            seed_grid.grading_beta = grid.beta;
            const auto rep = distortion::kpq_numeric(jet, region, exps, seed_grid, closed);
            if (!o.csv_path.empty()) detail::write_refinement_csv(o.csv_path, rep);
            json cfg{{"map", o.map_spec}, {"p", o.p},       {"q", o.q},
                     {"grid_N", grid.N},  {"grid_beta", grid.beta}, {"seed", o.seed}};
            detail::emit_report("distortion-kpq", cfg, detail::report_to_json(rep), elapsed(),
                                o.json_path, out);
            if (o.require_converged && !rep.converged) {
                err << "error: refinement did not converge\n";
                return kExitNumerical;
            }
            return kExitOk;
        }

        if (alpha_cmd->parsed()) {
            double gamma = o.gamma;
            if (gamma == 0.0) {
                geometry::DomainSpec::check_gamma_tilde(o.gamma_tilde);
                gamma = (1.0 - o.gamma_tilde) / o.gamma_tilde;
            }
            const auto range = distortion::alpha_range(gamma, o.n, o.p);
            json results{{"lo", range.lo}, {"hi", range.hi}, {"empty", range.empty}};
            json cfg{{"gamma", gamma}, {"n", o.n}, {"p", o.p}, {"seed", o.seed}};
            detail::emit_report("alpha-range", cfg, results, elapsed(), o.json_path, out);
            return kExitOk;
        }

        if (ext_verify->parsed()) {
            config::check_pq(o.p, o.q);
            const auto domain = config::parse_domain(o.domain_spec);
            if (domain.kind != geometry::DomainKind::Cusp2D)
                throw validation_error("extend verify currently supports cusp2d domains");
            const config::GridParams grid =
                o.grid_spec.empty() ? config::GridParams{128, 2.0} : config::parse_grid(o.grid_spec);
            const auto battery = o.functions_path.empty() ? config::default_battery()
                                                          : config::load_manifest(o.functions_path);
            const distortion::ExponentPair exps(o.p, o.q);
            json checks = json::array();
            bool all_pass = true;
            for (const auto& fn : battery) {
                const auto check = extension::verify_extension_inequality(fn, domain.gamma, exps,
                                                                          grid.N, grid.beta);
                all_pass = all_pass && check.pass;
                checks.push_back({{"function", fn.name},
                                  {"lhs", check.lhs},
                                  {"rhs_factor", check.rhs_factor},
                                  {"rhs", check.rhs},
                                  {"pass", check.pass}});
            }
            json results{{"checks", checks}, {"all_pass", all_pass}};
            json cfg{{"domain", o.domain_spec}, {"p", o.p},           {"q", o.q},
                     {"grid_N", grid.N},        {"grid_beta", grid.beta}, {"seed", o.seed}};
            detail::emit_report("extend-verify", cfg, results, elapsed(), o.json_path, out);
            return all_pass ? kExitOk : kExitNumerical;
        }

        if (eig_min->parsed()) {
            if (!(o.p > 1.0)) throw validation_error("p must exceed 1");
            if (!(o.q > 1.0)) throw validation_error("q must exceed 1 for the eigen problem");
            if (o.restarts < 1) throw validation_error("restarts must be >= 1");
            if (o.max_iters < 1) throw validation_error("max-iters must be >= 1");
            const auto domain = config::parse_domain(o.domain_spec);
            const config::GridParams grid =
                o.grid_spec.empty() ? config::GridParams{64, 0.0} : config::parse_grid(o.grid_spec);
            eigen::MinimizeSettings settings;
            settings.N = grid.N;
            settings.beta = o.grid_spec.find("beta") != std::string::npos ? grid.beta : 0.0;
            settings.restarts = o.restarts;
            settings.seed = o.seed;
            settings.max_iters = o.max_iters;
            const auto res = eigen::minimize_mu(domain, o.p, o.q, settings);
            json results{{"mu", res.mu},
                         {"iterations", res.iterations},
                         {"constraint_residual", res.constraint_residual},
                         {"history_first", res.history.front()},
                         {"history_last", res.history.back()},
                         {"history_length", res.history.size()}};
            json cfg{{"domain", o.domain_spec}, {"p", o.p},
                     {"q", o.q},                {"grid_N", grid.N},
                     {"restarts", o.restarts},  {"seed", o.seed},
                     {"max_iters", o.max_iters}};
            detail::emit_report("eigen-min", cfg, results, elapsed(), o.json_path, out);
            return kExitOk;
        }

        if (eig_bound->parsed()) {
            const auto domain = config::parse_domain(o.domain_spec);
            if (!domain.is_cusp_kind())
                throw validation_error("eigen bound requires a cusp-type domain");
            const int n = domain.kind == geometry::DomainKind::Cusp2D ? 2 : domain.n;
            if (!(o.alpha > 0.0 && o.alpha < 1.0))
                throw validation_error("alpha must lie in (0,1)");
            if (!(o.r > 1.0)) throw validation_error("r must exceed 1");
            double mu_ball = o.mu_ball;
            if (mu_ball == 0.0) {
                if (n != 2)
                    throw validation_error("--mu-ball is required for n >= 3 (no ball solver)");
                const config::GridParams grid =
                    o.grid_spec.empty() ? config::GridParams{64, 0.0} : config::parse_grid(o.grid_spec);
                eigen::MinimizeSettings settings;
                settings.N = grid.N;
                settings.seed = o.seed;
                mu_ball =
                    eigen::minimize_mu(geometry::DomainSpec::disc(), o.alpha * o.p, o.r, settings).mu;
            }
            const double bound =
                eigen::cusp_eigen_bound(domain.gamma_tilde, n, o.p, o.alpha, mu_ball);
            json results{{"bound", bound}, {"mu_ball_input", mu_ball}};
            json cfg{{"domain", o.domain_spec}, {"p", o.p},  {"alpha", o.alpha},
                     {"r", o.r},                {"n", n},     {"seed", o.seed}};
            detail::emit_report("eigen-bound", cfg, results, elapsed(), o.json_path, out);
            return kExitOk;
        }

        if (paper->parsed()) {
            geometry::DomainSpec::check_gamma_tilde(o.gamma_tilde);
            const double gamma = (1.0 - o.gamma_tilde) / o.gamma_tilde;
            json results;
            std::string section = o.section == "2.3" ? "2.3-2d" : o.section;
            if (section == "2.3-2d" || section == "2.3-picks" || section == "2.3-ridges") {
                int n = section == "2.3-2d" ? 2 : o.n;
                if (section != "2.3-2d" && n < 3)
                    throw validation_error("picks/ridges sections require n >= 3");
                const int neff = section == "2.3-ridges" ? n - 1 : n;  // convergence dimension
                const distortion::ExponentPair exps(o.p, o.q);
                const auto range = distortion::alpha_range(gamma, neff, o.p);
                if (!range.contains(exps.alpha))
                    throw numerical_error("alpha = q/p outside the admissible range");
                const double kbound = distortion::kpq_bound_closed_form(gamma, exps, neff);
                geometry::DomainSpec domain =
                    section == "2.3-2d"
                        ? geometry::DomainSpec::cusp(o.gamma_tilde)
                        : (section == "2.3-picks" ? geometry::DomainSpec::pick(n, o.gamma_tilde)
                                                  : geometry::DomainSpec::ridge(n, o.gamma_tilde));
                const double mt = geometry::measure(domain);
                const double super_measure = section == "2.3-ridges"
                                                 ? unit_ball_volume(n - 1)
                                                 : unit_ball_volume(n);
                const double ebound =
                    distortion::extension_norm_bound(mt, kbound, exps);
                // Displayed variant: superdomain measure in the first slot, no 2pi factor.
                const double a = exps.alpha;
                const double inner = (1.0 - a) / (neff * (1.0 - a) - a * gamma);
                const double display =
                    std::pow(std::pow(super_measure, 1.0 - a) +
                                 std::pow(distortion::cgamma(gamma, o.p), a) *
                                     std::pow(inner, 1.0 - a),
                             1.0 / o.q);
                geometry::GradedGrid seed_grid;
                seed_grid.N = 32;
                seed_grid.grading_beta = 2.0;
                distortion::JetFn jet =
                    section == "2.3-2d"
                        ? distortion::cusp_reflection_jet(gamma)
                        : (section == "2.3-picks"
                               ? distortion::pick_reflection_jet(gamma, n)
                               : distortion::ridge_reflection_jet(gamma, n));
                const auto rep = distortion::kpq_numeric(jet, geometry::Region::complement(domain),
                                                         exps, seed_grid, kbound);
                if (!rep.converged)
                    throw numerical_error("distortion refinement did not converge in the "
                                          "admissible range");
                results = {{"gamma", gamma},
                           {"c_gamma", distortion::cgamma(gamma, o.p)},
                           {"alpha", exps.alpha},
                           {"alpha_range", {{"lo", range.lo}, {"hi", range.hi}}},
                           {"measure", mt},
                           {"kpq_numeric", detail::report_to_json(rep)},
                           {"kpq_closed_form", kbound},
                           {"extension_norm_bound", ebound},
                           {"extension_norm_display", display}};
                out << "section " << section << ": gamma=" << gamma
                    << " C_gamma=" << distortion::cgamma(gamma, o.p) << " alpha=[" << range.lo
                    << "," << range.hi << ") K<=" << kbound << " |E|<=" << ebound << "\n";
            } else if (section == "4-eigen") {
                const double alpha = o.alpha == 0.0 ? 0.55 : o.alpha;
                eigen::MinimizeSettings ball_settings;
                ball_settings.N = 64;
                ball_settings.seed = o.seed;
                const double mu_ball =
                    eigen::minimize_mu(geometry::DomainSpec::disc(), alpha * o.p, o.r, ball_settings)
                        .mu;
                const double bound = eigen::cusp_eigen_bound(o.gamma_tilde, 2, o.p, alpha, mu_ball);
                eigen::MinimizeSettings cusp_settings;
                cusp_settings.N = 64;
                cusp_settings.seed = o.seed;
                const auto cusp_res = eigen::minimize_mu(geometry::DomainSpec::cusp(o.gamma_tilde),
                                                         o.p, o.r, cusp_settings);
                const bool pass = cusp_res.mu >= bound;
                results = {{"alpha", alpha},        {"mu_ball", mu_ball},
                           {"bound", bound},        {"mu_cusp", cusp_res.mu},
                           {"pass", pass}};
                out << "section 4-eigen: mu_ball=" << mu_ball << " bound=" << bound
                    << " mu_cusp=" << cusp_res.mu << " pass=" << (pass ? "yes" : "no") << "\n";
                if (!pass) throw numerical_error("eigenvalue bound check failed");
            } else {
                throw validation_error("unknown section '" + o.section + "'");
            }
            json cfg{{"section", section},  {"gamma_tilde", o.gamma_tilde}, {"p", o.p},
                     {"q", o.q},            {"alpha", o.alpha},             {"n", o.n},
                     {"r", o.r},            {"seed", o.seed}};
            detail::emit_report("paper-reproduce", cfg, results, elapsed(), o.json_path, out);
            return kExitOk;
        }

        err << "error: no command selected\n";
        return kExitUsage;
    } catch (const validation_error& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const numerical_error& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::out_of_range& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace cuspext::cli
