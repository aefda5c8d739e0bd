// qtdp: build discretized dynamic programs from JSON configs, check the
// boundedness certificates, solve for the action-value fixed point, and
// compare against brute-force oracles.
//
// Exit codes: 0 ok, 1 numeric failure, 2 input error, 3 certificate failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "qtdp/oracle.hpp"
#include "qtdp/serialize.hpp"

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("QTDP_LOG");
    if (!env) return LogLevel::quiet;
    std::string s(env);
    if (s == "debug") return LogLevel::debug;
    if (s == "info") return LogLevel::info;
    return LogLevel::quiet;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) std::cerr << "[qtdp] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::debug) std::cerr << "[qtdp:debug] " << msg << "\n";
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return nlohmann::json::parse(in);
}

struct SolveSettings {
    std::string solver = "additive";  // additive | weighted | risk
    double tol = 1e-10;
    std::size_t max_iter = 200000;
};

// Runs the configured solver; fills report/kappa as applicable.
// Throws std::runtime_error on certificate failure.
std::pair<qtdp::QFunction, qtdp::ConvergenceReport> run_solver(
    const qtdp::LoadedConfig& model, const SolveSettings& s,
    std::optional<qtdp::WeightFunction>& kappa_out) {
    const qtdp::QFunction g0 = qtdp::QFunction::zeros(model.dp);
    if (s.solver == "additive")
        return qtdp::solve_fixed_point(model.dp, g0, s.tol, s.max_iter);
    if (s.solver == "weighted") {
        if (model.kappa) {
            kappa_out = model.kappa;
        } else {
            const auto [p, q] = model.weight_spec.value_or(std::pair{1.0, 2.0});
            auto [kappa, cert] = qtdp::auto_weight_linear(model.dp, p, q);
            log_debug("auto weight: alpha_beta=" + std::to_string(cert.alpha_beta));
            kappa_out = std::move(kappa);
        }
        return qtdp::solve_fixed_point_weighted(model.dp, *kappa_out, g0, s.tol, s.max_iter);
    }
    // risk
    if (!model.risk) throw CLI::ValidationError("--solver risk needs gamma_risk in the config");
    kappa_out = model.kappa;
    return qtdp::solve_fixed_point_rs(model.dp, *model.risk, model.kappa, g0, s.tol,
                                      s.max_iter);
}

int cmd_check(const std::string& config_path, const std::string& solver) {
    qtdp::LoadedConfig model;
    try {
        model = qtdp::load_config(read_json(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    nlohmann::json out;
    bool ok = true;
    if (solver == "risk" && model.risk) {
        auto rep = qtdp::check_assumption_one_rs(model.dp, *model.risk);
        out["assumption_one"] = qtdp::assumption_one_to_json(rep);
        ok = rep.holds;
    } else {
        auto rep = qtdp::check_assumption_one(model.dp);
        out["assumption_one"] = qtdp::assumption_one_to_json(rep);
        ok = rep.holds;
    }
    if (solver == "weighted" || model.kappa) {
        qtdp::WeightFunction kappa;
        std::string spec;
        if (model.kappa) {
            kappa = *model.kappa;
            spec = "model-provided";
        } else {
            const auto [p, q] = model.weight_spec.value_or(std::pair{1.0, 2.0});
            try {
                auto [k, cert] = qtdp::auto_weight_linear(model.dp, p, q);
                kappa = std::move(k);
                std::ostringstream ss;
                ss << "kappa(x) = " << p << "*w + q (auto)";
                spec = ss.str();
            } catch (const std::exception& e) {
                out["weighted_certificate"] = {{"holds", false}, {"error", e.what()}};
                std::cout << out.dump(2) << "\n";
                return 1;
            }
        }
        auto cert = qtdp::certify_assumption_three(model.dp, kappa);
        out["weighted_certificate"] = qtdp::certificate_to_json(cert, spec);
        if (solver == "weighted") ok = ok && cert.holds;
    }
    if (model.risk) {
        auto ms = qtdp::verify_monotone_assumptions(model.dp);
        out["monotone_flags"] = {{"reward_increasing", ms.reward_increasing},
                                 {"kernel_monotone", ms.kernel_monotone},
                                 {"feasibility_nested", ms.feasibility_nested}};
        if (solver == "risk" && model.kappa) ok = ok && ms.all();
    }
    std::cout << out.dump(2) << "\n";
    return ok ? 0 : 1;
}

int cmd_solve(const std::string& config_path, const SolveSettings& s,
              const std::string& out_dir) {
    qtdp::LoadedConfig model;
    try {
        model = qtdp::load_config(read_json(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    std::optional<qtdp::WeightFunction> kappa;
    std::pair<qtdp::QFunction, qtdp::ConvergenceReport> solved;
    try {
        solved = run_solver(model, s, kappa);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return 3;
    }
    const auto& [g, report] = solved;
    if (report.stop_reason == qtdp::StopReason::max_iter) {
        std::cerr << "did not converge within " << s.max_iter << " iterations\n";
        return 1;
    }
    log_info("converged in " + std::to_string(report.iterations) + " iterations");

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream os(fs::path(out_dir) / "g_star.csv");
        qtdp::write_q_csv(os, model.dp, g);
    }
    const std::vector<double> v = qtdp::recover_value(model.dp, g);
    {
        std::ofstream os(fs::path(out_dir) / "value.csv");
        qtdp::write_value_csv(os, model.dp, v);
    }
    {
        std::ofstream os(fs::path(out_dir) / "policy.csv");
        qtdp::write_policy_csv(os, model.dp, qtdp::greedy_policy(model.dp, g));
    }
    {
        nlohmann::json rep = qtdp::report_to_json(report);
        rep["solver"] = s.solver;
        rep["kind"] = model.kind;
        rep["tol"] = s.tol;
        if (model.risk && s.solver == "risk") rep["gamma"] = model.risk->gamma;
        if (kappa) {
            auto cert = qtdp::certify_assumption_three(model.dp, *kappa);
            rep["weighted_certificate"] = qtdp::certificate_to_json(
                cert, model.kappa ? "model-provided" : "auto");
        }
        std::ofstream os(fs::path(out_dir) / "report.json");
        os << rep.dump(2) << "\n";
    }
    return 0;
}

int cmd_compare(const std::string& config_path, const std::string& oracle,
                std::size_t horizon, double tol) {
    qtdp::LoadedConfig model;
    try {
        model = qtdp::load_config(read_json(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    std::pair<qtdp::QFunction, qtdp::ConvergenceReport> solved;
    try {
        solved = qtdp::solve_fixed_point(model.dp, qtdp::QFunction::zeros(model.dp), tol);
    } catch (const std::exception& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return 3;
    }
    const auto& [g, report] = solved;
    const std::vector<double> v = qtdp::recover_value(model.dp, g);

    double disc = 0.0, bound = 0.0;
    if (oracle == "truncate") {
        auto res = qtdp::oracle::truncated_bellman(model.dp, horizon);
        for (std::size_t x = 0; x < model.dp.n_states; ++x)
            disc = std::max(disc, std::fabs(res.v[x] - v[x]));
        bound = res.tail_bound + report.certified_error + 1e-8;
    } else if (oracle == "enumerate") {
        std::vector<qtdp::Policy> policies;
        try {
            policies = qtdp::oracle::enumerate_policies(model.dp);
        } catch (const std::exception& e) {
            std::cerr << "oracle inapplicable: " << e.what() << "\n";
            return 2;
        }
        std::vector<double> best(model.dp.n_states, qtdp::neg_inf);
        for (const auto& sigma : policies) {
            const std::vector<double> vs = qtdp::sigma_value(model.dp, sigma, horizon);
            for (std::size_t x = 0; x < model.dp.n_states; ++x)
                best[x] = std::max(best[x], vs[x]);
        }
        for (std::size_t x = 0; x < model.dp.n_states; ++x)
            disc = std::max(disc, std::fabs(best[x] - v[x]));
        bound = qtdp::sigma_value_tail(model.dp, horizon) + report.certified_error + 1e-8;
    } else {  // closed-form
        if (!model.deterministic_cake) {
            std::cerr << "oracle inapplicable: closed-form needs a deterministic "
                         "log-utility savings config\n";
            return 2;
        }
        std::vector<double> w_grid;
        for (const auto& lab : model.dp.state_labels) w_grid.push_back(lab[0]);
        auto sol = qtdp::oracle::cake_eating_closed_form(model.beta, model.gross_return,
                                                         w_grid);
        double resolution = 0.0;
        for (std::size_t i = 0; i + 1 < w_grid.size(); ++i)
            resolution = std::max(resolution, sol.value[i + 1] - sol.value[i]);
        for (std::size_t x = 0; x < model.dp.n_states; ++x)
            disc = std::max(disc, std::fabs(sol.value[x] - v[x]));
        bound = 10.0 * resolution + report.certified_error + 1e-8;
    }
    std::cout << "max_discrepancy " << disc << "\n"
              << "certified_bound " << bound << "\n";
    return disc <= bound ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic-program fixed-point solver"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all cores)");

    std::string config_path;
    std::string solver = "additive";
    SolveSettings settings;
    std::string out_dir = "out";
    std::string oracle = "truncate";
    std::size_t horizon = 300;

    CLI::App* check = app.add_subcommand("check", "run assumption certificates");
    check->add_option("config", config_path)->required();
    check->add_option("--solver", solver)
        ->check(CLI::IsMember({"additive", "weighted", "risk"}));

    CLI::App* solve = app.add_subcommand("solve", "solve and export tables");
    solve->add_option("config", config_path)->required();
    solve->add_option("--solver", settings.solver)
        ->check(CLI::IsMember({"additive", "weighted", "risk"}));
    solve->add_option("--tol", settings.tol);
    solve->add_option("--max-iter", settings.max_iter);
    solve->add_option("--out", out_dir);

    CLI::App* compare = app.add_subcommand("compare", "solve and diff against an oracle");
    compare->add_option("config", config_path)->required();
    compare->add_option("--oracle", oracle)
        ->check(CLI::IsMember({"truncate", "enumerate", "closed-form"}));
    compare->add_option("--horizon", horizon);
    compare->add_option("--tol", settings.tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (*check) return cmd_check(config_path, solver);
        if (*solve) return cmd_solve(config_path, settings, out_dir);
        return cmd_compare(config_path, oracle, horizon, settings.tol);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
