// Command-line front end: instance generation, single solves with trace
// output, and phase-transition sweeps. Exit codes: 0 success, 2 usage or
// validation error, 3 solver divergence (partial trace still written).

#include <omp.h>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sprec/experiments.hpp"
#include "sprec/io.hpp"
#include "sprec/solvers.hpp"

namespace {

using nlohmann::ordered_json;
using namespace sprec;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;

struct GenFlags {
    std::size_t n = 0, m = 0, tau = 0;
    double sigma = 0.0;
    std::uint64_t seed = 1;
    std::string out = "instance.json";
};

struct SolverFlags {
    std::string algo = "admm-mcp";
    std::string rho_mode = "paper";
    double rho = 0.1;
    std::string lambda_mode = "adaptive";
    double lambda = 0.1;
    double gamma = 1.5;
    std::size_t max_iter = 500;
    double tol = 1e-6;
};

struct SolveFlags {
    std::string instance_path;
    GenFlags gen;  // inline generation when no instance file is given
    bool inline_gen = false;
    SolverFlags solver;
    std::string out = "solve";
};

struct SweepFlags {
    std::size_t n = 0, tau = 0;
    double sigma = 0.0;
    std::vector<std::size_t> m_list;
    std::size_t trials = 100;
    std::vector<std::string> algos{"admm-mcp"};
    std::uint64_t seed = 1;
    SolverFlags solver;
    std::string out = "sweep";
};

RhoMode parse_rho_mode(const std::string& s) {
    if (s == "paper") return RhoMode::Paper;
    if (s == "theory") return RhoMode::Theory;
    if (s == "explicit") return RhoMode::Explicit;
    throw std::invalid_argument("unknown rho mode '" + s + "' (valid: paper, theory, explicit)");
}

LambdaStrategy parse_lambda_mode(const std::string& s) {
    if (s == "fixed") return LambdaStrategy::Fixed;
    if (s == "grid") return LambdaStrategy::Grid;
    if (s == "adaptive") return LambdaStrategy::Adaptive;
    throw std::invalid_argument("unknown lambda mode '" + s +
                                "' (valid: fixed, grid, adaptive)");
}

SolverConfig make_config(const SolverFlags& f) {
    SolverConfig cfg;
    cfg.algorithm = parse_algorithm(f.algo);
    cfg.rho_mode = parse_rho_mode(f.rho_mode);
    cfg.rho = f.rho;
    cfg.lambda_strategy = parse_lambda_mode(f.lambda_mode);
    cfg.lambda = f.lambda;
    cfg.gamma = f.gamma;
    cfg.max_iter = f.max_iter;
    cfg.tol = f.tol;
    return cfg;
}

void manifest_put_solver(ordered_json& doc, const SolverFlags& f) {
    doc["rho_mode"] = f.rho_mode;
    doc["rho"] = f.rho;
    doc["lambda_mode"] = f.lambda_mode;
    doc["lambda"] = f.lambda;
    doc["gamma"] = f.gamma;
    doc["max_iter"] = f.max_iter;
    doc["tol"] = f.tol;
}

void manifest_get_solver(const ordered_json& doc, SolverFlags& f) {
    f.rho_mode = doc.at("rho_mode").get<std::string>();
    f.rho = doc.at("rho").get<double>();
    f.lambda_mode = doc.at("lambda_mode").get<std::string>();
    f.lambda = doc.at("lambda").get<double>();
    f.gamma = doc.at("gamma").get<double>();
    f.max_iter = doc.at("max_iter").get<std::size_t>();
    f.tol = doc.at("tol").get<double>();
}

int run_gen(const GenFlags& f) {
    const ProblemInstance inst = generate_instance(f.n, f.m, f.tau, f.sigma, f.seed);
    write_instance_json(f.out, inst);

    ordered_json man;
    man["version"] = 1;
    man["subcommand"] = "gen";
    man["n"] = f.n;
    man["m"] = f.m;
    man["tau"] = f.tau;
    man["sigma"] = f.sigma;
    man["seed"] = f.seed;
    man["out"] = f.out;
    write_json(f.out + ".manifest.json", man);

    std::cout << "wrote " << f.out << " (n=" << f.n << " m=" << f.m << " tau=" << f.tau
              << ")\n";
    return kExitOk;
}

int run_solve(const SolveFlags& f) {
    ProblemInstance inst;
    if (!f.instance_path.empty()) {
        inst = read_instance_json(f.instance_path);
    } else if (f.inline_gen) {
        inst = generate_instance(f.gen.n, f.gen.m, f.gen.tau, f.gen.sigma, f.gen.seed);
    } else {
        throw std::invalid_argument("solve needs --instance or inline --n/--m/--tau flags");
    }
    const SolverConfig cfg = make_config(f.solver);

    ordered_json man;
    man["version"] = 1;
    man["subcommand"] = "solve";
    if (!f.instance_path.empty()) {
        man["instance"] = f.instance_path;
    } else {
        man["instance"] = nullptr;
        man["n"] = f.gen.n;
        man["m"] = f.gen.m;
        man["tau"] = f.gen.tau;
        man["sigma"] = f.gen.sigma;
        man["seed"] = f.gen.seed;
    }
    man["algo"] = f.solver.algo;
    manifest_put_solver(man, f.solver);
    man["out"] = f.out;

    const std::string trace_path = f.out + ".trace.csv";
    Solution sol;
    try {
        sol = run_solver(inst, cfg);
    } catch (const SolverDivergenceError& e) {
        write_trace_csv(trace_path, e.partial_trace);
        write_json(f.out + ".manifest.json", man);
        std::cerr << "solver diverged: " << e.what() << " (partial trace in " << trace_path
                  << ")\n";
        return kExitDivergence;
    }

    std::optional<double> rel_err;
    if (inst.x0) rel_err = norm2_diff(*inst.x0, sol.x_hat) / norm2(*inst.x0);

    write_trace_csv(trace_path, sol.trace);
    write_solution_json(f.out + ".solution.json", sol, f.solver.algo, rel_err);
    write_json(f.out + ".manifest.json", man);

    std::cout << "converged=" << (sol.converged ? "true" : "false")
              << " iterations=" << sol.iterations
              << " rel_err=" << (rel_err ? format_double(*rel_err) : "n/a") << '\n';
    return kExitOk;
}

int run_sweep_cmd(const SweepFlags& f) {
    if (f.m_list.empty()) throw std::invalid_argument("sweep needs a non-empty --m-list");
    if (f.algos.empty()) throw std::invalid_argument("sweep needs at least one --algos entry");
    std::vector<SolverConfig> configs;
    for (const std::string& tag : f.algos) {
        SolverFlags sf = f.solver;
        sf.algo = tag;
        configs.push_back(make_config(sf));
    }

    const std::vector<SweepRecord> records =
        run_sweep(f.n, f.tau, f.sigma, f.m_list, f.trials, configs, f.seed);

    write_sweep_csv(f.out + ".csv", records);

    ordered_json man;
    man["version"] = 1;
    man["subcommand"] = "sweep";
    man["n"] = f.n;
    man["tau"] = f.tau;
    man["sigma"] = f.sigma;
    man["m_list"] = f.m_list;
    man["trials"] = f.trials;
    man["algos"] = f.algos;
    man["seed"] = f.seed;
    manifest_put_solver(man, f.solver);
    man["out"] = f.out;
    write_json(f.out + ".manifest.json", man);

    for (const SweepRecord& r : records) {
        std::cout << "m=" << r.m << " algo=" << r.algorithm
                  << " success_rate=" << format_double(r.success_rate)
                  << " mean_iterations=" << format_double(r.mean_iterations) << '\n';
    }
    return kExitOk;
}

int run_from_manifest(const std::string& path, const std::string& out_override) {
    const ordered_json man = read_json(path);
    const auto sub = man.at("subcommand").get<std::string>();
    if (sub == "gen") {
        GenFlags f;
        f.n = man.at("n").get<std::size_t>();
        f.m = man.at("m").get<std::size_t>();
        f.tau = man.at("tau").get<std::size_t>();
        f.sigma = man.at("sigma").get<double>();
        f.seed = man.at("seed").get<std::uint64_t>();
        f.out = out_override.empty() ? man.at("out").get<std::string>() : out_override;
        return run_gen(f);
    }
    if (sub == "solve") {
        SolveFlags f;
        if (!man.at("instance").is_null()) {
            f.instance_path = man.at("instance").get<std::string>();
        } else {
            f.inline_gen = true;
            f.gen.n = man.at("n").get<std::size_t>();
            f.gen.m = man.at("m").get<std::size_t>();
            f.gen.tau = man.at("tau").get<std::size_t>();
            f.gen.sigma = man.at("sigma").get<double>();
            f.gen.seed = man.at("seed").get<std::uint64_t>();
        }
        f.solver.algo = man.at("algo").get<std::string>();
        manifest_get_solver(man, f.solver);
        f.out = out_override.empty() ? man.at("out").get<std::string>() : out_override;
        return run_solve(f);
    }
    if (sub == "sweep") {
        SweepFlags f;
        f.n = man.at("n").get<std::size_t>();
        f.tau = man.at("tau").get<std::size_t>();
        f.sigma = man.at("sigma").get<double>();
        f.m_list = man.at("m_list").get<std::vector<std::size_t>>();
        f.trials = man.at("trials").get<std::size_t>();
        f.algos = man.at("algos").get<std::vector<std::string>>();
        f.seed = man.at("seed").get<std::uint64_t>();
        manifest_get_solver(man, f.solver);
        f.out = out_override.empty() ? man.at("out").get<std::string>() : out_override;
        return run_sweep_cmd(f);
    }
    throw std::invalid_argument("manifest '" + path + "' has unknown subcommand '" + sub + "'");
}

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
    cmd->add_option("--algo", f.algo,
                    "algorithm: admm-mcp, admm-mcp-exact, admm-l0, iht, niht");
    cmd->add_option("--rho-mode", f.rho_mode, "rho preset: paper, theory, explicit");
    auto* rho = cmd->add_option("--rho", f.rho, "penalty parameter rho (implies explicit mode)");
    cmd->add_option("--lambda-mode", f.lambda_mode, "lambda strategy: fixed, grid, adaptive");
    auto* lam =
        cmd->add_option("--lambda", f.lambda, "threshold scale lambda (implies fixed mode)");
    cmd->add_option("--gamma", f.gamma, "MCP concavity gamma (> 1)");
    cmd->add_option("--max-iter", f.max_iter, "iteration cap");
    cmd->add_option("--tol", f.tol, "relative stopping tolerance");
    // when a value is given without its mode, switch the mode for the user;
    // parse_complete_callback leaves the plain callback slot to the caller
    cmd->parse_complete_callback([cmd, rho, lam, &f]() {
        if (rho->count() > 0 && cmd->count("--rho-mode") == 0) f.rho_mode = "explicit";
        if (lam->count() > 0 && cmd->count("--lambda-mode") == 0) f.lambda_mode = "fixed";
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse signal recovery toolkit"};
    app.require_subcommand(0, 1);

    int threads = 0;
    std::string from_manifest, out_override;
    app.add_option("--threads", threads, "worker threads (0 = library default)");
    app.add_option("--from-manifest", from_manifest, "re-run a recorded command");
    app.add_option("--out", out_override, "output override for --from-manifest");

    GenFlags gen_flags;
    auto* gen = app.add_subcommand("gen", "generate a problem instance file");
    gen->add_option("--n", gen_flags.n, "signal length N")->required();
    gen->add_option("--m", gen_flags.m, "measurement count M")->required();
    gen->add_option("--tau", gen_flags.tau, "sparsity (nonzeros in x0)")->required();
    gen->add_option("--sigma", gen_flags.sigma, "noise standard deviation");
    gen->add_option("--seed", gen_flags.seed, "64-bit seed");
    gen->add_option("--out", gen_flags.out, "output path");

    SolveFlags solve_flags;
    auto* solve = app.add_subcommand("solve", "run one solver, write trace and solution");
    solve->add_option("--instance", solve_flags.instance_path, "instance file from gen");
    auto* sn = solve->add_option("--n", solve_flags.gen.n, "inline instance: signal length");
    solve->add_option("--m", solve_flags.gen.m, "inline instance: measurements");
    solve->add_option("--tau", solve_flags.gen.tau, "inline instance: sparsity");
    solve->add_option("--sigma", solve_flags.gen.sigma, "inline instance: noise deviation");
    solve->add_option("--seed", solve_flags.gen.seed, "inline instance: seed");
    add_solver_flags(solve, solve_flags.solver);
    solve->add_option("--out", solve_flags.out, "output prefix");
    solve->callback([&]() { solve_flags.inline_gen = sn->count() > 0; });

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "success-rate sweep over measurement counts");
    sweep->add_option("--n", sweep_flags.n, "signal length N")->required();
    sweep->add_option("--tau", sweep_flags.tau, "sparsity")->required();
    sweep->add_option("--sigma", sweep_flags.sigma, "noise standard deviation");
    sweep->add_option("--m-list", sweep_flags.m_list, "measurement counts, comma separated")
        ->required()
        ->delimiter(',');
    sweep->add_option("--trials", sweep_flags.trials, "trials per (M, algorithm)");
    sweep->add_option("--algos", sweep_flags.algos, "algorithms, comma separated")
        ->delimiter(',');
    sweep->add_option("--seed", sweep_flags.seed, "base seed (trial t uses seed + t)");
    add_solver_flags(sweep, sweep_flags.solver);
    sweep->add_option("--out", sweep_flags.out, "output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (!from_manifest.empty()) return run_from_manifest(from_manifest, out_override);
        if (gen->parsed()) return run_gen(gen_flags);
        if (solve->parsed()) return run_solve(solve_flags);
        if (sweep->parsed()) return run_sweep_cmd(sweep_flags);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const SolverDivergenceError& e) {
        std::cerr << "solver diverged: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
