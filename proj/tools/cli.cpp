#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "divgame/baseline.hpp"
#include "divgame/config.hpp"
#include "divgame/errors.hpp"
#include "divgame/simulate.hpp"
#include "divgame/sweep.hpp"

namespace divgame {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// "a,b,c" or "start:stop:count"
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    auto to_num = [&](const std::string& s) {
        try {
            size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("grid: bad number '" + s + "' in '" + spec + "'");
        }
    };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ':')) parts.push_back(tok);
        if (parts.size() != 3) throw ValidationError("grid: expected start:stop:count");
        const double start = to_num(parts[0]);
        const double stop = to_num(parts[1]);
        const int count = static_cast<int>(to_num(parts[2]));
        if (count < 2 || stop <= start) throw ValidationError("grid: bad start:stop:count");
        for (int i = 0; i < count; ++i)
            out.push_back(start + (stop - start) * static_cast<double>(i) / (count - 1));
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(to_num(tok));
    }
    if (out.empty()) throw ValidationError("grid: empty spec '" + spec + "'");
    return out;
}

struct ModelFlags {
    std::optional<double> m, sigma, rho, kappa, step, xmax, event_tol, cap;
    std::optional<int> stride;
    std::optional<std::string> reward;

    void attach(CLI::App* cmd) {
        cmd->add_option("--m", m, "surplus drift (> 0)");
        cmd->add_option("--sigma", sigma, "surplus volatility (> 0)");
        cmd->add_option("--rho", rho, "discount rate (> 0)");
        cmd->add_option("--kappa", kappa, "ambiguity level (>= 0)");
        cmd->add_option("--reward", reward, "zero | linear:a | capped:a:M | saturating:a:b");
        cmd->add_option("--step", step, "RK4 step");
        cmd->add_option("--xmax", xmax, "integration horizon (default m/delta + 1)");
        cmd->add_option("--event-tol", event_tol, "crossing localisation tolerance");
        cmd->add_option("--stride", stride, "trajectory output stride");
        cmd->add_option("--cap", cap, "mollifier cap (default 1 + slope bound)");
    }

    void apply(RunConfig& c) const {
        if (m) c.m = *m;
        if (sigma) c.sigma = *sigma;
        if (rho) c.rho = *rho;
        if (kappa) c.kappa = *kappa;
        if (reward) c.reward = parse_reward_spec(*reward);
        if (step) c.step = *step;
        if (xmax) c.x_max = *xmax;
        if (event_tol) c.event_tol = *event_tol;
        if (stride) c.output_stride = *stride;
    }

    MollifierCap cap_for(const ModelParams& p) const {
        return cap ? MollifierCap(*cap) : MollifierCap::defaults(p);
    }
};

struct SimFlags {
    std::optional<double> dt, horizon_eps;
    std::optional<long> paths;
    std::optional<std::uint64_t> seed;
    std::optional<bool> antithetic, bridge;
    int workers = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dt", dt, "Euler time step");
        cmd->add_option("--paths", paths, "number of Monte Carlo paths");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--horizon-eps", horizon_eps, "discount tail cutoff");
        cmd->add_option("--antithetic", antithetic, "antithetic pairing (0/1)");
        cmd->add_option("--ruin-bridge", bridge, "in-step Brownian-bridge ruin check (0/1)");
        cmd->add_option("--workers", workers, "worker threads (result is worker-independent)");
    }

    void apply(RunConfig& c) const {
        if (dt) c.sim.dt = *dt;
        if (paths) c.sim.n_paths = *paths;
        if (seed) c.sim.seed = *seed;
        if (horizon_eps) c.sim.horizon_eps = *horizon_eps;
        if (antithetic) c.sim.antithetic = *antithetic;
        if (bridge) c.sim.ruin_bridge = *bridge;
    }
};

void print_estimate(std::ostream& out, const PayoffEstimate& e) {
    out << "mean= " << fmt17(e.mean) << " std_error= " << fmt17(e.std_error) << "\n"
        << "reward_part= " << fmt17(e.reward_part) << " dividend_part= " << fmt17(e.dividend_part)
        << " penalty_part= " << fmt17(e.penalty_part) << "\n"
        << "ruin_fraction= " << fmt17(e.ruin_fraction) << "\n";
}

KernelSpec make_kernel(const std::string& spec, const ModelParams& p, const ValueFunction& vf) {
    if (spec == "zero") return KernelSpec::zero();
    if (spec == "optimal") return KernelSpec::optimal(vf);
    if (spec.rfind("const:", 0) == 0) {
        try {
            return KernelSpec::constant(std::stod(spec.substr(6)));
        } catch (const std::exception&) {
            throw ValidationError("kernel: bad constant in '" + spec + "'");
        }
    }
    (void)p;
    throw ValidationError("kernel: expected zero | optimal | const:c, got '" + spec + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"divgame: robust optimal-dividend threshold solver and simulator"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");

    auto* solve_cmd = app.add_subcommand("solve", "solve the free-boundary problem");
    ModelFlags solve_mf;
    solve_mf.attach(solve_cmd);
    std::string solve_out = "value_grid.csv";
    std::optional<double> residual_tol, bracket_tol;
    solve_cmd->add_option("--out", solve_out, "grid CSV path");
    solve_cmd->add_option("--residual-tol", residual_tol, "pasting residual tolerance");
    solve_cmd->add_option("--bracket-tol", bracket_tol, "slope bisection bracket tolerance");

    auto* base_cmd = app.add_subcommand("baseline", "kappa=0 closed form vs the shooting solver");
    ModelFlags base_mf;
    base_mf.attach(base_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "solve a kappa grid and audit monotonicity");
    ModelFlags sweep_mf;
    sweep_mf.attach(sweep_cmd);
    std::string kappa_grid_spec, x_grid_spec = "0:4:81", sweep_out = "sweep.csv";
    sweep_cmd->add_option("--kappa-grid", kappa_grid_spec, "list a,b,c or start:stop:count")
        ->required();
    sweep_cmd->add_option("--x-grid", x_grid_spec, "list or start:stop:count");
    sweep_cmd->add_option("--out", sweep_out, "sweep CSV path");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo payoff of a threshold strategy");
    ModelFlags sim_mf;
    sim_mf.attach(sim_cmd);
    SimFlags sim_sf;
    sim_sf.attach(sim_cmd);
    double sim_x0 = 1.0;
    std::optional<double> sim_beta;
    std::string sim_kernel;
    sim_cmd->add_option("--x0", sim_x0, "initial surplus")->required();
    sim_cmd->add_option("--beta", sim_beta, "threshold (default: solved beta_kappa)");
    sim_cmd->add_option("--kernel", sim_kernel,
                        "zero | optimal | const:c (default optimal when kappa > 0, else zero)");

    auto* probe_cmd = app.add_subcommand("probe", "Stackelberg saddle probe around equilibrium");
    ModelFlags probe_mf;
    probe_mf.attach(probe_cmd);
    SimFlags probe_sf;
    probe_sf.attach(probe_cmd);
    double probe_x0 = 1.0;
    std::string beta_shifts_spec, const_kernels_spec;
    probe_cmd->add_option("--x0", probe_x0, "initial surplus")->required();
    probe_cmd->add_option("--beta-shifts", beta_shifts_spec, "comma list of threshold shifts");
    probe_cmd->add_option("--const-kernels", const_kernels_spec, "comma list of constant kernels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::from_json_file(config_path);

    if (solve_cmd->parsed()) {
        solve_mf.apply(cfg);
        const ModelParams p = cfg.model();
        const ShootingResult res =
            solve_shooting(p, solve_mf.cap_for(p), cfg.integration(),
                           residual_tol.value_or(1e-6), bracket_tol.value_or(1e-14));
        const ValueFunction vf = ValueFunction::build(p, res);
        out << "case= "
            << (res.threshold_case == ThresholdCase::Saturated ? "saturated" : "interior") << "\n"
            << "s_kappa= " << fmt17(res.s_kappa) << "\n"
            << "beta_kappa= " << fmt17(res.beta_kappa) << "\n"
            << "pasting_residual= " << fmt17(res.pasting_residual_final) << "\n"
            << "bisection_iters= " << res.bisection_iters << "\n"
            << "V_at_beta= " << fmt17(vf.v_at_beta()) << "\n";
        std::ofstream csv(solve_out);
        if (!csv) throw ValidationError("solve: cannot write '" + solve_out + "'");
        write_value_grid_csv(csv, vf);
        out << "grid_csv= " << solve_out << "\n";
        return 0;
    }

    if (base_cmd->parsed()) {
        base_mf.apply(cfg);
        cfg.kappa = 0.0;
        cfg.reward = RewardFunction::zero();
        const ModelParams p = cfg.model();
        const ClosedFormSolution sol = ClosedFormSolution::solve(p);
        const double s0 = sol.scale * (sol.r1 - sol.r2);
        const ShootingResult res = solve_shooting(p, base_mf.cap_for(p), cfg.integration());
        out << "r1= " << fmt17(sol.r1) << " r2= " << fmt17(sol.r2) << "\n"
            << "beta_star= " << fmt17(sol.beta_star) << " C= " << fmt17(sol.scale)
            << " s0= " << fmt17(s0) << "\n"
            << "shooting_s= " << fmt17(res.s_kappa) << " shooting_beta= " << fmt17(res.beta_kappa)
            << "\n"
            << "delta_s= " << fmt17(std::abs(res.s_kappa - s0))
            << " delta_beta= " << fmt17(std::abs(res.beta_kappa - sol.beta_star)) << "\n";
        return 0;
    }

    if (sweep_cmd->parsed()) {
        sweep_mf.apply(cfg);
        const ModelParams base = cfg.model();
        const std::vector<double> kappas = parse_grid(kappa_grid_spec);
        const std::vector<double> xs = parse_grid(x_grid_spec);
        const SweepReport rep = run_sweep(base, kappas, xs, cfg.integration());
        std::ofstream csv(sweep_out);
        if (!csv) throw ValidationError("sweep: cannot write '" + sweep_out + "'");
        write_sweep_csv(csv, rep);
        out << "kappas= " << rep.kappas.size()
            << " monotonicity_violations= " << rep.monotonicity_violations.size() << "\n";
        for (size_t j = 0; j < rep.sup_diff_to_zero.size(); ++j)
            out << "sup_diff_to_zero kappa= " << fmt17(rep.kappas[j]) << " : "
                << fmt17(rep.sup_diff_to_zero[j]) << "\n";
        out << "sweep_csv= " << sweep_out << "\n";
        return 0;
    }

    if (sim_cmd->parsed()) {
        sim_mf.apply(cfg);
        sim_sf.apply(cfg);
        const ModelParams p = cfg.model();
        const ShootingResult res = solve_shooting(p, sim_mf.cap_for(p), cfg.integration());
        const ValueFunction vf = ValueFunction::build(p, res);
        const double beta = sim_beta.value_or(res.beta_kappa);
        if (sim_kernel.empty()) sim_kernel = p.kappa > 0.0 ? "optimal" : "zero";
        const KernelSpec kernel = make_kernel(sim_kernel, p, vf);
        const PayoffEstimate est = simulate_payoff(p, sim_x0, beta, kernel, cfg.sim, sim_sf.workers);
        out << "beta= " << fmt17(beta) << " kernel= " << sim_kernel << "\n";
        print_estimate(out, est);
        return 0;
    }

    if (probe_cmd->parsed()) {
        probe_mf.apply(cfg);
        probe_sf.apply(cfg);
        const ModelParams p = cfg.model();
        const ShootingResult res = solve_shooting(p, probe_mf.cap_for(p), cfg.integration());
        const ValueFunction vf = ValueFunction::build(p, res);
        std::vector<Deviation> devs;
        if (!beta_shifts_spec.empty())
            for (double s : parse_grid(beta_shifts_spec)) devs.push_back({s, std::nullopt});
        if (!const_kernels_spec.empty())
            for (double c : parse_grid(const_kernels_spec))
                devs.push_back({0.0, KernelSpec::constant(c)});
        const auto rows = equilibrium_probe(p, probe_x0, vf, devs, cfg.sim, probe_sf.workers);
        for (const auto& r : rows) {
            out << r.label << " beta= " << fmt17(r.beta) << " mean= " << fmt17(r.estimate.mean)
                << " std_error= " << fmt17(r.estimate.std_error)
                << " penalty_part= " << fmt17(r.estimate.penalty_part) << "\n";
        }
        return 0;
    }

    err << "error: no subcommand\n";
    return 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        return run(argc, argv, out, err);
    } catch (const SimConfigError& e) {
        err << "simulation config error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const BlowupError& e) {
        err << "numerical blowup: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace divgame
