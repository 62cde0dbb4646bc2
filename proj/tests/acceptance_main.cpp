// Acceptance suite: one pass/fail line per criterion, exit 0 only if all pass.
//
//   acceptance_tests [--cli <path-to-divgame-binary>] [--only <n>]
//
// The CLI path is needed by criterion 9 (worker-count determinism of the
// command-line simulate output); everything else runs through the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "divgame/baseline.hpp"
#include "divgame/simulate.hpp"
#include "divgame/sweep.hpp"

using namespace divgame;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }

    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

const ModelParams kP0(1.0, 2.0, 0.5, 0.0);

ShootingResult solve_default(const ModelParams& p) {
    return solve_shooting(p, MollifierCap::defaults(p), IntegrationConfig::defaults(p));
}

ValueFunction solve_and_build(const ModelParams& p) {
    return ValueFunction::build(p, solve_default(p));
}

// ---------------------------------------------------------------------------
// criterion 1: baseline oracle match, runtime < 1 s
// ---------------------------------------------------------------------------
void criterion_1(Check& c, const std::string&) {
    const ClosedFormSolution sol = ClosedFormSolution::solve(kP0);
    const double s0 = sol.scale * (sol.r1 - sol.r2);

    // Pre-verify the closed form by direct RK4 integration of the linear ODE.
    {
        const long n = static_cast<long>(std::llround(sol.beta_star / 1e-5));
        const double hh = sol.beta_star / static_cast<double>(n);
        double y = 0.0, z = s0;
        auto f = [&](double yy, double zz) {
            return -2.0 / (kP0.sigma * kP0.sigma) * (kP0.m * zz - kP0.rho * yy);
        };
        for (long i = 0; i < n; ++i) {
            const double k1y = z, k1z = f(y, z);
            const double k2y = z + 0.5 * hh * k1z, k2z = f(y + 0.5 * hh * k1y, z + 0.5 * hh * k1z);
            const double k3y = z + 0.5 * hh * k2z, k3z = f(y + 0.5 * hh * k2y, z + 0.5 * hh * k2z);
            const double k4y = z + hh * k3z, k4z = f(y + hh * k3y, z + hh * k3z);
            y += hh / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            z += hh / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        }
        c.expect(std::abs(z - 1.0) <= 1e-9, "oracle: slope at beta* != 1");
        c.expect(std::abs(f(y, z)) <= 1e-9, "oracle: curvature at beta* != 0");
        c.expect(std::abs(y - kP0.m / kP0.rho) <= 1e-9, "oracle: V(beta*) != m/rho");
    }

    const auto t0 = std::chrono::steady_clock::now();
    const ShootingResult res = solve_default(kP0);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    c.expect(std::abs(res.beta_kappa - sol.beta_star) <= 1e-4,
             "beta " + fmt(res.beta_kappa) + " vs closed form " + fmt(sol.beta_star));
    c.expect(std::abs(res.s_kappa - s0) <= 1e-4,
             "s " + fmt(res.s_kappa) + " vs closed form " + fmt(s0));
    c.expect(secs < 1.0, "runtime " + fmt(secs) + " s >= 1 s");
    c.note("|dbeta|=" + fmt(std::abs(res.beta_kappa - sol.beta_star)) +
           " |ds|=" + fmt(std::abs(res.s_kappa - s0)) + " t=" + fmt(secs) + "s");
}

// ---------------------------------------------------------------------------
// criterion 2: HJB-VI residual suite, runtime < 10 s
// ---------------------------------------------------------------------------
void criterion_2(Check& c, const std::string&) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_ode = 0.0, worst_vi = 0.0, worst_slope = 0.0, worst_gap = 0.0, worst_curv = -1.0;
    for (double kappa : {0.0, 0.1, 0.25, 0.49}) {
        for (int fi = 0; fi < 2; ++fi) {
            const RewardFunction f =
                fi == 0 ? RewardFunction::zero() : RewardFunction::linear(0.3);
            const ModelParams p(1.0, 2.0, 0.5, kappa, f);
            const ValueFunction vf = solve_and_build(p);
            const double window = vf.default_audit_window();
            const ResidualReport rep = vf.hjb_residual(2001, window);
            worst_ode = std::max(worst_ode, rep.max_ode_residual);
            worst_vi = std::max(worst_vi, rep.max_vi_violation);
            worst_slope = std::max(worst_slope, rep.max_slope_defect);
            if (vf.beta() > 0.0) worst_gap = std::max(worst_gap, rep.pasting_gap);
            for (int i = 0; i <= 2000; ++i) {
                const double x = window * static_cast<double>(i) / 2000.0;
                worst_curv = std::max(worst_curv, vf.at(x).ddv);
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(worst_ode <= 1e-6, "max_ode_residual " + fmt(worst_ode) + " > 1e-6");
    c.expect(worst_vi <= 1e-9, "max_vi_violation " + fmt(worst_vi) + " > 1e-9");
    c.expect(worst_slope <= 1e-9, "slope defect " + fmt(worst_slope) + " > 1e-9");
    c.expect(worst_curv <= 1e-8, "concavity V'' " + fmt(worst_curv) + " > 1e-8");
    c.expect(worst_gap <= 1e-6, "pasting gap " + fmt(worst_gap) + " > 1e-6");
    c.expect(secs < 10.0, "runtime " + fmt(secs) + " s >= 10 s");
    c.note("ode=" + fmt(worst_ode) + " vi=" + fmt(worst_vi) + " gap=" + fmt(worst_gap) +
           " t=" + fmt(secs) + "s");
}

// ---------------------------------------------------------------------------
// criterion 3: saturation law
// ---------------------------------------------------------------------------
void criterion_3(Check& c, const std::string&) {
    for (double kappa : {0.5, 0.7, 2.0}) {
        const ModelParams p(1.0, 2.0, 0.5, kappa);
        const ShootingResult res = solve_default(p);
        c.expect(res.beta_kappa == 0.0, "beta != 0 at kappa " + fmt(kappa));
        const ValueFunction vf = ValueFunction::build(p, res);
        for (int i = 0; i <= 200; ++i) {
            const double x = 6.0 * static_cast<double>(i) / 200.0;
            if (vf.at(x).v != x) {
                c.expect(false, "V(x) != x at kappa " + fmt(kappa) + ", x " + fmt(x));
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// criterion 4: threshold and slope bounds over a randomized suite
// ---------------------------------------------------------------------------
void criterion_4(Check& c, const std::string&) {
    std::mt19937 gen(424242);
    std::uniform_real_distribution<double> um(0.5, 2.0), us(1.0, 3.0), ur(0.2, 1.0), uk(0.0, 1.0),
        uf(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double m = um(gen), sigma = us(gen), rho = ur(gen);
        const double kappa = uk(gen) * 1.2 * 2.0 * m / (sigma * sigma);
        const RewardFunction f =
            uf(gen) < 0.5 ? RewardFunction::zero() : RewardFunction::linear(0.3 * rho);
        const ModelParams p(m, sigma, rho, kappa, f);
        const ShootingResult res = solve_default(p);
        c.expect(res.beta_kappa <= p.threshold_bound() + 1e-6,
                 "beta bound broken in set " + std::to_string(i));
        c.expect(res.s_kappa <= p.slope_bound() + 1e-6,
                 "slope bound broken in set " + std::to_string(i));
    }
}

// ---------------------------------------------------------------------------
// criterion 5: kappa-monotonicity and halving ratios, runtime < 30 s
// ---------------------------------------------------------------------------
void criterion_5(Check& c, const std::string&) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> kappas;
    for (int i = 0; i <= 10; ++i) kappas.push_back(0.05 * i);
    std::vector<double> xs;
    for (int i = 0; i <= 60; ++i) xs.push_back(3.0 * i / 60.0);
    const SweepReport rep = run_sweep(kP0, kappas, xs, IntegrationConfig::defaults(kP0));
    c.expect(rep.monotonicity_violations.empty(),
             std::to_string(rep.monotonicity_violations.size()) + " monotonicity violations");

    const std::vector<double> halved{0.0, 0.005, 0.01, 0.02};
    const SweepReport rep2 = run_sweep(kP0, halved, xs, IntegrationConfig::defaults(kP0));
    const std::vector<std::pair<double, double>> pairs{{0.02, 0.01}, {0.01, 0.005}};
    for (const auto& d : check_continuity(rep2, pairs)) {
        c.expect(d.linear_rate_consistent,
                 "ratio " + fmt(d.ratio) + " at kappa " + fmt(d.kappa) + " outside [0.35, 0.65]");
        c.note("ratio(" + fmt(d.kappa) + ")=" + fmt(d.ratio));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs < 30.0, "runtime " + fmt(secs) + " s >= 30 s");
    c.note("t=" + fmt(secs) + "s");
}

// ---------------------------------------------------------------------------
// criterion 6: Monte Carlo / PDE agreement, runtime < 2 min
// ---------------------------------------------------------------------------
void criterion_6(Check& c, const std::string&) {
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_paths = 20000;
    cfg.seed = 61;

    const ClosedFormSolution sol = ClosedFormSolution::solve(kP0);
    const double v1 = sol.at(1.0).v;
    const PayoffEstimate est0 =
        simulate_payoff(kP0, 1.0, sol.beta_star, KernelSpec::zero(), cfg, 2);
    const double tol0 = std::max(3.0 * est0.std_error, 0.02 * v1);
    c.expect(std::abs(est0.mean - v1) <= tol0,
             "kappa 0: |" + fmt(est0.mean) + " - " + fmt(v1) + "| > " + fmt(tol0));

    const ModelParams p02(1.0, 2.0, 0.5, 0.2);
    const ValueFunction vf = solve_and_build(p02);
    const double v1k = vf.at(1.0).v;
    cfg.seed = 62;
    const PayoffEstimate est2 =
        simulate_payoff(p02, 1.0, vf.beta(), KernelSpec::optimal(vf), cfg, 2);
    const double tol2 = std::max(3.0 * est2.std_error, 0.02 * v1k);
    c.expect(std::abs(est2.mean - v1k) <= tol2,
             "kappa 0.2: |" + fmt(est2.mean) + " - " + fmt(v1k) + "| > " + fmt(tol2));

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs < 120.0, "runtime " + fmt(secs) + " s >= 120 s");
    c.note("kappa0: " + fmt(est0.mean) + " vs " + fmt(v1) + "; kappa0.2: " + fmt(est2.mean) +
           " vs " + fmt(v1k) + "; t=" + fmt(secs) + "s");
}

// ---------------------------------------------------------------------------
// criterion 7: Stackelberg saddle probe
// ---------------------------------------------------------------------------
void criterion_7(Check& c, const std::string&) {
    const ModelParams p02(1.0, 2.0, 0.5, 0.2);
    const ValueFunction vf = solve_and_build(p02);
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_paths = 20000;
    cfg.seed = 71;

    const std::vector<Deviation> devs{
        {0.3, std::nullopt},
        {-0.3, std::nullopt},
        {0.0, KernelSpec::constant(0.0)},
        {0.0, KernelSpec::constant(-p02.kappa * p02.sigma * 2.0)},
    };
    const auto rows = equilibrium_probe(p02, 1.0, vf, devs, cfg, 2);
    const PayoffEstimate& eq = rows[0].estimate;
    for (size_t i = 1; i <= 2; ++i) {
        const PayoffEstimate& d = rows[i].estimate;
        const double pooled = std::hypot(eq.std_error, d.std_error);
        c.expect(d.mean <= eq.mean + 3.0 * pooled,
                 rows[i].label + ": maximizer deviation improves (" + fmt(d.mean) + " > " +
                     fmt(eq.mean) + " + 3se)");
    }
    for (size_t i = 3; i <= 4; ++i) {
        const PayoffEstimate& d = rows[i].estimate;
        const double pooled = std::hypot(eq.std_error, d.std_error);
        c.expect(d.mean >= eq.mean - 3.0 * pooled,
                 rows[i].label + ": minimizer deviation undercuts (" + fmt(d.mean) + " < " +
                     fmt(eq.mean) + " - 3se)");
    }
    c.note("eq=" + fmt(eq.mean) + " beta+=" + fmt(rows[1].estimate.mean) +
           " beta-=" + fmt(rows[2].estimate.mean) + " q0=" + fmt(rows[3].estimate.mean) +
           " qconst=" + fmt(rows[4].estimate.mean));
}

// ---------------------------------------------------------------------------
// criterion 8: Skorokhod map property suite
// ---------------------------------------------------------------------------
void criterion_8(Check& c, const std::string&) {
    std::mt19937 gen(881);
    std::normal_distribution<double> dz(0.01, 0.25);
    std::uniform_real_distribution<double> ub(0.3, 2.5), ux(0.0, 2.0), ue(0.0, 0.05);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double beta = ub(gen);
        std::vector<double> eta(300), eta2(300);
        double x = ux(gen);
        double sup_in = 0.0;
        for (size_t i = 0; i < eta.size(); ++i) {
            x += dz(gen);
            eta[i] = x;
            const double bump = ue(gen) * (i % 3 == 0 ? -1.0 : 1.0);
            eta2[i] = x + bump;
            sup_in = std::max(sup_in, std::abs(bump));
        }
        const SkorokhodPath a = skorokhod_map(beta, eta);
        const SkorokhodPath b = skorokhod_map(beta, eta2);
        double prev = 0.0, sup_out = 0.0;
        for (size_t i = 0; i < eta.size(); ++i) {
            if (a.reflected[i] != eta[i] - a.pushed[i]) {
                c.expect(false, "decomposition identity broken");
                return;
            }
            if (a.pushed[i] < prev) {
                c.expect(false, "pushed part decreased");
                return;
            }
            prev = a.pushed[i];
            sup_out = std::max(sup_out, std::abs(a.reflected[i] - b.reflected[i]) +
                                            std::abs(a.pushed[i] - b.pushed[i]));
        }
        if (sup_in > 0.0) worst = std::max(worst, sup_out / sup_in);
    }
    c.expect(worst <= 4.0, "fitted Lipschitz constant " + fmt(worst) + " > 4");
    c.note("c_fit=" + fmt(worst));
}

// ---------------------------------------------------------------------------
// criterion 9: worker-count determinism of the CLI simulate output
// ---------------------------------------------------------------------------
std::string capture(const std::string& cmd, int* exit_code) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        *exit_code = -1;
        return out;
    }
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    *exit_code = pclose(pipe);
    return out;
}

void criterion_9(Check& c, const std::string& cli) {
    if (cli.empty()) {
        c.expect(false, "no --cli path given");
        return;
    }
    const std::string base = cli +
                             " simulate --m 1 --sigma 2 --rho 0.5 --kappa 0.2 --x0 1"
                             " --dt 2e-3 --paths 4000 --seed 20250808 --workers ";
    std::string first;
    for (int workers : {1, 2, 8}) {
        int code = 0;
        const std::string out = capture(base + std::to_string(workers) + " 2>/dev/null", &code);
        c.expect(code == 0,
                 "workers " + std::to_string(workers) + ": exit code " + std::to_string(code));
        if (first.empty()) {
            first = out;
            c.expect(!first.empty(), "empty CLI output");
        } else {
            c.expect(out == first,
                     "workers " + std::to_string(workers) + ": output differs from workers 1");
        }
    }
    // Same invocation repeated: byte-identical as well.
    int code = 0;
    const std::string again = capture(base + "1 2>/dev/null", &code);
    c.expect(again == first, "repeat run differs");
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
        if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    struct Criterion {
        int id;
        const char* title;
        std::function<void(Check&, const std::string&)> fn;
    };
    const std::vector<Criterion> criteria{
        {1, "baseline oracle match (closed form, < 1 s)", criterion_1},
        {2, "HJB-VI residual suite (< 10 s)", criterion_2},
        {3, "saturation law (beta = 0, V(x) = x)", criterion_3},
        {4, "threshold and slope bounds (randomized suite)", criterion_4},
        {5, "kappa-monotonicity and halving ratios (< 30 s)", criterion_5},
        {6, "Monte Carlo / PDE agreement (< 2 min)", criterion_6},
        {7, "Stackelberg saddle probe", criterion_7},
        {8, "Skorokhod map property suite", criterion_8},
        {9, "determinism across 1/2/8 workers (CLI)", criterion_9},
    };

    int failures = 0;
    for (const auto& crit : criteria) {
        if (only != 0 && crit.id != only) continue;
        Check c;
        try {
            crit.fn(c, cli);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        if (c.ok) {
            std::cout << "[PASS] criterion " << crit.id << ": " << crit.title;
            if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
            std::cout << "\n";
        } else {
            ++failures;
            std::cout << "[FAIL] criterion " << crit.id << ": " << crit.title << " -- " << c.detail
                      << "\n";
        }
        std::cout.flush();
    }
    if (failures != 0) std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}
