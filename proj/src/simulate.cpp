#include "divgame/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "divgame/rng.hpp"

namespace divgame {

SkorokhodPath skorokhod_map(double beta, std::span<const double> eta) {
    if (beta < 0.0) throw ValidationError("skorokhod_map: beta must be >= 0");
    if (eta.empty()) throw ValidationError("skorokhod_map: empty path");
    SkorokhodPath out;
    out.reflected.reserve(eta.size());
    out.pushed.reserve(eta.size());
    double running = 0.0;  // max(0, max_j (eta_j - beta)) so far
    for (double e : eta) {
        running = std::max(running, e - beta);
        out.pushed.push_back(running);
        out.reflected.push_back(e - running);
    }
    return out;
}

namespace {

struct PathTotals {
    double reward = 0.0;
    double dividend = 0.0;
    double penalty = 0.0;
    bool ruined = false;
};

struct PathProblem {
    const ModelParams& p;
    double x0;
    double beta;
    const KernelSpec& kernel;
    const SimConfig& cfg;
    long n_steps;
    double sqrt_dt;
    double decay;  // e^{-rho dt}
};

PathTotals run_path(const PathProblem& prob, long path_index) {
    const ModelParams& p = prob.p;
    const SimConfig& cfg = prob.cfg;
    const double dt = cfg.dt;
    const double beta = prob.beta;
    const bool penalised = p.kappa > 0.0;
    const double inv_two_kappa = penalised ? 1.0 / (2.0 * p.kappa) : 0.0;

    const std::uint64_t stream =
        cfg.antithetic ? static_cast<std::uint64_t>(path_index / 2)
                       : static_cast<std::uint64_t>(path_index);
    const bool negate = cfg.antithetic && (path_index % 2 == 1);
    PathRng rng(cfg.seed, stream, negate);

    PathTotals tot;

    // Surplus above the threshold is paid out at once.
    double x = prob.x0;
    const double lump = std::max(x - beta, 0.0);
    tot.dividend += lump;
    x -= lump;
    if (x <= 0.0) {
        tot.ruined = true;
        return tot;
    }

    double disc = 1.0;
    for (long k = 0; k < prob.n_steps; ++k) {
        const double xi = prob.kernel.eval(p, x);
        tot.reward += disc * p.reward(x) * dt;
        if (penalised) tot.penalty += disc * xi * xi * inv_two_kappa * dt;

        const double z = rng.normal();
        const double x_next = x + (p.m + p.sigma * xi) * dt + p.sigma * prob.sqrt_dt * z;
        disc *= prob.decay;

        if (x_next <= 0.0) {
            tot.ruined = true;
            break;
        }
        if (cfg.ruin_bridge) {
            // Probability the Brownian bridge between the endpoints hit 0.
            const double p_hit =
                std::exp(-2.0 * x * x_next / (p.sigma * p.sigma * dt));
            if (rng.uniform() < p_hit) {
                tot.ruined = true;
                break;
            }
        }
        const double excess = x_next - beta;
        if (excess > 0.0) {
            tot.dividend += disc * excess;
            x = beta;
        } else {
            x = x_next;
        }
    }
    return tot;
}

double kahan_sum(std::span<const double> xs) {
    double sum = 0.0;
    double carry = 0.0;
    for (double x : xs) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace

PayoffEstimate simulate_payoff(const ModelParams& p, double x0, double beta,
                               const KernelSpec& kernel, const SimConfig& cfg, int n_workers) {
    if (x0 < 0.0) throw ValidationError("simulate_payoff: x0 must be >= 0");
    if (beta < 0.0) throw ValidationError("simulate_payoff: beta must be >= 0");
    cfg.validate();
    if (n_workers < 1) throw ValidationError("simulate_payoff: n_workers must be >= 1");
    if (p.kappa == 0.0 && kernel.kind() != KernelSpec::Kind::Zero)
        throw SimConfigError(
            "simulate_payoff: non-zero kernel with kappa = 0 (entropy penalty undefined)");

    const double horizon = cfg.horizon(p.rho);
    PathProblem prob{p,
                     x0,
                     beta,
                     kernel,
                     cfg,
                     static_cast<long>(std::ceil(horizon / cfg.dt - 1e-12)),
                     std::sqrt(cfg.dt),
                     std::exp(-p.rho * cfg.dt)};

    const long n = cfg.n_paths;
    std::vector<double> reward(n), dividend(n), penalty(n), total(n);
    std::vector<char> ruined(n);

    auto run_range = [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            const PathTotals t = run_path(prob, i);
            reward[i] = t.reward;
            dividend[i] = t.dividend;
            penalty[i] = t.penalty;
            total[i] = t.reward + t.dividend + t.penalty;
            ruined[i] = t.ruined ? 1 : 0;
        }
    };

    if (n_workers == 1) {
        run_range(0, n);
    } else {
        // Paths are independent; any partition gives the same per-path
        // values, and the reduction below is always sequential.
        std::vector<std::thread> workers;
        workers.reserve(static_cast<size_t>(n_workers));
        const long chunk = (n + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const long lo = std::min<long>(static_cast<long>(w) * chunk, n);
            const long hi = std::min<long>(lo + chunk, n);
            workers.emplace_back(run_range, lo, hi);
        }
        for (auto& t : workers) t.join();
    }

    PayoffEstimate est;
    const double dn = static_cast<double>(n);
    est.reward_part = kahan_sum(reward) / dn;
    est.dividend_part = kahan_sum(dividend) / dn;
    est.penalty_part = kahan_sum(penalty) / dn;
    est.mean = est.reward_part + est.dividend_part + est.penalty_part;

    std::vector<double> sq(n);
    for (long i = 0; i < n; ++i) {
        const double d = total[i] - est.mean;
        sq[i] = d * d;
    }
    const double var = kahan_sum(sq) / (dn - 1.0);
    est.std_error = std::sqrt(var / dn);

    long ruin_count = 0;
    for (char r : ruined) ruin_count += r;
    est.ruin_fraction = static_cast<double>(ruin_count) / dn;
    return est;
}

std::vector<ProbeRow> equilibrium_probe(const ModelParams& p, double x0, const ValueFunction& vf,
                                        std::span<const Deviation> deviations,
                                        const SimConfig& cfg, int n_workers) {
    std::vector<ProbeRow> rows;
    rows.reserve(deviations.size() + 1);

    const KernelSpec equilibrium_kernel = KernelSpec::optimal(vf);
    rows.push_back({"equilibrium", vf.beta(),
                    simulate_payoff(p, x0, vf.beta(), equilibrium_kernel, cfg, n_workers)});

    for (const Deviation& dev : deviations) {
        if (dev.kernel && dev.beta_shift != 0.0)
            throw ValidationError("equilibrium_probe: a deviation perturbs exactly one side");
        if (dev.kernel) {
            rows.push_back({"kernel " + dev.kernel->describe(), vf.beta(),
                            simulate_payoff(p, x0, vf.beta(), *dev.kernel, cfg, n_workers)});
        } else {
            const double b = vf.beta() + dev.beta_shift;
            if (b < 0.0) throw ValidationError("equilibrium_probe: shifted threshold is negative");
            rows.push_back({"beta " + std::to_string(b), b,
                            simulate_payoff(p, x0, b, equilibrium_kernel, cfg, n_workers)});
        }
    }
    return rows;
}

}  // namespace divgame
