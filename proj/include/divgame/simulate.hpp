#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "divgame/model.hpp"
#include "divgame/value_function.hpp"

namespace divgame {

// Adversary's drift-distortion kernel as a bounded function of state.
// Optimal holds a reference to the value function; the caller keeps it alive.
class KernelSpec {
  public:
    enum class Kind { Zero, Optimal, Constant };

    static KernelSpec zero() { return KernelSpec(Kind::Zero, nullptr, 0.0); }
    static KernelSpec optimal(const ValueFunction& vf) { return KernelSpec(Kind::Optimal, &vf, 0.0); }
    static KernelSpec constant(double c) { return KernelSpec(Kind::Constant, nullptr, c); }

    Kind kind() const { return kind_; }
    double constant_level() const { return c_; }

    double eval(const ModelParams& p, double x) const {
        switch (kind_) {
            case Kind::Zero: return 0.0;
            case Kind::Optimal: return optimal_kernel(p, vf_->at(x).dv);
            case Kind::Constant: return c_;
        }
        return 0.0;  // unreachable
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::Zero: return "zero";
            case Kind::Optimal: return "optimal";
            case Kind::Constant: return "const(" + std::to_string(c_) + ")";
        }
        return "?";
    }

  private:
    KernelSpec(Kind k, const ValueFunction* vf, double c) : kind_(k), vf_(vf), c_(c) {}

    Kind kind_;
    const ValueFunction* vf_;
    double c_;
};

struct SimConfig {
    double dt = 1e-3;
    long n_paths = 20000;
    double horizon_eps = 1e-4;  // horizon T = ln(1/horizon_eps) / rho
    std::uint64_t seed = 0;
    bool antithetic = true;
    // Per-step Brownian-bridge ruin check.  Plain grid detection misses
    // in-step hits of 0 and overstates the payoff by O(sqrt(dt)), which is
    // larger than the validation tolerances at the default dt.
    bool ruin_bridge = true;

    double horizon(double rho) const { return std::log(1.0 / horizon_eps) / rho; }

    void validate() const {
        if (!(dt > 0.0)) throw ValidationError("SimConfig: dt must be > 0");
        if (n_paths < 2) throw ValidationError("SimConfig: n_paths must be >= 2");
        if (!(horizon_eps > 0.0 && horizon_eps < 1.0))
            throw ValidationError("SimConfig: horizon_eps must be in (0, 1)");
    }
};

// Monte Carlo estimate of the discounted payoff with its decomposition.
// mean = reward_part + dividend_part + penalty_part by construction.
struct PayoffEstimate {
    double mean;
    double std_error;
    double reward_part;
    double dividend_part;
    double penalty_part;
    double ruin_fraction;
};

// Discrete Skorokhod decomposition at the barrier: pushed_k is the running
// positive excess max(0, max_{j<=k}(eta_j - beta)) and reflected_k =
// eta_k - pushed_k, so reflected + pushed = eta holds bitwise.
struct SkorokhodPath {
    std::vector<double> reflected;  // chi
    std::vector<double> pushed;     // zeta (cumulative dividends)
};

SkorokhodPath skorokhod_map(double beta, std::span<const double> eta);

// Euler simulation of the reflected, killed surplus under the kernel's
// measure.  Deterministic contract: the estimate depends only on the inputs,
// never on n_workers; per-path randomness is keyed by (seed, path index) and
// the reduction runs in path order with compensated summation.
PayoffEstimate simulate_payoff(const ModelParams& p, double x0, double beta,
                               const KernelSpec& kernel, const SimConfig& cfg,
                               int n_workers = 1);

// One-sided perturbation of the equilibrium pair: either shift the threshold
// (kernel stays optimal) or override the kernel (threshold stays put).
struct Deviation {
    double beta_shift = 0.0;
    std::optional<KernelSpec> kernel;
};

struct ProbeRow {
    std::string label;
    double beta;
    PayoffEstimate estimate;
};

// Row 0 is the equilibrium pair (beta_kappa, optimal kernel); one row per
// deviation.  All rows share the config (and therefore the random numbers).
std::vector<ProbeRow> equilibrium_probe(const ModelParams& p, double x0, const ValueFunction& vf,
                                        std::span<const Deviation> deviations,
                                        const SimConfig& cfg, int n_workers = 1);

}  // namespace divgame
