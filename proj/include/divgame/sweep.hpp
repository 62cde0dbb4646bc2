#pragma once

#include <span>
#include <utility>
#include <vector>

#include "divgame/shooting.hpp"
#include "divgame/value_function.hpp"

namespace divgame {

struct MonotonicityViolation {
    double x;
    double kappa;  // the larger kappa of the offending pair
    double gap;    // V(x; kappa_{j+1}) - V(x; kappa_j), positive
};

struct SweepReport {
    std::vector<double> kappas;
    std::vector<double> betas;
    std::vector<double> s_values;
    std::vector<double> x_grid;
    std::vector<std::vector<double>> v_samples;  // [kappa index][x index]
    std::vector<MonotonicityViolation> monotonicity_violations;  // tolerance 1e-8
    std::vector<double> sup_diff_to_zero;  // sup_x |V(x;k) - V(x;0)|; empty unless kappas[0] == 0
};

// Solves every kappa on the grid (base.kappa is ignored) and audits the
// kappa-monotonicity of the value function on the x-grid.  The sup for
// sup_diff_to_zero runs over the x-grid extended to
// [0, max(beta) + m/rho]; beyond every threshold both branches have slope
// one, so the difference is constant there and the window is exact.
SweepReport run_sweep(const ModelParams& base, std::span<const double> kappa_grid,
                      std::span<const double> x_grid, const IntegrationConfig& cfg);

struct ContinuityDiag {
    double kappa;
    double beta_gap;  // |beta_kappa - beta_{kappa/2}|
    double ratio;     // sup_diff_to_zero(kappa/2) / sup_diff_to_zero(kappa)
    bool linear_rate_consistent;  // ratio in [0.35, 0.65]
};

// Halving diagnostics for the linear-in-kappa convergence to the risk-neutral
// value.  Each pair must be (kappa, kappa/2) with kappa > 0 and both values
// present in the report (which must also contain kappa = 0).
std::vector<ContinuityDiag> check_continuity(
    const SweepReport& report, std::span<const std::pair<double, double>> halving_pairs);

}  // namespace divgame
