#pragma once

#include <optional>
#include <vector>

#include "divgame/model.hpp"

namespace divgame {

// Fixed-step RK4 settings for the shot Cauchy problems.
struct IntegrationConfig {
    double x_max;             // integration horizon
    double step = 1e-4;       // RK4 step
    double event_tol = 1e-12; // crossing localisation tolerance in x
    int output_stride = 10;   // store every n-th node of the trajectory

    // Horizon m/delta + 1: the threshold provably lies in [0, m/delta].
    static IntegrationConfig defaults(const ModelParams& p) {
        IntegrationConfig cfg;
        cfg.x_max = p.threshold_bound() + 1.0;
        return cfg;
    }

    void validate() const {
        if (!(x_max > 0.0)) throw ValidationError("IntegrationConfig: x_max must be > 0");
        if (!(step > 0.0 && step < x_max))
            throw ValidationError("IntegrationConfig: need 0 < step < x_max");
        if (!(event_tol > 0.0 && event_tol < step))
            throw ValidationError("IntegrationConfig: need 0 < event_tol < step");
        if (output_stride < 1) throw ValidationError("IntegrationConfig: output_stride >= 1");
    }
};

// First point where the shot slope returns to 1, with state and curvature.
struct BarrierPoint {
    double x;
    double phi;
    double dphi;
    double ddphi;  // analytic: -H(x, phi, 1)
};

// Solution of phi'' + H_F(x, phi, phi') = 0, phi(0) = 0, phi'(0) = s,
// recorded on a stride-thinned grid up to the crossing (or x_max if the
// slope never returns to 1; barrier is empty in that case, which the
// root-finder reads as "s above the root").
struct CauchyTrajectory {
    double s;
    std::vector<double> xs;
    std::vector<double> phi;
    std::vector<double> dphi;
    std::optional<BarrierPoint> barrier;
};

CauchyTrajectory integrate_cauchy(const ModelParams& p, MollifierCap cap, double s,
                                  const IntegrationConfig& cfg);

// Smooth-pasting residual g(s) = phi_s''(beta(s)) = -H(beta, phi(beta), 1).
// Empty when no crossing occurs before x_max.
std::optional<double> pasting_residual(const ModelParams& p, MollifierCap cap, double s,
                                       const IntegrationConfig& cfg);

enum class ThresholdCase { Saturated, Interior };

struct ShootingResult {
    double s_kappa;
    double beta_kappa;
    CauchyTrajectory trajectory;
    ThresholdCase threshold_case;
    double pasting_residual_final;
    int bisection_iters;
};

// Solves the free-boundary problem by bisection on the initial slope.
//
// For 2m <= sigma^2 kappa the threshold closes and (s, beta) = (1, 0) without
// any integration.  Otherwise g(1) = kappa - 2m/sigma^2 < 0 anchors the lower
// bracket and the slope bound anchors the upper one; probes with a negative
// residual raise the lower end, probes with a positive residual or no
// crossing lower the upper end.  The returned slope is the surviving lower
// end, so the reported trajectory pastes from the concave side.
//
// The crossing of phi' through 1 is tangential at the root, which makes
// |g| scale like the square root of the bracket width; the default
// bracket_tol is chosen so the achievable residual sits well inside
// residual_tol.
ShootingResult solve_shooting(const ModelParams& p, MollifierCap cap,
                              const IntegrationConfig& cfg, double residual_tol = 1e-6,
                              double bracket_tol = 1e-14);

}  // namespace divgame
