#pragma once

#include <span>
#include <vector>

#include "divgame/model.hpp"
#include "divgame/shooting.hpp"

namespace divgame {

struct ValuePoint {
    double v;
    double dv;
    double ddv;
};

struct ResidualReport {
    double max_ode_residual;   // sup over [0, beta] of |V'' + H(x, V, V')|
    double max_slope_defect;   // sup over [0, beta] of (1 - V')^+
    double max_vi_violation;   // sup over (beta, x_max] of (V'' + H)^+ with V'' = 0, V' = 1
    double pasting_gap;        // |rho V(beta) - f(beta) - (m - sigma^2 kappa / 2)|, 0 if beta = 0
};

// Full value function: the nonlinear shot branch on [0, beta] stitched to the
// slope-one linear branch beyond.  Immutable after construction; evaluation
// is cubic-Hermite on the stored (value, slope) samples, with the curvature
// on the interior branch supplied by the ODE identity V'' = -H(x, V, V').
class ValueFunction {
  public:
    static ValueFunction build(const ModelParams& p, const ShootingResult& result);

    // Assemble directly from samples (closed-form grids, fault-injection
    // tests).  xs must be strictly increasing with xs.front() = 0 and
    // xs.back() = beta whenever beta > 0.
    static ValueFunction from_samples(const ModelParams& p, double beta, std::vector<double> xs,
                                      std::vector<double> v, std::vector<double> dv,
                                      double v_at_beta);

    // V, V', V''.  For x >= beta the linear branch (x - beta + V(beta), 1, 0).
    ValuePoint at(double x) const;

    const ModelParams& params() const { return params_; }
    double beta() const { return beta_; }
    double v_at_beta() const { return v_at_beta_; }
    double slope_bound() const { return c_bar_; }  // max stored slope
    const std::vector<double>& grid() const { return xs_; }
    const std::vector<double>& values() const { return v_; }
    const std::vector<double>& slopes() const { return dv_; }

    // Audits both branches of the variational inequality on a uniform grid of
    // n_check points over [0, x_max_check].  The interior curvature here comes
    // from the interpolant itself (not the ODE identity), so the report stays
    // meaningful for corrupted inputs.
    ResidualReport hjb_residual(int n_check, double x_max_check) const;

    // Audit window beta + 3 max(1, m/rho).
    double default_audit_window() const;

  private:
    ValueFunction(ModelParams p, double beta, std::vector<double> xs, std::vector<double> v,
                  std::vector<double> dv, double v_at_beta);

    // Hermite value/slope/curvature of the stored interpolant at interior x.
    ValuePoint hermite(double x) const;

    ModelParams params_;
    double beta_;
    std::vector<double> xs_;
    std::vector<double> v_;
    std::vector<double> dv_;
    double v_at_beta_;
    double c_bar_;
};

inline ValueFunction build_value_function(const ModelParams& p, const ShootingResult& r) {
    return ValueFunction::build(p, r);
}

inline ResidualReport hjb_residual(const ValueFunction& vf, int n_check, double x_max_check) {
    return vf.hjb_residual(n_check, x_max_check);
}

// xi*(x) = -kappa sigma V'(x) pointwise; constant -kappa sigma beyond beta.
std::vector<double> kernel_profile(const ValueFunction& vf, std::span<const double> xs);

}  // namespace divgame
