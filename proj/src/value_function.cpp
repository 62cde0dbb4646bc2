#include "divgame/value_function.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace divgame {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace

ValueFunction::ValueFunction(ModelParams p, double beta, std::vector<double> xs,
                             std::vector<double> v, std::vector<double> dv, double v_at_beta)
    : params_(std::move(p)),
      beta_(beta),
      xs_(std::move(xs)),
      v_(std::move(v)),
      dv_(std::move(dv)),
      v_at_beta_(v_at_beta),
      c_bar_(1.0) {
    require(beta_ >= 0.0, "ValueFunction: beta must be >= 0");
    require(xs_.size() == v_.size() && xs_.size() == dv_.size(),
            "ValueFunction: sample arrays must have equal length");
    if (beta_ == 0.0) {
        // Degenerate interior; the function is x everywhere.
        xs_.clear();
        v_.clear();
        dv_.clear();
        require(v_at_beta_ == 0.0, "ValueFunction: v(0) must be 0 when beta = 0");
        return;
    }
    require(xs_.size() >= 2, "ValueFunction: interior branch needs at least two nodes");
    require(xs_.front() == 0.0, "ValueFunction: grid must start at 0");
    require(std::abs(xs_.back() - beta_) <= 1e-12 * std::max(1.0, beta_),
            "ValueFunction: grid must end at beta");
    for (size_t i = 1; i < xs_.size(); ++i)
        require(xs_[i] > xs_[i - 1], "ValueFunction: grid must be strictly increasing");
    xs_.back() = beta_;
    for (double d : dv_) c_bar_ = std::max(c_bar_, d);
}

ValueFunction ValueFunction::build(const ModelParams& p, const ShootingResult& result) {
    if (result.beta_kappa == 0.0)
        return ValueFunction(p, 0.0, {}, {}, {}, 0.0);

    const CauchyTrajectory& t = result.trajectory;
    require(t.barrier.has_value(), "ValueFunction: interior result lacks a barrier point");
    require(t.phi.front() == 0.0, "ValueFunction: phi(0) must be 0");
    require(std::abs(t.barrier->dphi - 1.0) <= 1e-9,
            "ValueFunction: slope at the barrier must be 1 within 1e-9");
    for (double d : t.dphi)
        require(d >= 1.0 - 1e-9, "ValueFunction: interior slope must stay >= 1");

    return ValueFunction(p, result.beta_kappa, t.xs, t.phi, t.dphi, t.barrier->phi);
}

ValueFunction ValueFunction::from_samples(const ModelParams& p, double beta,
                                          std::vector<double> xs, std::vector<double> v,
                                          std::vector<double> dv, double v_at_beta) {
    return ValueFunction(p, beta, std::move(xs), std::move(v), std::move(dv), v_at_beta);
}

ValuePoint ValueFunction::hermite(double x) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    size_t i = static_cast<size_t>(std::distance(xs_.begin(), it));
    i = i == 0 ? 0 : i - 1;
    if (i >= xs_.size() - 1) i = xs_.size() - 2;

    const double x0 = xs_[i];
    const double h = xs_[i + 1] - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double v0 = v_[i], v1 = v_[i + 1];
    const double d0 = dv_[i], d1 = dv_[i + 1];

    const double val = (2.0 * t3 - 3.0 * t2 + 1.0) * v0 + (t3 - 2.0 * t2 + t) * h * d0 +
                       (-2.0 * t3 + 3.0 * t2) * v1 + (t3 - t2) * h * d1;
    const double slope = (6.0 * t2 - 6.0 * t) * (v0 - v1) / h + (3.0 * t2 - 4.0 * t + 1.0) * d0 +
                         (3.0 * t2 - 2.0 * t) * d1;
    const double curv = (12.0 * t - 6.0) * (v0 - v1) / (h * h) + (6.0 * t - 4.0) * d0 / h +
                        (6.0 * t - 2.0) * d1 / h;
    return {val, slope, curv};
}

ValuePoint ValueFunction::at(double x) const {
    if (x < 0.0) throw ValidationError("ValueFunction: negative surplus");
    if (x >= beta_ || xs_.size() < 2) {
        return {(x - beta_) + v_at_beta_, 1.0, 0.0};
    }
    const ValuePoint h = hermite(x);
    // Curvature through the ODE identity, exact for the true solution.
    return {h.v, h.dv, -hamiltonian(params_, x, h.v, h.dv)};
}

double ValueFunction::default_audit_window() const {
    return beta_ + 3.0 * std::max(1.0, params_.m / params_.rho);
}

ResidualReport ValueFunction::hjb_residual(int n_check, double x_max_check) const {
    if (n_check < 2) throw ValidationError("hjb_residual: n_check must be >= 2");
    if (!(x_max_check > 0.0)) throw ValidationError("hjb_residual: x_max_check must be > 0");

    ResidualReport rep{0.0, 0.0, 0.0, 0.0};
    const bool has_interior = beta_ > 0.0 && xs_.size() >= 2;

    auto check_interior = [&](double x) {
        const ValuePoint h = hermite(x);
        rep.max_ode_residual =
            std::max(rep.max_ode_residual, std::abs(h.ddv + hamiltonian(params_, x, h.v, h.dv)));
        rep.max_slope_defect = std::max(rep.max_slope_defect, std::max(0.0, 1.0 - h.dv));
    };

    for (int j = 0; j < n_check; ++j) {
        const double x = x_max_check * static_cast<double>(j) / static_cast<double>(n_check - 1);
        if (has_interior && x < beta_) {
            check_interior(x);
        } else {
            const double v = (x - beta_) + v_at_beta_;
            rep.max_vi_violation =
                std::max(rep.max_vi_violation, std::max(0.0, hamiltonian(params_, x, v, 1.0)));
        }
    }
    if (has_interior) {
        check_interior(beta_);
        rep.pasting_gap = std::abs(params_.rho * v_at_beta_ - params_.reward(beta_) -
                                   (params_.m - 0.5 * params_.sigma * params_.sigma * params_.kappa));
    }
    return rep;
}

std::vector<double> kernel_profile(const ValueFunction& vf, std::span<const double> xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    const ModelParams& p = vf.params();
    for (double x : xs) {
        if (x < 0.0) throw ValidationError("kernel_profile: negative surplus");
        out.push_back(optimal_kernel(p, vf.at(x).dv));
    }
    return out;
}

}  // namespace divgame
