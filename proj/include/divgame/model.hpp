#pragma once

#include <cmath>

#include "divgame/errors.hpp"
#include "divgame/reward.hpp"

namespace divgame {

// Market and ambiguity parameters of the dividend game.
//
//   dX_t = m dt + sigma dW_t - dD_t      (reference measure)
//
// rho is the discount rate, kappa >= 0 the ambiguity level (kappa = 0 is the
// risk-neutral model).  Validation is eager: a constructed ModelParams is
// always usable by the solver modules.
struct ModelParams {
    double m;
    double sigma;
    double rho;
    double kappa;
    RewardFunction reward;

    ModelParams(double m_, double sigma_, double rho_, double kappa_,
                RewardFunction reward_ = RewardFunction::zero())
        : m(m_), sigma(sigma_), rho(rho_), kappa(kappa_), reward(reward_) {
        if (!(m > 0.0)) throw ValidationError("ModelParams: m must be > 0");
        if (!(sigma > 0.0)) throw ValidationError("ModelParams: sigma must be > 0");
        if (!(rho > 0.0)) throw ValidationError("ModelParams: rho must be > 0");
        if (!(kappa >= 0.0)) throw ValidationError("ModelParams: kappa must be >= 0");
        if (!(reward.lipschitz_bound() < rho))
            throw ValidationError("ModelParams: reward Lipschitz bound must be < rho");
    }

    ModelParams with_kappa(double k) const { return ModelParams(m, sigma, rho, k, reward); }

    // delta = rho - Lip(f) > 0; every downstream bound references this value.
    double delta() const { return rho - reward.lipschitz_bound(); }

    // The threshold closes (beta = 0) exactly when 2m <= sigma^2 kappa.
    bool saturated() const { return 2.0 * m <= sigma * sigma * kappa; }

    // Uniform bound on the shot slope: s <= exp(2 m^2 / (sigma^2 delta)).
    double slope_bound() const { return std::exp(2.0 * m * m / (sigma * sigma * delta())); }

    // Threshold bound beta <= m / delta.
    double threshold_bound() const { return m / delta(); }
};

// H(x, y, z) = (2/sigma^2) (m z - (1/2) sigma^2 kappa z^2 - rho y + f(x)).
// The interior branch of the variational inequality reads phi'' + H = 0.
inline double hamiltonian(const ModelParams& p, double x, double y, double z) {
    return 2.0 / (p.sigma * p.sigma) *
           (p.m * z - 0.5 * p.sigma * p.sigma * p.kappa * z * z - p.rho * y + p.reward(x));
}

// Saturation level of the C^1 slope clamp below.  Must exceed every slope the
// shooting bracket can produce; the default 1 + slope_bound() does.
struct MollifierCap {
    double cap;

    explicit MollifierCap(double c) : cap(c) {
        if (!(c > 1.0)) throw ValidationError("MollifierCap: cap must be > 1");
    }

    static MollifierCap defaults(const ModelParams& p) {
        return MollifierCap(1.0 + p.slope_bound());
    }
};

// Piecewise-quadratic C^1 clamp: identity on [-cap, cap], quadratic blend on
// +-[cap, 2 cap], constant +-(3/2) cap outside.  Odd by construction,
// 1-Lipschitz, |F| <= (3/2) cap.
inline double mollify(double z, MollifierCap c) {
    const double s = c.cap;
    const double a = std::abs(z);
    double f;
    if (a <= s) {
        f = a;
    } else if (a < 2.0 * s) {
        f = -0.5 * s + 2.0 * a - a * a / (2.0 * s);
    } else {
        f = 1.5 * s;
    }
    return std::copysign(f, z);
}

// H_F(x, y, z) = H(x, y, F(z)).  Globally Lipschitz in (y, z) on bounded
// x-ranges, which makes the shooting Cauchy problem well posed for every
// initial slope the bracket can probe.  Agrees with H bitwise on |z| <= cap.
inline double mollified_hamiltonian(const ModelParams& p, MollifierCap c, double x, double y,
                                    double z) {
    return hamiltonian(p, x, y, mollify(z, c));
}

// Adverse player's optimal drift distortion given the local value slope:
// xi*(x) = -kappa sigma V'(x).  Value slopes satisfy V' >= 1 up to the grid
// tolerance 1e-9, so anything lower signals a corrupted value function.
inline double optimal_kernel(const ModelParams& p, double v_prime) {
    if (!(v_prime >= 1.0 - 1e-9)) throw ValidationError("optimal_kernel: slope must be >= 1");
    if (p.kappa == 0.0) return 0.0;
    return -p.kappa * p.sigma * v_prime;
}

}  // namespace divgame
