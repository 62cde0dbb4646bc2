#include "divgame/baseline.hpp"

#include <cmath>

namespace divgame {

std::pair<double, double> characteristic_roots(double m, double sigma, double rho) {
    if (!(sigma > 0.0)) throw ValidationError("characteristic_roots: sigma must be > 0");
    if (!(rho > 0.0)) throw ValidationError("characteristic_roots: rho must be > 0");
    if (m < 0.0) throw ValidationError("characteristic_roots: m must be >= 0");
    const double disc = std::sqrt(m * m + 2.0 * sigma * sigma * rho);
    const double r1 = (-m + disc) / (sigma * sigma);
    const double r2 = (-m - disc) / (sigma * sigma);
    return {r1, r2};
}

std::pair<double, double> characteristic_roots(const ModelParams& p) {
    if (p.kappa != 0.0)
        throw ValidationError("characteristic_roots: closed form requires kappa = 0");
    return characteristic_roots(p.m, p.sigma, p.rho);
}

ClosedFormSolution ClosedFormSolution::solve(const ModelParams& p) {
    if (p.kappa != 0.0)
        throw ValidationError("ClosedFormSolution: requires kappa = 0");
    if (p.reward.kind() != RewardFunction::Kind::Zero)
        throw ValidationError("ClosedFormSolution: requires a zero reward");

    auto [r1, r2] = characteristic_roots(p);

    ClosedFormSolution sol;
    sol.r1 = r1;
    sol.r2 = r2;
    // V'' = C (r1^2 e^{r1 x} - r2^2 e^{r2 x}) vanishes where the two
    // exponential terms balance.
    sol.beta_star = std::log(r2 * r2 / (r1 * r1)) / (r1 - r2);
    sol.scale = 1.0 / (r1 * std::exp(r1 * sol.beta_star) - r2 * std::exp(r2 * sol.beta_star));
    sol.v_at_beta =
        sol.scale * (std::exp(r1 * sol.beta_star) - std::exp(r2 * sol.beta_star));
    return sol;
}

ClosedFormSolution::Point ClosedFormSolution::at(double x) const {
    if (x < 0.0) throw ValidationError("ClosedFormSolution: negative surplus");
    if (x <= beta_star) {
        const double e1 = std::exp(r1 * x);
        const double e2 = std::exp(r2 * x);
        return {scale * (e1 - e2), scale * (r1 * e1 - r2 * e2)};
    }
    return {x - beta_star + v_at_beta, 1.0};
}

}  // namespace divgame
