#pragma once

#include <utility>

#include "divgame/model.hpp"

namespace divgame {

// Closed-form solution of the kappa = 0, f = 0 problem (classical dividend
// barrier).  The interior ODE is linear with constant coefficients,
//
//   (sigma^2/2) V'' + m V' - rho V = 0,
//
// so V(x) = C (e^{r1 x} - e^{r2 x}) up to the barrier, with r1 > 0 > r2 the
// characteristic roots.  Serves as the independent oracle for the shooting
// solver.
struct ClosedFormSolution {
    double r1;          // positive root
    double r2;          // negative root
    double beta_star;   // barrier location, where V'' vanishes
    double scale;       // C, normalisation from V'(beta*) = 1
    double v_at_beta;   // V(beta*) = m / rho

    // Requires kappa = 0 and a zero reward.
    static ClosedFormSolution solve(const ModelParams& p);

    struct Point {
        double v;
        double dv;
    };

    // Two-exponential branch up to beta*, slope-one linear branch beyond.
    Point at(double x) const;
};

// Roots of (sigma^2/2) r^2 + m r - rho = 0, returned as (r1, r2) with
// r1 > 0 > r2.  The ModelParams overload insists on kappa = 0; the raw
// overload is handy for degenerate parameter checks (e.g. m = 0).
std::pair<double, double> characteristic_roots(double m, double sigma, double rho);
std::pair<double, double> characteristic_roots(const ModelParams& p);

}  // namespace divgame
