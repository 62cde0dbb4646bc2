#include "divgame/shooting.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace divgame {

namespace {

struct State {
    double y;  // phi
    double z;  // phi'
};

struct Rhs {
    const ModelParams& p;
    MollifierCap cap;

    State operator()(double x, State u) const {
        return {u.z, -mollified_hamiltonian(p, cap, x, u.y, u.z)};
    }
};

State rk4_step(const Rhs& f, double x, State u, double h) {
    const State k1 = f(x, u);
    const State k2 = f(x + 0.5 * h, {u.y + 0.5 * h * k1.y, u.z + 0.5 * h * k1.z});
    const State k3 = f(x + 0.5 * h, {u.y + 0.5 * h * k2.y, u.z + 0.5 * h * k2.z});
    const State k4 = f(x + h, {u.y + h * k3.y, u.z + h * k3.z});
    return {u.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            u.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
}

double hermite_eval(double t, double h, double v0, double d0, double v1, double d1) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * v0 + (t3 - 2.0 * t2 + t) * h * d0 +
           (-2.0 * t3 + 3.0 * t2) * v1 + (t3 - t2) * h * d1;
}

// Interior minimum of the cubic interpolant of z on a step, when the slope
// starts out decreasing.  Returns (t_min, z_min) or nothing if the interior
// has no local minimum.
std::optional<std::pair<double, double>> hermite_interior_min(double h, double z0, double d0,
                                                              double z1, double d1) {
    // dz/dt = a t^2 + b t + c with the coefficients below.
    const double a = 6.0 * (z0 - z1) + 3.0 * h * (d0 + d1);
    const double b = -6.0 * (z0 - z1) - 4.0 * h * d0 - 2.0 * h * d1;
    const double c = h * d0;
    std::optional<std::pair<double, double>> best;
    auto consider = [&](double t) {
        if (!(t > 0.0 && t < 1.0)) return;
        const double z = hermite_eval(t, h, z0, d0, z1, d1);
        if (!best || z < best->second) best = {t, z};
    };
    if (a == 0.0) {
        if (b != 0.0) consider(-c / b);
    } else {
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            consider((-b - sq) / (2.0 * a));
            consider((-b + sq) / (2.0 * a));
        }
    }
    return best;
}

}  // namespace

CauchyTrajectory integrate_cauchy(const ModelParams& p, MollifierCap cap, double s,
                                  const IntegrationConfig& cfg) {
    if (!(s >= 1.0)) throw ValidationError("integrate_cauchy: initial slope must be >= 1");
    cfg.validate();

    const Rhs rhs{p, cap};
    CauchyTrajectory traj;
    traj.s = s;

    // Initial curvature s (kappa s - 2m/sigma^2).  At s = 1 a non-positive
    // value means the slope exits the admissible region immediately and the
    // crossing sits at the origin.
    const double ddphi0 = -mollified_hamiltonian(p, cap, 0.0, 0.0, s);
    if (s == 1.0 && ddphi0 <= 0.0) {
        traj.xs = {0.0};
        traj.phi = {0.0};
        traj.dphi = {1.0};
        traj.barrier = BarrierPoint{0.0, 0.0, 1.0, -hamiltonian(p, 0.0, 0.0, 1.0)};
        return traj;
    }

    const double h = cfg.step;
    const long n_steps = static_cast<long>(std::ceil(cfg.x_max / h - 1e-12));
    traj.xs.reserve(static_cast<size_t>(n_steps / cfg.output_stride) + 3);
    traj.phi.reserve(traj.xs.capacity());
    traj.dphi.reserve(traj.xs.capacity());

    State u{0.0, s};
    double dz = -mollified_hamiltonian(p, cap, 0.0, u.y, u.z);

    auto store = [&](double x, const State& st) {
        traj.xs.push_back(x);
        traj.phi.push_back(st.y);
        traj.dphi.push_back(st.z);
    };

    // Localise the first crossing of z through 1 inside [x0, x0 + dx] given a
    // point xc of that interval with z(xc) <= 1.  Sub-steps restart from the
    // step-start state, so the bracket stays consistent with the integrator.
    auto refine_event = [&](double x0, const State& u0, double xc, State uc) {
        double a = x0;
        double b = xc;
        State ub = uc;
        while (b - a > cfg.event_tol) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            const State um = rk4_step(rhs, x0, u0, mid - x0);
            if (um.z <= 1.0) {
                b = mid;
                ub = um;
            } else {
                a = mid;
            }
        }
        if (traj.xs.empty() || traj.xs.back() < x0) store(x0, u0);
        if (b > traj.xs.back()) store(b, ub);
        traj.barrier = BarrierPoint{b, ub.y, ub.z, -hamiltonian(p, b, ub.y, 1.0)};
    };

    for (long i = 0; i < n_steps; ++i) {
        const double x0 = static_cast<double>(i) * h;
        const double dx = std::min(h, cfg.x_max - x0);
        if (dx <= 0.0) break;

        if (i % cfg.output_stride == 0) store(x0, u);

        const State u1 = rk4_step(rhs, x0, u, dx);
        if (!std::isfinite(u1.y) || !std::isfinite(u1.z)) {
            std::ostringstream msg;
            msg << "integrate_cauchy: non-finite state near x = " << x0 << " (s = " << s << ")";
            throw BlowupError(msg.str());
        }
        const double dz1 = -mollified_hamiltonian(p, cap, x0 + dx, u1.y, u1.z);

        if (u1.z <= 1.0) {
            // Crossing at or before the step end.  If the slope also dipped
            // earlier in the step, bracket against the interior minimum so
            // the first crossing wins.
            double xc = x0 + dx;
            State uc = u1;
            if (dz < 0.0 && dz1 > 0.0) {
                if (auto m = hermite_interior_min(dx, u.z, dz, u1.z, dz1); m && m->second <= 1.0) {
                    const double xm = x0 + m->first * dx;
                    const State um = rk4_step(rhs, x0, u, xm - x0);
                    if (um.z <= 1.0) {
                        xc = xm;
                        uc = um;
                    }
                }
            }
            refine_event(x0, u, xc, uc);
            return traj;
        }

        // Graze check: slope dips inside the step and recovers above 1 by the
        // step end.  Near the pasting root the dip depth shrinks below any
        // fixed sampling resolution, so step-end values alone would miss it.
        if (dz < 0.0 && dz1 > 0.0) {
            if (auto m = hermite_interior_min(dx, u.z, dz, u1.z, dz1); m && m->second <= 1.0) {
                const double xm = x0 + m->first * dx;
                const State um = rk4_step(rhs, x0, u, xm - x0);
                if (um.z <= 1.0) {
                    refine_event(x0, u, xm, um);
                    return traj;
                }
            }
        }

        u = u1;
        dz = dz1;
    }

    // No crossing before the horizon.
    const double x_end = cfg.x_max;
    if (traj.xs.empty() || traj.xs.back() < x_end) store(x_end, u);
    return traj;
}

std::optional<double> pasting_residual(const ModelParams& p, MollifierCap cap, double s,
                                       const IntegrationConfig& cfg) {
    const CauchyTrajectory traj = integrate_cauchy(p, cap, s, cfg);
    if (!traj.barrier) return std::nullopt;
    return traj.barrier->ddphi;
}

ShootingResult solve_shooting(const ModelParams& p, MollifierCap cap,
                              const IntegrationConfig& cfg, double residual_tol,
                              double bracket_tol) {
    cfg.validate();
    if (!(residual_tol > 0.0)) throw ValidationError("solve_shooting: residual_tol must be > 0");
    if (!(bracket_tol > 0.0)) throw ValidationError("solve_shooting: bracket_tol must be > 0");
    const double s_top = 1.0 + p.slope_bound();
    if (cap.cap < s_top * (1.0 - 1e-12))
        throw ValidationError("solve_shooting: mollifier cap below the bracket top");

    if (p.saturated()) {
        // Threshold closes; pay everything out.  No integration needed.
        const double g = p.kappa - 2.0 * p.m / (p.sigma * p.sigma);
        CauchyTrajectory traj;
        traj.s = 1.0;
        traj.xs = {0.0};
        traj.phi = {0.0};
        traj.dphi = {1.0};
        traj.barrier = BarrierPoint{0.0, 0.0, 1.0, g};
        return {1.0, 0.0, std::move(traj), ThresholdCase::Saturated, g, 0};
    }

    auto residual_of = [](const CauchyTrajectory& t) -> std::optional<double> {
        if (!t.barrier) return std::nullopt;
        return t.barrier->ddphi;
    };

    double lo = 1.0;
    double hi = s_top;
    CauchyTrajectory lo_traj = integrate_cauchy(p, cap, lo, cfg);
    std::optional<double> g_lo = residual_of(lo_traj);
    if (!g_lo || !(*g_lo < 0.0)) {
        std::ostringstream msg;
        msg << "solve_shooting: residual at s = 1 is not negative (kappa = " << p.kappa << ")";
        throw ConvergenceError(msg.str());
    }
    {
        const auto g_hi = pasting_residual(p, cap, hi, cfg);
        if (g_hi && *g_hi < 0.0) {
            std::ostringstream msg;
            msg << "solve_shooting: upper bracket s = " << hi
                << " still has negative residual g = " << *g_hi;
            throw ConvergenceError(msg.str());
        }
    }

    int iters = 0;
    while (hi - lo > bracket_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // floating resolution reached
        CauchyTrajectory traj = integrate_cauchy(p, cap, mid, cfg);
        const auto g = residual_of(traj);
        ++iters;
        if (g && *g < 0.0) {
            lo = mid;
            lo_traj = std::move(traj);
            g_lo = g;
        } else if (g && *g == 0.0) {
            // Exact tie: accept the probe as the root.
            lo = mid;
            lo_traj = std::move(traj);
            g_lo = g;
            break;
        } else {
            hi = mid;
        }
    }

    const double g_final = *g_lo;
    const double beta = lo_traj.barrier->x;
    if (std::abs(g_final) > residual_tol) {
        std::ostringstream msg;
        msg << "solve_shooting: pasting residual " << g_final << " exceeds tolerance "
            << residual_tol << " at s = " << lo << ", beta = " << beta
            << " after " << iters << " bisection steps (step too coarse?)";
        throw ConvergenceError(msg.str());
    }

    // beta = 0 can only survive when the root collapsed onto s = 1, i.e. the
    // parameters sit numerically at the saturation boundary.
    const ThresholdCase tcase = beta == 0.0 ? ThresholdCase::Saturated : ThresholdCase::Interior;
    return {lo, beta, std::move(lo_traj), tcase, g_final, iters};
}

}  // namespace divgame
