#include "divgame/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>
#include <thread>

namespace divgame {

namespace {

constexpr double kMonotonicityTol = 1e-8;

bool sorted_non_negative(std::span<const double> xs) {
    if (xs.empty()) return false;
    if (xs.front() < 0.0) return false;
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) return false;
    return true;
}

std::optional<size_t> find_kappa(const SweepReport& r, double kappa) {
    for (size_t i = 0; i < r.kappas.size(); ++i)
        if (std::abs(r.kappas[i] - kappa) <= 1e-12 * std::max(1.0, kappa)) return i;
    return std::nullopt;
}

}  // namespace

SweepReport run_sweep(const ModelParams& base, std::span<const double> kappa_grid,
                      std::span<const double> x_grid, const IntegrationConfig& cfg) {
    if (!sorted_non_negative(kappa_grid))
        throw ValidationError("run_sweep: kappa grid must be sorted, non-negative, non-empty");
    if (!sorted_non_negative(x_grid) && !x_grid.empty())
        throw ValidationError("run_sweep: x grid must be sorted and non-negative");
    if (x_grid.empty()) throw ValidationError("run_sweep: x grid must be non-empty");

    SweepReport rep;
    rep.kappas.assign(kappa_grid.begin(), kappa_grid.end());
    rep.x_grid.assign(x_grid.begin(), x_grid.end());

    // Per-kappa solves are independent; run them on worker threads and
    // assemble in kappa order, so the report never depends on scheduling.
    const size_t n_kappa = kappa_grid.size();
    std::vector<std::optional<ValueFunction>> slots(n_kappa);
    std::vector<double> betas(n_kappa), slopes(n_kappa);
    std::vector<std::exception_ptr> errors(n_kappa);

    auto solve_one = [&](size_t j) {
        const ModelParams p = base.with_kappa(kappa_grid[j]);
        try {
            const ShootingResult res = solve_shooting(p, MollifierCap::defaults(p), cfg);
            betas[j] = res.beta_kappa;
            slopes[j] = res.s_kappa;
            slots[j].emplace(ValueFunction::build(p, res));
        } catch (const ConvergenceError& e) {
            std::ostringstream msg;
            msg << "run_sweep: solve failed at kappa = " << kappa_grid[j] << ": " << e.what();
            errors[j] = std::make_exception_ptr(ConvergenceError(msg.str()));
        } catch (...) {
            errors[j] = std::current_exception();
        }
    };

    const size_t n_workers =
        std::max<size_t>(1, std::min<size_t>(std::thread::hardware_concurrency(), n_kappa));
    if (n_workers <= 1 || n_kappa <= 1) {
        for (size_t j = 0; j < n_kappa; ++j) solve_one(j);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        for (size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&, w] {
                for (size_t j = w; j < n_kappa; j += n_workers) solve_one(j);
            });
        }
        for (auto& t : workers) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<ValueFunction> vfs;
    vfs.reserve(n_kappa);
    for (size_t j = 0; j < n_kappa; ++j) {
        rep.betas.push_back(betas[j]);
        rep.s_values.push_back(slopes[j]);
        vfs.push_back(std::move(*slots[j]));
    }

    rep.v_samples.resize(kappa_grid.size());
    for (size_t j = 0; j < vfs.size(); ++j) {
        rep.v_samples[j].reserve(x_grid.size());
        for (double x : x_grid) rep.v_samples[j].push_back(vfs[j].at(x).v);
    }

    for (size_t j = 0; j + 1 < vfs.size(); ++j) {
        for (size_t i = 0; i < x_grid.size(); ++i) {
            const double gap = rep.v_samples[j + 1][i] - rep.v_samples[j][i];
            if (gap > kMonotonicityTol)
                rep.monotonicity_violations.push_back({x_grid[i], rep.kappas[j + 1], gap});
        }
    }

    if (rep.kappas.front() == 0.0) {
        // Audit window: the provided grid extended to max(beta) + m/rho.
        // Beyond every threshold both branches have slope one, so the
        // difference to the kappa = 0 value is constant in x there.
        const double beta_max = *std::max_element(rep.betas.begin(), rep.betas.end());
        const double window = beta_max + base.m / base.rho;
        std::vector<double> audit(x_grid.begin(), x_grid.end());
        const double spacing = std::max(window / 256.0, 1e-3);
        for (double x = x_grid.back() + spacing; x < window; x += spacing) audit.push_back(x);
        audit.push_back(window);

        for (size_t j = 0; j < vfs.size(); ++j) {
            double sup = 0.0;
            for (double x : audit)
                sup = std::max(sup, std::abs(vfs[j].at(x).v - vfs[0].at(x).v));
            rep.sup_diff_to_zero.push_back(sup);

            const double tail_a = vfs[j].at(window).v - vfs[0].at(window).v;
            const double tail_b = vfs[j].at(window + 1.0).v - vfs[0].at(window + 1.0).v;
            if (std::abs(tail_a - tail_b) > 1e-9)
                throw ConvergenceError("run_sweep: difference not constant beyond max(beta)");
        }
    }
    return rep;
}

std::vector<ContinuityDiag> check_continuity(
    const SweepReport& report, std::span<const std::pair<double, double>> halving_pairs) {
    if (report.sup_diff_to_zero.empty())
        throw ValidationError("check_continuity: report lacks sup_diff_to_zero (kappa = 0 row)");

    std::vector<ContinuityDiag> out;
    out.reserve(halving_pairs.size());
    for (const auto& [kappa, half] : halving_pairs) {
        if (!(kappa > 0.0))
            throw ValidationError("check_continuity: halving pair needs kappa > 0");
        if (std::abs(half - 0.5 * kappa) > 1e-12 * std::max(1.0, kappa))
            throw ValidationError("check_continuity: pair is not a halving (kappa, kappa/2)");
        const auto i = find_kappa(report, kappa);
        const auto j = find_kappa(report, half);
        if (!i || !j)
            throw ValidationError("check_continuity: kappa value missing from the report");

        ContinuityDiag d;
        d.kappa = kappa;
        d.beta_gap = std::abs(report.betas[*i] - report.betas[*j]);
        d.ratio = report.sup_diff_to_zero[*j] / report.sup_diff_to_zero[*i];
        d.linear_rate_consistent = d.ratio >= 0.35 && d.ratio <= 0.65;
        out.push_back(d);
    }
    return out;
}

}  // namespace divgame
