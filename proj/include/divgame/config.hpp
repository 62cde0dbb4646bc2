#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "divgame/model.hpp"
#include "divgame/shooting.hpp"
#include "divgame/simulate.hpp"
#include "divgame/sweep.hpp"

namespace divgame {

// One flat document (JSON) holding model, integration and simulation
// settings.  CLI flags override file values; anything absent falls back to
// the defaults below.  x_max is derived from the model (m/delta + 1) when not
// given.
struct RunConfig {
    double m = 1.0;
    double sigma = 2.0;
    double rho = 0.5;
    double kappa = 0.0;
    RewardFunction reward = RewardFunction::zero();

    std::optional<double> x_max;
    double step = 1e-4;
    double event_tol = 1e-12;
    int output_stride = 10;

    SimConfig sim;

    static RunConfig from_json_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    ModelParams model() const { return ModelParams(m, sigma, rho, kappa, reward); }

    IntegrationConfig integration() const {
        IntegrationConfig cfg = IntegrationConfig::defaults(model());
        if (x_max) cfg.x_max = *x_max;
        cfg.step = step;
        cfg.event_tol = event_tol;
        cfg.output_stride = output_stride;
        cfg.validate();
        return cfg;
    }
};

// "zero" | "linear:a" | "capped:a:M" | "saturating:a:b"
RewardFunction parse_reward_spec(const std::string& spec);

// Grid CSV: header x,V,dV,ddV,kernel, one row per stored node plus a short
// tail sampling the linear branch; 15 significant digits.
void write_value_grid_csv(std::ostream& os, const ValueFunction& vf);

// Sweep CSV: header kappa,s_kappa,beta_kappa plus one V_at_<x> column per
// x-grid node.
void write_sweep_csv(std::ostream& os, const SweepReport& report);

}  // namespace divgame
