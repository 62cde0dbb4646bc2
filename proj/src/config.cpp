#include "divgame/config.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace divgame {

namespace {

using nlohmann::json;

RewardFunction reward_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return RewardFunction::zero();
    if (kind == "linear") return RewardFunction::linear(j.at("a").get<double>());
    if (kind == "capped")
        return RewardFunction::capped(j.at("a").get<double>(), j.at("M").get<double>());
    if (kind == "saturating")
        return RewardFunction::saturating(j.at("a").get<double>(), j.at("b").get<double>());
    throw ValidationError("reward: unknown kind '" + kind + "'");
}

json reward_to_json(const RewardFunction& f) {
    switch (f.kind()) {
        case RewardFunction::Kind::Zero: return {{"kind", "zero"}};
        case RewardFunction::Kind::Linear: return {{"kind", "linear"}, {"a", f.a()}};
        case RewardFunction::Kind::Capped: return {{"kind", "capped"}, {"a", f.a()}, {"M", f.b()}};
        case RewardFunction::Kind::Saturating:
            return {{"kind", "saturating"}, {"a", f.a()}, {"b", f.b()}};
    }
    return {};
}

}  // namespace

RewardFunction parse_reward_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.empty()) throw ValidationError("reward: empty spec");

    auto num = [&](size_t i) {
        try {
            return std::stod(parts.at(i));
        } catch (const std::exception&) {
            throw ValidationError("reward: bad number in '" + spec + "'");
        }
    };
    const std::string& kind = parts[0];
    if (kind == "zero" && parts.size() == 1) return RewardFunction::zero();
    if (kind == "linear" && parts.size() == 2) return RewardFunction::linear(num(1));
    if (kind == "capped" && parts.size() == 3) return RewardFunction::capped(num(1), num(2));
    if (kind == "saturating" && parts.size() == 3)
        return RewardFunction::saturating(num(1), num(2));
    throw ValidationError("reward: expected zero | linear:a | capped:a:M | saturating:a:b, got '" +
                          spec + "'");
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: parse error: ") + e.what());
    }

    RunConfig c;
    try {
        if (j.contains("m")) c.m = j["m"].get<double>();
        if (j.contains("sigma")) c.sigma = j["sigma"].get<double>();
        if (j.contains("rho")) c.rho = j["rho"].get<double>();
        if (j.contains("kappa")) c.kappa = j["kappa"].get<double>();
        if (j.contains("reward")) c.reward = reward_from_json(j["reward"]);
        if (j.contains("x_max")) c.x_max = j["x_max"].get<double>();
        if (j.contains("step")) c.step = j["step"].get<double>();
        if (j.contains("event_tol")) c.event_tol = j["event_tol"].get<double>();
        if (j.contains("output_stride")) c.output_stride = j["output_stride"].get<int>();
        if (j.contains("dt")) c.sim.dt = j["dt"].get<double>();
        if (j.contains("n_paths")) c.sim.n_paths = j["n_paths"].get<long>();
        if (j.contains("horizon_eps")) c.sim.horizon_eps = j["horizon_eps"].get<double>();
        if (j.contains("seed")) c.sim.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("antithetic")) c.sim.antithetic = j["antithetic"].get<bool>();
        if (j.contains("ruin_bridge")) c.sim.ruin_bridge = j["ruin_bridge"].get<bool>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: bad field: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
    json j{{"m", m},
           {"sigma", sigma},
           {"rho", rho},
           {"kappa", kappa},
           {"reward", reward_to_json(reward)},
           {"step", step},
           {"event_tol", event_tol},
           {"output_stride", output_stride},
           {"dt", sim.dt},
           {"n_paths", sim.n_paths},
           {"horizon_eps", sim.horizon_eps},
           {"seed", sim.seed},
           {"antithetic", sim.antithetic},
           {"ruin_bridge", sim.ruin_bridge}};
    if (x_max) j["x_max"] = *x_max;
    return j.dump(2);
}

void write_value_grid_csv(std::ostream& os, const ValueFunction& vf) {
    os << "x,V,dV,ddV,kernel\n";
    os << std::setprecision(15);
    auto row = [&](double x) {
        const ValuePoint v = vf.at(x);
        const double xi = optimal_kernel(vf.params(), v.dv);
        os << x << ',' << v.v << ',' << v.dv << ',' << v.ddv << ',' << xi << '\n';
    };
    const double window = vf.default_audit_window();
    if (vf.grid().empty()) {
        // Closed threshold: uniform sampling of the linear branch.
        for (int i = 0; i <= 32; ++i) row(window * static_cast<double>(i) / 32.0);
        return;
    }
    for (double x : vf.grid()) row(x);
    // Short tail over the linear branch up to the audit window.
    const int tail = 8;
    for (int i = 1; i <= tail; ++i)
        row(vf.beta() + (window - vf.beta()) * static_cast<double>(i) / tail);
}

void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
    os << "kappa,s_kappa,beta_kappa";
    std::ostringstream name;
    name << std::setprecision(6);
    for (double x : rep.x_grid) {
        name.str("");
        name << x;
        os << ",V_at_" << name.str();
    }
    os << '\n';
    os << std::setprecision(15);
    for (size_t j = 0; j < rep.kappas.size(); ++j) {
        os << rep.kappas[j] << ',' << rep.s_values[j] << ',' << rep.betas[j];
        for (double v : rep.v_samples[j]) os << ',' << v;
        os << '\n';
    }
}

}  // namespace divgame
