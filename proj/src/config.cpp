#include "mrsde/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mrsde/errors.hpp"

namespace mrsde {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& message) { throw invalid_config_error(message); }

void require_keys(const json& obj, const std::string& scope, const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) {
            bad("unknown config key: " + (scope.empty() ? item.key() : scope + "." + item.key()));
        }
    }
}

double number_at(const json& obj, const std::string& scope, const std::string& key,
                 std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        bad("missing config key: " + scope + "." + key);
    }
    const auto& value = obj.at(key);
    if (!value.is_number()) bad(scope + "." + key + " must be a number");
    return value.get<double>();
}

std::string string_at(const json& obj, const std::string& scope, const std::string& key) {
    if (!obj.contains(key)) bad("missing config key: " + scope + "." + key);
    const auto& value = obj.at(key);
    if (!value.is_string()) bad(scope + "." + key + " must be a string");
    return value.get<std::string>();
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::drifted_bm: return "drifted_bm";
        case ModelKind::ou: return "ou";
        case ModelKind::ou_random_mean: return "ou_random_mean";
        case ModelKind::black_scholes: return "black_scholes";
        case ModelKind::affine: return "affine";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "drifted_bm") return ModelKind::drifted_bm;
    if (name == "ou") return ModelKind::ou;
    if (name == "ou_random_mean") return ModelKind::ou_random_mean;
    if (name == "black_scholes") return ModelKind::black_scholes;
    if (name == "affine") return ModelKind::affine;
    bad("model.kind must be one of drifted_bm, ou, ou_random_mean, black_scholes, affine");
}

double SimulationConfig::resolve_root_tol(double h0) const {
    if (root_tol) return *root_tol;
    return 1e-10 * std::max(1.0, std::abs(h0) / constraint.lower_lipschitz());
}

void validate_config(const SimulationConfig& config, std::vector<std::string>* warnings) {
    if (config.particles < 1) bad("particles.N must be at least 1");
    if (config.replications < 1) bad("replications.L must be at least 1");
    if (config.root_tol && !(*config.root_tol > 0.0)) bad("root_tol must be positive");
    // A zero-step grid (nodes == {0}) is tolerated for the "no steps" edge;
    // config files cannot produce one because make_grid requires n >= 1.
    if (config.grid.nodes.size() != config.grid.steps + 1) {
        bad("grid nodes are inconsistent with grid.n");
    }

    const auto& m = config.model;
    if (m.sigma < 0.0) bad("model.sigma must be nonnegative");
    if (m.gamma < 0.0) bad("model.gamma must be nonnegative");
    if (m.epsilon < 0.0) bad("model.epsilon must be nonnegative");

    switch (config.model_kind) {
        case ModelKind::drifted_bm:
            if (m.a != 0.0 || m.gamma != 0.0) bad("drifted_bm requires model.a = model.gamma = 0");
            break;
        case ModelKind::ou:
            if (!(m.a > 0.0)) bad("ou requires model.a > 0");
            if (m.gamma != 0.0) bad("ou requires model.gamma = 0");
            break;
        case ModelKind::ou_random_mean:
            if (m.a != 0.0) bad("ou_random_mean drives mean reversion by epsilon; set model.a = 0");
            if (m.gamma != 0.0) bad("ou_random_mean requires model.gamma = 0");
            if (!(m.epsilon > 0.0)) bad("ou_random_mean requires model.epsilon > 0");
            if (!m.brownian_coefficient) bad("ou_random_mean requires the brownian-coefficient mode");
            break;
        case ModelKind::black_scholes:
            if (!(m.a > 0.0)) bad("black_scholes requires model.a > 0");
            if (m.sigma != 0.0) bad("black_scholes requires model.sigma = 0");
            if (!(m.gamma > 0.0)) bad("black_scholes requires model.gamma > 0");
            break;
        case ModelKind::affine:
            break;
    }

    if (config.x0.kind == InitialCondition::Kind::uniform && !(config.x0.hi >= config.x0.lo)) {
        bad("x0.hi must be >= x0.lo");
    }
    if (config.x0.kind == InitialCondition::Kind::gaussian && !(config.x0.stddev >= 0.0)) {
        bad("x0.stddev must be nonnegative");
    }

    // E[h(X0)] >= 0 is checked empirically on the drawn cloud at run time;
    // a deterministic start can be checked here.
    if (warnings && config.x0.kind == InitialCondition::Kind::point) {
        if (config.constraint.h(config.x0.value) < 0.0) {
            warnings->push_back(
                "initial condition violates the average constraint: h(x0) < 0; "
                "the scheme will apply an initial push");
        }
    }
}

SimulationConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& error) {
        bad(std::string("config is not valid JSON: ") + error.what());
    }
    if (!root.is_object()) bad("config root must be an object");
    require_keys(root, "", {"model", "constraint", "grid", "particles", "replications", "x0",
                            "seed", "root_tol"});

    SimulationConfig config;

    if (!root.contains("model") || !root["model"].is_object()) bad("missing config section: model");
    const json& model = root["model"];
    require_keys(model, "model", {"kind", "beta", "a", "sigma", "gamma", "epsilon"});
    config.model_kind = model_kind_from_string(string_at(model, "model", "kind"));
    config.model.beta = number_at(model, "model", "beta", 0.0);
    config.model.a = number_at(model, "model", "a", 0.0);
    config.model.sigma = number_at(model, "model", "sigma", 0.0);
    config.model.gamma = number_at(model, "model", "gamma", 0.0);
    config.model.epsilon = number_at(model, "model", "epsilon", 0.0);
    config.model.brownian_coefficient = (config.model_kind == ModelKind::ou_random_mean);

    if (!root.contains("constraint") || !root["constraint"].is_object()) {
        bad("missing config section: constraint");
    }
    const json& constraint = root["constraint"];
    require_keys(constraint, "constraint", {"kind", "p", "alpha", "m", "M"});
    const std::string ckind = string_at(constraint, "constraint", "kind");
    const double p = number_at(constraint, "constraint", "p", 0.0);
    if (ckind == "linear") {
        config.constraint_kind = ConstraintKind::linear;
        config.constraint = ConstraintSpec::linear(p);
        if (constraint.contains("alpha") &&
            number_at(constraint, "constraint", "alpha", 0.0) != 0.0) {
            bad("constraint.alpha is only meaningful for the sin constraint");
        }
    } else if (ckind == "sin") {
        config.constraint_kind = ConstraintKind::sine;
        config.constraint = ConstraintSpec::sine(p, number_at(constraint, "constraint", "alpha", 0.0));
    } else {
        bad("constraint.kind must be linear or sin");
    }
    if (constraint.contains("m") || constraint.contains("M")) {
        const double m = number_at(constraint, "constraint", "m", config.constraint.lower_lipschitz());
        const double M = number_at(constraint, "constraint", "M", config.constraint.upper_lipschitz());
        config.constraint.set_lipschitz(m, M);
    }

    if (!root.contains("grid") || !root["grid"].is_object()) bad("missing config section: grid");
    const json& grid = root["grid"];
    require_keys(grid, "grid", {"T", "n"});
    const double horizon = number_at(grid, "grid", "T");
    const double steps = number_at(grid, "grid", "n");
    if (!(steps >= 1.0) || steps != std::floor(steps)) bad("grid.n must be a positive integer");
    config.grid = make_grid(horizon, static_cast<std::size_t>(steps));

    if (!root.contains("particles") || !root["particles"].is_object()) {
        bad("missing config section: particles");
    }
    require_keys(root["particles"], "particles", {"N"});
    const double n_particles = number_at(root["particles"], "particles", "N");
    if (!(n_particles >= 1.0) || n_particles != std::floor(n_particles)) {
        bad("particles.N must be a positive integer");
    }
    config.particles = static_cast<std::size_t>(n_particles);

    if (root.contains("replications")) {
        require_keys(root["replications"], "replications", {"L"});
        const double reps = number_at(root["replications"], "replications", "L");
        if (!(reps >= 1.0) || reps != std::floor(reps)) bad("replications.L must be a positive integer");
        config.replications = static_cast<std::size_t>(reps);
    }

    if (root.contains("x0")) {
        const json& x0 = root["x0"];
        require_keys(x0, "x0", {"kind", "value", "lo", "hi", "mean", "stddev"});
        const std::string kind = x0.contains("kind") ? string_at(x0, "x0", "kind") : "point";
        if (kind == "point") {
            config.x0.kind = InitialCondition::Kind::point;
            config.x0.value = number_at(x0, "x0", "value");
        } else if (kind == "uniform") {
            config.x0.kind = InitialCondition::Kind::uniform;
            config.x0.lo = number_at(x0, "x0", "lo");
            config.x0.hi = number_at(x0, "x0", "hi");
        } else if (kind == "gaussian") {
            config.x0.kind = InitialCondition::Kind::gaussian;
            config.x0.mean = number_at(x0, "x0", "mean");
            config.x0.stddev = number_at(x0, "x0", "stddev", 1.0);
        } else {
            bad("x0.kind must be point, uniform or gaussian");
        }
    }

    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer()) {
            bad("seed must be an integer");
        }
        config.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("root_tol")) {
        if (!root["root_tol"].is_number()) bad("root_tol must be a number");
        config.root_tol = root["root_tol"].get<double>();
    }

    validate_config(config);
    return config;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace mrsde
