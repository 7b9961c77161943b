#include "mrsde/oracles.hpp"

#include <cmath>
#include <sstream>

#include "mrsde/bisection.hpp"
#include "mrsde/errors.hpp"

namespace mrsde {

namespace {

[[noreturn]] void bad(const std::string& message) { throw invalid_config_error(message); }

// (1 - e^{-z}) / z, stable near z = 0.
double em1_over(double z) {
    if (z == 0.0) return 1.0;
    return -std::expm1(-z) / z;
}

}  // namespace

std::string to_string(OracleCaseId id) {
    switch (id) {
        case OracleCaseId::case_i: return "i";
        case OracleCaseId::case_ii: return "ii";
        case OracleCaseId::case_iii: return "iii";
        case OracleCaseId::case_iv: return "iv";
        case OracleCaseId::case_v: return "v";
    }
    return "?";
}

std::optional<OracleCaseId> resolve_oracle_case(const SimulationConfig& config) {
    if (config.constraint_kind == ConstraintKind::linear) {
        switch (config.model_kind) {
            case ModelKind::drifted_bm: return OracleCaseId::case_i;
            case ModelKind::ou: return OracleCaseId::case_ii;
            case ModelKind::ou_random_mean: return OracleCaseId::case_iii;
            case ModelKind::black_scholes: return OracleCaseId::case_iv;
            case ModelKind::affine: return std::nullopt;
        }
    }
    if (config.constraint_kind == ConstraintKind::sine && config.model_kind == ModelKind::ou) {
        return OracleCaseId::case_v;
    }
    return std::nullopt;
}

OracleParams oracle_params(const SimulationConfig& config) {
    if (config.x0.kind != InitialCondition::Kind::point) {
        bad("oracle formulas need a deterministic initial point (x0.kind = point)");
    }
    OracleParams params;
    params.beta = config.model.beta;
    params.a = config.model.a;
    params.sigma = config.model.sigma;
    params.gamma = config.model.gamma;
    params.epsilon = config.model.epsilon;
    params.x0 = config.x0.value;
    params.p = config.constraint.threshold();
    params.alpha = config.constraint.sin_amplitude();
    return params;
}

void validate_oracle_params(OracleCaseId id, const OracleParams& q,
                            std::vector<std::string>* warnings) {
    auto warn = [&](const std::string& message) {
        if (warnings) warnings->push_back(message);
    };
    if (q.sigma < 0.0 || q.gamma < 0.0 || q.epsilon < 0.0) {
        bad("oracle coefficients sigma, gamma, epsilon must be nonnegative");
    }
    switch (id) {
        case OracleCaseId::case_i:
            if (q.a != 0.0 || q.gamma != 0.0) bad("case i requires a = gamma = 0");
            if (q.beta < 0.0) bad("case i requires beta >= 0");
            if (q.x0 < q.p) warn("case i expects x0 >= p; initial constraint is violated");
            break;
        case OracleCaseId::case_ii:
        case OracleCaseId::case_iv:
            if (!(q.a > 0.0)) bad("cases ii/iv require a > 0");
            if (!(q.p + q.beta / q.a > 0.0)) bad("cases ii/iv require p > -beta/a");
            if (!(q.x0 + q.beta / q.a > 0.0)) bad("cases ii/iv require x0 > -beta/a");
            if (id == OracleCaseId::case_iv && !(q.gamma > 0.0)) bad("case iv requires gamma > 0");
            if (q.x0 < q.p) warn("cases ii/iv expect x0 >= p; initial constraint is violated");
            break;
        case OracleCaseId::case_iii: {
            if (!(q.epsilon > 0.0)) bad("case iii requires epsilon > 0");
            if (!(q.sigma > 0.0)) bad("case iii requires sigma > 0");
            if (q.beta < 0.0) bad("case iii requires beta >= 0");
            const double disc = q.beta * q.beta - 2.0 * (q.x0 - q.p) * q.sigma * q.epsilon;
            if (disc < 0.0) bad("case iii discriminant beta^2 - 2 (x0-p) sigma eps is negative");
            if (q.x0 < q.p) warn("case iii expects x0 > p; initial constraint is violated");
            warn("case iii oracle is asymptotic in epsilon; treat it qualitatively");
            break;
        }
        case OracleCaseId::case_v:
            if (!(q.a > 0.0)) bad("case v requires a > 0");
            if (!(q.sigma > 0.0)) bad("case v requires sigma > 0");
            if (!(std::abs(q.alpha) < 1.0)) bad("case v requires |alpha| < 1");
            if (!(q.x0 > std::abs(q.alpha) + q.p)) {
                warn("case v expects x0 > |alpha| + p; proceeding on h(x0) alone");
            }
            break;
    }
}

double k_case_i(double t, const OracleParams& q) {
    return std::max(0.0, q.p + q.beta * t - q.x0);
}

double t_star_case_ii(const OracleParams& q) {
    return (std::log(q.x0 + q.beta / q.a) - std::log(q.p + q.beta / q.a)) / q.a;
}

double k_case_ii(double t, const OracleParams& q) {
    const double t_star = t_star_case_ii(q);
    if (t < t_star) return 0.0;
    return (q.a * q.p + q.beta) * (t - t_star);
}

double t_star_case_iii(const OracleParams& q) {
    const double c = 2.0 * (q.x0 - q.p);
    const double disc = q.beta * q.beta - c * q.sigma * q.epsilon;
    if (disc < 0.0) bad("case iii discriminant is negative");
    // rationalized form of (beta - sqrt(disc)) / (eps sigma)
    return c / (q.beta + std::sqrt(disc));
}

double t_bar_case_iii(const OracleParams& q) { return q.beta / (q.epsilon * q.sigma); }

double k_case_iii(double t, const OracleParams& q) {
    const double t_star = t_star_case_iii(q);
    const double t_bar = t_bar_case_iii(q);
    if (t < t_star) return 0.0;
    if (t < t_bar) return q.p - q.x0 + q.beta * t - q.sigma * q.epsilon * t * t / 2.0;
    return -(q.x0 - q.p) + q.beta * q.beta / (2.0 * q.epsilon * q.sigma);
}

double f_eval(double t, double x, const OracleParams& q) {
    const double at = q.a * t;
    const double decay = std::exp(-at);
    // e^{-at}(x0 - beta (e^{at}-1)/a + x) = e^{-at}(x0 + x) - beta (1-e^{-at})/a
    const double core = decay * (q.x0 + x) - q.beta * t * em1_over(at);
    // E[cos(G_t)] = exp(-Var/2) with Var(G_t) = sigma^2 (1 - e^{-2at}) / (2a)
    const double g = std::exp(-0.5 * q.sigma * q.sigma * t * em1_over(2.0 * at));
    return core + q.alpha * g * std::sin(core) - q.p;
}

CaseVPath k_case_v_path(const TimeGrid& grid, const OracleParams& q, double tol) {
    if (!(tol > 0.0)) bad("case v root tolerance must be positive");
    CaseVPath path;
    const std::size_t count = grid.nodes.size();
    path.k.resize(count);
    path.running_sup.resize(count);
    double sup = 0.0;
    double k_acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const double t = grid.nodes[j];
        // dK = e^{-as} dS integrated over (T_{j-1}, T_j] with the interval
        // average of e^{-as} as the weight; second order for smooth S and
        // exact at j = 0 where the increment is an initial jump
        const double dt = j == 0 ? 0.0 : t - grid.nodes[j - 1];
        const double weight =
            j == 0 ? 1.0 : std::exp(-q.a * grid.nodes[j - 1]) * em1_over(q.a * dt);
        auto f = [&](double x) { return f_eval(t, x, q); };
        const double f0 = f(0.0);
        double root;
        if (f0 == 0.0) {
            root = 0.0;
        } else {
            // slope of F_t in x is at least e^{-at} (1 - |alpha|)
            const double slope_floor = std::exp(-q.a * t) * (1.0 - std::abs(q.alpha));
            double lo, hi, f_reach;
            if (!bracket_from_slope(f, f0, slope_floor, lo, hi, f_reach)) {
                std::ostringstream msg;
                msg << "case v inversion bracket failed at t = " << t;
                throw invalid_config_error(msg.str());
            }
            root = bisect_nondecreasing(f, lo, hi, tol).root;
        }
        const double prev = sup;
        sup = std::max(sup, std::max(0.0, root));
        k_acc += weight * (sup - prev);
        path.running_sup[j] = sup;
        path.k[j] = k_acc;
    }
    return path;
}

std::vector<double> k_case_v(const TimeGrid& grid, const OracleParams& q, double tol) {
    return k_case_v_path(grid, q, tol).k;
}

std::vector<double> oracle_k_path(OracleCaseId id, const TimeGrid& grid, const OracleParams& q,
                                  double tol) {
    validate_oracle_params(id, q);
    std::vector<double> k(grid.nodes.size());
    switch (id) {
        case OracleCaseId::case_i:
            for (std::size_t j = 0; j < k.size(); ++j) k[j] = k_case_i(grid.nodes[j], q);
            break;
        case OracleCaseId::case_ii:
        case OracleCaseId::case_iv:
            for (std::size_t j = 0; j < k.size(); ++j) k[j] = k_case_ii(grid.nodes[j], q);
            break;
        case OracleCaseId::case_iii:
            for (std::size_t j = 0; j < k.size(); ++j) k[j] = k_case_iii(grid.nodes[j], q);
            break;
        case OracleCaseId::case_v:
            return k_case_v(grid, q, tol);
    }
    return k;
}

double generator_apply(const ConstraintSpec& constraint, const ModelCoefficients& model, double t,
                       double x, SecondOrderConvention convention) {
    if (!constraint.has_derivatives()) {
        bad("generator needs h' and h'' (constraint does not provide derivatives)");
    }
    const double diffusion = eval_diffusion(model, t, x);
    const double second = diffusion * diffusion *
                          (convention == SecondOrderConvention::half ? 0.5 : 1.0);
    return eval_drift(model, t, x) * constraint.h_prime(x) + second * constraint.h_second(x);
}

double density_k(double mean_h, double mean_Lh, double mean_hprime, double boundary_tol) {
    if (!(mean_hprime > 0.0)) bad("density needs mean h' > 0");
    if (std::abs(mean_h) > boundary_tol) return 0.0;
    return std::max(0.0, -mean_Lh) / mean_hprime;
}

double default_boundary_tol(const ConstraintSpec& constraint, double root_tol) {
    if (!(root_tol > 0.0)) bad("boundary tolerance needs a positive root tolerance");
    return 10.0 * constraint.upper_lipschitz() * root_tol;
}

}  // namespace mrsde
