#include "mrsde/reference.hpp"

#include <algorithm>
#include <cmath>

#include "mrsde/errors.hpp"

namespace mrsde {

namespace {

// (1 - e^{-z}) / z, stable near z = 0.
double em1_over(double z) {
    if (z == 0.0) return 1.0;
    return -std::expm1(-z) / z;
}

// (e^{z} - 1) / z, stable near z = 0.
double expm1_over(double z) {
    if (z == 0.0) return 1.0;
    return std::expm1(z) / z;
}

}  // namespace

ReferenceKernel::ReferenceKernel(OracleCaseId id, const OracleParams& params, const TimeGrid& grid,
                                 double root_tol)
    : id_(id), params_(params), grid_(grid) {
    if (id == OracleCaseId::case_iii) {
        throw invalid_config_error(
            "case iii admits no exact coupled reference; only cases i, ii, iv, v are supported");
    }
    validate_oracle_params(id, params);

    const std::size_t count = grid.nodes.size();
    shift_.assign(count, 0.0);

    switch (id) {
        case OracleCaseId::case_i: {
            oracle_k_.resize(count);
            for (std::size_t j = 0; j < count; ++j) oracle_k_[j] = k_case_i(grid.nodes[j], params);
            shift_ = oracle_k_;
            break;
        }
        case OracleCaseId::case_ii:
        case OracleCaseId::case_iv: {
            t_star_ = t_star_case_ii(params);
            oracle_k_.resize(count);
            for (std::size_t j = 0; j < count; ++j) oracle_k_[j] = k_case_ii(grid.nodes[j], params);
            if (id == OracleCaseId::case_ii) {
                // e^{-at} Kbar(t) = (p + beta/a)(1 - e^{-a(t - t*)}) after t*
                const double level = params.p + params.beta / params.a;
                for (std::size_t j = 0; j < count; ++j) {
                    const double t = grid.nodes[j];
                    shift_[j] = t < t_star_ ? 0.0 : level * -std::expm1(-params.a * (t - t_star_));
                }
            }
            break;
        }
        case OracleCaseId::case_v: {
            const CaseVPath path = k_case_v_path(grid, params, root_tol);
            oracle_k_ = path.k;
            for (std::size_t j = 0; j < count; ++j) {
                shift_[j] = std::exp(-params.a * grid.nodes[j]) * path.running_sup[j];
            }
            break;
        }
        case OracleCaseId::case_iii:
            break;  // unreachable
    }

    if (id == OracleCaseId::case_ii || id == OracleCaseId::case_v) {
        const double dt = grid.steps > 0 ? grid.dt() : 0.0;
        const double a = params.a;
        ou_decay_ = std::exp(-a * dt);
        const double variance = params.sigma * params.sigma * dt * em1_over(2.0 * a * dt);
        ou_stddev_ = std::sqrt(variance);
        const double covariance = params.sigma * dt * em1_over(a * dt);
        const double rho =
            variance > 0.0 && dt > 0.0 ? covariance / (std::sqrt(variance) * std::sqrt(dt)) : 1.0;
        ou_rho_ = std::clamp(rho, -1.0, 1.0);
    }
}

double ReferenceKernel::shift(std::size_t node) const { return shift_[node]; }

namespace {

// One conditional-moment substep of dX = (c - aX) dt + gamma X dB over
// width delta, given the Brownian increment db of the substep and an
// independent standard normal for the residual.
double forced_linear_substep(double y, double delta, double c, double a, double gamma, double db,
                             double z) {
    const double decay = std::exp(-a * delta);
    const double mean_level = c / a;
    const double mu = mean_level + (y - mean_level) * decay;

    const double lambda = gamma * gamma - 2.0 * a;
    const double e_lambda = std::exp(lambda * delta);
    const double second = e_lambda * y * y +
                          2.0 * c * mean_level * delta * expm1_over(lambda * delta) +
                          2.0 * c * (y - mean_level) * e_lambda * delta *
                              em1_over((lambda + a) * delta);
    const double variance = std::max(0.0, second - mu * mu);

    const double cov = gamma * (mean_level * delta * em1_over(a * delta) +
                                (y - mean_level) * delta * decay);
    const double slope = delta > 0.0 ? cov / delta : 0.0;
    const double residual = std::max(0.0, variance - slope * cov);
    return mu + slope * db + std::sqrt(residual) * z;
}

}  // namespace

double ReferenceKernel::advance(double state, std::size_t k, std::uint32_t particle,
                                double gaussian, const NoiseSource& extra) const {
    const double dt = grid_.dt();
    const double sq_dt = std::sqrt(dt);
    const auto kk = static_cast<std::uint32_t>(k);

    switch (id_) {
        case OracleCaseId::case_i:
            return state - params_.beta * dt + params_.sigma * sq_dt * gaussian;

        case OracleCaseId::case_ii:
        case OracleCaseId::case_v: {
            const double z = extra.normal(particle, kk, 0);
            const double joint = ou_rho_ * gaussian + std::sqrt(1.0 - ou_rho_ * ou_rho_) * z;
            return ou_decay_ * state - params_.beta * dt * em1_over(params_.a * dt) +
                   ou_stddev_ * joint;
        }

        case OracleCaseId::case_iv: {
            const double t0 = grid_.nodes[k - 1];
            const double t1 = grid_.nodes[k];
            const double db = sq_dt * gaussian;
            const double c_before = -params_.beta;
            const double c_after = params_.a * params_.p;  // -beta + (a p + beta)
            if (t1 <= t_star_) {
                return forced_linear_substep(state, dt, c_before, params_.a, params_.gamma, db,
                                             extra.normal(particle, kk, 0));
            }
            if (t0 >= t_star_) {
                return forced_linear_substep(state, dt, c_after, params_.a, params_.gamma, db,
                                             extra.normal(particle, kk, 0));
            }
            // the step straddles t*: split the Brownian increment with a
            // bridge draw, then advance each side with its own forcing
            const double d1 = t_star_ - t0;
            const double d2 = t1 - t_star_;
            const double bridge = extra.normal(particle, kk, 0);
            const double db1 = db * (d1 / dt) + std::sqrt(d1 * d2 / dt) * bridge;
            const double db2 = db - db1;
            const double mid = forced_linear_substep(state, d1, c_before, params_.a, params_.gamma,
                                                     db1, extra.normal(particle, kk, 1));
            return forced_linear_substep(mid, d2, c_after, params_.a, params_.gamma, db2,
                                         extra.normal(particle, kk, 2));
        }

        case OracleCaseId::case_iii:
            break;
    }
    throw invalid_config_error("unsupported reference case");
}

PathBundle coupled_reference_run(const SimulationConfig& config, OracleCaseId id,
                                 std::uint32_t replication) {
    PathBundle bundle;
    validate_config(config, &bundle.warnings);
    const OracleParams params = oracle_params(config);
    validate_oracle_params(id, params, &bundle.warnings);

    const double tol = config.root_tol.value_or(1e-10);
    const ReferenceKernel kernel(id, params, config.grid, tol);

    const std::size_t n_particles = config.particles;
    const std::size_t count = config.grid.nodes.size();
    bundle.times = config.grid.nodes;
    bundle.oracle_k = kernel.oracle_k();
    bundle.reference_paths.assign(n_particles, std::vector<double>(count, 0.0));

    std::vector<double> state(n_particles, config.x0.value);
    for (std::size_t i = 0; i < n_particles; ++i) {
        bundle.reference_paths[i][0] = kernel.value(state[i], 0);
    }

    const NoiseSource noise(config.seed, replication, NoiseLane::scheme);
    const NoiseSource extra(config.seed, replication, NoiseLane::reference);
    for (std::size_t k = 1; k < count; ++k) {
        for (std::size_t i = 0; i < n_particles; ++i) {
            const double g =
                noise.normal(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k), 0);
            state[i] = kernel.advance(state[i], k, static_cast<std::uint32_t>(i), g, extra);
            bundle.reference_paths[i][k] = kernel.value(state[i], k);
        }
    }
    return bundle;
}

}  // namespace mrsde
