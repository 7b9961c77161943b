#include "mrsde/scheme.hpp"

#include <cmath>
#include <sstream>

#include "mrsde/empirical.hpp"
#include "mrsde/errors.hpp"
#include "mrsde/rng.hpp"

namespace mrsde {

std::vector<double> ParticleCloud::reflected_positions() const {
    std::vector<double> out(unreflected.size());
    const double k = khat.back();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = unreflected[i] + k;
    return out;
}

ParticleCloud init_cloud(const SimulationConfig& config, std::uint32_t replication) {
    validate_config(config);
    ParticleCloud cloud;
    cloud.unreflected.resize(config.particles);
    cloud.brownian.assign(config.particles, 0.0);

    const NoiseSource initial(config.seed, replication, NoiseLane::initial);
    for (std::size_t i = 0; i < config.particles; ++i) {
        cloud.unreflected[i] = draw_initial(config.x0, initial, static_cast<std::uint32_t>(i));
    }

    const ConstraintProfile profile(cloud.unreflected, config.constraint);
    const double tol =
        resolve_root_tol(config.root_tol, profile.at_zero(), config.constraint.lower_lipschitz());
    cloud.running_sup = g0_of_profile(profile, config.constraint, tol);
    cloud.khat.push_back(cloud.running_sup);
    cloud.max_root_tol = tol;
    cloud.step = 0;
    return cloud;
}

StepInfo step(ParticleCloud& cloud, const TimeGrid& grid, const ModelCoefficients& model,
              const ConstraintSpec& constraint, std::span<const double> gaussians,
              const std::optional<double>& root_tol) {
    const std::size_t n_particles = cloud.size();
    if (gaussians.size() != n_particles) {
        throw invalid_config_error("step needs one gaussian per particle");
    }
    if (cloud.step >= grid.steps) {
        throw invalid_config_error("step called past the end of the grid");
    }
    const double dt = grid.dt();
    const double sq_dt = std::sqrt(dt);
    const double t_prev = grid.nodes[cloud.step];
    const double k_prev = cloud.khat.back();

    for (std::size_t i = 0; i < n_particles; ++i) {
        const double reflected = cloud.unreflected[i] + k_prev;
        const double move = dt * eval_drift(model, t_prev, reflected, cloud.brownian[i]) +
                            sq_dt * eval_diffusion(model, t_prev, reflected) * gaussians[i];
        cloud.unreflected[i] += move;
        if (model.brownian_coefficient) cloud.brownian[i] += sq_dt * gaussians[i];
    }

    StepInfo info;
    const ConstraintProfile profile(cloud.unreflected, constraint);
    info.tol_used =
        resolve_root_tol(root_tol, profile.at_zero(), constraint.lower_lipschitz());
    try {
        info.g0 = g0_of_profile(profile, constraint, info.tol_used);
    } catch (const numerical_error& error) {
        std::ostringstream msg;
        msg << "G0 root find failed at step " << (cloud.step + 1) << ": " << error.what();
        throw numerical_error(msg.str());
    }

    const double sup_new = std::max(cloud.running_sup, info.g0);
    info.delta_k = sup_new - cloud.running_sup;
    cloud.running_sup = sup_new;
    // K̂ at node k is the running sup itself; storing it directly keeps the
    // ledger identity exact.
    cloud.khat.push_back(sup_new);
    cloud.step += 1;
    cloud.max_root_tol = std::max(cloud.max_root_tol, info.tol_used);
    info.mean_constraint = profile(sup_new);
    return info;
}

double direct_increment(const ParticleCloud& cloud, const TimeGrid& grid,
                        const ModelCoefficients& model, const ConstraintSpec& constraint,
                        std::span<const double> gaussians, const std::optional<double>& root_tol) {
    const std::size_t n_particles = cloud.size();
    if (gaussians.size() != n_particles) {
        throw invalid_config_error("direct_increment needs one gaussian per particle");
    }
    const double dt = grid.dt();
    const double sq_dt = std::sqrt(dt);
    const double t_prev = grid.nodes[cloud.step];
    const double k_prev = cloud.khat.back();

    std::vector<double> shifted(n_particles);
    for (std::size_t i = 0; i < n_particles; ++i) {
        const double reflected = cloud.unreflected[i] + k_prev;
        shifted[i] = reflected + dt * eval_drift(model, t_prev, reflected, cloud.brownian[i]) +
                     sq_dt * eval_diffusion(model, t_prev, reflected) * gaussians[i];
    }
    const ConstraintProfile profile(shifted, constraint);
    const double tol =
        resolve_root_tol(root_tol, profile.at_zero(), constraint.lower_lipschitz());
    return g0_of_profile(profile, constraint, tol);
}

PathBundle run(const SimulationConfig& config, std::uint32_t replication,
               const RunOptions& options) {
    PathBundle bundle;
    validate_config(config, &bundle.warnings);

    ParticleCloud cloud = init_cloud(config, replication);
    const std::size_t n_steps = config.grid.steps;
    const std::size_t count = config.grid.nodes.size();

    bundle.times.reserve(count);
    bundle.khat.reserve(count);
    bundle.mean_constraint.reserve(count);

    {
        const ConstraintProfile profile(cloud.unreflected, config.constraint);
        if (profile.at_zero() < 0.0) {
            bundle.warnings.push_back(
                "initial cloud violates the average constraint (mean h(X0) < 0); "
                "the ledger opens with a push");
        }
        bundle.times.push_back(config.grid.nodes.front());
        bundle.khat.push_back(cloud.compensator());
        bundle.mean_constraint.push_back(profile(cloud.compensator()));
        if (options.keep_node_clouds) bundle.node_clouds.push_back(cloud.reflected_positions());
    }

    const NoiseSource noise(config.seed, replication, NoiseLane::scheme);
    std::vector<double> gaussians(config.particles);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        for (std::size_t i = 0; i < config.particles; ++i) {
            gaussians[i] =
                noise.normal(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k), 0);
        }
        const StepInfo info = step(cloud, config.grid, config.model, config.constraint, gaussians,
                                   config.root_tol);
        bundle.times.push_back(config.grid.nodes[k]);
        bundle.khat.push_back(cloud.compensator());
        bundle.mean_constraint.push_back(info.mean_constraint);
        if (options.keep_node_clouds) bundle.node_clouds.push_back(cloud.reflected_positions());
    }

    bundle.max_root_tol = cloud.max_root_tol;
    bundle.terminal = std::move(cloud);
    return bundle;
}

}  // namespace mrsde
