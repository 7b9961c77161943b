#include "mrsde/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "mrsde/empirical.hpp"
#include "mrsde/errors.hpp"
#include "mrsde/reference.hpp"
#include "mrsde/rng.hpp"
#include "mrsde/scheme.hpp"

namespace mrsde {

FitResult loglog_slope(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw invalid_config_error("regression needs at least two points");
    std::vector<double> lx(points.size()), ly(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0)) {
            throw invalid_config_error("log-log regression needs strictly positive coordinates");
        }
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
    }
    const double n = static_cast<double>(points.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        mean_x += lx[i];
        mean_y += ly[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sxx += (lx[i] - mean_x) * (lx[i] - mean_x);
        sxy += (lx[i] - mean_x) * (ly[i] - mean_y);
        syy += (ly[i] - mean_y) * (ly[i] - mean_y);
    }
    if (!(sxx > 0.0)) throw invalid_config_error("regression abscissae are degenerate");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    const double ss_res = syy - fit.slope * sxy;
    fit.r2 = syy > 0.0 ? 1.0 - std::max(0.0, ss_res) / syy : 1.0;
    return fit;
}

double k_sup_error(std::span<const double> khat, std::span<const double> koracle) {
    if (khat.size() != koracle.size()) {
        throw numerical_error("k_sup_error needs paths of equal length");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < khat.size(); ++k) {
        worst = std::max(worst, std::abs(khat[k] - koracle[k]));
    }
    return worst;
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MRSDE_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for_indexed(std::size_t count, int threads,
                          const std::function<void(std::size_t)>& body) {
    const int workers = std::min<int>(resolve_thread_count(threads), static_cast<int>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) {
    if (values.empty()) return 0.0;
    if (values.size() == 1) return values[0];
    if (values.size() <= 8) {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

namespace {

// One replication: advance the scheme and the tracked particle's coupled
// reference in lockstep, returning the squared sup error over the nodes.
double tracked_sup_sq_error(const SimulationConfig& config, const ReferenceKernel& kernel,
                            std::uint32_t replication, std::size_t tracked) {
    ParticleCloud cloud = init_cloud(config, replication);
    double ref_state = config.x0.value;
    double worst = std::abs(cloud.reflected(tracked) - kernel.value(ref_state, 0));

    const NoiseSource noise(config.seed, replication, NoiseLane::scheme);
    const NoiseSource extra(config.seed, replication, NoiseLane::reference);
    std::vector<double> gaussians(config.particles);
    for (std::size_t k = 1; k <= config.grid.steps; ++k) {
        for (std::size_t i = 0; i < config.particles; ++i) {
            gaussians[i] =
                noise.normal(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k), 0);
        }
        step(cloud, config.grid, config.model, config.constraint, gaussians, config.root_tol);
        ref_state = kernel.advance(ref_state, k, static_cast<std::uint32_t>(tracked),
                                   gaussians[tracked], extra);
        worst = std::max(worst,
                         std::abs(cloud.reflected(tracked) - kernel.value(ref_state, k)));
    }
    return worst * worst;
}

}  // namespace

double error_estimator(const SimulationConfig& config, OracleCaseId id, std::size_t replications,
                       const EstimatorOptions& options) {
    if (replications < 1) throw invalid_config_error("error estimator needs L >= 1");
    validate_config(config);
    if (options.tracked_particle >= config.particles) {
        throw invalid_config_error("tracked particle index out of range");
    }
    const OracleParams params = oracle_params(config);
    const ReferenceKernel kernel(id, params, config.grid, config.root_tol.value_or(1e-10));

    std::vector<double> sup_sq(replications, 0.0);
    parallel_for_indexed(replications, options.threads, [&](std::size_t l) {
        sup_sq[l] = tracked_sup_sq_error(config, kernel, static_cast<std::uint32_t>(l),
                                         options.tracked_particle);
    });
    return std::sqrt(pairwise_sum(sup_sq) / static_cast<double>(replications));
}

RateStudy rate_study(const SimulationConfig& base, const std::string& parameter,
                     std::span<const std::size_t> values, std::size_t replications,
                     const EstimatorOptions& options) {
    if (values.size() < 3) throw invalid_config_error("rate study needs at least 3 ladder points");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] <= values[i - 1]) {
            throw invalid_config_error("rate study ladder must be strictly increasing");
        }
    }
    const bool vary_steps = parameter == "n";
    if (!vary_steps && parameter != "N") {
        throw invalid_config_error("rate study parameter must be n or N");
    }
    const auto id = resolve_oracle_case(base);
    if (!id) throw invalid_config_error("rate study needs a configuration with an oracle case");

    RateStudy study;
    study.parameter = parameter;
    study.points.reserve(values.size());
    for (const std::size_t value : values) {
        SimulationConfig config = base;
        if (vary_steps) {
            config.grid = make_grid(base.grid.horizon, value);
        } else {
            config.particles = value;
        }
        const double e_hat = error_estimator(config, *id, replications, options);
        if (!(e_hat > 0.0)) {
            std::ostringstream msg;
            msg << "error estimate is not positive at " << parameter << " = " << value
                << "; the log-log fit is undefined";
            throw numerical_error(msg.str());
        }
        study.points.emplace_back(static_cast<double>(value), e_hat);
    }
    study.fit = loglog_slope(study.points);
    return study;
}

bool InvariantReport::pass() const {
    for (const auto& check : checks) {
        if (!check.pass) return false;
    }
    return true;
}

InvariantReport validate_invariants(const SimulationConfig& config, std::uint32_t replication,
                                    std::size_t lipschitz_pairs) {
    InvariantReport report;
    validate_config(config, &report.warnings);

    const double m = config.constraint.lower_lipschitz();
    const double big_m = config.constraint.upper_lipschitz();

    ParticleCloud cloud = init_cloud(config, replication);
    const NoiseSource noise(config.seed, replication, NoiseLane::scheme);
    std::vector<double> gaussians(config.particles);

    double min_delta = 0.0;
    double worst_increment_gap = 0.0;   // |delta_k - direct increment| - bound
    double worst_increment_seen = 0.0;
    double min_mean_constraint = 0.0;
    double complementarity = 0.0;
    double worst_shift_gap = 0.0;
    double max_tol = cloud.max_root_tol;

    {
        const ConstraintProfile profile(cloud.unreflected, config.constraint);
        const double mean_h0 = profile(cloud.compensator());
        min_mean_constraint = mean_h0;
        complementarity += mean_h0 * cloud.compensator();
    }

    for (std::size_t k = 1; k <= config.grid.steps; ++k) {
        for (std::size_t i = 0; i < config.particles; ++i) {
            gaussians[i] =
                noise.normal(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k), 0);
        }
        const double direct = direct_increment(cloud, config.grid, config.model, config.constraint,
                                               gaussians, config.root_tol);
        const StepInfo info = step(cloud, config.grid, config.model, config.constraint, gaussians,
                                   config.root_tol);
        max_tol = std::max(max_tol, info.tol_used);
        min_delta = std::min(min_delta, info.delta_k);
        const double gap = std::abs(info.delta_k - direct);
        worst_increment_seen = std::max(worst_increment_seen, gap);
        worst_increment_gap =
            std::max(worst_increment_gap, gap - 2.0 * big_m * info.tol_used / m);
        min_mean_constraint = std::min(min_mean_constraint, info.mean_constraint);
        complementarity += info.mean_constraint * info.delta_k;
    }

    for (std::size_t i = 0; i < config.particles; ++i) {
        const double materialized = cloud.reflected(i) - cloud.unreflected[i];
        worst_shift_gap = std::max(worst_shift_gap, std::abs(materialized - cloud.compensator()));
    }

    const double khat_terminal = cloud.compensator();
    report.khat_terminal = khat_terminal;

    auto add = [&](std::string name, double measured, double bound, std::string detail = {}) {
        PropertyCheck check;
        check.name = std::move(name);
        check.measured = measured;
        check.bound = bound;
        check.pass = measured <= bound;
        check.detail = std::move(detail);
        report.checks.push_back(std::move(check));
    };

    add("compensator_monotone", -min_delta, 0.0, "smallest per-step increment, negated");
    add("ledger_identity", std::abs(cloud.khat.back() - cloud.running_sup), 0.0,
        "terminal ledger vs running sup");
    add("shift_identity", worst_shift_gap,
        8.0 * std::numeric_limits<double>::epsilon() *
            std::max(1.0, std::abs(khat_terminal) + std::abs(cloud.unreflected[0])),
        "materialized reflected-minus-unreflected vs ledger");
    add("increment_equality", worst_increment_gap, 0.0,
        "max |delta_k - direct increment| minus 2 M tol / m; worst gap " +
            std::to_string(worst_increment_seen));
    add("constraint_positivity", -min_mean_constraint, big_m * max_tol,
        "most negative per-node mean constraint, negated");
    add("skorokhod_complementarity", complementarity, big_m * max_tol * khat_terminal,
        "sum of mean-constraint times increment");

    // G0 Lipschitz bound on random empirical pairs built from the run's
    // terminal spread.
    if (lipschitz_pairs > 0) {
        const NoiseSource aux(config.seed, replication, NoiseLane::aux);
        const std::size_t sample_count = std::min<std::size_t>(config.particles, 256);
        const double tol_fixed = config.root_tol.value_or(1e-8);
        double worst_lipschitz = 0.0;
        std::vector<double> first(sample_count), second(sample_count);
        for (std::size_t pair_idx = 0; pair_idx < lipschitz_pairs; ++pair_idx) {
            const auto step_tag = static_cast<std::uint32_t>(pair_idx + 1);
            const double center = config.x0.kind == InitialCondition::Kind::point
                                      ? config.x0.value
                                      : cloud.unreflected[0];
            const double spread = 0.5 + 2.0 * aux.uniform01(0, step_tag, 0);
            const double offset = 2.0 * aux.normal(1, step_tag, 0);
            for (std::size_t i = 0; i < sample_count; ++i) {
                const auto tag = static_cast<std::uint32_t>(i + 2);
                first[i] = center + spread * aux.normal(tag, step_tag, 1);
                second[i] = first[i] + offset * aux.uniform01(tag, step_tag, 2);
            }
            const EmpiricalMeasure nu(first);
            const EmpiricalMeasure nu_prime(second);
            const double g_a = g0_empirical(nu, config.constraint, tol_fixed);
            const double g_b = g0_empirical(nu_prime, config.constraint, tol_fixed);
            const double bound = (big_m / m) * wasserstein1(nu, nu_prime) +
                                 2.0 * big_m * tol_fixed / m;
            worst_lipschitz = std::max(worst_lipschitz, std::abs(g_a - g_b) - bound);
        }
        add("g0_lipschitz", worst_lipschitz, 0.0,
            "max |G0(nu) - G0(nu')| minus (M/m) W1 - 2 M tol / m over random pairs");
    }

    return report;
}

}  // namespace mrsde
