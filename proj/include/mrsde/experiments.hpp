#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrsde/config.hpp"
#include "mrsde/oracles.hpp"

namespace mrsde {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares on (ln x, ln y); needs at least two distinct
// abscissae and strictly positive coordinates.
FitResult loglog_slope(std::span<const std::pair<double, double>> points);

// max_k |khat_k - koracle_k| on a shared grid.
double k_sup_error(std::span<const double> khat, std::span<const double> koracle);

struct EstimatorOptions {
    std::size_t tracked_particle = 0;
    int threads = 1;  // 0 = auto
};

// Monte Carlo estimate of the strong pathwise error: L seeded replications,
// each pairing one scheme run with its noise-coupled exact reference for
// the tracked particle; returns sqrt(mean of squared sup errors).
double error_estimator(const SimulationConfig& config, OracleCaseId id, std::size_t replications,
                       const EstimatorOptions& options = {});

struct RateStudy {
    std::string parameter;                           // "n" or "N"
    std::vector<std::pair<double, double>> points;   // (value, E_hat)
    FitResult fit;
};

// Error estimates along a ladder of n or N values with everything else
// fixed, plus the log-log regression.
RateStudy rate_study(const SimulationConfig& base, const std::string& parameter,
                     std::span<const std::size_t> values, std::size_t replications,
                     const EstimatorOptions& options = {});

// One property of a simulated path, with the measured margin against its
// bound (margin <= 0 passes).
struct PropertyCheck {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct InvariantReport {
    std::vector<PropertyCheck> checks;
    std::vector<std::string> warnings;
    double khat_terminal = 0.0;
    bool pass() const;
};

// Runs one seeded simulation and checks the scheme invariants against their
// tolerance bounds: compensator monotonicity, ledger and shift identities,
// per-step increment equality of the two G0 routes, discrete constraint
// positivity, Skorokhod complementarity, and the G0 Lipschitz bound on
// random empirical pairs.
InvariantReport validate_invariants(const SimulationConfig& config, std::uint32_t replication = 0,
                                    std::size_t lipschitz_pairs = 200);

// Deterministic reduction helpers (fixed index order regardless of thread
// count).
double pairwise_sum(std::span<const double> values);
void parallel_for_indexed(std::size_t count, int threads,
                          const std::function<void(std::size_t)>& body);
int resolve_thread_count(int requested);

}  // namespace mrsde
