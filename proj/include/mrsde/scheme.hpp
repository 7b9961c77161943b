#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrsde/config.hpp"
#include "mrsde/constraint.hpp"
#include "mrsde/grid.hpp"
#include "mrsde/model.hpp"

namespace mrsde {

// Per-step state of the interacting particle scheme.  The reflected
// positions are derived state: X~_i = U~_i + K̂, so the shift identity
// X~_i - U~_i = K̂ holds by representation and the compensator path equals
// the running sup of the G0 values bit-exactly.
struct ParticleCloud {
    std::size_t step = 0;
    std::vector<double> unreflected;  // U~ per particle
    std::vector<double> brownian;     // accumulated Brownian value per particle
    double running_sup = 0.0;         // S = max_{l <= step} G0(mu_l)
    std::vector<double> khat;         // K̂ at nodes 0..step; khat.back() == running_sup
    double max_root_tol = 0.0;        // largest effective root tolerance used

    std::size_t size() const { return unreflected.size(); }
    double compensator() const { return khat.back(); }
    double reflected(std::size_t i) const { return unreflected[i] + khat.back(); }
    std::vector<double> reflected_positions() const;
};

struct StepInfo {
    double g0 = 0.0;               // G0 of the new empirical measure
    double delta_k = 0.0;          // compensator increment of this step
    double mean_constraint = 0.0;  // (1/N) sum h(X~_i) after the step
    double tol_used = 0.0;
};

// Full output of one run.
struct PathBundle {
    std::vector<double> times;
    std::vector<double> khat;
    std::vector<double> mean_constraint;
    std::vector<double> oracle_k;                      // empty unless attached
    std::vector<std::vector<double>> node_clouds;      // opt-in snapshots of X~ per node
    std::vector<std::vector<double>> reference_paths;  // [particle][node], coupled runs only
    ParticleCloud terminal;
    double max_root_tol = 0.0;
    std::vector<std::string> warnings;
};

struct RunOptions {
    bool keep_node_clouds = false;
};

// Draw the initial positions, apply the initial push S_0 = G0(mu_0), and
// seed the ledger with K̂_0 = S_0 (zero whenever the drawn cloud satisfies
// the average constraint).
ParticleCloud init_cloud(const SimulationConfig& config, std::uint32_t replication = 0);

// One Euler step: coefficients evaluated at the reflected particles, the
// increment accumulated into the unreflected ones, and the ledger advanced
// by delta_k = max(S, G0(mu_new)) - S.
StepInfo step(ParticleCloud& cloud, const TimeGrid& grid, const ModelCoefficients& model,
              const ConstraintSpec& constraint, std::span<const double> gaussians,
              const std::optional<double>& root_tol);

// One-step direct form of the increment: G0 of the cloud shifted by this
// step's drift/diffusion move, without touching the ledger.  Agrees with
// step()'s delta_k within twice the root tolerance.
double direct_increment(const ParticleCloud& cloud, const TimeGrid& grid,
                        const ModelCoefficients& model, const ConstraintSpec& constraint,
                        std::span<const double> gaussians, const std::optional<double>& root_tol);

// Run the scheme over the whole grid with seeded substreams.
PathBundle run(const SimulationConfig& config, std::uint32_t replication = 0,
               const RunOptions& options = {});

}  // namespace mrsde
