#pragma once

#include <cstdint>
#include <vector>

#include "mrsde/config.hpp"
#include "mrsde/oracles.hpp"
#include "mrsde/rng.hpp"
#include "mrsde/scheme.hpp"

namespace mrsde {

// Grid transition of the true solution, driven by the same Gaussians as the
// particle scheme.
//
//   case i        exact: constant coefficients, shared increment, plus the
//                 oracle compensator.
//   cases ii, v   exact: the unreflected part is an Ornstein-Uhlenbeck
//                 transition whose noise is drawn jointly with the scheme's
//                 increment at their exact correlation; the reflection enters
//                 as the deterministic shift e^{-at} Kbar(t).
//   case iv       high accuracy: Gaussian transition matching the exact
//                 conditional mean/variance of the forced linear SDE
//                 dX = (-beta - aX + k(t)) dt + gamma X dB, again correlated
//                 exactly with the scheme's increment.
//
// Extra independent Gaussians come from the reference lane of the stream,
// so scheme and reference can be regenerated independently.
class ReferenceKernel {
public:
    ReferenceKernel(OracleCaseId id, const OracleParams& params, const TimeGrid& grid,
                    double root_tol);

    // Advance the unreflected reference state over step k-1 -> k.
    double advance(double state, std::size_t k, std::uint32_t particle, double gaussian,
                   const NoiseSource& extra) const;

    // Deterministic reflection shift at a node; zero for case iv where the
    // compensator forcing is folded into the transition itself.
    double shift(std::size_t node) const;

    double value(double state, std::size_t node) const { return state + shift(node); }

    const std::vector<double>& oracle_k() const { return oracle_k_; }

private:
    OracleCaseId id_;
    OracleParams params_;
    TimeGrid grid_;
    std::vector<double> oracle_k_;
    std::vector<double> shift_;  // R(T_k) per node
    // per-step constants for the OU transition (uniform grid)
    double ou_decay_ = 0.0;
    double ou_stddev_ = 0.0;
    double ou_rho_ = 0.0;
    double t_star_ = 0.0;  // forcing switch time for cases ii/iv
};

// Simulate the N coupled reference trajectories of a configuration on its
// grid, storing the paths and the oracle compensator.  Uses the same
// Gaussian stream coordinates as run().
PathBundle coupled_reference_run(const SimulationConfig& config, OracleCaseId id,
                                 std::uint32_t replication = 0);

}  // namespace mrsde
