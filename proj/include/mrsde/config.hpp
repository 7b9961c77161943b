#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrsde/constraint.hpp"
#include "mrsde/grid.hpp"
#include "mrsde/model.hpp"

namespace mrsde {

enum class ModelKind { drifted_bm, ou, ou_random_mean, black_scholes, affine };
enum class ConstraintKind { linear, sine };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Everything one simulation needs.  Immutable after construction; safe to
// share across worker threads.
struct SimulationConfig {
    ModelKind model_kind = ModelKind::drifted_bm;
    ModelCoefficients model;
    ConstraintKind constraint_kind = ConstraintKind::linear;
    ConstraintSpec constraint = ConstraintSpec::linear(0.0);
    TimeGrid grid;
    std::size_t particles = 1;     // N
    std::size_t replications = 100;  // L
    InitialCondition x0;
    std::uint64_t seed = 0;
    // Absolute argument tolerance for the G0 root finds.  Unset means the
    // scale-aware default 1e-10 * max(1, |H(0,nu)|/m), resolved per call.
    std::optional<double> root_tol;

    // Effective tolerance for a root find whose value at zero is h0.
    double resolve_root_tol(double h0) const;
};

// Cross-field checks (N >= 1, L >= 1, root_tol > 0, coefficient signs,
// kind-specific shape).  Throws invalid_config_error; fills `warnings` with
// non-fatal findings when provided.
void validate_config(const SimulationConfig& config, std::vector<std::string>* warnings = nullptr);

// Strict JSON loader for the documented key schema; unknown keys are errors.
SimulationConfig load_config(const std::string& path);
SimulationConfig parse_config(const std::string& json_text);

}  // namespace mrsde
