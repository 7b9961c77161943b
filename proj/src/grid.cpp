#include "mrsde/grid.hpp"

#include <cmath>

#include "mrsde/errors.hpp"

namespace mrsde {

TimeGrid make_grid(double horizon, std::size_t steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw invalid_config_error("grid.T must be a finite positive number");
    }
    if (steps == 0) {
        throw invalid_config_error("grid.n must be at least 1");
    }
    TimeGrid grid;
    grid.horizon = horizon;
    grid.steps = steps;
    grid.nodes.resize(steps + 1);
    const double n = static_cast<double>(steps);
    for (std::size_t k = 0; k <= steps; ++k) {
        // T * (k/n) hits 0 and T exactly at the endpoints.
        grid.nodes[k] = horizon * (static_cast<double>(k) / n);
    }
    return grid;
}

std::size_t TimeGrid::underbar_index(double s) const {
    if (s <= 0.0 || nodes.size() <= 1) return 0;
    if (s >= horizon) return steps;
    auto idx = static_cast<std::size_t>(std::floor(s / dt()));
    if (idx > steps) idx = steps;
    // One-ulp guards around the division.
    while (idx + 1 <= steps && nodes[idx + 1] <= s) ++idx;
    while (idx > 0 && nodes[idx] > s) --idx;
    return idx;
}

double TimeGrid::underbar(double s) const { return nodes[underbar_index(s)]; }

}  // namespace mrsde
