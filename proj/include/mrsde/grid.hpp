#pragma once

#include <cstddef>
#include <vector>

namespace mrsde {

// Regular subdivision of [0, T] into n steps, nodes T_k = k*T/n.
// Grids built through make_grid satisfy: nodes strictly increasing,
// nodes.front() == 0, nodes.back() == T, spacing dt() == T/n.  A degenerate
// zero-step grid (nodes == {0}) is representable for the "no steps" edge of
// a simulation run but is rejected by make_grid.
struct TimeGrid {
    double horizon = 0.0;       // T
    std::size_t steps = 0;      // n
    std::vector<double> nodes;  // n + 1 values

    double dt() const { return horizon / static_cast<double>(steps); }
    double node(std::size_t k) const { return nodes[k]; }

    // Index of the largest node <= s (s clamped to [0, T]).
    std::size_t underbar_index(double s) const;
    // Value of the largest node <= s: the rounding map s -> floor(s).
    double underbar(double s) const;
};

// Validating factory: requires T > 0 and n >= 1.
TimeGrid make_grid(double horizon, std::size_t steps);

}  // namespace mrsde
