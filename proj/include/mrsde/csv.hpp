#pragma once

#include <span>
#include <string>

#include "mrsde/experiments.hpp"
#include "mrsde/scheme.hpp"

namespace mrsde {

// Shortest round-trip decimal form; output is byte-stable for a fixed
// platform and seed.
std::string format_double(double value);

// Columns t, K_hat, mean_constraint and, when the bundle carries an oracle
// path, K_oracle; one row per grid node.
void write_path_csv(const std::string& path, const PathBundle& bundle);

// Columns t, K_oracle.
void write_oracle_csv(const std::string& path, std::span<const double> times,
                      std::span<const double> oracle_k);

// Columns param, E_hat with footer rows slope, intercept, r2.
void write_rate_csv(const std::string& path, const RateStudy& study);

}  // namespace mrsde
