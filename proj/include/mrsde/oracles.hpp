#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrsde/config.hpp"
#include "mrsde/constraint.hpp"
#include "mrsde/grid.hpp"
#include "mrsde/model.hpp"

namespace mrsde {

// The five benchmark regimes with a closed-form (or asymptotically
// closed-form) compensator K.
enum class OracleCaseId { case_i, case_ii, case_iii, case_iv, case_v };

std::string to_string(OracleCaseId id);

struct OracleParams {
    double beta = 0.0;
    double a = 0.0;
    double sigma = 0.0;
    double gamma = 0.0;
    double epsilon = 0.0;
    double x0 = 0.0;
    double p = 0.0;
    double alpha = 0.0;
};

// Case implied by the configured model/constraint pair, if any.
std::optional<OracleCaseId> resolve_oracle_case(const SimulationConfig& config);

// Extracts the oracle parameter set; requires a deterministic initial point.
OracleParams oracle_params(const SimulationConfig& config);

// Hard-errors on structurally invalid parameters (signs, a > 0 where the
// formulas need it, p <= -beta/a, |alpha| >= 1, negative discriminant).
// Initial conditions that merely violate the average constraint are
// reported as warnings, not rejected.
void validate_oracle_params(OracleCaseId id, const OracleParams& params,
                            std::vector<std::string>* warnings = nullptr);

// Case (i), drifted Brownian motion: K_t = (p + beta t - x0)^+.
double k_case_i(double t, const OracleParams& params);

// Cases (ii) and (iv): K_t = (a p + beta)(t - t*) 1_{t >= t*},
// t* = (1/a) (ln(x0 + beta/a) - ln(p + beta/a)).
double t_star_case_ii(const OracleParams& params);
double k_case_ii(double t, const OracleParams& params);

// Case (iii), asymptotic in epsilon: ramp p - x0 + beta t - sigma eps t^2/2
// on [t*, t_bar), plateau -(x0-p) + beta^2/(2 eps sigma) afterwards.
double t_star_case_iii(const OracleParams& params);
double t_bar_case_iii(const OracleParams& params);
double k_case_iii(double t, const OracleParams& params);

// Case (v) boundary function F_t; strictly increasing in x for |alpha| < 1.
double f_eval(double t, double x, const OracleParams& params);

// Case (v) K path on a grid: per node, invert F by bisection, take the
// running sup S of the positive parts, and accumulate the Stieltjes sum
// K(T_k) = sum_{j<=k} e^{-a T_j} (S_j - S_{j-1}).
struct CaseVPath {
    std::vector<double> k;            // K(T_k)
    std::vector<double> running_sup;  // S_k
};
CaseVPath k_case_v_path(const TimeGrid& grid, const OracleParams& params, double tol);
std::vector<double> k_case_v(const TimeGrid& grid, const OracleParams& params, double tol);

// Oracle K on a grid for any case (tol only used by case v).
std::vector<double> oracle_k_path(OracleCaseId id, const TimeGrid& grid,
                                  const OracleParams& params, double tol);

// Second-order generator applied to h.  `full` keeps the plain sigma^2
// coefficient on h''; `half` inserts the 1/2 of the Ito convention (the two
// agree whenever h'' = 0).
enum class SecondOrderConvention { full, half };
double generator_apply(const ConstraintSpec& constraint, const ModelCoefficients& model, double t,
                       double x, SecondOrderConvention convention = SecondOrderConvention::full);

// Density of dK on the boundary set: max(0, -mean_Lh) / mean_hprime when
// |mean_h| <= boundary_tol, else 0.
double density_k(double mean_h, double mean_Lh, double mean_hprime, double boundary_tol);

// Default detection width for the boundary indicator: ten times the value
// certificate of the root finder, M * root_tol.
double default_boundary_tol(const ConstraintSpec& constraint, double root_tol);

}  // namespace mrsde
