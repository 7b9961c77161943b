#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mrsde/constraint.hpp"

namespace mrsde {

// Uniformly weighted atoms on particle positions, kept sorted so the
// Wasserstein-1 distance is a linear scan.
class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(std::vector<double> samples);

    std::span<const double> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double mean() const;

private:
    std::vector<double> samples_;  // ascending
};

// x -> H(x, nu) = (1/N) sum h(x + u_i), reduced to closed form in x for the
// built-in constraint kinds (the per-cloud sufficient statistics are the
// mean and, for the sin kind, the mean sine and cosine).  Holds a view of
// the samples for the generic kind; the samples must outlive the profile.
class ConstraintProfile {
public:
    ConstraintProfile(std::span<const double> samples, const ConstraintSpec& spec);

    double operator()(double x) const;
    double at_zero() const { return h0_; }

private:
    const ConstraintSpec* spec_;
    std::span<const double> samples_;
    ConstraintSpec::Kind kind_;
    double mean_ = 0.0;
    double mean_sin_ = 0.0;
    double mean_cos_ = 0.0;
    double h0_ = 0.0;
};

// H(x, nu): direct evaluation of the empirical constraint functional.
double h_empirical(double x, const EmpiricalMeasure& nu, const ConstraintSpec& spec);

// Effective root tolerance: the configured value when present, otherwise
// the scale-aware default 1e-10 * max(1, |h0| / m).
double resolve_root_tol(const std::optional<double>& configured, double h0, double m);

// Profile-level root finds (the profile caches H(0, nu)).
double gbar0_of_profile(const ConstraintProfile& profile, const ConstraintSpec& spec, double tol);
double g0_of_profile(const ConstraintProfile& profile, const ConstraintSpec& spec, double tol);

// Spatial zero of H(., nu), found by bisection with argument tolerance tol;
// the value certificate is |H(root, nu)| <= M * tol + roundoff.
double gbar0_empirical(const EmpiricalMeasure& nu, const ConstraintSpec& spec, double tol);
double gbar0_of_samples(std::span<const double> samples, const ConstraintSpec& spec, double tol);

// Positive part of gbar0; returns exactly 0 without a root find whenever
// H(0, nu) >= 0.
double g0_empirical(const EmpiricalMeasure& nu, const ConstraintSpec& spec, double tol);
double g0_of_samples(std::span<const double> samples, const ConstraintSpec& spec, double tol);

// Wasserstein-1 distance between two empirical measures; exact for equal
// sample counts, quantile-function coupling on the merged breakpoint set
// otherwise.
double wasserstein1(const EmpiricalMeasure& nu, const EmpiricalMeasure& mu);

}  // namespace mrsde
