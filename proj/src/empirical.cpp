#include "mrsde/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "mrsde/bisection.hpp"
#include "mrsde/errors.hpp"

namespace mrsde {

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw invalid_config_error("empirical measure needs at least one sample");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalMeasure::mean() const {
    double sum = 0.0;
    for (double u : samples_) sum += u;
    return sum / static_cast<double>(samples_.size());
}

ConstraintProfile::ConstraintProfile(std::span<const double> samples, const ConstraintSpec& spec)
    : spec_(&spec), samples_(samples), kind_(spec.kind()) {
    if (samples.empty()) throw invalid_config_error("empirical measure needs at least one sample");
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    switch (kind_) {
        case ConstraintSpec::Kind::linear: {
            double sum = 0.0;
            for (double u : samples) sum += u;
            mean_ = sum * inv_n;
            break;
        }
        case ConstraintSpec::Kind::sine: {
            double sum = 0.0, sum_sin = 0.0, sum_cos = 0.0;
            for (double u : samples) {
                sum += u;
                sum_sin += std::sin(u);
                sum_cos += std::cos(u);
            }
            mean_ = sum * inv_n;
            mean_sin_ = sum_sin * inv_n;
            mean_cos_ = sum_cos * inv_n;
            break;
        }
        case ConstraintSpec::Kind::custom:
            break;
    }
    h0_ = (*this)(0.0);
}

double ConstraintProfile::operator()(double x) const {
    switch (kind_) {
        case ConstraintSpec::Kind::linear:
            return x + mean_ - spec_->threshold();
        case ConstraintSpec::Kind::sine:
            // (1/N) sum sin(x + u_i) = sin(x) mean_cos + cos(x) mean_sin
            return x + mean_ - spec_->threshold() +
                   spec_->sin_amplitude() * (std::sin(x) * mean_cos_ + std::cos(x) * mean_sin_);
        case ConstraintSpec::Kind::custom: {
            double sum = 0.0;
            for (double u : samples_) sum += spec_->h(x + u);
            return sum / static_cast<double>(samples_.size());
        }
    }
    return 0.0;
}

double h_empirical(double x, const EmpiricalMeasure& nu, const ConstraintSpec& spec) {
    double sum = 0.0;
    for (double u : nu.samples()) sum += spec.h(x + u);
    return sum / static_cast<double>(nu.size());
}

double resolve_root_tol(const std::optional<double>& configured, double h0, double m) {
    if (configured) return *configured;
    return 1e-10 * std::max(1.0, std::abs(h0) / m);
}

double gbar0_of_profile(const ConstraintProfile& profile, const ConstraintSpec& spec, double tol) {
    if (!(tol > 0.0)) throw invalid_config_error("root tolerance must be positive");
    const double h0 = profile.at_zero();
    if (h0 == 0.0) return 0.0;
    const double m = spec.lower_lipschitz();
    // The m-lower-Lipschitz bound of H puts the root within |H(0)|/m of 0.
    double lo, hi, f_reach;
    if (!bracket_from_slope(profile, h0, m, lo, hi, f_reach)) {
        std::ostringstream msg;
        msg << "root bracket failed: H at the reach " << (h0 > 0.0 ? lo : hi) << " is " << f_reach
            << " with H(0) = " << h0 << "; declared lower bi-Lipschitz constant m = " << m
            << " overstates the actual slope of h";
        throw numerical_error(msg.str());
    }
    return bisect_nondecreasing(profile, lo, hi, tol).root;
}

double g0_of_profile(const ConstraintProfile& profile, const ConstraintSpec& spec, double tol) {
    if (profile.at_zero() >= 0.0) return 0.0;
    return std::max(0.0, gbar0_of_profile(profile, spec, tol));
}

double gbar0_of_samples(std::span<const double> samples, const ConstraintSpec& spec, double tol) {
    return gbar0_of_profile(ConstraintProfile(samples, spec), spec, tol);
}

double gbar0_empirical(const EmpiricalMeasure& nu, const ConstraintSpec& spec, double tol) {
    return gbar0_of_samples(nu.samples(), spec, tol);
}

double g0_of_samples(std::span<const double> samples, const ConstraintSpec& spec, double tol) {
    return g0_of_profile(ConstraintProfile(samples, spec), spec, tol);
}

double g0_empirical(const EmpiricalMeasure& nu, const ConstraintSpec& spec, double tol) {
    return g0_of_samples(nu.samples(), spec, tol);
}

double wasserstein1(const EmpiricalMeasure& nu, const EmpiricalMeasure& mu) {
    const auto a = nu.samples();
    const auto b = mu.samples();
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == m) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += std::abs(a[i] - b[i]);
        return sum / static_cast<double>(n);
    }
    // Integrate |F_nu^{-1}(q) - F_mu^{-1}(q)| over q in (0,1): both quantile
    // functions are piecewise constant with breakpoints i/n and j/m.
    double total = 0.0;
    std::size_t i = 0, j = 0;
    double q_prev = 0.0;
    while (i < n && j < m) {
        // next breakpoint: min((i+1)/n, (j+1)/m), compared exactly as integers
        const std::uint64_t lhs = static_cast<std::uint64_t>(i + 1) * m;
        const std::uint64_t rhs = static_cast<std::uint64_t>(j + 1) * n;
        double q_next;
        bool advance_i = false, advance_j = false;
        if (lhs <= rhs) {
            q_next = static_cast<double>(i + 1) / static_cast<double>(n);
            advance_i = true;
        }
        if (rhs <= lhs) {
            q_next = static_cast<double>(j + 1) / static_cast<double>(m);
            advance_j = true;
        }
        total += (q_next - q_prev) * std::abs(a[i] - b[j]);
        if (advance_i) ++i;
        if (advance_j) ++j;
        q_prev = q_next;
    }
    return total;
}

}  // namespace mrsde
