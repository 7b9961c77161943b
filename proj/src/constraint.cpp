#include "mrsde/constraint.hpp"

#include <cmath>

#include "mrsde/errors.hpp"

namespace mrsde {

ConstraintSpec ConstraintSpec::linear(double p) {
    ConstraintSpec spec;
    spec.kind_ = Kind::linear;
    spec.p_ = p;
    spec.m_ = 1.0;
    spec.big_m_ = 1.0;
    spec.smooth_ = true;
    return spec;
}

ConstraintSpec ConstraintSpec::sine(double p, double alpha) {
    if (!(std::abs(alpha) < 1.0)) {
        throw invalid_config_error("constraint.alpha must satisfy |alpha| < 1");
    }
    ConstraintSpec spec;
    spec.kind_ = Kind::sine;
    spec.p_ = p;
    spec.alpha_ = alpha;
    spec.m_ = 1.0 - std::abs(alpha);
    spec.big_m_ = 1.0 + std::abs(alpha);
    spec.smooth_ = true;
    return spec;
}

ConstraintSpec ConstraintSpec::custom(std::function<double(double)> h, double m, double M,
                                      std::function<double(double)> h_prime,
                                      std::function<double(double)> h_second) {
    if (!h) throw invalid_config_error("custom constraint needs a function h");
    ConstraintSpec spec;
    spec.kind_ = Kind::custom;
    spec.h_ = std::move(h);
    spec.hp_ = std::move(h_prime);
    spec.hpp_ = std::move(h_second);
    spec.smooth_ = static_cast<bool>(spec.hp_) && static_cast<bool>(spec.hpp_);
    spec.set_lipschitz(m, M);
    return spec;
}

void ConstraintSpec::set_lipschitz(double m, double M) {
    if (!(m > 0.0) || !(M >= m)) {
        throw invalid_config_error("constraint constants must satisfy 0 < m <= M");
    }
    m_ = m;
    big_m_ = M;
}

double ConstraintSpec::h(double x) const {
    switch (kind_) {
        case Kind::linear: return x - p_;
        case Kind::sine: return x + alpha_ * std::sin(x) - p_;
        case Kind::custom: return h_(x);
    }
    return 0.0;
}

bool ConstraintSpec::has_derivatives() const {
    return kind_ != Kind::custom || (hp_ && hpp_);
}

double ConstraintSpec::h_prime(double x) const {
    switch (kind_) {
        case Kind::linear: return 1.0;
        case Kind::sine: return 1.0 + alpha_ * std::cos(x);
        case Kind::custom:
            if (!hp_) throw invalid_config_error("constraint has no derivative h'");
            return hp_(x);
    }
    return 0.0;
}

double ConstraintSpec::h_second(double x) const {
    switch (kind_) {
        case Kind::linear: return 0.0;
        case Kind::sine: return -alpha_ * std::sin(x);
        case Kind::custom:
            if (!hpp_) throw invalid_config_error("constraint has no second derivative h''");
            return hpp_(x);
    }
    return 0.0;
}

ConstraintDiagnostics validate_constraint(const ConstraintSpec& spec,
                                          std::span<const std::pair<double, double>> probes) {
    ConstraintDiagnostics diag;
    const double m = spec.lower_lipschitz();
    const double M = spec.upper_lipschitz();
    for (const auto& [a, b] : probes) {
        if (a == b) continue;  // degenerate probe carries no information
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        const double dh = spec.h(hi) - spec.h(lo);
        const double dx = hi - lo;

        const double mono = -dh;
        if (mono > diag.worst_monotonicity) {
            diag.worst_monotonicity = mono;
            diag.monotonicity_pair = {lo, hi};
        }
        const double lower = m * dx - std::abs(dh);
        if (lower > diag.worst_lower) {
            diag.worst_lower = lower;
            diag.lower_pair = {lo, hi};
        }
        const double upper = std::abs(dh) - M * dx;
        if (upper > diag.worst_upper) {
            diag.worst_upper = upper;
            diag.upper_pair = {lo, hi};
        }
    }
    // roundoff floor: a bound attained with equality must still pass
    const double eps = 1e-10;
    if (diag.worst_monotonicity > eps) diag.failures.push_back("h is not nondecreasing");
    if (diag.worst_lower > eps) diag.failures.push_back("lower Lipschitz bound m violated");
    if (diag.worst_upper > eps) diag.failures.push_back("upper Lipschitz bound M violated");
    return diag;
}

std::vector<std::pair<double, double>> grid_probes(double lo, double hi, std::size_t points) {
    if (points < 2 || !(hi > lo)) {
        throw invalid_config_error("grid_probes needs at least 2 points and hi > lo");
    }
    std::vector<std::pair<double, double>> probes;
    probes.reserve(points - 1);
    const double width = hi - lo;
    double prev = lo;
    for (std::size_t k = 1; k < points; ++k) {
        const double x = lo + width * (static_cast<double>(k) / static_cast<double>(points - 1));
        probes.emplace_back(prev, x);
        prev = x;
    }
    return probes;
}

}  // namespace mrsde
