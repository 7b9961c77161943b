#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mrsde {

// Constraint function h with its bi-Lipschitz envelope 0 < m <= M:
//   m |x-y| <= |h(x)-h(y)| <= M |x-y|,  h nondecreasing.
// m and M are declared by the caller, never inferred; validate_constraint
// checks the declaration against probe pairs.
class ConstraintSpec {
public:
    enum class Kind { linear, sine, custom };

    // h(x) = x - p, exactly 1-bi-Lipschitz.
    static ConstraintSpec linear(double p);
    // h(x) = x + alpha*sin(x) - p, |alpha| < 1, slopes in [1-|a|, 1+|a|].
    static ConstraintSpec sine(double p, double alpha);
    static ConstraintSpec custom(std::function<double(double)> h, double m, double M,
                                 std::function<double(double)> h_prime = nullptr,
                                 std::function<double(double)> h_second = nullptr);

    double h(double x) const;
    bool has_derivatives() const;
    double h_prime(double x) const;   // throws invalid_config_error when absent
    double h_second(double x) const;  // throws invalid_config_error when absent

    Kind kind() const { return kind_; }
    double lower_lipschitz() const { return m_; }
    double upper_lipschitz() const { return big_m_; }
    double threshold() const { return p_; }
    double sin_amplitude() const { return alpha_; }
    bool smooth() const { return smooth_; }

    // Override the declared envelope (user-supplied constants from a config).
    void set_lipschitz(double m, double M);

private:
    ConstraintSpec() = default;

    Kind kind_ = Kind::linear;
    double p_ = 0.0;
    double alpha_ = 0.0;
    double m_ = 1.0;
    double big_m_ = 1.0;
    bool smooth_ = true;
    std::function<double(double)> h_;
    std::function<double(double)> hp_;
    std::function<double(double)> hpp_;
};

// Worst violations of monotonicity and of the two Lipschitz bounds over a
// set of probe pairs.  Violations at or below fp roundoff count as zero.
struct ConstraintDiagnostics {
    double worst_monotonicity = 0.0;  // max over pairs of -(h(hi)-h(lo)) for lo < hi
    double worst_lower = 0.0;         // max of m|x-y| - |h(x)-h(y)|
    double worst_upper = 0.0;         // max of |h(x)-h(y)| - M|x-y|
    std::pair<double, double> monotonicity_pair{0.0, 0.0};
    std::pair<double, double> lower_pair{0.0, 0.0};
    std::pair<double, double> upper_pair{0.0, 0.0};
    std::vector<std::string> failures;

    bool pass() const { return failures.empty(); }
};

ConstraintDiagnostics validate_constraint(const ConstraintSpec& spec,
                                          std::span<const std::pair<double, double>> probes);

// Convenience: consecutive-pair probes on a uniform grid over [lo, hi].
std::vector<std::pair<double, double>> grid_probes(double lo, double hi, std::size_t points);

}  // namespace mrsde
