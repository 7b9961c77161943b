#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace mrsde {

// Time-dependent affine coefficient family
//   b(t, x) = -(beta + a x),   sigma(t, x) = sigma + gamma x,
// plus a general hook for user-supplied (b, sigma).  In
// brownian_coefficient mode the mean-reversion coefficient is the running
// Brownian value scaled by -epsilon, supplied per call by the scheme.
struct ModelCoefficients {
    double beta = 0.0;
    double a = 0.0;
    double sigma = 0.0;
    double gamma = 0.0;
    double epsilon = 0.0;
    bool brownian_coefficient = false;  // a_t = -epsilon * B_t

    std::function<double(double, double)> drift_fn;      // b(t, x) hook
    std::function<double(double, double)> diffusion_fn;  // sigma(t, x) hook

    bool has_hooks() const { return static_cast<bool>(drift_fn); }
};

// b(t, x); `brownian` is the running Brownian value for the
// brownian_coefficient mode and is ignored otherwise.
double eval_drift(const ModelCoefficients& model, double t, double x, double brownian = 0.0);

// sigma(t, x).
double eval_diffusion(const ModelCoefficients& model, double t, double x);

// Deterministic point mass or an i.i.d. sampler for the initial positions.
struct InitialCondition {
    enum class Kind { point, uniform, gaussian };
    Kind kind = Kind::point;
    double value = 0.0;   // point
    double lo = 0.0;      // uniform
    double hi = 0.0;
    double mean = 0.0;    // gaussian
    double stddev = 1.0;
};

class NoiseSource;
double draw_initial(const InitialCondition& x0, const NoiseSource& noise, std::uint32_t particle);

}  // namespace mrsde
