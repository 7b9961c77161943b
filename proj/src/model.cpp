#include "mrsde/model.hpp"

#include "mrsde/errors.hpp"
#include "mrsde/rng.hpp"

namespace mrsde {

double eval_drift(const ModelCoefficients& model, double t, double x, double brownian) {
    if (model.has_hooks()) return model.drift_fn(t, x);
    const double a = model.brownian_coefficient ? -model.epsilon * brownian : model.a;
    return -(model.beta + a * x);
}

double eval_diffusion(const ModelCoefficients& model, double t, double x) {
    if (model.diffusion_fn) return model.diffusion_fn(t, x);
    return model.sigma + model.gamma * x;
}

double draw_initial(const InitialCondition& x0, const NoiseSource& noise, std::uint32_t particle) {
    switch (x0.kind) {
        case InitialCondition::Kind::point:
            return x0.value;
        case InitialCondition::Kind::uniform:
            return x0.lo + (x0.hi - x0.lo) * noise.uniform01(particle, 0, 0);
        case InitialCondition::Kind::gaussian:
            return x0.mean + x0.stddev * noise.normal(particle, 0, 0);
    }
    throw invalid_config_error("unknown initial condition kind");
}

}  // namespace mrsde
