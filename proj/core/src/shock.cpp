#include "mdcf/shock.hpp"

#include <cmath>
#include <sstream>

namespace mdcf {

void check(const ShockParams& params)
{
    if (!(params.lambda0 >= 0.0) || !std::isfinite(params.lambda0))
    {
        throw ConfigError("lambda0", "must be nonnegative and finite");
    }
    if (!(params.gamma_dep >= 0.0) || !std::isfinite(params.gamma_dep))
    {
        throw ConfigError("gamma", "must be nonnegative and finite");
    }
    if (!(params.eta > 0.0) || !std::isfinite(params.eta))
    {
        throw ConfigError("eta", "must be positive and finite");
    }
    if (!std::isfinite(params.damage_threshold))
    {
        throw ConfigError("D0", "must be finite");
    }
    if (!std::isfinite(params.hard_threshold))
    {
        throw ConfigError("D1", "must be finite");
    }
    if (params.damage_threshold > params.hard_threshold)
    {
        std::ostringstream msg;
        msg << "damage threshold must not exceed the hard threshold (D0 <= D1), got D0="
            << params.damage_threshold << " > D1=" << params.hard_threshold;
        throw ConfigError("D0", msg.str());
    }
}

std::string_view to_string(ShockKind kind) noexcept
{
    switch (kind)
    {
        case ShockKind::benign:
            return "benign";
        case ShockKind::damaging:
            return "damaging";
        case ShockKind::fatal:
            return "fatal";
    }
    return "unknown";
}

ShockKind classify(double magnitude, const ShockParams& params) noexcept
{
    if (magnitude > params.hard_threshold)
        return ShockKind::fatal;
    if (magnitude > params.damage_threshold)
        return ShockKind::damaging;
    return ShockKind::benign;
}

double intensity(std::uint64_t n_shocks, double x_total, const ShockParams& params) noexcept
{
    return (1.0 + params.eta * static_cast<double>(n_shocks)) *
           (params.lambda0 + params.gamma_dep * x_total);
}

std::uint64_t arrivals_from_uniform(double rate, double dt, double u)
{
    const double mass = rate * dt;
    if (mass > kMaxStepMass)
    {
        std::ostringstream msg;
        msg << "step-size guard: expected arrivals per step rate*dt = " << mass
            << " exceeds " << kMaxStepMass << " (rate " << rate << ", dt " << dt
            << "); use dt <= " << kMaxStepMass / rate;
        throw StepSizeError(msg.str(), mass);
    }
    return poisson_inverse(mass, u);
}

}  // namespace mdcf
