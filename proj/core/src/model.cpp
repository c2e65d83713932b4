#include "mdcf/model.hpp"

#include <cmath>

namespace mdcf {

std::vector<std::string> check(const ModelParams& params)
{
    auto warnings = check(params.degradation);
    check(params.shock);
    const Numerics& num = params.numerics;
    if (!(num.dt > 0.0) || !std::isfinite(num.dt))
    {
        throw ConfigError("numerics.dt", "must be positive and finite");
    }
    if (!(num.horizon > 0.0) || !std::isfinite(num.horizon))
    {
        throw ConfigError("numerics.horizon", "must be positive and finite");
    }
    if (num.horizon / num.dt > 4.0e9)
    {
        throw ConfigError("numerics.dt", "horizon/dt exceeds the 2^32 step budget");
    }
    if (!(num.quad_tol > 0.0))
    {
        throw ConfigError("numerics.quad_tol", "must be positive");
    }
    if (!(num.pmf_tail_tol > 0.0) || !(num.pmf_tail_tol < 1.0))
    {
        throw ConfigError("numerics.pmf_tail_tol", "must lie in (0, 1)");
    }
    return warnings;
}

bool rate_change_effective(const ModelParams& params) noexcept
{
    return params.rate_change_enabled &&
           params.shock.damage_threshold < params.shock.hard_threshold &&
           params.degradation.alpha2 != params.degradation.alpha1;
}

}  // namespace mdcf
