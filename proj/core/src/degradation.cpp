#include "mdcf/degradation.hpp"

#include <cmath>

#include "mdcf/errors.hpp"

namespace mdcf {

namespace {

void require_positive(double v, const char* field)
{
    if (!(v > 0.0) || !std::isfinite(v))
    {
        throw ConfigError(field, "must be positive and finite");
    }
}

}  // namespace

std::vector<std::string> check(const DegradationParams& params)
{
    require_positive(params.alpha1, "alpha1");
    require_positive(params.alpha2, "alpha2");
    require_positive(params.beta, "beta");
    require_positive(params.soft_threshold, "H");
    if (params.theta.kind == ThetaLaw::Kind::fixed)
    {
        require_positive(params.theta.value, "theta.value");
    }
    else
    {
        require_positive(params.theta.shape, "theta.shape");
    }

    std::vector<std::string> warnings;
    if (params.alpha2 < params.alpha1)
    {
        warnings.emplace_back("alpha2 < alpha1: damaging shocks slow degradation down");
    }
    return warnings;
}

DegradationState apply_jump(DegradationState state, double y) noexcept
{
    if (y > 0.0)
    {
        state.jump_sum += y;
    }
    return state;
}

DegradationState trigger_rate_change(DegradationState state, double at) noexcept
{
    if (!state.rate_changed)
    {
        state.rate_changed = true;
        state.rate_change_time = at;
    }
    return state;
}

}  // namespace mdcf
