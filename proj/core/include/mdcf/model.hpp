#pragma once

#include <string>
#include <vector>

#include "mdcf/degradation.hpp"
#include "mdcf/shock.hpp"

namespace mdcf {

struct Numerics
{
    double dt = 0.01;
    double horizon = 20.0;
    double quad_tol = 1e-9;      ///< absolute tolerance of damage-convolution integrals
    double pmf_tail_tol = 1e-10; ///< truncation of the shock-count series
};

/// Everything one replication needs. Defaults are the jet-pipe servo valve case.
struct ModelParams
{
    DegradationParams degradation{};
    ShockParams shock{};
    /// When false, damaging shocks are still classified but never switch the rate.
    bool rate_change_enabled = true;
    Numerics numerics{};

    static ModelParams servo_valve() { return {}; }
};

/// Throws ConfigError on the first violated invariant; returns warnings.
std::vector<std::string> check(const ModelParams& params);

/// True when a damaging shock can actually alter the degradation law.
bool rate_change_effective(const ModelParams& params) noexcept;

}  // namespace mdcf
