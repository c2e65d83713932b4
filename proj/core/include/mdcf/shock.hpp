#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mdcf/errors.hpp"
#include "mdcf/kernel.hpp"

namespace mdcf {

struct ShockParams
{
    double lambda0 = 2.5e-5;  ///< base arrival intensity, 1/time
    double gamma_dep = 0.001; ///< intensity gained per unit of total degradation
    double eta = 0.2;         ///< facilitation factor
    NormalLaw magnitude_law{10.0, 5.0};  ///< W
    double damage_threshold = 30.0;      ///< D0
    double hard_threshold = 40.0;        ///< D1
};

/// Throws ConfigError on a violated invariant (eta > 0, D0 <= D1, ...).
void check(const ShockParams& params);

enum class ShockKind
{
    benign,
    damaging,  ///< D0 < W <= D1: switches the degradation rate
    fatal,     ///< W > D1: hard failure
};

std::string_view to_string(ShockKind kind) noexcept;

struct ShockEvent
{
    double time = 0.0;
    double magnitude = 0.0;
    ShockKind kind = ShockKind::benign;
};

/// Hard failure dominates: a magnitude above both thresholds is fatal only.
ShockKind classify(double magnitude, const ShockParams& params) noexcept;

inline ShockEvent make_shock(double time, double magnitude, const ShockParams& params) noexcept
{
    return {time, magnitude, classify(magnitude, params)};
}

/// lambda_n = (1 + eta n)(lambda0 + gamma X_s).
double intensity(std::uint64_t n_shocks, double x_total, const ShockParams& params) noexcept;

/// Largest allowed expected arrival count per step with frozen intensity.
inline constexpr double kMaxStepMass = 0.1;

/// Poisson(rate dt) from a single uniform; throws StepSizeError past kMaxStepMass.
std::uint64_t arrivals_from_uniform(double rate, double dt, double u);

/// Arrivals in one step with the intensity frozen at its current value.
/// Consumes exactly one uniform, including when rate is zero.
template<class Rng>
std::uint64_t arrivals_in_step(double rate, double dt, Rng& rng)
{
    return arrivals_from_uniform(rate, dt, uniform_open(rng));
}

template<class Rng>
ShockEvent draw_shock(double t, const ShockParams& params, Rng& rng)
{
    return make_shock(t, sample_normal(params.magnitude_law, rng), params);
}

/*!
 * Step simulation of the arrival count alone on [0, horizon], holding total
 * degradation at zero (so only the facilitation term moves the intensity).
 * With gamma_dep = 0 the count follows facilitation_pmf(., eta, lambda0 t)
 * up to O(dt) discretization.
 */
template<class Rng>
std::uint64_t simulate_shock_count(const ShockParams& params, double horizon, double dt,
                                   Rng& rng)
{
    if (!(dt > 0.0))
    {
        throw DomainError("simulate_shock_count requires dt > 0");
    }
    const auto steps = static_cast<std::uint64_t>(std::ceil(horizon / dt - 1e-9));
    std::uint64_t n = 0;
    for (std::uint64_t step = 0; step < steps; ++step)
    {
        n += arrivals_in_step(intensity(n, 0.0, params), dt, rng);
    }
    return n;
}

}  // namespace mdcf
