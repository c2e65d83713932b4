#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdcf/kernel.hpp"

namespace mdcf {

/*!
 * Per-replication random multiplier on the degradation shape rate.
 *
 * `fixed` is a point mass at `value` (1 by default, the deterministic
 * reading). `gamma` draws from Gamma(shape, rate = shape), i.e. mean 1 and
 * coefficient of variation 1/sqrt(shape).
 */
struct ThetaLaw
{
    enum class Kind
    {
        fixed,
        gamma,
    };

    Kind kind = Kind::fixed;
    double value = 1.0;
    double shape = 1.0;

    static ThetaLaw point(double v) { return {Kind::fixed, v, 1.0}; }
    static ThetaLaw unit_mean_gamma(double shape) { return {Kind::gamma, 1.0, shape}; }

    bool is_degenerate() const noexcept { return kind == Kind::fixed; }

    template<class Rng>
    double sample(Rng& rng) const
    {
        if (kind == Kind::fixed)
        {
            return value;
        }
        return sample_gamma(GammaLaw(shape, shape), rng);
    }
};

struct DegradationParams
{
    double alpha1 = 0.5;  ///< shape rate per unit time before the first damaging shock
    double alpha2 = 0.9;  ///< shape rate per unit time afterwards
    double beta = 1.2;    ///< gamma rate
    NormalLaw jump_law{0.5, 0.1};  ///< abrupt damage Y added by every shock
    double soft_threshold = 5.0;   ///< H
    ThetaLaw theta{};
};

/// Throws ConfigError on a violated invariant; returns advisory warnings.
std::vector<std::string> check(const DegradationParams& params);

/// Value type; every operation returns a new state.
struct DegradationState
{
    double clock = 0.0;
    double pure_path = 0.0;
    double jump_sum = 0.0;
    bool rate_changed = false;
    std::optional<double> rate_change_time;
};

inline double total(const DegradationState& state) noexcept
{
    return state.pure_path + state.jump_sum;
}

/// Shape accumulated per unit time in the state's current phase.
inline double phase_shape_rate(const DegradationState& state,
                               const DegradationParams& params) noexcept
{
    return state.rate_changed ? params.alpha2 : params.alpha1;
}

/*!
 * Gamma wear over one step, split across two streams so that runs with and
 * without a rate change share the pre-change randomness exactly.
 *
 * The base part Gamma(theta alpha1 dt, beta) always comes from `base_rng`.
 * After a rate change with alpha2 > alpha1 an independent
 * Gamma(theta (alpha2 - alpha1) dt, beta) from `change_rng` is added; with
 * alpha2 < alpha1 the base part is thinned by a Beta(alpha2, alpha1 - alpha2)
 * factor. Either way the step increment is exactly Gamma(theta alpha2 dt, beta).
 */
template<class BaseRng, class ChangeRng>
double wear_increment(const DegradationState& state, double dt,
                      const DegradationParams& params, double theta,
                      BaseRng& base_rng, ChangeRng& change_rng)
{
    const double base_shape = theta * params.alpha1 * dt;
    const double base = sample_gamma(GammaLaw(base_shape, params.beta), base_rng);
    if (!state.rate_changed || params.alpha2 == params.alpha1)
    {
        return base;
    }
    if (params.alpha2 > params.alpha1)
    {
        const GammaLaw extra(theta * (params.alpha2 - params.alpha1) * dt, params.beta);
        return base + sample_gamma(extra, change_rng);
    }
    const double kept = sample_gamma(GammaLaw(theta * params.alpha2 * dt, 1.0), change_rng);
    const double shed =
        sample_gamma(GammaLaw(theta * (params.alpha1 - params.alpha2) * dt, 1.0), change_rng);
    if (kept + shed == 0.0)
    {
        // Both parts underflowed; the Beta factor is then 0 or 1 with these odds.
        return uniform_open(change_rng) < params.alpha2 / params.alpha1 ? base : 0.0;
    }
    return base * (kept / (kept + shed));
}

/// Advance the clock by dt and add one gamma wear increment.
template<class BaseRng, class ChangeRng>
DegradationState advance(DegradationState state, double dt, const DegradationParams& params,
                         double theta, BaseRng& base_rng, ChangeRng& change_rng)
{
    if (!(dt > 0.0))
    {
        throw DomainError("advance requires dt > 0");
    }
    state.pure_path += wear_increment(state, dt, params, theta, base_rng, change_rng);
    state.clock += dt;
    return state;
}

template<class Rng>
DegradationState advance(const DegradationState& state, double dt,
                         const DegradationParams& params, double theta, Rng& rng)
{
    return advance(state, dt, params, theta, rng, rng);
}

/// Adds max(y, 0): negative damage draws are clamped to keep wear monotone.
DegradationState apply_jump(DegradationState state, double y) noexcept;

/// First call wins; later calls leave the recorded change time alone.
DegradationState trigger_rate_change(DegradationState state, double at) noexcept;

}  // namespace mdcf
