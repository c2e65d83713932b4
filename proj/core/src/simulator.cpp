#include "mdcf/simulator.hpp"

#include <cmath>

#include "mdcf/philox.hpp"

namespace mdcf {

std::string_view to_string(FailureMode mode) noexcept
{
    switch (mode)
    {
        case FailureMode::survived:
            return "survived";
        case FailureMode::soft:
            return "soft";
        case FailureMode::hard:
            return "hard";
    }
    return "unknown";
}

std::uint64_t step_count(double horizon, double dt)
{
    if (!(dt > 0.0))
    {
        throw DomainError("dt must be positive");
    }
    if (!(horizon >= 0.0))
    {
        throw DomainError("horizon must be nonnegative");
    }
    return static_cast<std::uint64_t>(std::ceil(horizon / dt - 1e-9));
}

ReplicationOutcome simulate_replication(const ModelParams& params, double horizon, double dt,
                                        ReplicationSeed seed, bool record_trace)
{
    using rng::CounterStream;
    using rng::KeyedStream;
    using rng::Purpose;

    const std::uint64_t steps = step_count(horizon, dt);
    if (steps > UINT32_MAX)
    {
        throw DomainError("horizon/dt exceeds the 2^32 step budget");
    }

    CounterStream theta_rng(seed.master_seed, Purpose::theta, seed.replication);
    CounterStream wear_rng(seed.master_seed, Purpose::base_wear, seed.replication);
    CounterStream change_rng(seed.master_seed, Purpose::rate_change_wear, seed.replication);
    CounterStream arrival_rng(seed.master_seed, Purpose::arrivals, seed.replication);

    const DegradationParams& deg = params.degradation;
    const ShockParams& shock = params.shock;
    const double theta = deg.theta.sample(theta_rng);

    ReplicationOutcome out;
    DegradationState state;
    std::uint64_t n_shocks = 0;

    auto record = [&] {
        out.trace->push_back(
            {state.clock, state.pure_path, state.jump_sum, n_shocks, state.rate_changed});
    };
    auto finish = [&](FailureMode mode, std::uint64_t step) {
        out.status = mode;
        if (mode != FailureMode::survived)
        {
            out.failure_step = step;
            out.failure_time = state.clock;
        }
        out.rate_change_time = state.rate_change_time;
        out.n_shocks = n_shocks;
        out.final_total_degradation = total(state);
        if (record_trace)
            record();
        return out;
    };

    if (record_trace)
    {
        out.trace.emplace();
        out.trace->reserve(steps + 1);
        record();
    }

    for (std::uint64_t step = 1; step <= steps; ++step)
    {
        state = advance(state, dt, deg, theta, wear_rng, change_rng);
        // Grid clock, free of accumulated rounding.
        state.clock = static_cast<double>(step) * dt;
        if (total(state) >= deg.soft_threshold)
        {
            return finish(FailureMode::soft, step);
        }

        const double rate = intensity(n_shocks, total(state), shock);
        const std::uint64_t arrivals = arrivals_in_step(rate, dt, arrival_rng);
        for (std::uint64_t slot = 0; slot < arrivals; ++slot)
        {
            KeyedStream shock_rng(seed.master_seed, Purpose::shock, seed.replication,
                                  static_cast<std::uint32_t>(step),
                                  static_cast<std::uint32_t>(slot));
            const auto [w, y] = standard_normal_pair(shock_rng);
            const ShockEvent event = make_shock(
                state.clock, shock.magnitude_law.mean() + shock.magnitude_law.stdev() * w,
                shock);
            ++n_shocks;
            if (event.kind == ShockKind::fatal)
            {
                return finish(FailureMode::hard, step);
            }
            if (event.kind == ShockKind::damaging && params.rate_change_enabled)
            {
                state = trigger_rate_change(state, state.clock);
            }
            state = apply_jump(state, deg.jump_law.mean() + deg.jump_law.stdev() * y);
        }
        if (arrivals > 0 && total(state) >= deg.soft_threshold)
        {
            return finish(FailureMode::soft, step);
        }
        if (record_trace)
            record();
    }
    out.rate_change_time = state.rate_change_time;
    out.n_shocks = n_shocks;
    out.final_total_degradation = total(state);
    return out;
}

std::vector<ReplicationOutcome> simulate_paths(const ModelParams& params, double horizon,
                                               double dt, std::uint64_t master_seed,
                                               std::uint32_t k)
{
    if (k == 0)
    {
        throw DomainError("simulate_paths requires k >= 1");
    }
    std::vector<ReplicationOutcome> outcomes;
    outcomes.reserve(k);
    for (std::uint32_t rep = 0; rep < k; ++rep)
    {
        outcomes.push_back(simulate_replication(params, horizon, dt, {master_seed, rep}, true));
    }
    return outcomes;
}

}  // namespace mdcf
