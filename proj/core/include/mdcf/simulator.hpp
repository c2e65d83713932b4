#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mdcf/model.hpp"

namespace mdcf {

enum class FailureMode
{
    survived,
    soft,
    hard,
};

std::string_view to_string(FailureMode mode) noexcept;

struct TracePoint
{
    double time = 0.0;
    double pure = 0.0;
    double jumps = 0.0;
    std::uint64_t n_shocks = 0;
    bool rate_changed = false;
};

struct ReplicationOutcome
{
    FailureMode status = FailureMode::survived;
    std::optional<double> failure_time;
    /// Step index at which the failure was detected (failure_time = step * dt).
    std::optional<std::uint64_t> failure_step;
    std::optional<double> rate_change_time;
    std::uint64_t n_shocks = 0;
    double final_total_degradation = 0.0;
    std::optional<std::vector<TracePoint>> trace;
};

/// Identifies the random streams of one replication.
struct ReplicationSeed
{
    std::uint64_t master_seed = 0;
    std::uint32_t replication = 0;
};

/// Number of dt steps needed to reach `horizon`.
std::uint64_t step_count(double horizon, double dt);

/*!
 * One replication of the coupled wear/shock system on the step grid.
 *
 * Per step: gamma wear, soft check (X_s >= H), intensity from the current
 * (n, X_s), Poisson arrivals; each arrival is classified in turn (fatal
 * stops the run, damaging switches the rate) and adds its jump; then a
 * second soft check. Failure times are end-of-step clocks.
 *
 * Every random consumer has its own Philox subspace keyed by
 * (master seed, replication); shock magnitudes and jumps are addressed by
 * (step, arrival slot). Two parameter sets that only differ in thresholds,
 * gamma_dep or alpha2 therefore see identical randomness wherever their
 * histories agree.
 */
ReplicationOutcome simulate_replication(const ModelParams& params, double horizon, double dt,
                                        ReplicationSeed seed, bool record_trace = false);

/// k traced replications, replication indices 0..k-1.
std::vector<ReplicationOutcome> simulate_paths(const ModelParams& params, double horizon,
                                               double dt, std::uint64_t master_seed,
                                               std::uint32_t k);

}  // namespace mdcf
