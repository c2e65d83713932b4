#include "mdcf/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "mdcf/simulator.hpp"

namespace mdcf {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0)
    {
        throw DomainError("wilson_interval requires at least one trial");
    }
    if (successes > trials)
    {
        throw DomainError("wilson_interval: successes exceed trials");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, std::min(center - spread, p)), std::min(1.0, std::max(center + spread, p))};
}

double ReliabilityCurve::standard_error(std::size_t i) const noexcept
{
    const double r = estimate[i];
    return std::sqrt(r * (1.0 - r) / static_cast<double>(n_reps));
}

std::vector<double> make_grid(double start, double stop, std::size_t points)
{
    if (points == 0)
    {
        throw DomainError("grid needs at least one point");
    }
    if (!(stop >= start))
    {
        throw DomainError("grid stop must not precede start");
    }
    if (points == 1)
    {
        return {start};
    }
    std::vector<double> grid(points);
    const double step = (stop - start) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
    {
        grid[i] = start + step * static_cast<double>(i);
    }
    grid.back() = stop;
    return grid;
}

namespace {

void check_grid(std::span<const double> grid, double horizon)
{
    if (grid.empty())
    {
        throw ConfigError("grid", "must contain at least one time");
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0)
        {
            throw ConfigError("grid", "times must be finite and nonnegative");
        }
        if (i > 0 && !(grid[i] > grid[i - 1]))
        {
            throw ConfigError("grid", "times must be strictly ascending");
        }
    }
    if (grid.back() > horizon * (1.0 + 1e-12))
    {
        std::ostringstream msg;
        msg << "last grid time " << grid.back() << " exceeds horizon " << horizon;
        throw ConfigError("grid", msg.str());
    }
}

// Failure step per replication; kSurvived when the run reached the horizon.
constexpr std::uint64_t kSurvived = std::numeric_limits<std::uint64_t>::max();

struct Tally
{
    std::vector<std::uint64_t> failure_step;
    std::vector<FailureMode> mode;
};

void run_block(const ModelParams& params, double horizon, std::uint64_t master_seed,
               std::uint64_t begin, std::uint64_t end, Tally& tally)
{
    for (std::uint64_t r = begin; r < end; ++r)
    {
        const auto out = simulate_replication(params, horizon, params.numerics.dt,
                                              {master_seed, static_cast<std::uint32_t>(r)});
        tally.mode[r] = out.status;
        tally.failure_step[r] = out.failure_step.value_or(kSurvived);
    }
}

}  // namespace

ReliabilityCurve estimate_reliability(const ModelParams& params, std::span<const double> grid,
                                      std::uint64_t n_reps, std::uint64_t master_seed,
                                      unsigned threads)
{
    check(params);
    check_grid(grid, params.numerics.horizon);
    if (n_reps == 0)
    {
        throw ConfigError("n_reps", "must be at least 1");
    }
    if (n_reps > std::uint64_t{UINT32_MAX} + 1)
    {
        throw ConfigError("n_reps", "must not exceed 2^32");
    }

    const double dt = params.numerics.dt;
    const double horizon = grid.back();
    Tally tally{std::vector<std::uint64_t>(n_reps), std::vector<FailureMode>(n_reps)};

    const std::uint64_t workers =
        std::clamp<std::uint64_t>(threads == 0 ? 1 : threads, 1, n_reps);
    if (workers == 1)
    {
        run_block(params, horizon, master_seed, 0, n_reps, tally);
    }
    else
    {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w)
        {
            const std::uint64_t begin = n_reps * w / workers;
            const std::uint64_t end = n_reps * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                try
                {
                    run_block(params, horizon, master_seed, begin, end, tally);
                }
                catch (...)
                {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool)
            t.join();
        // Lowest block first, so the reported error is scheduling-independent.
        for (const auto& e : errors)
        {
            if (e)
                std::rethrow_exception(e);
        }
    }

    const std::uint64_t steps = step_count(horizon, dt);
    std::vector<std::uint64_t> soft_by_step(steps + 1, 0);
    std::vector<std::uint64_t> hard_by_step(steps + 1, 0);
    for (std::uint64_t r = 0; r < n_reps; ++r)
    {
        if (tally.mode[r] == FailureMode::soft)
            ++soft_by_step[tally.failure_step[r]];
        else if (tally.mode[r] == FailureMode::hard)
            ++hard_by_step[tally.failure_step[r]];
    }

    ReliabilityCurve curve;
    curve.grid.assign(grid.begin(), grid.end());
    curve.n_reps = n_reps;
    std::uint64_t soft = 0;
    std::uint64_t hard = 0;
    std::uint64_t cursor = 0;
    for (const double t : grid)
    {
        // The state at t is the one after the last completed step k <= t/dt.
        const auto k = std::min<std::uint64_t>(
            steps, static_cast<std::uint64_t>(std::floor(t / dt + 1e-9)));
        for (; cursor <= k; ++cursor)
        {
            soft += soft_by_step[cursor];
            hard += hard_by_step[cursor];
        }
        const std::uint64_t alive = n_reps - soft - hard;
        const WilsonInterval ci = wilson_interval(alive, n_reps);
        curve.estimate.push_back(static_cast<double>(alive) / static_cast<double>(n_reps));
        curve.ci_low.push_back(ci.low);
        curve.ci_high.push_back(ci.high);
        curve.soft_count.push_back(soft);
        curve.hard_count.push_back(hard);
    }
    return curve;
}

void require_decoupled(const ModelParams& params)
{
    if (params.shock.gamma_dep != 0.0)
    {
        std::ostringstream msg;
        msg << "analytic reliability requires gamma = 0 (shock intensity independent of "
               "degradation); got gamma = "
            << params.shock.gamma_dep;
        throw UnsupportedConfiguration(msg.str());
    }
    if (rate_change_effective(params))
    {
        throw UnsupportedConfiguration(
            "analytic reliability requires the rate change to be disabled "
            "(D0 >= D1, alpha2 = alpha1 or rate_change_enabled = false)");
    }
    if (!params.degradation.theta.is_degenerate())
    {
        throw UnsupportedConfiguration(
            "analytic reliability requires a fixed theta (no random degradation effect)");
    }
}

namespace {

// P(X(t) + S_m < H) for S_m the m-fold damage sum.
double damage_survival(std::uint64_t m, double gamma_shape, const ModelParams& params)
{
    const DegradationParams& deg = params.degradation;
    const double h = deg.soft_threshold;
    const GammaLaw wear(gamma_shape, deg.beta);
    const auto sum_law = iid_sum_normal(m, deg.jump_law);
    if (!sum_law)
    {
        return gamma_cdf(h, wear);
    }
    if (sum_law->is_degenerate())
    {
        const double y = std::max(0.0, sum_law->mean());
        return y < h ? gamma_cdf(h - y, wear) : 0.0;
    }
    const double lo = std::max(0.0, sum_law->mean() - 10.0 * sum_law->stdev());
    const double hi = std::min(h, sum_law->mean() + 10.0 * sum_law->stdev());
    if (!(lo < hi))
    {
        return 0.0;
    }
    const NormalLaw law = *sum_law;
    return integrate(
        [&](double y) { return gamma_cdf(std::max(0.0, h - y), wear) * normal_pdf(y, law); },
        lo, hi, params.numerics.quad_tol);
}

}  // namespace

AnalyticReliability analytic_reliability_terms(const ModelParams& params, double t,
                                               std::optional<std::uint64_t> m_max)
{
    check(params);
    require_decoupled(params);
    if (!(t >= 0.0) || !std::isfinite(t))
    {
        throw DomainError("analytic reliability requires finite t >= 0");
    }
    if (t == 0.0)
    {
        // G(H; 0, beta) = 1 and P(N(0) = 0) = 1.
        return {1.0, 0.0, 1};
    }

    const DegradationParams& deg = params.degradation;
    const ShockParams& shock = params.shock;
    const double shape = deg.theta.value * deg.alpha1 * t;
    const double big_lambda = shock.lambda0 * t;
    const double survive_shock = normal_cdf(shock.hard_threshold, shock.magnitude_law);
    const double tail_tol = params.numerics.pmf_tail_tol;
    constexpr std::uint64_t kMaxTerms = 10'000'000;

    AnalyticReliability result;
    double cumulative = 0.0;
    double survive_m = 1.0;  // F_W(D1)^m
    bool damage_gone = false;
    for (std::uint64_t m = 0;; ++m)
    {
        const double pmf = facilitation_pmf(m, shock.eta, big_lambda);
        cumulative += pmf;
        double term = 0.0;
        if (!damage_gone)
        {
            const double survive = damage_survival(m, shape, params);
            term = survive_m * pmf * survive;
            // Past the threshold the damage integral only shrinks with m.
            if (m > 0 && survive_m * survive < 1e-16 &&
                static_cast<double>(m) * deg.jump_law.mean() > deg.soft_threshold)
            {
                damage_gone = true;
            }
        }
        if (m == 0)
            result.no_shock = term;
        else
            result.shocked += term;
        result.terms = m + 1;
        survive_m *= survive_shock;

        if (m_max)
        {
            if (m >= *m_max)
                break;
            continue;
        }
        if (damage_gone || (1.0 - cumulative < tail_tol && pmf < 1e-14))
        {
            break;
        }
        if (m >= kMaxTerms)
        {
            throw NumericError("shock-count series did not reach its tail tolerance",
                               result.total());
        }
    }
    return result;
}

double analytic_reliability(const ModelParams& params, double t,
                            std::optional<std::uint64_t> m_max)
{
    return analytic_reliability_terms(params, t, m_max).total();
}

double analytic_no_shock_term(const ModelParams& params, double t)
{
    check(params);
    require_decoupled(params);
    if (!(t >= 0.0) || !std::isfinite(t))
    {
        throw DomainError("analytic reliability requires finite t >= 0");
    }
    if (t == 0.0)
    {
        return 1.0;
    }
    const DegradationParams& deg = params.degradation;
    const GammaLaw wear(deg.theta.value * deg.alpha1 * t, deg.beta);
    return gamma_cdf(deg.soft_threshold, wear) *
           facilitation_pmf(0, params.shock.eta, params.shock.lambda0 * t);
}

std::string_view to_string(SweepParameter p) noexcept
{
    switch (p)
    {
        case SweepParameter::damage_threshold:
            return "D0";
        case SweepParameter::gamma_dep:
            return "gamma";
        case SweepParameter::eta:
            return "eta";
        case SweepParameter::lambda0:
            return "lambda0";
        case SweepParameter::alpha2:
            return "alpha2";
        case SweepParameter::soft_threshold:
            return "H";
        case SweepParameter::hard_threshold:
            return "D1";
    }
    return "unknown";
}

namespace {

constexpr SweepParameter kSweepParameters[] = {
    SweepParameter::damage_threshold, SweepParameter::gamma_dep,    SweepParameter::eta,
    SweepParameter::lambda0,          SweepParameter::alpha2,       SweepParameter::soft_threshold,
    SweepParameter::hard_threshold};

}  // namespace

std::string sweep_parameter_names()
{
    std::string names;
    for (const auto p : kSweepParameters)
    {
        if (!names.empty())
            names += ", ";
        names += to_string(p);
    }
    return names;
}

SweepParameter parse_sweep_parameter(std::string_view name)
{
    for (const auto p : kSweepParameters)
    {
        if (to_string(p) == name)
            return p;
    }
    throw ConfigError("parameter", "unknown sweep parameter '" + std::string(name) +
                                       "'; accepted: " + sweep_parameter_names());
}

ModelParams with_parameter(const ModelParams& base, SweepParameter p, double value)
{
    ModelParams params = base;
    switch (p)
    {
        case SweepParameter::damage_threshold:
            params.shock.damage_threshold = value;
            break;
        case SweepParameter::gamma_dep:
            params.shock.gamma_dep = value;
            break;
        case SweepParameter::eta:
            params.shock.eta = value;
            break;
        case SweepParameter::lambda0:
            params.shock.lambda0 = value;
            break;
        case SweepParameter::alpha2:
            params.degradation.alpha2 = value;
            break;
        case SweepParameter::soft_threshold:
            params.degradation.soft_threshold = value;
            break;
        case SweepParameter::hard_threshold:
            params.shock.hard_threshold = value;
            break;
    }
    check(params);
    return params;
}

SweepResult sweep(const ModelParams& base, SweepParameter parameter,
                  std::span<const double> values, std::span<const double> grid,
                  std::uint64_t n_reps, std::uint64_t master_seed, unsigned threads)
{
    if (values.empty())
    {
        throw ConfigError("values", "sweep needs at least one value");
    }
    SweepResult result{parameter, {values.begin(), values.end()}, {}};
    // Validate every value before spending time on simulation.
    std::vector<ModelParams> configs;
    for (const double v : values)
    {
        configs.push_back(with_parameter(base, parameter, v));
    }
    for (const auto& params : configs)
    {
        result.curves.push_back(estimate_reliability(params, grid, n_reps, master_seed, threads));
    }
    return result;
}

}  // namespace mdcf
