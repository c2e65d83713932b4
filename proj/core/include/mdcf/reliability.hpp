#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdcf/model.hpp"

namespace mdcf {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval
{
    double low = 0.0;
    double high = 1.0;

    double half_width() const noexcept { return 0.5 * (high - low); }
};

/// Score interval for a binomial proportion successes/trials.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = kZ95);

/// Empirical survival function of one replication set, evaluated on a grid.
struct ReliabilityCurve
{
    std::vector<double> grid;
    std::vector<double> estimate;
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    std::uint64_t n_reps = 0;
    /// Replications failed by grid[i], split by mode.
    std::vector<std::uint64_t> soft_count;
    std::vector<std::uint64_t> hard_count;

    std::uint64_t survived_count(std::size_t i) const noexcept
    {
        return n_reps - soft_count[i] - hard_count[i];
    }
    double half_width(std::size_t i) const noexcept { return 0.5 * (ci_high[i] - ci_low[i]); }
    /// Binomial standard error sqrt(R(1-R)/n) at grid[i].
    double standard_error(std::size_t i) const noexcept;
};

/// `points` evenly spaced values from start to stop inclusive.
std::vector<double> make_grid(double start, double stop, std::size_t points);

/*!
 * Monte Carlo estimate of R(t) = P(failure time > t) on `grid`.
 *
 * One replication set serves every grid point, so the curve is an exact
 * empirical survival function (nonincreasing). Replication r uses the
 * streams of (master_seed, r); workers split the replication range and only
 * integer counts are merged, so the result does not depend on `threads`.
 */
ReliabilityCurve estimate_reliability(const ModelParams& params, std::span<const double> grid,
                                      std::uint64_t n_reps, std::uint64_t master_seed,
                                      unsigned threads = 1);

/// Series decomposition of the decoupled reliability.
struct AnalyticReliability
{
    double no_shock = 0.0;  ///< m = 0 term: G(H; alpha1 t, beta) P(N(t) = 0)
    double shocked = 0.0;   ///< sum over m >= 1
    std::uint64_t terms = 0;

    double total() const noexcept { return no_shock + shocked; }
};

/*!
 * Semi-analytic reliability for the decoupled case: gamma_dep = 0, fixed
 * theta and no effective rate change. Then N(t) follows the facilitation
 * law with Lambda = lambda0 t independently of wear, and
 *
 *   R(t) = sum_m F_W(D1)^m P(N(t) = m) int_0^H G(H - y; alpha1 t, beta) f_Y^{*m}(y) dy.
 *
 * The series stops at m_max when given, otherwise once the count tail is
 * below numerics.pmf_tail_tol and the current term is negligible (or the
 * damage integral has vanished). Coupled configurations throw
 * UnsupportedConfiguration naming the violated condition.
 */
AnalyticReliability analytic_reliability_terms(const ModelParams& params, double t,
                                               std::optional<std::uint64_t> m_max = {});

double analytic_reliability(const ModelParams& params, double t,
                            std::optional<std::uint64_t> m_max = {});

/// G(H; alpha1 t, beta) P(N(t) = 0) in the decoupled case.
double analytic_no_shock_term(const ModelParams& params, double t);

/// Throws UnsupportedConfiguration unless the analytic evaluator applies.
void require_decoupled(const ModelParams& params);

// Sensitivity sweeps

enum class SweepParameter
{
    damage_threshold,  ///< D0
    gamma_dep,         ///< gamma
    eta,
    lambda0,
    alpha2,
    soft_threshold,    ///< H
    hard_threshold,    ///< D1
};

std::string_view to_string(SweepParameter p) noexcept;

/// Accepts the config key names: D0, gamma, eta, lambda0, alpha2, H, D1.
SweepParameter parse_sweep_parameter(std::string_view name);

std::string sweep_parameter_names();

/// Copy of `base` with one parameter replaced; the result is re-checked.
ModelParams with_parameter(const ModelParams& base, SweepParameter p, double value);

struct SweepResult
{
    SweepParameter parameter;
    std::vector<double> values;
    std::vector<ReliabilityCurve> curves;
};

/// One curve per value, all with the same master seed (common random numbers).
SweepResult sweep(const ModelParams& base, SweepParameter parameter,
                  std::span<const double> values, std::span<const double> grid,
                  std::uint64_t n_reps, std::uint64_t master_seed, unsigned threads = 1);

}  // namespace mdcf
