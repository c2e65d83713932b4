#include "mdcf/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "mdcf/errors.hpp"

namespace mdcf::cli {

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& os, const ReliabilityCurve& curve)
{
    os << "t,R_hat,ci_low,ci_high,n_reps,n_soft,n_hard,n_survived\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
    {
        os << format_double(curve.grid[i]) << ',' << format_double(curve.estimate[i]) << ','
           << format_double(curve.ci_low[i]) << ',' << format_double(curve.ci_high[i]) << ','
           << curve.n_reps << ',' << curve.soft_count[i] << ',' << curve.hard_count[i] << ','
           << curve.survived_count(i) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& result)
{
    os << "param_value,t,R_hat,ci_low,ci_high\n";
    for (std::size_t v = 0; v < result.values.size(); ++v)
    {
        const ReliabilityCurve& curve = result.curves[v];
        const std::string value = format_double(result.values[v]);
        for (std::size_t i = 0; i < curve.grid.size(); ++i)
        {
            os << value << ',' << format_double(curve.grid[i]) << ','
               << format_double(curve.estimate[i]) << ',' << format_double(curve.ci_low[i])
               << ',' << format_double(curve.ci_high[i]) << '\n';
        }
    }
}

void write_paths_csv(std::ostream& os, const std::vector<ReplicationOutcome>& outcomes,
                     std::uint64_t stride)
{
    if (stride == 0)
    {
        throw ConfigError("stride", "must be at least 1");
    }
    os << "rep,t,pure,jumps,total,n_shocks,rate_changed\n";
    for (std::size_t rep = 0; rep < outcomes.size(); ++rep)
    {
        const auto& trace = outcomes[rep].trace;
        if (!trace)
            continue;
        for (std::size_t i = 0; i < trace->size(); ++i)
        {
            if (i % stride != 0 && i + 1 != trace->size())
                continue;
            const TracePoint& p = (*trace)[i];
            os << rep << ',' << format_double(p.time) << ',' << format_double(p.pure) << ','
               << format_double(p.jumps) << ',' << format_double(p.pure + p.jumps) << ','
               << p.n_shocks << ',' << (p.rate_changed ? 1 : 0) << '\n';
        }
    }
}

double ValidationRow::deviation() const
{
    return std::abs(monte_carlo - analytic);
}

bool ValidationReport::pass() const
{
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass(); });
}

double ValidationReport::max_deviation() const
{
    double worst = 0.0;
    for (const auto& r : rows)
        worst = std::max(worst, r.deviation());
    return worst;
}

namespace {

void validate_one(const ModelParams& params, const RunConfig& config,
                  const std::vector<double>& times, const ValidationOptions& options,
                  ValidationReport& report)
{
    const ReliabilityCurve curve = estimate_reliability(
        params, times, config.run.n_reps, config.run.master_seed, config.run.threads);
    for (std::size_t i = 0; i < times.size(); ++i)
    {
        ValidationRow row;
        row.lambda0 = params.shock.lambda0;
        row.eta = params.shock.eta;
        row.t = times[i];
        row.monte_carlo = curve.estimate[i];
        row.analytic = analytic_reliability(params, times[i]);
        row.allowed = options.tolerance
                          ? *options.tolerance
                          : std::max(options.half_widths * curve.half_width(i), options.floor);
        report.rows.push_back(row);
    }
}

}  // namespace

ValidationReport run_validation(const RunConfig& config, const ValidationOptions& options)
{
    ModelParams params = config.model;
    params.rate_change_enabled = false;
    require_decoupled(params);

    std::vector<double> times = options.times.empty() ? config.grid() : options.times;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    ValidationReport report;
    if (!options.suite)
    {
        validate_one(params, config, times, options, report);
        return report;
    }
    for (const double lambda0 : {0.1, 0.5, 1.0})
    {
        for (const double eta : {0.05, 0.2, 1.0})
        {
            ModelParams p = params;
            p.shock.lambda0 = lambda0;
            p.shock.eta = eta;
            validate_one(p, config, times, options, report);
        }
    }
    return report;
}

void write_validation_report(std::ostream& os, const ValidationReport& report)
{
    os << "lambda0,eta,t,R_mc,R_analytic,deviation,allowed,status\n";
    for (const auto& r : report.rows)
    {
        os << format_double(r.lambda0) << ',' << format_double(r.eta) << ','
           << format_double(r.t) << ',' << format_double(r.monte_carlo) << ','
           << format_double(r.analytic) << ',' << format_double(r.deviation()) << ','
           << format_double(r.allowed) << ',' << (r.pass() ? "PASS" : "FAIL") << '\n';
    }
    os << "# max_deviation=" << format_double(report.max_deviation())
       << " result=" << (report.pass() ? "PASS" : "FAIL") << '\n';
}

}  // namespace mdcf::cli
