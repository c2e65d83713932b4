#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdcf/cli/config.hpp"
#include "mdcf/reliability.hpp"
#include "mdcf/simulator.hpp"

namespace mdcf::cli {

/// Process exit statuses.
enum ExitCode : int
{
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitNumericGuard = 3,
    kExitValidationFailed = 4,
};

/// Locale-independent shortest form with 17 significant digits.
std::string format_double(double v);

// CSV writers. LF line endings, '.' decimal separator.

void write_curve_csv(std::ostream& os, const ReliabilityCurve& curve);
void write_sweep_csv(std::ostream& os, const SweepResult& result);
/// One row per `stride` steps plus the final row of every replication.
void write_paths_csv(std::ostream& os, const std::vector<ReplicationOutcome>& outcomes,
                     std::uint64_t stride = 1);

struct ValidationRow
{
    double lambda0 = 0.0;
    double eta = 0.0;
    double t = 0.0;
    double monte_carlo = 0.0;
    double analytic = 0.0;
    double allowed = 0.0;

    double deviation() const;
    bool pass() const { return deviation() <= allowed; }
};

struct ValidationOptions
{
    /// Fixed absolute tolerance; when absent, allowed = max(3 half-widths, floor).
    std::optional<double> tolerance;
    double floor = 0.01;
    double half_widths = 3.0;
    /// Evaluation times; empty means the run grid.
    std::vector<double> times;
    /// Sweep lambda0 x eta over {0.1, 0.5, 1} x {0.05, 0.2, 1}.
    bool suite = false;
};

struct ValidationReport
{
    std::vector<ValidationRow> rows;

    bool pass() const;
    double max_deviation() const;
};

/*!
 * Monte Carlo versus semi-analytic reliability in the decoupled model.
 * The rate change is switched off internally; gamma != 0 or a random theta
 * is refused with UnsupportedConfiguration.
 */
ValidationReport run_validation(const RunConfig& config, const ValidationOptions& options);

void write_validation_report(std::ostream& os, const ValidationReport& report);

/// Full command-line entry point; returns the process exit status.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mdcf::cli
