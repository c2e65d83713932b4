#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "mdcf/model.hpp"

namespace mdcf::cli {

struct GridSpec
{
    double start = 0.0;
    double stop = 20.0;
    std::size_t points = 41;
};

struct RunSettings
{
    std::uint64_t n_reps = 100000;
    std::uint64_t master_seed = 20190101;
    GridSpec grid{};
    unsigned threads = 1;
};

struct OutputSettings
{
    std::string path = "-";  ///< "-" is stdout
    std::string format = "csv";
};

struct RunConfig
{
    ModelParams model{};
    RunSettings run{};
    OutputSettings output{};

    std::vector<double> grid() const;
};

/*!
 * Document layout (one key per model parameter):
 *
 *   { "model":    { "H", "D1", "D0", "alpha1", "alpha2", "beta", "lambda0",
 *                   "eta", "gamma", "W": {mean, stdev}, "Y": {mean, stdev},
 *                   ["theta": {kind: fixed|gamma, value|shape}],
 *                   ["rate_change_enabled"] },
 *     "numerics": { dt, horizon, quad_tol, pmf_tail_tol },      (optional)
 *     "run":      { n_reps, master_seed, grid: {start, stop, points}, threads },
 *     "output":   { path, format } }                            (optional)
 *
 * Unknown keys are rejected. Every failure is a ConfigError whose field()
 * is the JSON path of the offending value, e.g. "model.W.stdev".
 */
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

/// Cross-field checks (model invariants, grid within [0, horizon], n_reps >= 1).
/// Returns model warnings.
std::vector<std::string> check(const RunConfig& config);

}  // namespace mdcf::cli
