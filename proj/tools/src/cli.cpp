#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "mdcf/cli/commands.hpp"
#include "mdcf/errors.hpp"

namespace mdcf::cli {

namespace {

struct CommonFlags
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> reps;
    std::optional<double> dt;
    std::optional<unsigned> threads;
    std::optional<std::string> out;
    bool print_config = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags)
{
    cmd->add_option("--config", flags.config_path, "JSON model/run configuration")->required();
    cmd->add_option("--seed", flags.seed, "master seed (overrides run.master_seed)");
    cmd->add_option("--reps", flags.reps, "replications (overrides run.n_reps)");
    cmd->add_option("--dt", flags.dt, "time step (overrides numerics.dt)");
    cmd->add_option("--threads", flags.threads, "worker threads; never changes results");
    cmd->add_option("--out", flags.out, "output path, '-' for stdout");
    cmd->add_flag("--print-config", flags.print_config,
                  "echo the effective configuration as JSON and exit");
}

RunConfig effective_config(const CommonFlags& flags)
{
    RunConfig config = load_config(flags.config_path);
    if (flags.seed)
        config.run.master_seed = *flags.seed;
    if (flags.reps)
        config.run.n_reps = *flags.reps;
    if (flags.dt)
        config.model.numerics.dt = *flags.dt;
    if (flags.threads)
        config.run.threads = *flags.threads;
    if (flags.out)
        config.output.path = *flags.out;
    check(config);
    return config;
}

std::vector<double> parse_values(const std::string& list)
{
    std::vector<double> values;
    std::stringstream ss(list);
    ss.imbue(std::locale::classic());
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::istringstream is(item);
        is.imbue(std::locale::classic());
        double v = 0.0;
        if (!(is >> v) || !(is >> std::ws).eof())
        {
            throw ConfigError("values", "cannot parse '" + item + "' as a number");
        }
        values.push_back(v);
    }
    if (values.empty())
    {
        throw ConfigError("values", "expected a comma-separated list of numbers");
    }
    return values;
}

template<class Writer>
void emit(const RunConfig& config, std::ostream& out, Writer&& write)
{
    if (config.output.path == "-")
    {
        write(out);
        return;
    }
    std::ofstream file(config.output.path, std::ios::binary | std::ios::trunc);
    if (!file)
    {
        throw ConfigError("output.path", "cannot open '" + config.output.path + "' for writing");
    }
    file.imbue(std::locale::classic());
    write(file);
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Reliability of systems with coupled wear and shock failures"};
    app.require_subcommand(1);

    CommonFlags curve_flags;
    CLI::App* curve = app.add_subcommand("curve", "Monte Carlo reliability curve (CSV)");
    add_common(curve, curve_flags);

    CommonFlags sweep_flags;
    std::string sweep_param;
    std::string sweep_values;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sensitivity sweep with paired seeds (CSV)");
    add_common(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("parameter", sweep_param, "one of: " + sweep_parameter_names())
        ->required();
    sweep_cmd->add_option("values", sweep_values, "comma-separated values")->required();

    CommonFlags validate_flags;
    ValidationOptions validate_opts;
    std::optional<double> tolerance;
    std::string validate_times;
    CLI::App* validate = app.add_subcommand(
        "validate", "Decoupled-case Monte Carlo vs semi-analytic check");
    add_common(validate, validate_flags);
    validate->add_option("--tolerance", tolerance,
                         "fixed absolute tolerance (default: max(3 half-widths, 0.01))");
    validate->add_option("--times", validate_times, "comma-separated times (default: run grid)");
    validate->add_flag("--suite", validate_opts.suite,
                       "check lambda0 x eta over {0.1,0.5,1} x {0.05,0.2,1}");

    CommonFlags paths_flags;
    std::uint32_t k = 1;
    std::uint64_t stride = 1;
    CLI::App* paths = app.add_subcommand("paths", "Export simulated trajectories (CSV)");
    add_common(paths, paths_flags);
    paths->add_option("-k,--count", k, "number of trajectories")->check(CLI::PositiveNumber);
    paths->add_option("--stride", stride, "emit every n-th step")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto print_warnings = [&](const RunConfig& config) {
        for (const auto& w : mdcf::check(config.model))
            err << "warning: " << w << '\n';
    };

    try
    {
        CommonFlags& flags = curve->parsed()      ? curve_flags
                             : sweep_cmd->parsed() ? sweep_flags
                             : validate->parsed()  ? validate_flags
                                                   : paths_flags;
        const RunConfig config = effective_config(flags);
        if (flags.print_config)
        {
            out << to_json(config).dump(2) << '\n';
            return kExitOk;
        }
        print_warnings(config);

        if (curve->parsed())
        {
            const auto grid = config.grid();
            const auto result = estimate_reliability(config.model, grid, config.run.n_reps,
                                                     config.run.master_seed, config.run.threads);
            emit(config, out, [&](std::ostream& os) { write_curve_csv(os, result); });
        }
        else if (sweep_cmd->parsed())
        {
            const SweepParameter param = parse_sweep_parameter(sweep_param);
            const auto values = parse_values(sweep_values);
            const auto grid = config.grid();
            const auto result = sweep(config.model, param, values, grid, config.run.n_reps,
                                      config.run.master_seed, config.run.threads);
            emit(config, out, [&](std::ostream& os) { write_sweep_csv(os, result); });
        }
        else if (validate->parsed())
        {
            validate_opts.tolerance = tolerance;
            if (!validate_times.empty())
                validate_opts.times = parse_values(validate_times);
            const auto report = run_validation(config, validate_opts);
            emit(config, out, [&](std::ostream& os) { write_validation_report(os, report); });
            if (!report.pass())
            {
                err << "validation FAILED: max deviation "
                    << format_double(report.max_deviation()) << '\n';
                return kExitValidationFailed;
            }
        }
        else
        {
            const auto outcomes =
                simulate_paths(config.model, config.model.numerics.horizon,
                               config.model.numerics.dt, config.run.master_seed, k);
            emit(config, out, [&](std::ostream& os) { write_paths_csv(os, outcomes, stride); });
        }
        return kExitOk;
    }
    catch (const ConfigError& e)
    {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const UnsupportedConfiguration& e)
    {
        err << "unsupported configuration: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const StepSizeError& e)
    {
        err << "numeric guard: " << e.what() << '\n';
        return kExitNumericGuard;
    }
    catch (const NumericError& e)
    {
        err << "numeric guard: " << e.what() << " (best estimate "
            << format_double(e.best_estimate()) << ")\n";
        return kExitNumericGuard;
    }
    catch (const DomainError& e)
    {
        err << "numeric guard: " << e.what() << '\n';
        return kExitNumericGuard;
    }
}

}  // namespace mdcf::cli
