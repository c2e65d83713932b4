#include "mdcf/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mdcf/errors.hpp"
#include "mdcf/reliability.hpp"

namespace mdcf::cli {

using nlohmann::json;

namespace {

std::string join_path(const std::string& parent, const std::string& key)
{
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed)
{
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : obj.items())
    {
        if (!keys.count(item.key()))
        {
            throw ConfigError(join_path(where, item.key()), "unknown key");
        }
    }
}

const json& require_object(const json& parent, const std::string& where, const char* key)
{
    const std::string path = join_path(where, key);
    if (!parent.contains(key))
    {
        throw ConfigError(path, "missing required object");
    }
    const json& v = parent.at(key);
    if (!v.is_object())
    {
        throw ConfigError(path, "must be an object");
    }
    return v;
}

double get_number(const json& obj, const std::string& where, const char* key)
{
    const std::string path = join_path(where, key);
    if (!obj.contains(key))
    {
        throw ConfigError(path, "missing required number");
    }
    const json& v = obj.at(key);
    if (!v.is_number())
    {
        throw ConfigError(path, "must be a number");
    }
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& where, const char* key,
                     double fallback)
{
    return obj.contains(key) ? get_number(obj, where, key) : fallback;
}

std::uint64_t get_count_or(const json& obj, const std::string& where, const char* key,
                           std::uint64_t fallback)
{
    if (!obj.contains(key))
    {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_unsigned())
    {
        throw ConfigError(join_path(where, key), "must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

NormalLaw get_normal(const json& parent, const std::string& where, const char* key,
                     bool allow_point_mass)
{
    const std::string path = join_path(where, key);
    const json& obj = require_object(parent, where, key);
    reject_unknown(obj, path, {"mean", "stdev"});
    const double mean = get_number(obj, path, "mean");
    const double stdev = get_number(obj, path, "stdev");
    try
    {
        if (allow_point_mass && stdev == 0.0)
        {
            return NormalLaw::degenerate(mean);
        }
        return NormalLaw(mean, stdev);
    }
    catch (const DomainError& e)
    {
        throw ConfigError(join_path(path, "stdev"),
                          allow_point_mass ? "must be >= 0 and finite" : e.what());
    }
}

ThetaLaw get_theta(const json& obj, const std::string& where)
{
    reject_unknown(obj, where, {"kind", "value", "shape"});
    if (!obj.contains("kind") || !obj.at("kind").is_string())
    {
        throw ConfigError(join_path(where, "kind"), "must be \"fixed\" or \"gamma\"");
    }
    const auto kind = obj.at("kind").get<std::string>();
    if (kind == "fixed")
    {
        return ThetaLaw::point(get_number_or(obj, where, "value", 1.0));
    }
    if (kind == "gamma")
    {
        return ThetaLaw::unit_mean_gamma(get_number(obj, where, "shape"));
    }
    throw ConfigError(join_path(where, "kind"), "must be \"fixed\" or \"gamma\", got \"" +
                                                    kind + "\"");
}

ModelParams parse_model(const json& m, const json* numerics)
{
    const std::string where = "model";
    reject_unknown(m, where,
                   {"H", "D1", "D0", "alpha1", "alpha2", "beta", "lambda0", "eta", "gamma",
                    "W", "Y", "theta", "rate_change_enabled"});
    ModelParams p;
    p.degradation.soft_threshold = get_number(m, where, "H");
    p.shock.hard_threshold = get_number(m, where, "D1");
    p.shock.damage_threshold = get_number(m, where, "D0");
    p.degradation.alpha1 = get_number(m, where, "alpha1");
    p.degradation.alpha2 = get_number(m, where, "alpha2");
    p.degradation.beta = get_number(m, where, "beta");
    p.shock.lambda0 = get_number(m, where, "lambda0");
    p.shock.eta = get_number(m, where, "eta");
    p.shock.gamma_dep = get_number(m, where, "gamma");
    p.shock.magnitude_law = get_normal(m, where, "W", false);
    p.degradation.jump_law = get_normal(m, where, "Y", true);
    if (m.contains("theta"))
    {
        p.degradation.theta = get_theta(require_object(m, where, "theta"), "model.theta");
    }
    if (m.contains("rate_change_enabled"))
    {
        const json& v = m.at("rate_change_enabled");
        if (!v.is_boolean())
        {
            throw ConfigError("model.rate_change_enabled", "must be true or false");
        }
        p.rate_change_enabled = v.get<bool>();
    }

    if (numerics)
    {
        const std::string nw = "numerics";
        reject_unknown(*numerics, nw, {"dt", "horizon", "quad_tol", "pmf_tail_tol"});
        p.numerics.dt = get_number_or(*numerics, nw, "dt", p.numerics.dt);
        p.numerics.horizon = get_number_or(*numerics, nw, "horizon", p.numerics.horizon);
        p.numerics.quad_tol = get_number_or(*numerics, nw, "quad_tol", p.numerics.quad_tol);
        p.numerics.pmf_tail_tol =
            get_number_or(*numerics, nw, "pmf_tail_tol", p.numerics.pmf_tail_tol);
    }
    return p;
}

// Model-level ConfigErrors name bare keys; qualify them with their section.
std::string qualify(const std::string& field)
{
    if (field.rfind("numerics.", 0) == 0 || field.rfind("model.", 0) == 0)
        return field;
    if (field == "grid" || field == "n_reps")
        return "run." + field;
    return "model." + field;
}

}  // namespace

std::vector<double> RunConfig::grid() const
{
    return make_grid(run.grid.start, run.grid.stop, run.grid.points);
}

RunConfig parse_config(const json& doc)
{
    if (!doc.is_object())
    {
        throw ConfigError("<root>", "config must be a JSON object");
    }
    reject_unknown(doc, "", {"model", "numerics", "run", "output"});

    RunConfig config;
    const json* numerics = nullptr;
    if (doc.contains("numerics"))
    {
        numerics = &require_object(doc, "", "numerics");
    }
    config.model = parse_model(require_object(doc, "", "model"), numerics);

    if (doc.contains("run"))
    {
        const json& run = require_object(doc, "", "run");
        reject_unknown(run, "run", {"n_reps", "master_seed", "grid", "threads"});
        config.run.n_reps = get_count_or(run, "run", "n_reps", config.run.n_reps);
        config.run.master_seed = get_count_or(run, "run", "master_seed", config.run.master_seed);
        config.run.threads =
            static_cast<unsigned>(get_count_or(run, "run", "threads", config.run.threads));
        if (run.contains("grid"))
        {
            const json& g = require_object(run, "run", "grid");
            reject_unknown(g, "run.grid", {"start", "stop", "points"});
            config.run.grid.start = get_number_or(g, "run.grid", "start", config.run.grid.start);
            config.run.grid.stop = get_number_or(g, "run.grid", "stop", config.run.grid.stop);
            config.run.grid.points =
                get_count_or(g, "run.grid", "points", config.run.grid.points);
        }
    }
    if (doc.contains("output"))
    {
        const json& out = require_object(doc, "", "output");
        reject_unknown(out, "output", {"path", "format"});
        if (out.contains("path"))
        {
            if (!out.at("path").is_string())
                throw ConfigError("output.path", "must be a string");
            config.output.path = out.at("path").get<std::string>();
        }
        if (out.contains("format"))
        {
            if (!out.at("format").is_string() || out.at("format").get<std::string>() != "csv")
                throw ConfigError("output.format", "only \"csv\" is supported");
            config.output.format = "csv";
        }
    }
    check(config);
    return config;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError(path.string(), "cannot open config file");
    }
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

std::vector<std::string> check(const RunConfig& config)
{
    std::vector<std::string> warnings;
    try
    {
        warnings = mdcf::check(config.model);
    }
    catch (const ConfigError& e)
    {
        const auto colon = std::string(e.what()).find(": ");
        throw ConfigError(qualify(e.field()), std::string(e.what()).substr(colon + 2));
    }
    const RunSettings& run = config.run;
    if (run.n_reps == 0)
    {
        throw ConfigError("run.n_reps", "must be at least 1");
    }
    if (run.grid.points == 0)
    {
        throw ConfigError("run.grid.points", "must be at least 1");
    }
    if (!(run.grid.start >= 0.0) || !(run.grid.stop >= run.grid.start))
    {
        throw ConfigError("run.grid", "requires 0 <= start <= stop");
    }
    if (run.grid.points > 1 && !(run.grid.stop > run.grid.start))
    {
        throw ConfigError("run.grid", "several points need stop > start");
    }
    if (run.grid.stop > config.model.numerics.horizon)
    {
        std::ostringstream msg;
        msg << "grid stop " << run.grid.stop << " exceeds numerics.horizon "
            << config.model.numerics.horizon;
        throw ConfigError("run.grid.stop", msg.str());
    }
    return warnings;
}

namespace {

json normal_json(const NormalLaw& law)
{
    return {{"mean", law.mean()}, {"stdev", law.stdev()}};
}

}  // namespace

json to_json(const RunConfig& config)
{
    const ModelParams& p = config.model;
    json theta;
    if (p.degradation.theta.kind == ThetaLaw::Kind::fixed)
        theta = {{"kind", "fixed"}, {"value", p.degradation.theta.value}};
    else
        theta = {{"kind", "gamma"}, {"shape", p.degradation.theta.shape}};

    return {
        {"model",
         {{"H", p.degradation.soft_threshold},
          {"D1", p.shock.hard_threshold},
          {"D0", p.shock.damage_threshold},
          {"alpha1", p.degradation.alpha1},
          {"alpha2", p.degradation.alpha2},
          {"beta", p.degradation.beta},
          {"lambda0", p.shock.lambda0},
          {"eta", p.shock.eta},
          {"gamma", p.shock.gamma_dep},
          {"W", normal_json(p.shock.magnitude_law)},
          {"Y", normal_json(p.degradation.jump_law)},
          {"theta", theta},
          {"rate_change_enabled", p.rate_change_enabled}}},
        {"numerics",
         {{"dt", p.numerics.dt},
          {"horizon", p.numerics.horizon},
          {"quad_tol", p.numerics.quad_tol},
          {"pmf_tail_tol", p.numerics.pmf_tail_tol}}},
        {"run",
         {{"n_reps", config.run.n_reps},
          {"master_seed", config.run.master_seed},
          {"grid",
           {{"start", config.run.grid.start},
            {"stop", config.run.grid.stop},
            {"points", config.run.grid.points}}},
          {"threads", config.run.threads}}},
        {"output", {{"path", config.output.path}, {"format", config.output.format}}},
    };
}

}  // namespace mdcf::cli
