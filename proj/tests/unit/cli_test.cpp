#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "mdcf/cli/commands.hpp"
#include "mdcf/cli/config.hpp"

using namespace mdcf;
using namespace mdcf::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kConfigs = MDCF_CONFIG_DIR;

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::initializer_list<std::string> args)
{
    std::vector<std::string> storage{"mdcf"};
    storage.insert(storage.end(), args);
    std::vector<char*> argv;
    for (auto& s : storage)
        argv.push_back(s.data());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

json servo_doc()
{
    std::ifstream in(kConfigs / "servo_valve.json");
    return json::parse(in);
}

fs::path write_temp(const std::string& name, const json& doc)
{
    const auto dir = fs::temp_directory_path() / "mdcf_cli_test";
    fs::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << doc.dump(2);
    return path;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

std::string field_of(const json& doc)
{
    try
    {
        parse_config(doc);
    }
    catch (const ConfigError& e)
    {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("servo valve config parses to the reference parameters")
{
    const auto cfg = load_config(kConfigs / "servo_valve.json");
    const auto& m = cfg.model;
    CHECK(m.degradation.soft_threshold == 5.0);
    CHECK(m.shock.hard_threshold == 40.0);
    CHECK(m.shock.damage_threshold == 30.0);
    CHECK(m.degradation.alpha1 == 0.5);
    CHECK(m.degradation.alpha2 == 0.9);
    CHECK(m.degradation.beta == 1.2);
    CHECK(m.shock.lambda0 == 2.5e-5);
    CHECK(m.shock.eta == 0.2);
    CHECK(m.shock.gamma_dep == 0.001);
    CHECK(m.shock.magnitude_law.mean() == 10.0);
    CHECK(m.shock.magnitude_law.stdev() == 5.0);
    CHECK(m.degradation.jump_law.mean() == 0.5);
    CHECK(m.degradation.jump_law.stdev() == 0.1);
    CHECK(cfg.grid().size() == 41);
    CHECK(check(cfg).empty());
}

TEST_CASE("config round trip")
{
    const auto cfg = parse_config(servo_doc());
    const auto again = parse_config(to_json(cfg));
    CHECK(to_json(again) == to_json(cfg));

    const auto printed = run({"curve", "--config", (kConfigs / "servo_valve.json").string(),
                              "--print-config", "--seed", "5"});
    CHECK(printed.code == kExitOk);
    const auto echoed = parse_config(json::parse(printed.out));
    CHECK(echoed.run.master_seed == 5);
    CHECK(echoed.model.shock.lambda0 == 2.5e-5);
}

TEST_CASE("config errors name the offending field")
{
    auto doc = servo_doc();
    doc["model"]["D0"] = 45.0;
    CHECK(field_of(doc) == "model.D0");

    doc = servo_doc();
    doc["model"]["W"]["stdev"] = -1.0;
    CHECK(field_of(doc) == "model.W.stdev");

    doc = servo_doc();
    doc["model"]["lamda0"] = 1.0;
    CHECK(field_of(doc) == "model.lamda0");

    doc = servo_doc();
    doc["model"].erase("beta");
    CHECK(field_of(doc) == "model.beta");

    doc = servo_doc();
    doc["model"]["eta"] = "0.2";
    CHECK(field_of(doc) == "model.eta");

    doc = servo_doc();
    doc["model"]["Y"]["stdev"] = 0.0;
    CHECK(field_of(doc).empty());

    doc = servo_doc();
    doc["run"]["grid"]["stop"] = 30.0;
    const auto path = write_temp("beyond.json", doc);
    const auto r = run({"curve", "--config", path.string()});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("grid") != std::string::npos);
}

TEST_CASE("curve output")
{
    auto doc = servo_doc();
    doc["model"]["lambda0"] = 0.3;
    doc["model"]["gamma"] = 0.05;
    doc["run"]["grid"] = {{"start", 0.0}, {"stop", 10.0}, {"points", 11}};
    const auto path = write_temp("curve.json", doc).string();

    const auto a = run({"curve", "--config", path, "--reps", "500"});
    REQUIRE(a.code == kExitOk);
    const auto rows = lines(a.out);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == "t,R_hat,ci_low,ci_high,n_reps,n_soft,n_hard,n_survived");
    CHECK(rows[1].rfind("0,1,", 0) == 0);
    CHECK(a.out.find('\r') == std::string::npos);

    const auto b = run({"curve", "--config", path, "--reps", "500"});
    const auto c = run({"curve", "--config", path, "--reps", "500", "--threads", "4"});
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    const auto d = run({"curve", "--config", path, "--reps", "500", "--seed", "99"});
    CHECK(a.out != d.out);

    const auto file = (fs::temp_directory_path() / "mdcf_cli_test" / "curve.csv").string();
    CHECK(run({"curve", "--config", path, "--reps", "500", "--out", file}).code == kExitOk);
    std::ifstream in(file, std::ios::binary);
    const std::string written((std::istreambuf_iterator<char>(in)), {});
    CHECK(written == a.out);
}

TEST_CASE("sweep output")
{
    auto doc = servo_doc();
    doc["run"]["grid"] = {{"start", 0.0}, {"stop", 10.0}, {"points", 3}};
    const auto path = write_temp("sweep.json", doc).string();
    const auto r = run({"sweep", "D0", "20,30", "--config", path, "--reps", "200"});
    REQUIRE(r.code == kExitOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "param_value,t,R_hat,ci_low,ci_high");
    CHECK(rows[1].rfind("20,0,", 0) == 0);
    CHECK(rows[4].rfind("30,0,", 0) == 0);

    const auto bad = run({"sweep", "zeta", "1", "--config", path});
    CHECK(bad.code == kExitConfig);
    CHECK(bad.err.find("D0") != std::string::npos);
    CHECK(run({"sweep", "D0", "50", "--config", path}).code == kExitConfig);
}

TEST_CASE("validate")
{
    auto doc = json::parse(std::ifstream(kConfigs / "validate.json"));
    doc["run"]["n_reps"] = 4000;
    const auto path = write_temp("validate.json", doc).string();

    const auto ok = run({"validate", "--config", path, "--times", "2,4"});
    CHECK(ok.code == kExitOk);
    const auto rows = lines(ok.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "lambda0,eta,t,R_mc,R_analytic,deviation,allowed,status");
    CHECK(rows[3].find("result=PASS") != std::string::npos);

    const auto strict = run({"validate", "--config", path, "--times", "4", "--tolerance", "0"});
    CHECK(strict.code == kExitValidationFailed);
    CHECK(strict.out.find("result=FAIL") != std::string::npos);

    doc["model"]["gamma"] = 0.001;
    const auto coupled = write_temp("coupled.json", doc).string();
    const auto refused = run({"validate", "--config", coupled});
    CHECK(refused.code == kExitConfig);
    CHECK(refused.err.find("gamma") != std::string::npos);
}

TEST_CASE("paths")
{
    auto doc = servo_doc();
    doc["model"]["lambda0"] = 0.5;
    doc["numerics"]["horizon"] = 2.0;
    doc["run"]["grid"] = {{"start", 0.0}, {"stop", 2.0}, {"points", 3}};
    const auto path = write_temp("paths.json", doc).string();
    const auto r = run({"paths", "--config", path, "-k", "3", "--stride", "10"});
    REQUIRE(r.code == kExitOk);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "rep,t,pure,jumps,total,n_shocks,rate_changed");
    int per_rep[3] = {0, 0, 0};
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        std::istringstream row(rows[i]);
        std::string cell;
        std::vector<double> v;
        while (std::getline(row, cell, ','))
            v.push_back(std::stod(cell));
        REQUIRE(v.size() == 7);
        CHECK(v[4] == doctest::Approx(v[2] + v[3]));
        ++per_rep[static_cast<int>(v[0])];
    }
    for (const int n : per_rep)
        CHECK(n >= 1);
}

TEST_CASE("exit codes")
{
    const auto servo = (kConfigs / "servo_valve.json").string();
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"curve"}).code == kExitUsage);
    CHECK(run({"bogus", "--config", servo}).code == kExitUsage);
    CHECK(run({"curve", "--config", "/nonexistent.json"}).code == kExitConfig);

    auto doc = servo_doc();
    doc["model"]["lambda0"] = 50.0;
    doc["run"]["grid"] = {{"start", 0.0}, {"stop", 1.0}, {"points", 2}};
    const auto path = write_temp("guard.json", doc).string();
    const auto r = run({"curve", "--config", path, "--reps", "10"});
    CHECK(r.code == kExitNumericGuard);
    CHECK(r.err.find("dt") != std::string::npos);
}

TEST_CASE("format_double")
{
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(0.9053524200499126)) == 0.9053524200499126);
}
