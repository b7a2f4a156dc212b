#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ndpolar/cli.hpp"
#include "support/fixtures.hpp"
#include "support/svg_scan.hpp"

using namespace ndpolar;
using ndpolar::testing::fixture_path;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "ndpolar");
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string cooling() { return fixture_path("cooling").string(); }

}  // namespace

TEST_CASE("validate")
{
    auto r = cli({"validate", cooling()});
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("valid") == 0);
    CHECK(r.out.find("states=300") != std::string::npos);

    auto j = cli({"validate", cooling(), "--format", "json"});
    CHECK(j.code == exit_ok);

    auto tmp = std::filesystem::temp_directory_path() / "ndpolar_cli_bad.json";
    std::ofstream(tmp) << R"({"format":"ndpolar/1","name":"x","axes":[]})";
    auto bad = cli({"validate", tmp.string()});
    CHECK(bad.code == exit_validation);
    CHECK(bad.err.find("E_SCHEMA") != std::string::npos);
    std::filesystem::remove(tmp);

    CHECK(cli({"validate", "/nonexistent/model.json"}).code == exit_runtime);
}

TEST_CASE("slice")
{
    auto r = cli({"slice", cooling(), "--set", "cooling=N+1", "--set", "maintenance=overdue"});
    CHECK(r.code == exit_ok);
    CHECK(r.out.rfind("impact\\probability,Very low,Low,Medium,High,Very high\n", 0) == 0);
    CHECK(r.out.find("Catastrophic,orange,orange,orange,red,red\n") != std::string::npos);
    CHECK(r.out.find("Insignificant,green,green,light-green,light-green,orange\n") != std::string::npos);

    auto j = cli({"slice", cooling(), "--set", "cooling=1", "--set", "maintenance=2", "--format", "json"});
    REQUIRE(j.code == exit_ok);
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["rows"][0][4] == "red");
    CHECK(doc["slice"]["maintenance"] == 2);

    CHECK(cli({"slice", cooling(), "--set", "cooling=N+7"}).code == exit_validation);
    CHECK(cli({"slice", cooling(), "--set", "nope=1"}).code == exit_validation);
    CHECK(cli({"slice", cooling(), "--format", "xml"}).code == exit_usage);
    CHECK(cli({"slice"}).code == exit_usage);
}

TEST_CASE("aggregate and walk")
{
    auto a = cli({"aggregate", cooling(), "--set", "cooling=N+1", "--set", "maintenance=0", "--risk", "Medium,Medium"});
    CHECK(a.code == exit_ok);
    CHECK(a.out.find("probability: light-green,light-green,light-green,orange,orange") != std::string::npos);

    auto w = cli({"walk", cooling(), "--vary", "maintenance", "--set", "cooling=N+1", "--risk", "2,2"});
    CHECK(w.code == exit_ok);
    CHECK(w.out == "level,label,risk_grade,V\n0,recently serviced,light-green,0\n1,due,orange,0\n2,overdue,orange,1\n");

    auto wj = cli({"walk", cooling(), "--vary", "maintenance", "--format", "json", "--inline-grids"});
    REQUIRE(wj.code == exit_ok);
    auto doc = nlohmann::json::parse(wj.out);
    CHECK(doc["steps"].size() == 3);
    CHECK(doc["steps"][2]["rows"].size() == 5);

    CHECK(cli({"walk", cooling(), "--vary", "probability"}).code == exit_validation);
}

TEST_CASE("violations")
{
    auto r = cli({"violations", cooling(), "--state", "2,2,1,2"});
    CHECK(r.code == exit_ok);
    CHECK(r.out == "v=[0,0,0,1] V=1\n");
    auto labels = cli({"violations", cooling(), "--state", "Medium,Medium,N+1,overdue"});
    CHECK(labels.out == r.out);
    auto j = cli({"violations", cooling(), "--state", "4,4,3,2", "--format", "json"});
    CHECK(nlohmann::json::parse(j.out)["V"] == 4);
    CHECK(cli({"violations", cooling(), "--state", "2,2,1"}).code == exit_validation);
}

TEST_CASE("render")
{
    auto out = std::filesystem::temp_directory_path() / "ndpolar_cli_render.svg";
    auto r = cli({"render", cooling(), "--view", "polar", "--set", "maintenance=due", "-o", out.string()});
    REQUIRE(r.code == exit_ok);
    std::ifstream in(out);
    std::string svg((std::istreambuf_iterator<char>(in)), {});
    CHECK(testing::count_tags(svg, "path", "segment") == 17);

    auto m = cli({"render", cooling(), "--view", "matrix", "--set", "maintenance=overdue", "--theme", "red=#101010",
              "--no-labels"});
    CHECK(m.code == exit_ok);
    CHECK(m.out.find("#101010") != std::string::npos);
    CHECK(m.out.find("row-label") == std::string::npos);
    CHECK(m.out.find("context-value") != std::string::npos);

    CHECK(cli({"render", cooling(), "--view", "pie"}).code == exit_usage);
    CHECK(cli({"render", cooling(), "--theme", "pink=#000000"}).code == exit_validation);
    std::filesystem::remove(out);
}

TEST_CASE("usage")
{
    CHECK(cli({}).code == exit_usage);
    CHECK(cli({"frobnicate"}).code == exit_usage);
    CHECK(cli({"--help"}).code == exit_ok);
}
