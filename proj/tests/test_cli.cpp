#include "conedyn/cli.hpp"

#include <json.hpp>

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace conedyn;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name)
{
    return std::string(CONEDYN_DATA_DIR) + "/" + name;
}

std::string temp_file(const std::string& name, const std::string& content)
{
    auto path = std::filesystem::temp_directory_path() / ("conedyn_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("orbit on the worked example")
{
    Result r = run({"orbit", "--cone", "standard:3", "--map", data("paper_example.mm"), "--start", "1,2,0",
                    "--no-timestamp", "--seed", "11"});
    REQUIRE(r.code == cli::kExitOk);
    json j = json::parse(r.out);
    CHECK(j["schema"] == "orbit-report/1");
    CHECK(j["outcome"] == "converged");
    CHECK(j["period"] == 6);
    CHECK(j["transient"] == 0);
    CHECK(j["cycle"][1] == json::array({"2", "0", "1"}));
    CHECK(j["part_trajectory"][0] == json::array({1, 2}));
    CHECK(j["checks"]["antichain"]["status"] == "pass");
    CHECK(j["checks"]["factorization"]["status"] == "pass");
    CHECK(j["seed"] == 11);
    CHECK_FALSE(j.contains("timestamp"));

    Result again = run({"orbit", "--cone", "standard:3", "--map", data("paper_example.mm"), "--start", "1,2,0",
                        "--no-timestamp", "--seed", "11"});
    CHECK(again.out == r.out);
    CHECK(json::parse(run({"orbit", "--map", data("paper_example.mm"), "--start", "1,2,0"}).out).contains("timestamp"));
}

TEST_CASE("orbit outcomes map to exit codes")
{
    Result id = run({"orbit", "--map", data("identity.mm"), "--start", "1,1"});
    CHECK(id.code == cli::kExitOk);
    CHECK(json::parse(id.out)["period"] == 1);

    Result dbl = run({"orbit", "--map", data("doubling.mm"), "--start", "1,1"});
    CHECK(dbl.code == cli::kExitUnbounded);
    CHECK(json::parse(dbl.out)["outcome"] == "unbounded");

    std::string half = temp_file("half.mm", "f1 = 1/2*x1 + 1\n");
    Result inc = run({"orbit", "--map", half, "--start", "0", "--max-iters", "50"});
    CHECK(inc.code == cli::kExitInconclusive);
    Result flt = run({"orbit", "--map", half, "--start", "0", "--mode", "float"});
    CHECK(flt.code == cli::kExitOk);
    CHECK(json::parse(flt.out)["mode"] == "float");
}

TEST_CASE("orbit input errors exit 1 with a diagnostic")
{
    std::string bad = temp_file("bad.mm", "f1 = -2*x1\n");
    Result r = run({"orbit", "--map", bad, "--start", "1"});
    CHECK(r.code == cli::kExitError);
    CHECK(r.err.find("line 1, column 6") != std::string::npos);
    CHECK(run({"orbit", "--map", data("nonexistent.mm"), "--start", "1"}).code == cli::kExitError);
    CHECK(run({"orbit", "--map", data("identity.mm"), "--start", "1,-1"}).code == cli::kExitError);
    CHECK(run({"orbit", "--map", data("identity.mm"), "--start", "1,x"}).code == cli::kExitError);
    CHECK(run({"orbit", "--map", data("identity.mm"), "--start", "1,1", "--cone", "standard:3"}).code ==
          cli::kExitError);
    CHECK(run({"orbit", "--map", data("identity.mm")}).code == cli::kExitError);
    CHECK(run({"nonsense"}).code == cli::kExitError);
    CHECK(run({}).code == cli::kExitError);
}

TEST_CASE("orbit writes to --out")
{
    auto path = (std::filesystem::temp_directory_path() / "conedyn_test_orbit.json").string();
    std::filesystem::remove(path);
    Result r = run({"orbit", "--map", data("identity.mm"), "--start", "2,3", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    CHECK(json::parse(f)["period"] == 1);
}

TEST_CASE("seed comes from the environment by default")
{
    setenv("CONEDYN_SEED", "4242", 1);
    Result r = run({"orbit", "--map", data("identity.mm"), "--start", "1,1"});
    CHECK(json::parse(r.out)["seed"] == 4242);
    Result explicit_seed = run({"orbit", "--map", data("identity.mm"), "--start", "1,1", "--seed", "5"});
    CHECK(json::parse(explicit_seed.out)["seed"] == 5);
    setenv("CONEDYN_SEED", "nope", 1);
    CHECK(run({"orbit", "--map", data("identity.mm"), "--start", "1,1"}).code == cli::kExitError);
    unsetenv("CONEDYN_SEED");
}

TEST_CASE("bounds and table1")
{
    Result one = run({"bounds", "--n-max", "1"});
    CHECK(one.code == 0);
    CHECK(one.out == "N,alpha,beta\n1,1,1\n");

    Result t = run({"table1"});
    CHECK(t.out == run({"bounds", "--n-max", "15"}).out);
    std::ifstream f(data("table1.csv"));
    std::stringstream expected;
    expected << f.rdbuf();
    CHECK(t.out == expected.str());

    Result st = run({"bounds", "--n-max", "15", "--stirling"});
    CHECK(st.out.find("\n15,756252,756756,0.956591") != std::string::npos);

    Result big = run({"bounds", "--n-max", "61"});
    CHECK(big.code == cli::kExitError);
    CHECK(big.err.find("60") != std::string::npos);
}

TEST_CASE("construct")
{
    Result r = run({"construct", "--n", "3", "--m", "2", "--p", "2", "--q", "3", "--no-timestamp"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["map"] == "f1 = (3*x1 /\\ x2) \\/ (3*x2 /\\ x3)\n"
                      "f2 = (3*x1 /\\ x3) \\/ (x2 /\\ 3*x3)\n"
                      "f3 = (x1 /\\ 3*x2) \\/ (x1 /\\ 3*x3)\n");
    CHECK(j["start"] == json::array({"1", "2", "0"}));
    CHECK(j["period"] == 6);
    CHECK(j["confirmed"] == true);
    CHECK(j.contains("seed"));

    Result fixed = run({"construct", "--n", "2", "--m", "2", "--p", "1", "--q", "1"});
    CHECK(fixed.code == 0);
    CHECK(json::parse(fixed.out)["period"] == 1);

    Result bad = run({"construct", "--n", "3", "--m", "3", "--p", "2", "--q", "2"});
    CHECK(bad.code == cli::kExitError);
    CHECK(bad.err.find("C(3,3)=1") != std::string::npos);

    Result exhausted =
        run({"construct", "--n", "3", "--m", "2", "--p", "2", "--q", "3", "--search", "--search-budget", "0"});
    CHECK(exhausted.code == cli::kExitSearchExhausted);

    // the emitted map round-trips through orbit
    std::string mm = temp_file("constructed.mm", j["map"].get<std::string>());
    Result orbit = run({"orbit", "--map", mm, "--start", "1,2,0"});
    CHECK(json::parse(orbit.out)["period"] == 6);
}

TEST_CASE("check on a corpus")
{
    Result r = run({"check", "--corpus", "seed=7,count=100,dim=4", "--no-timestamp"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["seed"] == 7);
    CHECK(j["entries"] == 100);
    CHECK(j["violations"].empty());
    if (j["max_period_by_dim"].contains("4")) CHECK(j["max_period_by_dim"]["4"]["max_period"].get<int>() <= 12);
    CHECK(j["properties"]["order_preserving"]["pass"] == 100);

    Result parallel = run({"check", "--corpus", "seed=7,count=100,dim=4", "--no-timestamp", "--jobs", "4"});
    CHECK(parallel.out == r.out);

    Result empty = run({"check", "--corpus", "seed=1,count=0"});
    CHECK(empty.code == 0);
    CHECK(json::parse(empty.out)["entries"] == 0);

    CHECK(run({"check", "--corpus", "seed=1,bogus=2"}).code == cli::kExitError);
    CHECK(run({"check"}).code == cli::kExitError);
}

TEST_CASE("check on a single map")
{
    Result r = run({"check", "--map", data("paper_example.mm"), "--start", "1,2,0", "--no-timestamp"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["period"] == 6);
    CHECK(j["properties"]["antichain"]["pass"] == 1);
    CHECK(j["properties"]["m_invariance"]["pass"] == 1);
    CHECK(j["properties"]["factorization"]["pass"] == 1);

    Result dbl = run({"check", "--map", data("doubling.mm"), "--start", "1,1"});
    CHECK(dbl.code == cli::kExitUnbounded);
}

TEST_CASE("help")
{
    Result r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("orbit") != std::string::npos);
    Result sub = run({"orbit", "--help"});
    CHECK(sub.code == 0);
    CHECK(sub.out.find("--max-iters") != std::string::npos);
}

}
