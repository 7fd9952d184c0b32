#include "doctest.h"

#include "ebeq/cli/cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using ebeq::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("gamma1 on a concrete chart")
{
    auto r = call({"derive", "--step", "gamma1", "--chart", "R=y*z,S=z,L=1", "--format", "structured"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["value"] == "y^4*f(z)/z^4");
}

TEST_CASE("classic derivation verifies every step")
{
    auto r = call({"derive", "--flavor", "classic", "--format", "structured"});
    CHECK(r.code == ebeq::cli::Verified);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["steps"].size() == 5);
    for (const auto& s : j["steps"]) CHECK(s["verdict"] == "verified");
}

TEST_CASE("structured output is deterministic")
{
    const std::vector<std::string> args{"verify", "--theorem", "1", "--format", "structured", "--scenes", "5"};
    auto a = call(args);
    auto b = call(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(nlohmann::json::accept(a.out));
}

TEST_CASE("exit codes")
{
    CHECK(call({"verify", "--theorem", "1", "--set", "k7=1"}).code == ebeq::cli::Refuted);
    CHECK(call({"transform", "--set", "k2=1,k3=1,k4=1"}).code == ebeq::cli::DegenerateChart);
    CHECK(call({"transform", "--set", "k5=0"}).code == ebeq::cli::DegenerateChart);
    CHECK(call({"derive", "--step", "gamma1", "--chart", "R=y+z,S=2*y+2*z,L=1"}).code == ebeq::cli::DegenerateChart);
    CHECK(call({"derive", "--strict"}).code == ebeq::cli::AssumptionBlocked);
    CHECK(call({"verify", "--theorem", "7"}).code == ebeq::cli::UsageError);
    CHECK(call({"derive", "--chart", "R=y"}).code == ebeq::cli::UsageError);
    CHECK(call({"derive", "--step", "gamma1", "--chart", "Q=y"}).code == ebeq::cli::UsageError);
    CHECK(call({}).code == ebeq::cli::UsageError);
}

TEST_CASE("k4 = 0 re-solves J")
{
    auto r = call({"transform", "--set", "k4=0", "--format", "structured"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["J"] == "c11*y*z + c01*z + c10*y + c00");
}

TEST_CASE("parameter files")
{
    const std::string path = "ebeq_test_params.txt";
    {
        std::ofstream f(path);
        f << "# theorem 1 chart\nk1 = 1\nk2 = 2\nk3 = 1\nk4 = 1\nk5 = 1\nk6 = 0\n";
    }
    auto pairs = ebeq::cli::read_parameter_file(path);
    REQUIRE(pairs.size() == 6);
    CHECK(pairs[1] == std::make_pair(std::string("k2"), std::string("2")));
    auto r = call({"transform", "--params", path, "--format", "structured"});
    std::remove(path.c_str());
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["F"] == "(z + 1)^4*f((2*z + 1)/(z + 1))");
    CHECK(j["M"] == "m((2*z + 1)/(z + 1))/(z + 1)^4");
}

TEST_CASE("oracle reports its controls")
{
    auto r = call({"oracle", "--theorem", "3", "--scenes", "20", "--format", "structured"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["scenes"] == 20);
    CHECK(j["controls"].contains("p5*1.1"));
}
