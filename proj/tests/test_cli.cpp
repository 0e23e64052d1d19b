#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "solitonlab/cli.hpp"
#include "solitonlab/errors.hpp"

using namespace solitonlab;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "solitonlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string tmp_path(const std::string& name) { return std::string(SOLITONLAB_TEST_TMP) + "/" + name; }

}  // namespace

TEST_CASE("verify exit codes") {
    Run ok = run_cli({"verify", "--family", "singular-steady", "--s", "0.5:2.0", "--samples", "64", "--tol", "1e-9"});
    CHECK(ok.code == kExitPass);
    nlohmann::json j = nlohmann::json::parse(ok.out);
    CHECK(j.at("pass") == true);
    CHECK(j.at("checks").at("soliton_residual").at("threshold").get<double>() == 1e-9);
    CHECK(j.at("checks").at("soliton_residual").at("rule") == "<=");

    Run broken = run_cli({"verify", "--family", "broken-product"});
    CHECK(broken.code == kExitBreach);
    CHECK(nlohmann::json::parse(broken.out).at("pass") == false);

    Run tight = run_cli({"verify", "--family", "gaussian", "--lambda", "1", "--tol", "1e-30"});
    CHECK(tight.code == kExitBreach);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli({}).code == kExitUsage);
    CHECK(run_cli({"frobnicate"}).code == kExitUsage);
    CHECK(run_cli({"verify", "--family", "nosuch"}).code == kExitUsage);
    CHECK(run_cli({"verify", "--s", "3:1"}).code == kExitUsage);
    CHECK(run_cli({"verify", "--samples", "abc"}).code == kExitUsage);
    CHECK(run_cli({"verify", "--format", "xml"}).code == kExitUsage);
    CHECK(run_cli({"oracle", "--nodes", "64"}).code == kExitUsage);
    CHECK(run_cli({"verify", "--job", tmp_path("missing.json")}).code == kExitUsage);
    Run bad = run_cli({"verify", "--tol", "-1"});
    CHECK(bad.code == kExitUsage);
    CHECK_FALSE(bad.err.empty());
    CHECK(run_cli({"--help"}).code == kExitPass);
}

TEST_CASE("integrate report and csv trajectory") {
    Run r = run_cli({"integrate", "--family", "singular-steady", "--from", "1", "--to", "2", "--step", "1e-3"});
    REQUIRE(r.code == kExitPass);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("results").at("steps") == 1000);
    CHECK(j.at("results").at("endpoint").at("a").get<double>() == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
    CHECK(j.at("results").at("branch") == nlohmann::json::array({"lambda-2a^2+ab"}));

    Run csv = run_cli({"integrate", "--family", "product", "--lambda", "-1", "--from", "1", "--to", "1.1", "--step",
                       "1e-3", "--format", "csv"});
    REQUIRE(csv.code == kExitPass);
    std::istringstream lines(csv.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header.rfind("s,a,b,fp,h,diagnostic", 0) == 0);
    int rows = 0;
    for (std::string l; std::getline(lines, l);) ++rows;
    CHECK(rows == 101);
}

TEST_CASE("integrate from an explicit initial state in a job file") {
    const std::string path = tmp_path("job_initial.json");
    {
        std::ofstream f(path);
        f << R"({"command": "integrate", "initial": {"a": 1.0, "b": 0.0, "fp": -1.0, "h": 1.0, "lambda": -1.0, "k": -1.0},
                 "from": 1.0, "to": 1.5, "step": 1e-3})";
    }
    Run r = run_cli({"--job", path});
    CHECK(r.code == kExitPass);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("results").at("branch") == nlohmann::json::array({"b"}));
    // flags override the job file
    Run o = run_cli({"--job", path, "--to", "1.2"});
    CHECK(nlohmann::json::parse(o.out).at("results").at("endpoint").at("s").get<double>() == 1.2);
}

TEST_CASE("classify from a sample file") {
    const std::string path = tmp_path("samples.json");
    {
        nlohmann::json arr = nlohmann::json::array();
        for (int i = 0; i < 8; ++i) {
            const double s = 1.0 + 0.125 * i;
            arr.push_back({{"s", s}, {"eigen", {0.0, 0.0, -1.0, -1.0}}, {"fprime", -s}, {"scalar", -2.0}, {"weyl_sq", 4.0 / 3.0}});
        }
        std::ofstream f(path);
        f << arr.dump();
    }
    Run r = run_cli({"classify", "--input", path, "--expect", "Product_ii"});
    CHECK(r.code == kExitPass);
    Run wrong = run_cli({"classify", "--input", path, "--expect", "Einstein_i"});
    CHECK(wrong.code == kExitBreach);
}

TEST_CASE("repeated runs are byte-identical") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"verify", "--family", "cylinder"},
          std::vector<std::string>{"classify", "--family", "gaussian"},
          std::vector<std::string>{"integrate", "--family", "singular-steady", "--step", "1e-2"},
          std::vector<std::string>{"oracle", "--family", "product", "--nodes", "33", "--threads", "2"}}) {
        Run a = run_cli(args);
        Run b = run_cli(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
    // thread count does not leak into the numbers
    Run t1 = run_cli({"oracle", "--family", "cylinder", "--nodes", "33", "--threads", "1"});
    Run t2 = run_cli({"oracle", "--family", "cylinder", "--nodes", "33", "--threads", "3"});
    CHECK(t1.out == t2.out);
}

TEST_CASE("job_from_json validation") {
    CHECK_THROWS_AS(job_from_json(nlohmann::json::array()), InputError);
    CHECK_THROWS_AS(job_from_json(nlohmann::json{{"command", "nope"}}), InputError);
    CHECK_THROWS_AS(job_from_json(nlohmann::json{{"samples", "many"}}), InputError);
    JobSpec j = job_from_json(nlohmann::json{{"command", "oracle"}, {"family", "gaussian"}, {"s", "0.5:1.5"}});
    CHECK(j.command == Command::oracle);
    CHECK(j.family == "gaussian");
    REQUIRE(j.s_range.has_value());
    CHECK(j.s_range->hi == 1.5);
}
