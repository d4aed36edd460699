#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(WHITCAUS_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json run_json(const std::string& args, int expected_code = 0) {
    Run r = run(args + " --json");
    CHECK(r.code == expected_code);
    json j = json::parse(r.out);
    for (const char* key : {"command", "inputs", "outputs", "checks", "pass", "wall_time"}) CHECK(j.contains(key));
    CHECK(json::parse(j.dump()) == j);
    return j;
}

}  // namespace

TEST_CASE("zone command") {
    CHECK(run_json("zone --y1 0.257 --y2 0.129")["outputs"]["zone"] == "Light1");
    CHECK(run_json("zone --y1 1 --y2 1")["outputs"]["zone"] == "Shadow");
    auto j = run_json("zone --exact --y1sq 1/3 --y2sq 1/3");
    CHECK(j["outputs"]["zone"] == "CuspPoint");
    CHECK(j["outputs"]["defect2_exact"] == "0");
    CHECK(run("zone --y1 0 --y2 1").code == 2);
    CHECK(run("zone --y1 -0.5 --y2 1").code == 2);
    CHECK(run("zone --exact --y1sq 1/3").code == 2);
}

TEST_CASE("fiber command") {
    auto cusp = run_json("fiber --exact --y1sq 1/3 --y2sq 1/3");
    REQUIRE(cusp["outputs"]["count"] == 2);
    for (const auto& p : cusp["outputs"]["points"]) CHECK(p["multiplicity"] == 3);
    CHECK(run_json("fiber --y1 0.525 --y2 0.382 --tol 0.01")["outputs"]["count"] == 4);
    CHECK(run_json("fiber --y1 2 --y2 2")["outputs"]["count"] == 0);
    Run text = run("fiber --y1 0.257 --y2 0.129");
    CHECK(text.code == 0);
    CHECK(text.out.find("PASS isospectral") != std::string::npos);
}

TEST_CASE("whittaker command") {
    auto j = run_json("whittaker --n 2 --tau 10 --y1 1.3");
    CHECK(j["pass"] == true);
    CHECK(j["outputs"]["rel_diff"].get<double>() < 1e-4);
    auto s = run_json("whittaker --n 3 --t 10 --y1 1.2 --y2 1.2");
    CHECK(s["outputs"]["zone"] == "Shadow");
    CHECK(s["outputs"]["rapid_decay"] == true);
    auto c = run_json("whittaker --n 3 --t 10 --y1 0.57735 --y2 0.57735 --predict pearcey");
    CHECK(c["outputs"]["in_pearcey_window"] == true);
    CHECK(c["outputs"]["predict_rel_err"].get<double>() < 0.3);
    CHECK(run("whittaker --n 4 --t 1 --y1 1 --y2 1").code == 2);
    CHECK(run("whittaker --n 3 --t 10 --y1 0.2 --y2 0.2 --predict pearcey").code == 1);
}

TEST_CASE("verify command") {
    auto j = run_json("verify --suite caustics");
    CHECK(j["checks"].size() >= 10);
    // the two Hessian constants that disagree with the recomputation are reported as failures
    auto h = run_json("verify --suite hessian", 1);
    int failed = 0;
    for (const auto& c : h["checks"]) failed += c["pass"] == false;
    CHECK(failed == 2);
    CHECK(run_json("verify --suite gl2")["pass"] == true);
    CHECK(run("verify --suite nonsense").code == 2);
}

TEST_CASE("scan command writes CSV") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto zones = (dir / "whitcaus_zones.csv").string();
    auto j = run_json("scan --mode zones --grid 0:1.2:0.1 --out " + zones);
    CHECK(j["outputs"]["rows"] == 144);
    std::ifstream in(zones);
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "y1,y2,zone,defect1,defect2,fiber_count");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 144);

    const auto sup = (dir / "whitcaus_sup.csv").string();
    auto s = run_json("scan --mode supnorm --n 2 --t-list 10,20,40,80 --out " + sup);
    CHECK(std::abs(s["outputs"]["slope"].get<double>() - 1.0 / 6) < 0.05);
    std::ifstream in2(sup);
    std::getline(in2, header);
    CHECK(header == "t,y1,y2,absW,err");
    CHECK(run("scan --mode zones --grid 1:0:0.1 --out " + zones).code == 2);
}
