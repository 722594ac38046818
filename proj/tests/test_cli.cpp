#include <doctest.h>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(SPINE3_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(SPINE3_FIXTURE_DIR) + "/" + name;
}

} // namespace

TEST_CASE("validate emits the quotient counts with exit 0") {
    RunResult r = run("validate " + fixture("fig8.json"));
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["V"] == 1);
    CHECK(j["E"] == 2);
    CHECK(j["F"] == 4);
    CHECK(j["T"] == 2);
    CHECK(j["chi"] == 1);
}

TEST_CASE("validation failures exit 1") {
    CHECK(run("validate " + fixture("broken_unglued.json")).exit_code == 1);
    CHECK(run("validate " + fixture("nonorientable.json")).exit_code == 1);
    CHECK(run("validate /nonexistent/file.json").exit_code == 1);
}

TEST_CASE("unknown flags are rejected") {
    CHECK(run("validate " + fixture("fig8.json") + " --no-such-flag").exit_code != 0);
    CHECK(run("frobnicate " + fixture("fig8.json")).exit_code != 0);
}

TEST_CASE("maximize output is byte-identical across runs") {
    std::string args =
        "maximize " + fixture("fig8.json") + " --restarts 20 --seed 0";
    RunResult a = run(args);
    RunResult b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    auto j = nlohmann::json::parse(a.out);
    CHECK(j["classification"] == "smooth-critical");
    double vol = j["volume"].get<double>();
    CHECK(vol > 2.0298);
    CHECK(vol < 2.0299);
}

TEST_CASE("different seeds may pick different restarts but stay valid") {
    RunResult a = run("maximize " + fixture("s3_2tet.json") + " --seed 1");
    CHECK(a.exit_code == 0);
    auto j = nlohmann::json::parse(a.out);
    CHECK(j["classification"] == "nonsmooth-critical");
}

TEST_CASE("tas and sas-init emit the documented keys") {
    RunResult t = run("tas " + fixture("fig8.json"));
    CHECK(t.exit_code == 0);
    auto tj = nlohmann::json::parse(t.out);
    CHECK(tj["dim_tas"] == 3);
    CHECK(tj["chi"] == 1);
    CHECK(tj["match"] == true);
    CHECK(tj["basis"].size() == 3);

    RunResult s = run("sas-init " + fixture("s3_2tet.json"));
    CHECK(s.exit_code == 0);
    auto sj = nlohmann::json::parse(s.out);
    CHECK(sj["theta"].size() == 6);
    CHECK(sj["dim_tas"] == 2);
    CHECK(sj["used_lattice"] == true);
    CHECK(sj["max_congruence_residual"].get<double>() < 1e-9);
}

TEST_CASE("nz-selftest passes on fixtures") {
    for (const char* f : {"fig8.json", "s3_2tet.json", "p1.json"}) {
        RunResult r = run("nz-selftest " + fixture(f));
        CHECK(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.out);
        for (auto& [key, val] : j.items())
            CHECK(val["status"] == "ok");
    }
}

TEST_CASE("haken subcommand: rationals as p/q strings") {
    RunResult r = run("haken " + fixture("s3_2tet.json") +
                      " --basis --two-quad 0:1 --clusters");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["duality_ok"] == true);
    CHECK(j["two_quad_target"] == 1);
    REQUIRE(j["two_quad_solutions"].size() == 1);
    auto sol = j["two_quad_solutions"][0];
    CHECK(sol["support"] == nlohmann::json::array({1, 2}));
    // every rational is serialized as an integer-or-fraction string
    for (const auto& entry : sol["vector"]) {
        std::string s = entry.get<std::string>();
        CHECK(!s.empty());
        CHECK(s.find_first_not_of("-0123456789/") == std::string::npos);
    }
    CHECK(j["clusters"].size() == 2);
}

TEST_CASE("z2taut subcommand") {
    RunResult r = run("z2taut " + fixture("fig8.json") + " --limit 3");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 5);
    CHECK(j["count_exact"] == true);
    CHECK(j["structures"].size() == 3);
}

TEST_CASE("thurston-check on a shapes file") {
    std::string shapes = "/tmp/spine3_test_shapes.json";
    {
        FILE* f = fopen(shapes.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("{\"z\": [[0.5,0.8660254037844386],[0.5,0.8660254037844386],"
              "[0.5,0.8660254037844386],[0.5,0.8660254037844386],"
              "[0.5,0.8660254037844386],[0.5,0.8660254037844386]]}",
              f);
        fclose(f);
    }
    RunResult r = run("thurston-check " + fixture("fig8.json") + " " + shapes +
                      " --mode strict --refine");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["residuals"]["pass"] == true);
    CHECK(j["refined"]["converged"] == true);
    CHECK(j["shape_volume"]["in_WT"] == true);
    std::remove(shapes.c_str());
}

TEST_CASE("report includes links, degrees and incidence") {
    RunResult r = run("report " + fixture("fig8.json"));
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["vertex_link_chi"] == nlohmann::json::array({0}));
    CHECK(j["edge_degrees"] == nlohmann::json::array({6, 6}));
    CHECK(j["orientation"] == nlohmann::json::array({1, -1}));
    CHECK(j["incidence"].size() == 2);
}

TEST_CASE("SPINE3_THREADS does not change the output") {
    std::string args = "maximize " + fixture("fig8.json") + " --restarts 6 --seed 0";
    RunResult a = run(args);
    RunResult b = run(args); // same binary, env var prefixed below
    std::string cmd = "SPINE3_THREADS=1 " + std::string(SPINE3_BIN) + " " + args +
                      " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), n);
    pclose(pipe);
    CHECK(a.out == b.out);
    CHECK(a.out == out);
}

TEST_CASE("maximize --emit-path writes the flattening record") {
    std::string path = "/tmp/spine3_test_path.json";
    std::remove(path.c_str());
    RunResult r = run("maximize " + fixture("s3_2tet.json") + " --seed 0 --emit-path " +
                      path);
    CHECK(r.exit_code == 0);
    FILE* f = fopen(path.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string content;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0)
        content.append(buf.data(), n);
    fclose(f);
    auto j = nlohmann::json::parse(content);
    CHECK(j["applicable"] == true);
    CHECK(j["legs"].size() >= 1);
    for (const auto& leg : j["legs"])
        CHECK(leg["max_vol_deviation"].get<double>() < 1e-8);
    std::remove(path.c_str());
}
