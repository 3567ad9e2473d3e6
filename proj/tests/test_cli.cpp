#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "veerkit/certify.hpp"

using namespace veerkit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(VEERKIT_DATA_DIR) + "/" + name; }

fs::path scratch() {
    fs::path p = fs::temp_directory_path() / "veerkit_cli_test";
    fs::create_directories(p);
    return p;
}

std::string read_all(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_all(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("build from a word and from a flat surface") {
    Run rl = run({"build", "--ptorus", "RL"});
    REQUIRE(rl.code == kExitOk);
    json j = json::parse(rl.out);
    CHECK(j["tet_count"] == 2);
    CHECK(j.contains("veering"));
    CHECK(j["signature"] == isomorphism_signature(fixtures::figure_eight()));

    Run flat = run({"build", "--flatsurf", data("sq22.json")});
    REQUIRE(flat.code == kExitOk);
    CHECK(json::parse(flat.out)["signature"] == j["signature"]);

    Run r = run({"build", "--ptorus", "R"});
    CHECK(r.code == kExitBuild);
    CHECK(r.err.find("not pseudo-Anosov") != std::string::npos);
    CHECK(run({"build", "--ptorus", "RLX"}).code == kExitUsage);
    CHECK(run({"build"}).code == kExitUsage);
    CHECK(run({"build", "--ptorus", "RL", "--flatsurf", data("sq22.json")}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
}

TEST_CASE("built triangulations feed the other commands") {
    fs::path f = scratch() / "rrl.json";
    REQUIRE(run({"build", "--ptorus", "RRL", "--out", f.string()}).code == kExitOk);
    Run s = run({"solve", f.string()});
    CHECK(s.code == kExitOk);
    CHECK(json::parse(s.out)["shapes"].size() == 3);
    Run h = run({"homology", f.string()});
    CHECK(h.code == kExitOk);
    CHECK(json::parse(h.out)["betti_1"] == 1);
}

TEST_CASE("solve exit codes") {
    Run f8 = run({"solve", data("fig8.json")});
    REQUIRE(f8.code == kExitOk);
    json j = json::parse(f8.out);
    CHECK(j["verdict"] == "Geometric");
    CHECK(std::abs(j["volume"].get<double>() - 2.029883212819307) < 1e-9);
    for (const auto& z : j["shapes"]) {
        CHECK(std::abs(z[0].get<double>() - 0.5) < 1e-12);
        CHECK(std::abs(z[1].get<double>() - 0.8660254037844386) < 1e-12);
    }
    CHECK(run({"solve", data("valence1.json")}).code == kExitNoConvergence);
    Run ng = run({"solve", data("rrl-nongeometric.json")});
    CHECK(ng.code == kExitNonGeometric);
    CHECK(json::parse(ng.out)["negative"].size() == 1);
    // The margin decides what counts as flat.
    CHECK(run({"solve", data("fig8.json"), "--tol", "0.9"}).code == kExitContainsFlat);
    CHECK(run({"solve", data("rrl-nongeometric.json"), "--tol", "2"}).code == kExitContainsFlat);
    CHECK(run({"solve", data("fig8.json"), "--tol", "-1"}).code == kExitUsage);
}

TEST_CASE("run reports repeat their verdict fields") {
    fs::path a = scratch() / "a.rep", b = scratch() / "b.rep";
    REQUIRE(run({"solve", data("rrl-nongeometric.json"), "--report", a.string(), "--seed", "3"}).code == kExitNonGeometric);
    REQUIRE(run({"solve", data("rrl-nongeometric.json"), "--report", b.string(), "--seed", "3"}).code == kExitNonGeometric);
    json ja = json::parse(read_all(a)), jb = json::parse(read_all(b));
    ja.erase("timings_ms");
    jb.erase("timings_ms");
    CHECK(ja == jb);
    CHECK(ja["command"] == "solve");
    CHECK(ja["inputs"][0]["sha1"].get<std::string>().size() == 40);
    CHECK(ja["verdict"] == "NonGeometric");
}

TEST_CASE("certify and check") {
    fs::path cert = scratch() / "fig8.cert";
    Run c = run({"certify", data("fig8.json"), "--mode", "geometric", "--out", cert.string()});
    REQUIRE(c.code == kExitOk);
    Run ok = run({"check", cert.string()});
    CHECK(ok.code == kExitOk);
    CHECK(json::parse(ok.out)["ok"] == true);

    std::string text = read_all(cert);
    json j = json::parse(text);
    j["verdict"] = "NonGeometricCertified";
    fs::path flipped = scratch() / "flipped.cert";
    write_all(flipped, j.dump());
    Run bad = run({"check", flipped.string()});
    CHECK(bad.code == kExitNotCertified);
    CHECK(json::parse(bad.out)["reason"].get<std::string>().find("sign condition") != std::string::npos);

    j = json::parse(text);
    std::string lo = j["steps"][0]["boxes"][1][2];
    double x = parse_hex_double(lo);
    j["steps"][0]["boxes"][1][2] = hex_double(std::nextafter(x, -1.0));
    fs::path nudged = scratch() / "nudged.cert";
    write_all(nudged, j.dump());
    Run n = run({"check", nudged.string()});
    CHECK(n.code == kExitNotCertified);
    CHECK(json::parse(n.out)["step"] == 0);

    CHECK(run({"certify", data("fig8.json"), "--mode", "nongeometric"}).code == kExitNotNonGeometric);
    CHECK(run({"certify", data("valence1.json"), "--mode", "geometric"}).code == kExitNotCertified);
    CHECK(run({"certify", data("fig8.json"), "--mode", "sideways"}).code == kExitUsage);
    CHECK(run({"check", data("fig8.json")}).code == kExitUsage);
}

TEST_CASE("non-geometric certification is reproducible") {
    Run a = run({"certify", data("rrl-nongeometric.json"), "--mode", "nongeometric", "--seed", "7"});
    REQUIRE(a.code == kExitOk);
    Run b = run({"certify", data("rrl-nongeometric.json"), "--mode", "nongeometric", "--seed", "7", "--jobs", "3"});
    CHECK(b.code == kExitOk);
    CHECK(a.out == b.out);
    std::istringstream in(a.out);
    Certificate cert = read_certificate(in);
    CHECK(cert.verdict == CertVerdict::NonGeometricCertified);
    CHECK(check_certificate(cert).ok);

    CHECK(run({"certify", data("rrl-nongeometric.json"), "--mode", "nongeometric", "--budget", "1", "--max-length", "1"})
              .code == kExitBudget);
}

TEST_CASE("seed falls back to the environment") {
    fs::path rep = scratch() / "env.rep";
    ::setenv("VEERKIT_SEED", "42", 1);
    Run r = run({"solve", data("fig8.json"), "--report", rep.string()});
    ::unsetenv("VEERKIT_SEED");
    REQUIRE(r.code == kExitOk);
    CHECK(json::parse(read_all(rep))["seed"] == 42);
    ::setenv("VEERKIT_SEED", "forty-two", 1);
    CHECK(run({"solve", data("fig8.json")}).code == kExitUsage);
    ::unsetenv("VEERKIT_SEED");
}

TEST_CASE("homology, inspect and fiber") {
    Run h = run({"homology", data("fig8.json")});
    REQUIRE(h.code == kExitOk);
    CHECK(json::parse(h.out)["H1"] == "Z");

    Run i = run({"inspect", data("fig8.json")});
    REQUIRE(i.code == kExitOk);
    json ij = json::parse(i.out);
    CHECK(ij["prongs"]["red"] == 2);
    CHECK(ij["prongs"]["blue"] == 2);
    CHECK(ij["principal_fiber"] == true);

    Run f = run({"fiber", "--face", data("face-genus.json"), "--coeffs", "n=1,g=2"});
    REQUIRE(f.code == kExitOk);
    json fj = json::parse(f.out);
    CHECK(fj["surface"] == "S_{2,1}");
    CHECK(fj["norm"] == 3);

    Run p = run({"fiber", "--face", data("face-planar.json"), "--coeffs", "a=1"});
    REQUIRE(p.code == kExitOk);
    CHECK(json::parse(p.out)["surface"] == "S_{0,7}");

    Run c2 = run({"fiber", "--face", data("face-punctures.json"), "--coeffs", "n=5"});
    REQUIRE(c2.code == kExitOk);
    CHECK(json::parse(c2.out)["surface"] == "S_{1,5}");

    CHECK(run({"fiber", "--face", data("parity-violation.json"), "--coeffs", "a=1,b=1"}).code == kExitParity);
    CHECK(run({"fiber", "--face", data("face-planar.json"), "--coeffs", "b=1"}).code == kExitUsage);
    CHECK(run({"fiber", "--face", data("face-planar.json"), "--coeffs", "a=x"}).code == kExitUsage);
}
