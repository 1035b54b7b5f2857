#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qfrac/json_io.hpp"
#include "qfrac/qmatrix.hpp"

using namespace qfrac;
using nlohmann::json;

namespace {

struct RunResult {
    int exitCode;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QFRAC_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const QMatrix& t) {
    const auto dir = std::filesystem::temp_directory_path() / "qfrac_cli_tests";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / name).string();
    save_matrix(path, t);
    return path;
}

std::string write_text(const std::string& name, const std::string& text) {
    const auto dir = std::filesystem::temp_directory_path() / "qfrac_cli_tests";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / name).string();
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST_CASE("cli spectrum") {
    const std::string id3 = write_temp("identity3.json", QMatrix::identity(3));
    const RunResult r = run_cli("spectrum " + id3);
    CHECK(r.exitCode == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["spheres"].size() == 1);
    CHECK(j["spheres"][0]["s0"].get<double>() == doctest::Approx(1.0));
    CHECK(j["spheres"][0]["multiplicity"].get<int>() == 3);

    const std::string diag = write_temp(
        "diag_e1_2e2.json",
        QMatrix::diag({Quaternion::e1(), 2.0 * Quaternion::e2()}));
    const json j2 = json::parse(run_cli("spectrum " + diag).out);
    REQUIRE(j2["spheres"].size() == 2);
    CHECK(j2["spheres"][0]["s1"].get<double>() == doctest::Approx(1.0));
    CHECK(j2["spheres"][1]["s1"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("cli parse failures exit 2") {
    const std::string bad = write_text("malformed.json", "{\"n\": 2, \"entries\": [");
    CHECK(run_cli("spectrum " + bad).exitCode == 2);
    CHECK(run_cli("fracpow " + bad + " --alpha 0.5").exitCode == 2);
}

TEST_CASE("cli fracpow") {
    const std::string id2 = write_temp("identity2.json", QMatrix::identity(2));
    const RunResult r = run_cli("fracpow " + id2 + " --alpha 0.5");
    CHECK(r.exitCode == 0);
    const json j = json::parse(r.out);
    CHECK(j["report"]["converged"].get<bool>());
    CHECK(std::abs(j["matrix"]["entries"][0][0][0].get<double>() - 1.0) <= 1e-9);

    const std::string diag4 = write_temp("diag4.json", QMatrix::scalar(1, Quaternion(4.0)));
    for (const std::string method : {"ray", "contour", "halfplane", "kato"}) {
        const RunResult rm = run_cli("fracpow " + diag4 + " --alpha 0.5 --method " + method);
        CHECK(rm.exitCode == 0);
        const json jm = json::parse(rm.out);
        CHECK(std::abs(jm["matrix"]["entries"][0][0][0].get<double>() - 0.5) <= 1e-8);
    }

    // cross-check flag reports the discrepancy between two methods
    const json jx = json::parse(run_cli("fracpow " + diag4 + " --alpha 0.5 --verify").out);
    CHECK(jx["crossCheck"]["agree"].get<bool>());

    const std::string neg = write_temp(
        "negdiag.json", QMatrix::diag({Quaternion(-1.0), Quaternion(2.0)}));
    CHECK(run_cli("fracpow " + neg + " --alpha 0.5").exitCode == 3);
}

TEST_CASE("cli verify") {
    const RunResult r = run_cli("verify --random 4 --seed 7 --suite resolvent");
    CHECK(r.exitCode == 0);
    const json j = json::parse(r.out);
    CHECK(j["pass"].get<bool>());
    CHECK(j["checks"].size() > 0);

    const std::string id2 = write_temp("identity2.json", QMatrix::identity(2));
    CHECK(run_cli("verify " + id2 + " --suite all").exitCode == 0);

    const std::string neg = write_temp(
        "negdiag.json", QMatrix::diag({Quaternion(-1.0), Quaternion(2.0)}));
    CHECK(run_cli("verify " + neg + " --suite semigroup").exitCode == 3);
}

TEST_CASE("cli runs are byte-identical under a fixed seed") {
    const RunResult a = run_cli("verify --random 3 --seed 11 --suite resolvent");
    const RunResult b = run_cli("verify --random 3 --seed 11 --suite resolvent");
    CHECK(a.exitCode == 0);
    CHECK(a.out == b.out);

    // the environment override wins
    const std::string cmd = "env QFRAC_SEED=11 " + std::string(QFRAC_CLI_PATH) +
                            " verify --random 3 --seed 5 --suite resolvent";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    pclose(pipe);
    CHECK(out == a.out);
}

TEST_CASE("cli convergence table drifts downward") {
    const std::string diag4 = write_temp("diag4.json", QMatrix::scalar(1, Quaternion(4.0)));
    const RunResult r =
        run_cli("convergence " + diag4 + " --alpha 0.5 --tols 1e-6,1e-8,1e-10");
    CHECK(r.exitCode == 0);
    const json j = json::parse(r.out);
    const auto& table = j["table"];
    REQUIRE(table.size() == 3);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : table) {
        const double drift = row["drift"].get<double>();
        CHECK(drift <= prev + 1e-14);
        prev = drift;
    }
    CHECK(table[2]["drift"].get<double>() <= 1e-9);

    // drift on the identity stays far below every requested tolerance
    const std::string id2 = write_temp("identity2.json", QMatrix::identity(2));
    const json ji = json::parse(
        run_cli("convergence " + id2 + " --alpha 0.5 --tols 1e-6,1e-8").out);
    for (const auto& row : ji["table"])
        CHECK(row["drift"].get<double>() <= 1e-2 * row["tol"].get<double>());

    const std::string neg = write_temp(
        "negdiag.json", QMatrix::diag({Quaternion(-1.0), Quaternion(2.0)}));
    CHECK(run_cli("convergence " + neg + " --alpha 0.5 --tols 1e-6").exitCode == 3);
}
