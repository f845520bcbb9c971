#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "mslie_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(MSLIE_CLI) + " " + args + " > " + (scratch() / "stdout.json").string() + " 2> " +
                            (scratch() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

nlohmann::json lastReport() {
    std::ifstream in(scratch() / "stdout.json");
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("validate exit codes") {
    CHECK(run("validate schwarz") == 0);
    const auto rep = lastReport();
    CHECK(rep["command"] == "validate");
    CHECK(rep["seed"] == 42);
    CHECK(rep["results"]["unimodular"] == true);
    CHECK(run("validate schwarz --corrupt-theta") == 1);
    CHECK(run("validate nosuch") == 2);
    CHECK(run("validate") == 2);
    CHECK(run("validate dbh --alpha 0.3 0.1 0.2") == 0);
    CHECK(run("validate schwarz --alpha 0.3 0.1 0.2") == 2);
}

TEST_CASE("reduce writes the reduced system") {
    const auto out = scratch() / "reduced.json";
    CHECK(run("reduce control5 y45 --out " + out.string()) == 0);
    std::ifstream in(out);
    const auto j = nlohmann::json::parse(in);
    CHECK(j["dim"] == 3);
    CHECK(j["kept"].size() == 3);
    CHECK(run("reduce osc_spin sl123") == 0);
    CHECK(run("reduce schwarz nosuch") == 2);
}

TEST_CASE("integrate the reduced Schwarz system on the boundary orbit") {
    const auto out = scratch() / "boundary.csv";
    CHECK(run("integrate schwarz --scheme y2 --x0 2,1 --tmax 3 --dt-out 0.01 --invariants h --out " + out.string()) == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x1,x2,inv_h");
    int rows = 0;
    double worst = 0.0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        double v[4];
        for (double& x : v) {
            std::getline(ss, cell, ',');
            x = std::stod(cell);
        }
        worst = std::max({worst, std::abs(v[1] - (1.0 + std::exp(-v[0]))), std::abs(v[2] - 1.0)});
        ++rows;
    }
    CHECK(rows == 301);
    CHECK(worst < 1e-6);
}

TEST_CASE("leaving the chart gives exit code 3 and a partial trajectory") {
    const auto out = scratch() / "exit.csv";
    CHECK(run("integrate schwarz --x0 0,1,2 --tmax 3 --out " + out.string()) == 3);
    const auto rep = lastReport();
    CHECK(rep["results"]["exit_time"].get<double>() == doctest::Approx(std::log(3.0)).epsilon(1e-3));
    CHECK(fs::file_size(out) > 0);
    CHECK(run("integrate schwarz --x0 0,1 --tmax 1 --out " + out.string()) == 2);
    CHECK(run("integrate schwarz --invariants h --out " + out.string()) == 2);
}

TEST_CASE("coefficients from a file") {
    const auto coeffs = scratch() / "coeffs.json";
    {
        std::ofstream f(coeffs);
        f << R"({"b": [{"type": "constant", "c": 0.0}, {"type": "sin", "A": 0.5, "omega": 1.0, "phi": 0.0}, {"type": "constant", "c": 0.0}]})";
    }
    CHECK(run("integrate schwarz --coeffs " + coeffs.string() + " --out " + (scratch() / "c.csv").string()) == 0);
    {
        std::ofstream f(coeffs);
        f << R"({"b": [{"type": "constant", "c": 1.0}]})";
    }
    CHECK(run("integrate schwarz --coeffs " + coeffs.string()) == 2);
}

TEST_CASE("reconstruction and equilibria") {
    CHECK(run("reconstruct osc_spin") == 0);
    CHECK(run("reconstruct r8_volume") == 0);
    CHECK(lastReport()["results"]["annihilator_dim"] == 0);
    CHECK(run("reconstruct control5") == 1);
    CHECK(lastReport()["results"]["kernel_dim"] == 2);
    CHECK(run("reconstruct dbh") == 2);

    CHECK(run("equilibria schwarz --scheme y2") == 0);
    const auto eq = lastReport()["results"]["equilibria"];
    REQUIRE(eq.size() == 2);
    for (const auto& e : eq) {
        CHECK(e["converged"] == true);
        CHECK(std::abs(std::abs(e["point"][0].get<double>()) - 1.0) < 1e-12);
    }
    CHECK(run("equilibria control5") == 2);
}

TEST_CASE("golden checks") {
    const auto out = scratch() / "golden.json";
    CHECK(run("golden all --export " + out.string()) == 0);
    std::ifstream in(out);
    CHECK(nlohmann::json::parse(in).size() == 6);
    CHECK(run("golden nosuch") == 2);
    CHECK(run("--help") == 0);
    CHECK(run("nosuch") == 2);
}
