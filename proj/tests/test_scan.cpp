#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pptkit/scan.hpp"

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

using namespace pptkit;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("inclusive unit-interval grid") {
    const std::vector<double> g = linspace01(5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g[1] == 0.25);
    CHECK(g[2] == 0.5);
    CHECK(g.back() == 1.0);
}

TEST_CASE("scan spec validation") {
    ScanSpec spec;
    CHECK_NOTHROW(spec.validate());

    spec.a = 1.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.a = 0.5;

    spec.criterion = "negativity";
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.criterion = "ppt";

    spec.grid = 1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.grid = 2;

    spec.d = 4; // needs an explicit list
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.lambda_list = {{0.1, 0.2}}; // wrong length for d = 4
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.lambda_list = {{0.1, 0.2, 1.3}}; // out of range
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.lambda_list = {{0.1, 0.2, 0.3}};
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("realignment scan reproduces the corner landscape") {
    ScanSpec spec;
    spec.d = 3;
    spec.a = 0.8;
    spec.criterion = "realign";
    spec.grid = 5;
    spec.workers = 1;

    const ScanResult r = run_scan(spec);
    REQUIRE(r.rows.size() == 25);

    // lexicographic order in grid indices, lambda2 fastest
    CHECK(r.rows[0].lambdas == std::vector<double>{0.0, 0.0});
    CHECK(r.rows[1].lambdas == std::vector<double>{0.0, 0.25});
    CHECK(r.rows[5].lambdas == std::vector<double>{0.25, 0.0});
    CHECK(r.rows[24].lambdas == std::vector<double>{1.0, 1.0});

    auto row_at = [&](double l1, double l2) -> const ScanRow& {
        for (const ScanRow& row : r.rows)
            if (row.lambdas[0] == l1 && row.lambdas[1] == l2) return row;
        throw std::logic_error("row not found");
    };
    CHECK(row_at(0.0, 0.0).detected);
    CHECK(row_at(0.0, 1.0).detected);
    CHECK(row_at(1.0, 0.0).detected);
    CHECK(row_at(1.0, 1.0).detected);
    CHECK_FALSE(row_at(0.5, 0.5).detected);
    for (const ScanRow& row : r.rows) {
        CHECK(row.status == "ok");
        CHECK(row.evidence > 0.0); // the raw trace norm, not a binary mask
    }

    const auto lines = lines_of(r.csv());
    REQUIRE(lines.size() == 26);
    CHECK(lines[0] == "lambda1,lambda2,evidence,detected,status");
    CHECK(lines[1].substr(0, 4) == "0,0,");
    CHECK(lines[7].substr(0, 10) == "0.25,0.25,");

    // byte-identical output no matter how many workers ran the grid
    ScanSpec parallel = spec;
    parallel.workers = 3;
    CHECK(run_scan(parallel).csv() == r.csv());
}

TEST_CASE("ppt scan never fires on the family") {
    ScanSpec spec;
    spec.d = 3;
    spec.a = 0.8;
    spec.criterion = "ppt";
    spec.grid = 3;
    spec.workers = 2;
    const ScanResult r = run_scan(spec);
    REQUIRE(r.rows.size() == 9);
    for (const ScanRow& row : r.rows) {
        CHECK_FALSE(row.detected);
        CHECK(row.evidence >= -1e-10);
        CHECK(row.status == "ok");
    }
}

TEST_CASE("explicit lambda lists drive higher dimensions") {
    ScanSpec spec;
    spec.d = 4;
    spec.a = 0.6;
    spec.criterion = "realign";
    spec.lambda_list = {{1.0, 1.0, 1.0}, {0.5, 0.25, 0.75}};
    spec.workers = 1;
    const ScanResult r = run_scan(spec);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].lambdas == spec.lambda_list[0]);
    CHECK(r.rows[1].lambdas == spec.lambda_list[1]);
    const auto lines = lines_of(r.csv());
    CHECK(lines[0] == "lambda1,lambda2,lambda3,evidence,detected,status");
}

TEST_CASE("dps scan detects every lambda corner") {
    ScanSpec spec;
    spec.d = 3;
    spec.a = 0.5;
    spec.criterion = "dps";
    spec.grid = 2;
    spec.workers = 4;
    const ScanResult r = run_scan(spec);
    REQUIRE(r.rows.size() == 4);
    for (const ScanRow& row : r.rows) {
        CHECK(row.detected);
        CHECK(row.evidence < -1e-3);
        CHECK(row.status == "ok"); // level 2 decided, no escalation
    }
}

TEST_CASE("worker count comes from the environment when unset") {
    ScanSpec spec;
    spec.d = 3;
    spec.a = 0.8;
    spec.criterion = "realign";
    spec.grid = 2;

    setenv("PPTKIT_WORKERS", "2", 1);
    const ScanResult r = run_scan(spec);
    CHECK(r.rows.size() == 4);

    setenv("PPTKIT_WORKERS", "zero", 1);
    CHECK_THROWS_AS(run_scan(spec), std::invalid_argument);
    unsetenv("PPTKIT_WORKERS");
}
