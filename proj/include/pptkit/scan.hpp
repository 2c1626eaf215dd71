#pragma once

/*
 * Parameter-space scans over the lambda coordinates of the family at fixed
 * (d, a): evaluate one separability criterion per grid point and collect a
 * CSV-ready table.  For d = 3 the grid is an inclusive n x n linspace over
 * (lambda_1, lambda_2); for d > 3 the caller supplies the lambda vectors
 * explicitly.  Rows are ordered lexicographically in the grid indices (or
 * in list order) no matter how many workers evaluate them, so the output
 * is byte-identical across worker counts.
 */

#include "pptkit/criteria.hpp"
#include "pptkit/dps.hpp"

#include <string>
#include <vector>

namespace pptkit {

struct ScanSpec {
    std::size_t d = 3;
    double a = 0.0;
    std::string criterion = "realign"; // realign | ppt | dps
    std::size_t grid = 11;             // points per lambda axis when d == 3
    // explicit lambda vectors (each of size d-1); required for d > 3,
    // optional override of the grid for d == 3
    std::vector<std::vector<double>> lambda_list;
    ExtensionSpec dps;      // level/cuts when criterion == "dps"
    std::size_t workers = 0; // 0: PPTKIT_WORKERS env var, else hardware

    void validate() const; // throws std::invalid_argument
};

struct ScanRow {
    std::vector<double> lambdas;
    double evidence = 0.0; // trace norm, min eigenvalue, or t*
    bool detected = false;
    // "ok", "escalated-level-<k>" for dps runs decided above the default
    // level, or "failed: <reason>"; failures never abort the scan
    std::string status = "ok";
};

struct ScanResult {
    ScanSpec spec;
    std::vector<ScanRow> rows;

    // header lambda1,...,lambda<d-1>,evidence,detected,status; doubles in
    // shortest round-trip decimal form
    std::string csv() const;
};

// i/(n-1) for i = 0..n-1; endpoints exact
std::vector<double> linspace01(std::size_t n);

ScanResult run_scan(const ScanSpec& spec);

} // namespace pptkit
