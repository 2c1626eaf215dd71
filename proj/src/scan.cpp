#include "pptkit/scan.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace pptkit {

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::size_t decide_workers(const ScanSpec& spec, std::size_t rows) {
    std::size_t w = spec.workers;
    if (w == 0) {
        if (const char* env = std::getenv("PPTKIT_WORKERS")) {
            char* end = nullptr;
            const long parsed = std::strtol(env, &end, 10);
            if (end == env || *end != '\0' || parsed < 1)
                throw std::invalid_argument("PPTKIT_WORKERS must be a positive integer");
            w = static_cast<std::size_t>(parsed);
        } else {
            w = std::max<std::size_t>(1, std::thread::hardware_concurrency());
        }
    }
    return std::min(w, std::max<std::size_t>(rows, 1));
}

ScanRow evaluate(const ScanSpec& spec, std::vector<double> lambdas) {
    ScanRow row;
    row.lambdas = std::move(lambdas);
    FamilyParams p;
    p.d = spec.d;
    p.a = spec.a;
    p.lambdas = row.lambdas;
    try {
        const BipartiteState state = make_state(p);
        if (spec.criterion == "realign") {
            const Verdict v = realignment_check(state);
            row.evidence = v.evidence;
            row.detected = v.outcome == Outcome::Entangled;
        } else if (spec.criterion == "ppt") {
            const Verdict v = ppt_check(state);
            row.evidence = v.evidence;
            row.detected = v.outcome == Outcome::Entangled;
        } else {
            // default level gets the one-step escalation; an explicit
            // deeper level runs as requested
            ExtensionResult r;
            if (spec.dps.level == 2) {
                const EscalationResult e = run_dps_escalating(state, spec.dps);
                r = e.result;
                if (e.escalated)
                    row.status = "escalated-level-" + std::to_string(e.decided_level);
            } else {
                r = run_dps(state, spec.dps);
            }
            row.evidence = r.t_star;
            row.detected = r.status == ExtensionStatus::NoExtension;
            if (r.status == ExtensionStatus::NumericalFailure)
                row.status = "failed: " + r.diagnostics;
        }
    } catch (const std::exception& e) {
        row.status = std::string("failed: ") + e.what();
        row.detected = false;
    }
    return row;
}

} // namespace

void ScanSpec::validate() const {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("scan: a must lie in [0,1]");
    if (criterion != "realign" && criterion != "ppt" && criterion != "dps")
        throw std::invalid_argument("scan: criterion must be realign, ppt, or dps");
    if (criterion == "dps") dps.validate();
    if (lambda_list.empty()) {
        if (d != 3)
            throw std::invalid_argument("scan: d > 3 needs an explicit lambda list");
        if (grid < 2) throw std::invalid_argument("scan: grid must be at least 2");
    } else {
        for (const auto& l : lambda_list) {
            if (l.size() + 1 != d)
                throw std::invalid_argument("scan: lambda vectors must have d-1 entries");
            for (double v : l)
                if (v < 0.0 || v > 1.0)
                    throw std::invalid_argument("scan: lambda values must lie in [0,1]");
        }
    }
}

std::vector<double> linspace01(std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

ScanResult run_scan(const ScanSpec& spec) {
    spec.validate();

    std::vector<std::vector<double>> points = spec.lambda_list;
    if (points.empty()) {
        const std::vector<double> axis = linspace01(spec.grid);
        points.reserve(spec.grid * spec.grid);
        for (double l1 : axis)
            for (double l2 : axis) points.push_back({l1, l2});
    }

    ScanResult result;
    result.spec = spec;
    result.rows.resize(points.size());

    const std::size_t workers = decide_workers(spec, points.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            result.rows[i] = evaluate(spec, std::move(points[i]));
        return result;
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            result.rows[i] = evaluate(spec, std::move(points[i]));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return result;
}

std::string ScanResult::csv() const {
    std::string out;
    for (std::size_t k = 1; k < spec.d; ++k) {
        out += "lambda" + std::to_string(k);
        out += ',';
    }
    out += "evidence,detected,status\n";
    for (const ScanRow& row : rows) {
        for (double l : row.lambdas) {
            out += shortest(l);
            out += ',';
        }
        out += shortest(row.evidence);
        out += ',';
        out += row.detected ? "true" : "false";
        out += ',';
        for (char c : row.status) out += c == ',' ? ';' : c; // keep the CSV parseable
        out += '\n';
    }
    return out;
}

} // namespace pptkit
