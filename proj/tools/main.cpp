/*
 * Command-line surface over the library: construct family states, run
 * single-point separability checks, scan the lambda square, and export
 * entanglement witnesses.  Exit codes: 0 success, 2 invalid parameters,
 * 3 solver failure (or no certificate obtainable), 1 I/O failure.
 */

#include "pptkit/json_io.hpp"
#include "pptkit/scan.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace pptkit;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

struct PointArgs {
    std::size_t d = 3;
    double a = 0.0;
    std::vector<double> lambdas;

    FamilyParams params() const {
        FamilyParams p;
        p.d = d;
        p.a = a;
        p.lambdas = lambdas;
        p.validate();
        return p;
    }
};

// shared --d/--a/--lambdas options
void add_point_options(CLI::App* cmd, PointArgs& args) {
    cmd->add_option("--d", args.d, "local dimension (>= 3)")->required();
    cmd->add_option("--a", args.a, "family parameter a in [0,1]")->required();
    cmd->add_option("--lambdas", args.lambdas, "d-1 lambda values in [0,1]")
        ->required()
        ->delimiter(',');
}

int cmd_state(const PointArgs& args, const std::string& out) {
    const BipartiteState rho = make_state(args.params());
    save_json(out, json(rho));
    return kExitOk;
}

int cmd_check(const PointArgs& args, const std::string& criterion, std::size_t level,
              bool level_given, const std::vector<std::size_t>& cuts) {
    const BipartiteState rho = make_state(args.params());

    Verdict v;
    if (criterion == "ppt") {
        v = ppt_check(rho);
    } else if (criterion == "realign") {
        v = realignment_check(rho);
    } else {
        ExtensionSpec spec;
        spec.level = level;
        spec.cuts = cuts;
        spec.validate();

        ExtensionResult r;
        std::size_t decided = spec.level;
        if (!level_given && spec.level == 2) {
            const EscalationResult e = run_dps_escalating(rho, spec);
            r = e.result;
            decided = e.decided_level;
            if (e.escalated)
                std::cerr << "level 2 found an extension; escalated to level " << decided
                          << "\n";
        } else {
            r = run_dps(rho, spec);
        }
        if (r.status == ExtensionStatus::NumericalFailure) {
            std::cerr << "dps check failed: " << r.diagnostics << "\n";
            return kExitSolver;
        }
        v.criterion = "dps-level-" + std::to_string(decided);
        v.outcome = r.status == ExtensionStatus::NoExtension ? Outcome::Entangled
                                                             : Outcome::SeparableConsistent;
        v.evidence = r.t_star;
        v.tol = kEntangledThreshold;
    }

    std::cout << json(v).dump(2) << "\n";
    return kExitOk;
}

int cmd_scan(const PointArgs& args, const std::string& criterion, std::size_t grid,
             const std::string& lambda_list_path, std::size_t level,
             const std::vector<std::size_t>& cuts, const std::string& out) {
    ScanSpec spec;
    spec.d = args.d;
    spec.a = args.a;
    spec.criterion = criterion;
    spec.grid = grid;
    spec.dps.level = level;
    spec.dps.cuts = cuts;
    if (!lambda_list_path.empty())
        spec.lambda_list = load_json(lambda_list_path).get<std::vector<std::vector<double>>>();

    const ScanResult result = run_scan(spec);

    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot open " + out + " for writing");
    file << result.csv();
    if (!file) throw std::runtime_error("write to " + out + " failed");
    return kExitOk;
}

int cmd_witness(const PointArgs& args, std::size_t level, bool level_given,
                std::uint64_t seed, const std::string& out) {
    const FamilyParams p = args.params();
    const BipartiteState rho = make_state(p);

    ExtensionSpec spec;
    spec.level = level;
    spec.validate();

    ExtensionResult r;
    std::size_t decided = spec.level;
    if (!level_given && spec.level == 2) {
        const EscalationResult e = run_dps_escalating(rho, spec);
        r = e.result;
        decided = e.decided_level;
    } else {
        r = run_dps(rho, spec);
    }
    if (r.status != ExtensionStatus::NoExtension) {
        std::cerr << "no entanglement certificate at level " << decided << " ("
                  << to_string(r.status) << "); cannot extract a witness\n";
        return kExitSolver;
    }

    const WitnessResult w = extract_witness(r, rho, seed);
    if (!w.valid) {
        std::cerr << "dual certificate failed witness validation (overlap "
                  << w.state_overlap << ", min product value " << w.min_product_value
                  << ")\n";
        return kExitSolver;
    }

    json j;
    j["params"] = p;
    j["level"] = decided;
    j["t_star"] = r.t_star;
    j["seed"] = seed;
    j["witness"] = w;
    save_json(out, j);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"circulant PPT state family: construction, separability checks, "
                 "parameter scans, witness export"};
    app.require_subcommand(1);

    PointArgs point;
    std::string out;
    std::string criterion;
    std::size_t level = 2;
    std::vector<std::size_t> cuts;
    std::size_t grid = 11;
    std::string lambda_list_path;
    std::uint64_t seed = 1234567;

    CLI::App* state = app.add_subcommand("state", "construct a state and write it as JSON");
    add_point_options(state, point);
    state->add_option("--out", out, "output JSON file")->required();

    CLI::App* check = app.add_subcommand("check", "run one separability criterion");
    check->add_option("criterion", criterion, "ppt | realign | dps")
        ->required()
        ->check(CLI::IsMember({"ppt", "realign", "dps"}));
    add_point_options(check, point);
    CLI::Option* check_level =
        check->add_option("--level", level, "extension hierarchy level (dps only)");
    check->add_option("--cuts", cuts, "transposed-copy counts (dps only)")->delimiter(',');

    CLI::App* scan = app.add_subcommand("scan", "evaluate a criterion over the lambda grid");
    scan->add_option("--d", point.d, "local dimension (>= 3)")->required();
    scan->add_option("--a", point.a, "family parameter a in [0,1]")->required();
    scan->add_option("--criterion", criterion, "realign | ppt | dps")->required();
    scan->add_option("--grid", grid, "points per lambda axis (d = 3)");
    scan->add_option("--lambda-list", lambda_list_path,
                     "JSON file with explicit lambda vectors (required for d > 3)");
    scan->add_option("--level", level, "extension hierarchy level (dps only)");
    scan->add_option("--cuts", cuts, "transposed-copy counts (dps only)")->delimiter(',');
    scan->add_option("--out", out, "output CSV file")->required();

    CLI::App* witness =
        app.add_subcommand("witness", "extract an entanglement witness and write it as JSON");
    add_point_options(witness, point);
    CLI::Option* witness_level =
        witness->add_option("--level", level, "extension hierarchy level");
    witness->add_option("--seed", seed, "seed for the product-state sampler");
    witness->add_option("--out", out, "output JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (state->parsed()) return cmd_state(point, out);
        if (check->parsed())
            return cmd_check(point, criterion, level, check_level->count() > 0, cuts);
        if (scan->parsed())
            return cmd_scan(point, criterion, grid, lambda_list_path, level, cuts, out);
        return cmd_witness(point, level, witness_level->count() > 0, seed, out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const pptkit::numerical_error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
