/*
 * Python surface over the library.  Matrices cross the boundary as 2-D
 * complex numpy arrays; verdicts, reports, and solver results come back
 * as plain dicts so downstream code needs no wrapper types.
 */

#include "pptkit/criteria.hpp"
#include "pptkit/dps.hpp"
#include "pptkit/scan.hpp"
#include "pptkit/states.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

using namespace pptkit;

using InArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexMatrix matrix_from(const InArray& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D complex array");
    ComplexMatrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    auto r = arr.unchecked<2>();
    for (py::ssize_t i = 0; i < arr.shape(0); ++i)
        for (py::ssize_t j = 0; j < arr.shape(1); ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = r(i, j);
    return m;
}

py::array_t<std::complex<double>> array_from(const ComplexMatrix& m) {
    py::array_t<std::complex<double>> arr({m.rows(), m.cols()});
    auto w = arr.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            w(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = m(i, j);
    return arr;
}

FamilyParams make_params(std::size_t d, double a, const std::vector<double>& lambdas) {
    FamilyParams p;
    p.d = d;
    p.a = a;
    p.lambdas = lambdas;
    p.validate();
    return p;
}

BipartiteState state_from(const InArray& arr, std::size_t dim_a, std::size_t dim_b) {
    BipartiteState s;
    s.matrix = matrix_from(arr);
    s.dim_a = dim_a;
    s.dim_b = dim_b;
    if (s.matrix.rows() != dim_a * dim_b || s.matrix.cols() != dim_a * dim_b)
        throw std::invalid_argument("matrix shape does not match dim_a * dim_b");
    return s;
}

py::dict dict_from(const Verdict& v) {
    py::dict d;
    d["criterion"] = v.criterion;
    d["outcome"] = to_string(v.outcome);
    d["evidence"] = v.evidence;
    d["tol"] = v.tol;
    return d;
}

py::dict dict_from_dps(const ExtensionResult& r, std::size_t level, bool escalated) {
    py::dict d;
    d["status"] = to_string(r.status);
    d["t_star"] = r.t_star;
    d["level"] = level;
    d["escalated"] = escalated;
    d["iterations"] = r.iterations;
    if (!r.diagnostics.empty()) d["diagnostics"] = r.diagnostics;
    return d;
}

// level 2 follows the default policy (retry once at level 3 when an
// extension is found); an explicit deeper level runs as requested
ExtensionResult run_policy(const BipartiteState& rho, std::size_t level, bool escalate,
                           std::size_t& decided, bool& escalated) {
    ExtensionSpec spec;
    spec.level = level;
    spec.validate();
    decided = level;
    escalated = false;
    if (escalate && level == 2) {
        const EscalationResult e = run_dps_escalating(rho, spec);
        decided = e.decided_level;
        escalated = e.escalated;
        return e.result;
    }
    return run_dps(rho, spec);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "circulant PPT state family: construction, separability criteria, "
              "symmetric-extension SDP, witness extraction, parameter scans";

    // ── family construction ──────────────────────────────────────────────
    m.def(
        "state",
        [](std::size_t d, double a, const std::vector<double>& lambdas) {
            return array_from(make_state(make_params(d, a, lambdas)).matrix);
        },
        py::arg("d"), py::arg("a"), py::arg("lambdas"),
        "density matrix of the family state as a d^2 x d^2 complex array");
    m.def(
        "normalization",
        [](std::size_t d, double a, const std::vector<double>& lambdas) {
            return normalization(make_params(d, a, lambdas));
        },
        py::arg("d"), py::arg("a"), py::arg("lambdas"));
    m.def(
        "product_vector",
        [](std::size_t d, double a, const std::vector<double>& lambdas, std::size_t k) {
            return array_from(product_vector(make_params(d, a, lambdas), k));
        },
        py::arg("d"), py::arg("a"), py::arg("lambdas"), py::arg("k"),
        "k-th separable direction |k>(x)(...), 1-based k, as a column vector");

    // ── separability criteria ────────────────────────────────────────────
    m.def(
        "check_ppt",
        [](std::size_t d, double a, const std::vector<double>& lambdas) {
            return dict_from(ppt_check(make_state(make_params(d, a, lambdas))));
        },
        py::arg("d"), py::arg("a"), py::arg("lambdas"));
    m.def(
        "check_realignment",
        [](std::size_t d, double a, const std::vector<double>& lambdas) {
            return dict_from(realignment_check(make_state(make_params(d, a, lambdas))));
        },
        py::arg("d"), py::arg("a"), py::arg("lambdas"));
    m.def(
        "ppt_check",
        [](const InArray& matrix, std::size_t dim_a, std::size_t dim_b) {
            return dict_from(ppt_check(state_from(matrix, dim_a, dim_b)));
        },
        py::arg("matrix"), py::arg("dim_a"), py::arg("dim_b"),
        "partial-transpose criterion for an arbitrary bipartite state");
    m.def(
        "realignment_check",
        [](const InArray& matrix, std::size_t dim_a, std::size_t dim_b) {
            return dict_from(realignment_check(state_from(matrix, dim_a, dim_b)));
        },
        py::arg("matrix"), py::arg("dim_a"), py::arg("dim_b"),
        "realignment criterion for an arbitrary bipartite state");
    m.def(
        "structure_report",
        [](std::size_t d, double a, const std::vector<double>& lambdas) {
            const StructureReport rep = structure_check(make_params(d, a, lambdas));
            py::list out;
            for (const StructureCheck& c : rep.checks) {
                py::dict e;
                e["name"] = c.name;
                e["passed"] = c.passed;
                e["residual"] = c.residual;
                out.append(e);
            }
            return out;
        },
        py::arg("d"), py::arg("a"), py::arg("lambdas"),
        "block-structure verification of the family state");

    // ── symmetric-extension hierarchy ────────────────────────────────────
    m.def(
        "run_dps",
        [](std::size_t d, double a, const std::vector<double>& lambdas, std::size_t level,
           bool escalate) {
            const BipartiteState rho = make_state(make_params(d, a, lambdas));
            std::size_t decided = level;
            bool escalated = false;
            ExtensionResult r;
            {
                py::gil_scoped_release release;
                r = run_policy(rho, level, escalate, decided, escalated);
            }
            return dict_from_dps(r, decided, escalated);
        },
        py::arg("d"), py::arg("a"), py::arg("lambdas"), py::arg("level") = 2,
        py::arg("escalate") = true,
        "symmetric-extension feasibility for a family state; NoExtension "
        "certifies entanglement");
    m.def(
        "run_dps_state",
        [](const InArray& matrix, std::size_t dim_a, std::size_t dim_b, std::size_t level,
           bool escalate) {
            const BipartiteState rho = state_from(matrix, dim_a, dim_b);
            std::size_t decided = level;
            bool escalated = false;
            ExtensionResult r;
            {
                py::gil_scoped_release release;
                r = run_policy(rho, level, escalate, decided, escalated);
            }
            return dict_from_dps(r, decided, escalated);
        },
        py::arg("matrix"), py::arg("dim_a"), py::arg("dim_b"), py::arg("level") = 2,
        py::arg("escalate") = true);
    m.def(
        "witness",
        [](std::size_t d, double a, const std::vector<double>& lambdas, std::size_t level,
           std::uint64_t seed) {
            const BipartiteState rho = make_state(make_params(d, a, lambdas));
            std::size_t decided = level;
            bool escalated = false;
            ExtensionResult r;
            WitnessResult w;
            {
                py::gil_scoped_release release;
                r = run_policy(rho, level, true, decided, escalated);
                if (r.status != ExtensionStatus::NoExtension)
                    throw std::runtime_error(std::string("no entanglement certificate (") +
                                             to_string(r.status) + ")");
                w = extract_witness(r, rho, seed);
            }
            py::dict out;
            out["matrix"] = array_from(w.w);
            out["state_overlap"] = w.state_overlap;
            out["min_product_value"] = w.min_product_value;
            out["samples"] = w.samples;
            out["valid"] = w.valid;
            out["t_star"] = r.t_star;
            out["level"] = decided;
            return out;
        },
        py::arg("d"), py::arg("a"), py::arg("lambdas"), py::arg("level") = 2,
        py::arg("seed") = std::uint64_t{1234567},
        "entanglement witness from the dual certificate; trace(W rho) < 0 and "
        "trace(W sigma) >= -1e-9 on sampled product states");

    // ── parameter scans ──────────────────────────────────────────────────
    m.def(
        "scan",
        [](std::size_t d, double a, const std::string& criterion, std::size_t grid,
           const std::vector<std::vector<double>>& lambda_list, std::size_t level,
           std::size_t workers) {
            ScanSpec spec;
            spec.d = d;
            spec.a = a;
            spec.criterion = criterion;
            spec.grid = grid;
            spec.lambda_list = lambda_list;
            spec.dps.level = level;
            spec.workers = workers;
            ScanResult result;
            {
                py::gil_scoped_release release;
                result = run_scan(spec);
            }
            py::list rows;
            for (const ScanRow& row : result.rows) {
                py::dict e;
                e["lambdas"] = row.lambdas;
                e["evidence"] = row.evidence;
                e["detected"] = row.detected;
                e["status"] = row.status;
                rows.append(e);
            }
            py::dict out;
            out["rows"] = rows;
            out["csv"] = result.csv();
            return out;
        },
        py::arg("d"), py::arg("a"), py::arg("criterion"), py::arg("grid") = 11,
        py::arg("lambda_list") = std::vector<std::vector<double>>{}, py::arg("level") = 2,
        py::arg("workers") = 0,
        "evaluate one criterion over the lambda grid; rows are index-ordered "
        "and worker-count independent");

    // ── operator primitives ──────────────────────────────────────────────
    m.def(
        "partial_transpose",
        [](const InArray& matrix, std::size_t dim_a, std::size_t dim_b) {
            return array_from(partial_transpose(matrix_from(matrix), dim_a, dim_b));
        },
        py::arg("matrix"), py::arg("dim_a"), py::arg("dim_b"),
        "transpose the B factor");
    m.def(
        "realign",
        [](const InArray& matrix, std::size_t dim_a, std::size_t dim_b) {
            return array_from(realign(matrix_from(matrix), dim_a, dim_b));
        },
        py::arg("matrix"), py::arg("dim_a"), py::arg("dim_b"),
        "reshuffle <ik|R|jl> = <ij|rho|kl>");
    m.def(
        "trace_norm",
        [](const InArray& matrix) { return trace_norm(matrix_from(matrix)); },
        py::arg("matrix"));
    m.def(
        "min_eigenvalue",
        [](const InArray& matrix) { return min_eigenvalue(matrix_from(matrix)); },
        py::arg("matrix"));
    m.def(
        "hermitian_eigenvalues",
        [](const InArray& matrix) { return hermitian_eigenvalues(matrix_from(matrix)); },
        py::arg("matrix"), "ascending eigenvalues of a Hermitian matrix");
    m.def(
        "singular_values",
        [](const InArray& matrix) { return singular_values(matrix_from(matrix)); },
        py::arg("matrix"), "non-increasing singular values");

    m.attr("__version__") = "0.1.0";
}
