#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pptkit/dps.hpp"
#include "pptkit/linalg.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace pptkit;

namespace {

BipartiteState wrap(ComplexMatrix m, std::size_t da, std::size_t db) {
    BipartiteState s;
    s.matrix = std::move(m);
    s.dim_a = da;
    s.dim_b = db;
    return s;
}

BipartiteState family_state(std::size_t d, double a, std::vector<double> lambdas) {
    FamilyParams p;
    p.d = d;
    p.a = a;
    p.lambdas = std::move(lambdas);
    return make_state(p);
}

// p|Phi+><Phi+| + (1-p) I/4 on two qubits; NPT for p > 1/3
BipartiteState noisy_bell(double p) {
    ComplexMatrix m = max_entangled_projector(2);
    m *= Cx(p, 0.0);
    for (std::size_t i = 0; i < 4; ++i) m(i, i) += (1.0 - p) / 4.0;
    return wrap(std::move(m), 2, 2);
}

double real_overlap(const ComplexMatrix& w, const ComplexMatrix& rho) {
    return (w * rho).trace().real();
}

} // namespace

TEST_CASE("extension spec validation") {
    ExtensionSpec spec;
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.effective_cuts() == std::vector<std::size_t>{1, 2});

    spec.level = 1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec.level = 2;
    spec.cuts = {0};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.cuts = {3};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec.cuts = {2, 1, 2};
    CHECK(spec.effective_cuts() == std::vector<std::size_t>{1, 2});

    spec.with_ppt = false;
    spec.cuts = {};
    CHECK(spec.effective_cuts().empty());
}

TEST_CASE("hermitian operator basis is orthonormal and complete") {
    for (std::size_t dim : {2, 3, 4}) {
        const std::size_t count = hermitian_basis_size(dim);
        CHECK(count == dim * dim);
        std::vector<ComplexMatrix> gens;
        for (std::size_t alpha = 0; alpha < count; ++alpha) {
            ComplexMatrix g(dim, dim);
            hermitian_accumulate(g, dim, alpha, 1.0);
            CHECK(g.hermiticity_error() == 0.0);
            gens.push_back(std::move(g));
        }
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = a; b < count; ++b) {
                const double ip = (gens[a] * gens[b]).trace().real();
                CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) <= 1e-14);
            }

        testutil::Rng rng(17 + dim);
        const ComplexMatrix h = testutil::random_hermitian(dim, rng);
        const ComplexMatrix back = matrix_from_coordinates(coordinates_from_matrix(h), dim);
        CHECK((back - h).max_abs() <= 1e-13);
        for (std::size_t alpha = 0; alpha < count; ++alpha)
            CHECK(std::abs(hermitian_coordinate(h, alpha) -
                           (gens[alpha] * h).trace().real()) <= 1e-13);
    }
    ComplexMatrix g(3, 3);
    CHECK_THROWS_AS(hermitian_accumulate(g, 3, 9, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(hermitian_coordinate(g, 9), std::invalid_argument);
}

TEST_CASE("extension problem dimensions") {
    const ExtensionSpec spec;

    auto as3 = build_extension_assembly(family_state(3, 0.4, {0.5, 0.5}), spec);
    CHECK(as3.sym_dim == 6);
    CHECK(as3.ext_dim == 18);
    CHECK(as3.lift_dim == 27);
    CHECK(as3.constraints.rows() == 81);
    CHECK(as3.constraints.cols() == 324);
    CHECK(as3.null_basis.cols() == 243); // marginal map is surjective: 324 - 81
    CHECK(as3.lmi.n_vars == 244);
    REQUIRE(as3.lmi.blocks.size() == 3);
    CHECK(as3.lmi.blocks[0].size == 36);
    CHECK(as3.lmi.blocks[1].size == 54);
    CHECK(as3.lmi.blocks[2].size == 54);
    for (std::size_t i = 0; i + 1 < as3.lmi.n_vars; ++i) CHECK(as3.lmi.objective[i] == 0.0);
    CHECK(as3.lmi.objective.back() == 1.0);

    ExtensionSpec deep;
    deep.level = 3;
    auto as2 = build_extension_assembly(noisy_bell(0.5), deep);
    CHECK(as2.sym_dim == 4);
    CHECK(as2.ext_dim == 8);
    CHECK(as2.lift_dim == 16);
    CHECK(as2.constraints.rows() == 16);
    CHECK(as2.constraints.cols() == 64);
    CHECK(as2.null_basis.cols() == 48);
    CHECK(as2.lmi.blocks.size() == 4);

    const LmiProblem lmi = build_extension_problem(family_state(3, 0.4, {0.5, 0.5}), spec);
    CHECK(lmi.n_vars == 244);
    CHECK(lmi.blocks.size() == 3);

    CHECK_THROWS_AS(extension_from_variables(as3, std::vector<double>(10)),
                    std::invalid_argument);
}

TEST_CASE("analytic endpoint extension verifies exactly") {
    FamilyParams p;
    p.d = 3;
    p.a = 0.0;
    p.lambdas = {0.5, 0.5};
    const BipartiteState rho = make_state(p);

    for (std::size_t level : {2, 3}) {
        ExtensionSpec spec;
        spec.level = level;
        const ComplexMatrix sigma = separable_extension(p, level);
        const StructureReport rep = verify_extension(sigma, rho, spec, 1e-10);
        CHECK(rep.all_passed());
        CHECK(rep.checks.size() == 4 + level); // four shared checks + one per cut
        for (const auto& c : rep.checks) {
            INFO(c.name << " residual " << c.residual);
            CHECK(c.residual <= 1e-12);
        }
    }

    p.a = 0.5;
    CHECK_THROWS_AS(separable_extension(p, 2), std::invalid_argument);
}

TEST_CASE("verify_extension isolates the failing property") {
    FamilyParams p;
    p.d = 3;
    p.a = 0.0;
    p.lambdas = {0.5, 0.5};
    const BipartiteState rho = make_state(p);
    const ExtensionSpec spec;

    // wrong marginal: compress rho (x) I/3 instead of an actual extension
    {
        const BipartiteState ent = family_state(3, 0.5, {0.5, 0.5});
        ComplexMatrix third = ComplexMatrix::identity(3);
        third *= Cx(1.0 / 3.0, 0.0);
        const ComplexMatrix w = kron(ComplexMatrix::identity(3), sym_isometry(3, 2));
        const ComplexMatrix bad = w.adjoint() * kron(ent.matrix, third) * w;
        const StructureReport rep = verify_extension(bad, ent, spec, 1e-7);
        CHECK_FALSE(rep.all_passed());
        CHECK_FALSE(rep.check("marginal").passed);
        CHECK(rep.check("hermiticity").passed);
        CHECK(rep.check("psd").passed);
    }

    // a single diagonal bump leaves every class clean except the marginal
    {
        ComplexMatrix sigma = separable_extension(p, 2);
        sigma(0, 0) += 1e-3;
        const StructureReport rep = verify_extension(sigma, rho, spec, 1e-7);
        CHECK(rep.check("hermiticity").passed);
        CHECK(rep.check("psd").passed);
        CHECK(rep.check("permutation-invariance").passed);
        CHECK(rep.check("cut-psd-1").passed);
        CHECK(rep.check("cut-psd-2").passed);
        CHECK_FALSE(rep.check("marginal").passed);
        CHECK(rep.check("marginal").residual == doctest::Approx(1e-3).epsilon(1e-9));
    }

    CHECK_THROWS_AS(verify_extension(ComplexMatrix::identity(17), rho, spec, 1e-7),
                    std::invalid_argument);
}

TEST_CASE("maximally mixed two-qubit state extends") {
    ComplexMatrix mixed = ComplexMatrix::identity(4);
    mixed *= Cx(0.25, 0.0);
    const ExtensionResult r = run_dps(wrap(std::move(mixed), 2, 2), {});
    CHECK(r.status == ExtensionStatus::ExtensionFound);
    CHECK(r.solver_status == SolveStatus::Optimal);
    // the transpose over all lifted copies keeps the antisymmetric kernel of
    // the lifted operator, so the margin tops out at zero even here
    CHECK(std::abs(r.t_star) <= 1e-7);
    REQUIRE(r.extension.has_value());
    CHECK(r.verification.all_passed());
}

TEST_CASE("family endpoints extend, the interior point does not") {
    // a = 0: block-diagonal mixture of products, optimal value pinned at 0
    {
        const ExtensionResult r = run_dps(family_state(3, 0.0, {0.5, 0.5}), {});
        CHECK(r.status == ExtensionStatus::ExtensionFound);
        CHECK(std::abs(r.t_star) <= 1e-6);
        CHECK(r.verification.all_passed());
    }
    // a = 1: the classic separable endpoint
    {
        const ExtensionResult r = run_dps(family_state(3, 1.0, {0.3, 0.7}), {});
        CHECK(r.status == ExtensionStatus::ExtensionFound);
        CHECK(r.verification.all_passed());
    }
    // interior: certified entangled, and the certificate converts into a
    // witness that separates the state from every sampled product state
    {
        const BipartiteState rho = family_state(3, 0.5, {0.5, 0.5});
        const ExtensionResult r = run_dps(rho, {});
        REQUIRE(r.status == ExtensionStatus::NoExtension);
        CHECK(r.solver_status == SolveStatus::Optimal);
        CHECK(r.t_star < -1e-3);
        CHECK(r.t_star > -2e-3);
        REQUIRE_FALSE(r.dual_blocks.empty());

        const WitnessResult w = extract_witness(r, rho);
        CHECK(w.valid);
        CHECK(w.state_overlap < -1e-6);
        CHECK(w.min_product_value >= -1e-9);
        CHECK(w.samples == 10000);
        CHECK(w.w.hermiticity_error() <= 1e-13);
        CHECK(w.w.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(real_overlap(w.w, rho.matrix) == doctest::Approx(w.state_overlap).epsilon(1e-12));

        // the family's own product vectors are separable directions
        FamilyParams p;
        p.d = 3;
        p.a = 0.5;
        p.lambdas = {0.5, 0.5};
        for (std::size_t k = 1; k <= 3; ++k) {
            const ComplexMatrix psi = product_vector(p, k);
            Cx val(0.0, 0.0);
            for (std::size_t i = 0; i < 9; ++i)
                for (std::size_t j = 0; j < 9; ++j)
                    val += std::conj(psi(i, 0)) * w.w(i, j) * psi(j, 0);
            CHECK(val.real() >= -1e-9);
            CHECK(std::abs(val.imag()) <= 1e-12);
        }

        // same seed, same sample; the draw is part of the reported result
        const WitnessResult again = extract_witness(r, rho);
        CHECK(again.state_overlap == w.state_overlap);
        CHECK(again.min_product_value == w.min_product_value);

        CHECK_THROWS_AS(extract_witness(ExtensionResult{}, rho), std::invalid_argument);
    }
    // a pure entangled state fails as well
    {
        ComplexMatrix proj = max_entangled_projector(3);
        const ExtensionResult r = run_dps(wrap(std::move(proj), 3, 3), {});
        CHECK(r.status == ExtensionStatus::NoExtension);
        CHECK(r.t_star < -1e-2);
    }
}

TEST_CASE("levels are nested: failing at k - 1 persists at k") {
    for (double p : {0.4, 0.7, 1.0}) {
        const BipartiteState rho = noisy_bell(p);
        const ExtensionResult two = run_dps(rho, {});
        ExtensionSpec deep;
        deep.level = 3;
        const ExtensionResult three = run_dps(rho, deep);
        INFO("p = " << p);
        CHECK(two.status == ExtensionStatus::NoExtension);
        CHECK(three.status == ExtensionStatus::NoExtension);
        // the level-3 feasible set projects into the level-2 one
        CHECK(three.t_star <= two.t_star + 1e-6);
    }
}

TEST_CASE("local basis changes do not move the objective") {
    testutil::Rng rng(4243);
    {
        const BipartiteState rho = noisy_bell(0.7);
        const double base = run_dps(rho, {}).t_star;
        for (int draw = 0; draw < 2; ++draw) {
            const ComplexMatrix u =
                kron(testutil::random_unitary(2, rng), testutil::random_unitary(2, rng));
            const ExtensionResult r = run_dps(wrap(u * rho.matrix * u.adjoint(), 2, 2), {});
            CHECK(std::abs(r.t_star - base) <= 1e-6);
        }
    }
    {
        const BipartiteState rho = family_state(3, 0.5, {0.2, 0.9});
        const double base = run_dps(rho, {}).t_star;
        const ComplexMatrix u =
            kron(testutil::random_unitary(3, rng), testutil::random_unitary(3, rng));
        const ExtensionResult r = run_dps(wrap(u * rho.matrix * u.adjoint(), 3, 3), {});
        CHECK(std::abs(r.t_star - base) <= 1e-6);
    }
}

TEST_CASE("escalation retries once after a pass") {
    ComplexMatrix mixed = ComplexMatrix::identity(4);
    mixed *= Cx(0.25, 0.0);
    const EscalationResult up = run_dps_escalating(wrap(std::move(mixed), 2, 2), {});
    CHECK(up.escalated);
    CHECK(up.decided_level == 3);
    CHECK(up.result.status == ExtensionStatus::ExtensionFound);
    CHECK(up.result.spec.level == 3);

    const EscalationResult flat = run_dps_escalating(noisy_bell(0.8), {});
    CHECK_FALSE(flat.escalated);
    CHECK(flat.decided_level == 2);
    CHECK(flat.result.status == ExtensionStatus::NoExtension);
}
