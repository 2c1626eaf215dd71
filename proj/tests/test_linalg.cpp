#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pptkit/linalg.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace pptkit;
using testutil::Rng;

namespace {

// independent oracle: entrywise quadruple loop, no shortcuts
ComplexMatrix kron_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j)
            out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    return out;
}

} // namespace

TEST_CASE("tensor index flatten/unflatten round trip") {
    TensorIndex idx({3, 4, 2});
    CHECK(idx.total() == 24);
    for (std::size_t f = 0; f < idx.total(); ++f) CHECK(idx.flatten(idx.unflatten(f)) == f);
    CHECK(idx.flatten({2, 3, 1}) == 23);
    CHECK_THROWS_AS(idx.flatten({3, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS((TensorIndex{{2, 0}}), std::invalid_argument);
}

TEST_CASE("kron: known 4x4 and shape") {
    ComplexMatrix i2 = ComplexMatrix::identity(2);
    ComplexMatrix sx(2, 2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    ComplexMatrix k = kron(i2, sx);
    CHECK(k.rows() == 4);
    // I2 (x) sigma_x = blockdiag(sigma_x, sigma_x)
    CHECK(k(0, 1) == Cx(1.0, 0.0));
    CHECK(k(1, 0) == Cx(1.0, 0.0));
    CHECK(k(2, 3) == Cx(1.0, 0.0));
    CHECK(k(3, 2) == Cx(1.0, 0.0));
    CHECK(k(0, 0) == Cx(0.0, 0.0));
    CHECK(k(0, 2) == Cx(0.0, 0.0));

    Rng rng(11);
    ComplexMatrix a = testutil::random_complex(2, 3, rng);
    ComplexMatrix b = testutil::random_complex(3, 2, rng);
    ComplexMatrix k2 = kron(a, b);
    CHECK(k2.rows() == 6);
    CHECK(k2.cols() == 6);
    CHECK(max_abs_diff(k2, kron_oracle(a, b)) == 0.0);
}

TEST_CASE("kron: associativity up to rounding of the entry products") {
    Rng rng(12);
    ComplexMatrix a = testutil::random_complex(2, 2, rng);
    ComplexMatrix b = testutil::random_complex(3, 2, rng);
    ComplexMatrix c = testutil::random_complex(2, 3, rng);
    CHECK(max_abs_diff(kron(a, kron(b, c)), kron(kron(a, b), c)) <= 1e-14);
}

TEST_CASE("hermitian_eigen: diagonal and 2x2 complex") {
    auto e = hermitian_eigen(testutil::diag({3.0, 1.0, 2.0}));
    REQUIRE(e.values.size() == 3);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.values[2] == doctest::Approx(3.0).epsilon(1e-14));
    // eigenvectors of a diagonal matrix are the basis vectors
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(e.vectors(2, 1)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(e.vectors(0, 2)) == doctest::Approx(1.0).epsilon(1e-14));

    ComplexMatrix m(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 2.0;
    m(0, 1) = Cx(0.0, 1.0);
    m(1, 0) = Cx(0.0, -1.0);
    auto e2 = hermitian_eigen(m);
    CHECK(e2.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e2.values[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("hermitian_eigen: reconstruction and orthonormality on random input") {
    Rng rng(21);
    for (int rep = 0; rep < 3; ++rep) {
        const std::size_t n = 12;
        ComplexMatrix a = testutil::random_hermitian(n, rng);
        auto e = hermitian_eigen(a);

        for (std::size_t k = 0; k + 1 < n; ++k) CHECK(e.values[k] <= e.values[k + 1]);

        ComplexMatrix lam(n, n);
        for (std::size_t k = 0; k < n; ++k) lam(k, k) = e.values[k];
        ComplexMatrix rec = e.vectors * lam * e.vectors.adjoint();
        CHECK(max_abs_diff(rec, a) <= 1e-10 * a.max_abs());

        ComplexMatrix gram = e.vectors.adjoint() * e.vectors;
        CHECK(max_abs_diff(gram, ComplexMatrix::identity(n)) <= 1e-12);
    }
}

TEST_CASE("hermitian_eigen: spectrum of A and A^T coincide") {
    Rng rng(22);
    ComplexMatrix a = testutil::random_hermitian(9, rng);
    auto ea = hermitian_eigenvalues(a);
    auto et = hermitian_eigenvalues(a.transpose());
    for (std::size_t k = 0; k < ea.size(); ++k) CHECK(std::abs(ea[k] - et[k]) <= 1e-10);
}

TEST_CASE("hermitian_eigen: rejects non-Hermitian input, handles edge sizes") {
    ComplexMatrix bad(2, 2);
    bad(0, 1) = 1.0; // (1,0) left at 0
    CHECK_THROWS_AS(hermitian_eigen(bad), std::invalid_argument);

    ComplexMatrix one(1, 1);
    one(0, 0) = -5.0;
    CHECK(hermitian_eigen(one).values[0] == -5.0);

    ComplexMatrix zero(4, 4);
    auto ez = hermitian_eigen(zero);
    for (double v : ez.values) CHECK(v == 0.0);
}

TEST_CASE("singular values: rectangular diagonal, unitary invariance") {
    ComplexMatrix m(2, 3);
    m(0, 0) = 3.0;
    m(1, 1) = -4.0;
    auto sv = singular_values(m);
    REQUIRE(sv.size() == 2);
    CHECK(sv[0] == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(sv[1] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(trace_norm(m) == doctest::Approx(7.0).epsilon(1e-13));

    CHECK(trace_norm(ComplexMatrix::identity(5)) == doctest::Approx(5.0).epsilon(1e-12));

    Rng rng(31);
    ComplexMatrix a = testutil::random_complex(6, 6, rng);
    ComplexMatrix u = testutil::random_unitary(6, rng);
    ComplexMatrix v = testutil::random_unitary(6, rng);
    CHECK(std::abs(trace_norm(u * a * v) - trace_norm(a)) <= 1e-10 * trace_norm(a));
}

TEST_CASE("singular values of a Hermitian matrix are |eigenvalues|") {
    Rng rng(32);
    ComplexMatrix a = testutil::random_hermitian(7, rng);
    auto sv = singular_values(a);
    auto ev = hermitian_eigenvalues(a);
    std::vector<double> abs_ev(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) abs_ev[i] = std::abs(ev[i]);
    std::sort(abs_ev.rbegin(), abs_ev.rend());
    for (std::size_t i = 0; i < sv.size(); ++i) CHECK(std::abs(sv[i] - abs_ev[i]) <= 1e-10);
}

TEST_CASE("partial transpose: maximally entangled state and involution") {
    const std::size_t d = 3;
    ComplexMatrix p = max_entangled_projector(d);
    ComplexMatrix pt = partial_transpose(p, d, d, Subsystem::B);
    CHECK(min_eigenvalue(pt) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

    // PT(PT(rho)) restores rho exactly (pure index shuffle)
    Rng rng(41);
    ComplexMatrix a = testutil::random_hermitian(12, rng); // 3 x 4
    ComplexMatrix twice = partial_transpose(partial_transpose(a, 3, 4), 3, 4);
    CHECK(max_abs_diff(twice, a) == 0.0);

    // transposing A then B equals full transpose
    ComplexMatrix both = partial_transpose(partial_transpose(a, 3, 4, Subsystem::A), 3, 4, Subsystem::B);
    CHECK(max_abs_diff(both, a.transpose()) == 0.0);
}

TEST_CASE("partial transpose acts on tensor factors") {
    Rng rng(42);
    ComplexMatrix a = testutil::random_complex(3, 3, rng);
    ComplexMatrix b = testutil::random_complex(4, 4, rng);
    CHECK(max_abs_diff(partial_transpose(kron(a, b), 3, 4, Subsystem::B),
                       kron(a, b.transpose())) == 0.0);
    CHECK(max_abs_diff(partial_transpose(kron(a, b), 3, 4, Subsystem::A),
                       kron(a.transpose(), b)) == 0.0);

    // multi-factor version agrees with the bipartite one
    ComplexMatrix m = testutil::random_complex(12, 12, rng);
    TensorIndex idx({3, 4});
    CHECK(max_abs_diff(partial_transpose_multi(m, idx, {1}),
                       partial_transpose(m, 3, 4, Subsystem::B)) == 0.0);
}

TEST_CASE("partial transpose/realign are exactly linear") {
    Rng rng(43);
    ComplexMatrix a = testutil::random_complex(9, 9, rng);
    ComplexMatrix b = testutil::random_complex(9, 9, rng);
    const Cx s(0.75, -0.25);
    CHECK(max_abs_diff(partial_transpose(a + s * b, 3, 3),
                       partial_transpose(a, 3, 3) + s * partial_transpose(b, 3, 3)) == 0.0);
    CHECK(max_abs_diff(realign(a + s * b, 3, 3), realign(a, 3, 3) + s * realign(b, 3, 3)) == 0.0);
}

TEST_CASE("partial trace: product operators and trace preservation") {
    Rng rng(51);
    for (std::size_t da = 2; da <= 4; ++da) {
        for (std::size_t db = 2; db <= 4; ++db) {
            ComplexMatrix a = testutil::random_complex(da, da, rng);
            ComplexMatrix b = testutil::random_complex(db, db, rng);
            ComplexMatrix ab = kron(a, b);
            TensorIndex idx({da, db});
            ComplexMatrix ta = partial_trace(ab, idx, {0});
            ComplexMatrix tb = partial_trace(ab, idx, {1});
            CHECK(max_abs_diff(ta, b.trace() * a) <= 1e-14 * ab.max_abs());
            CHECK(max_abs_diff(tb, a.trace() * b) <= 1e-14 * ab.max_abs());
            CHECK(std::abs(ta.trace() - ab.trace()) <= 1e-13 * std::abs(ab.trace()));
        }
    }

    // three factors, keep the outer two
    ComplexMatrix x = testutil::random_complex(2, 2, rng);
    ComplexMatrix y = testutil::random_complex(3, 3, rng);
    ComplexMatrix z = testutil::random_complex(2, 2, rng);
    ComplexMatrix xyz = kron(kron(x, y), z);
    ComplexMatrix kept = partial_trace(xyz, TensorIndex({2, 3, 2}), {0, 2});
    CHECK(max_abs_diff(kept, y.trace() * kron(x, z)) <= 1e-13 * xyz.max_abs());
}

TEST_CASE("realign: product states, round trip, maximally entangled state") {
    // |0><0| (x) |+><+| realigns to a rank-one matrix with trace norm 1
    ComplexMatrix p0(2, 2);
    p0(0, 0) = 1.0;
    ComplexMatrix pp(2, 2);
    pp(0, 0) = pp(0, 1) = pp(1, 0) = pp(1, 1) = 0.5;
    ComplexMatrix r = realign(kron(p0, pp), 2, 2);
    auto sv = singular_values(r);
    CHECK(sv[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sv[1] == 0.0);

    Rng rng(61);
    ComplexMatrix m = testutil::random_complex(12, 12, rng);
    CHECK(max_abs_diff(realign_inverse(realign(m, 3, 4), 3, 4), m) == 0.0);

    for (std::size_t d = 2; d <= 4; ++d) {
        CHECK(trace_norm(realign(max_entangled_projector(d), d, d)) ==
              doctest::Approx(static_cast<double>(d)).epsilon(1e-11));
    }
}

TEST_CASE("sym_isometry: isometry, projector, dimensions") {
    // d=2, k=2: V V^dag is the projector (I + SWAP)/2
    ComplexMatrix v = sym_isometry(2, 2);
    CHECK(v.rows() == 4);
    CHECK(v.cols() == 3);
    ComplexMatrix swap = permutation_operator(2, {1, 0});
    ComplexMatrix psym = 0.5 * (ComplexMatrix::identity(4) + swap);
    CHECK(max_abs_diff(v * v.adjoint(), psym) <= 1e-14);

    CHECK(sym_dimension(3, 2) == 6);
    CHECK(sym_isometry(3, 2).cols() == 6);
    CHECK(sym_dimension(3, 3) == 10);
    CHECK(sym_dimension(5, 1) == 5);

    // k=1 is the identity
    CHECK(max_abs_diff(sym_isometry(4, 1), ComplexMatrix::identity(4)) == 0.0);

    for (std::size_t d = 2; d <= 3; ++d)
        for (std::size_t k = 2; k <= 3; ++k) {
            ComplexMatrix w = sym_isometry(d, k);
            CHECK(max_abs_diff(w.adjoint() * w, ComplexMatrix::identity(w.cols())) <= 1e-13);
            ComplexMatrix proj = w * w.adjoint();
            CHECK(max_abs_diff(proj * proj, proj) <= 1e-12);
        }
}

TEST_CASE("permutation operators compose") {
    const std::size_t d = 3;
    std::vector<std::size_t> pi = {1, 2, 0};
    std::vector<std::size_t> sigma = {2, 0, 1};
    std::vector<std::size_t> comp(3); // pi after sigma
    for (std::size_t i = 0; i < 3; ++i) comp[i] = pi[sigma[i]];
    CHECK(max_abs_diff(permutation_operator(d, pi) * permutation_operator(d, sigma),
                       permutation_operator(d, comp)) == 0.0);
    CHECK(max_abs_diff(permutation_operator(d, {0, 1, 2}), ComplexMatrix::identity(27)) == 0.0);
    CHECK_THROWS_AS(permutation_operator(2, {0, 0}), std::invalid_argument);
}
