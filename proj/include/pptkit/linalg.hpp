#pragma once

/*
 * Operator primitives for finite-dimensional composite quantum systems:
 * Kronecker products, partial trace / partial transpose, the realignment
 * (reshuffle) map, symmetric-subspace isometries, copy-permutation
 * operators, and a self-contained Hermitian eigensolver.
 *
 * Eigendecomposition uses cyclic complex Jacobi rotations.  Singular
 * values are recovered from the Hermitian eigendecomposition of A^dag A.
 * Both are deterministic: fixed sweep order, no pivot randomization, so
 * identical inputs give bit-identical outputs.
 */

#include "pptkit/complex_matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pptkit {

// Thrown when an iterative kernel fails to meet its convergence contract.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// ── multi-index bookkeeping ──────────────────────────────────────────────────

// Row-major flattening of a tensor factor structure: the LAST factor index
// varies fastest, matching kron(A,B) with A the first factor.
struct TensorIndex {
    std::vector<std::size_t> dims;

    explicit TensorIndex(std::vector<std::size_t> d) : dims(std::move(d)) {
        for (auto n : dims)
            if (n == 0) throw std::invalid_argument("TensorIndex: zero dimension");
    }

    std::size_t total() const {
        std::size_t t = 1;
        for (auto n : dims) t *= n;
        return t;
    }
    std::size_t flatten(const std::vector<std::size_t>& idx) const {
        if (idx.size() != dims.size()) throw std::invalid_argument("flatten: arity mismatch");
        std::size_t f = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (idx[k] >= dims[k]) throw std::invalid_argument("flatten: index out of range");
            f = f * dims[k] + idx[k];
        }
        return f;
    }
    std::vector<std::size_t> unflatten(std::size_t f) const {
        std::vector<std::size_t> idx(dims.size());
        for (std::size_t k = dims.size(); k-- > 0;) {
            idx[k] = f % dims[k];
            f /= dims[k];
        }
        if (f != 0) throw std::invalid_argument("unflatten: index out of range");
        return idx;
    }
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// ── eigen / singular values ──────────────────────────────────────────────────

struct HermitianEigen {
    std::vector<double> values;   // ascending
    ComplexMatrix vectors;        // columns, same order as values
    double symmetrize_correction; // max entry change from the (M+M^dag)/2 step
};

// Cyclic complex Jacobi.  Input must be Hermitian within `herm_tol`
// (entrywise); it is re-symmetrized before iterating.  Converged when the
// off-diagonal Frobenius mass drops below 1e-14 * ||A||_F; throws
// numerical_error after 60 sweeps otherwise.
HermitianEigen hermitian_eigen(const ComplexMatrix& m, double herm_tol = 1e-12);

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double herm_tol = 1e-12);
double min_eigenvalue(const ComplexMatrix& m, double herm_tol = 1e-12);

// Singular values, non-increasing, via eigendecomposition of A^dag A (or
// A A^dag, whichever is smaller).  Values below 1e-12 * sigma_max are
// truncated to exactly zero.
std::vector<double> singular_values(const ComplexMatrix& m);
double trace_norm(const ComplexMatrix& m);

// ── bipartite / multipartite reshapes ────────────────────────────────────────

enum class Subsystem { A, B };

// Transpose one tensor factor of an operator on C^dA (x) C^dB:
//   B side:  <ij|out|kl> = <il|in|kj>
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                                Subsystem which = Subsystem::B);

// General partial transpose over an arbitrary subset of factors.
ComplexMatrix partial_transpose_multi(const ComplexMatrix& m, const TensorIndex& idx,
                                      const std::vector<std::size_t>& transposed_factors);

// Trace out every factor NOT listed in `keep` (keep is sorted, 0-based).
ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorIndex& idx,
                            const std::vector<std::size_t>& keep);

// Realignment map, convention frozen here:
//   <ik|R(rho)|jl> = <ij|rho|kl>    (result is dA^2 x dB^2)
// so R(X (x) Y) has entries X_ik * Y_jl, and a normalized pure product
// state realigns to a rank-one matrix of trace norm 1.
ComplexMatrix realign(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b);
ComplexMatrix realign_inverse(const ComplexMatrix& r, std::size_t dim_a, std::size_t dim_b);

// ── symmetric subspace / permutations ────────────────────────────────────────

// Isometry V : Sym^k(C^d) -> (C^d)^{(x) k}.  Columns are indexed by
// multisets of {0..d-1} of size k in lexicographic order; each column is
// the normalized symmetrization of the corresponding computational basis
// word.  V^dag V = I, and V V^dag is the projector onto the symmetric
// subspace.
ComplexMatrix sym_isometry(std::size_t d, std::size_t k);

std::size_t sym_dimension(std::size_t d, std::size_t k); // C(d+k-1, k)

// P_pi |i_1 ... i_k> = |i_{pi^-1(1)} ... i_{pi^-1(k)}>; perm is 0-based and
// must be a bijection of {0..k-1}.
ComplexMatrix permutation_operator(std::size_t d, const std::vector<std::size_t>& perm);

// Projector onto the maximally entangled state of C^d (x) C^d.
ComplexMatrix max_entangled_projector(std::size_t d);

} // namespace pptkit
