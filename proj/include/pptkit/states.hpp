#pragma once

/*
 * A d (x) d family of PPT states built from a circulant arrangement of
 * 2x2-correlated blocks.  The family is parametrized by a in [0,1] and
 * lambda_1..lambda_{d-1} in [0,1] (an implicit lambda_d = 1 closes the
 * cycle).  Writing b = (1+a)/2, c = sqrt(1-a^2)/2 and
 *
 *   b(l) = a + l*(b-a),   c(l) = l*c,
 *
 * the state is rho = N * sum_{ij} |i><j| (x) rho_ij with diagonal blocks
 * rho_ii = S^i X(lambda_i) S^-i (S the cyclic shift), off-diagonal blocks
 * rho_ij = a |i><j|, and N^-1 = (d^2-1)a + 1 + (1-a) * sum lambda_k.
 *
 * The members of this header construct the state, its separable/
 * entangled split, the 2x2/3x3 block compressions of rho and its partial
 * transpose, and the diagonal phase unitaries commuting with each.
 * Indices are 0-based everywhere; translation to the 1-based labelling
 * used above happens inside the constructors.
 */

#include "pptkit/linalg.hpp"

#include <utility>
#include <vector>

namespace pptkit {

struct FamilyParams {
    std::size_t d = 3;
    double a = 0.0;
    std::vector<double> lambdas; // d-1 entries, each in [0,1]

    void validate() const; // throws std::invalid_argument
};

struct BipartiteState {
    ComplexMatrix matrix; // (dim_a*dim_b) square, Hermitian, trace 1
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
};

// The scalar entries b(lambda) = a + lambda*((1+a)/2 - a) and
// c(lambda) = lambda * sqrt(1-a^2)/2.
double b_entry(double a, double lambda);
double c_entry(double a, double lambda);

// The d x d block X(lambda): b(l) in corners (0,0),(d-1,d-1), c(l) in
// corners (0,d-1),(d-1,0), a on the interior diagonal.
ComplexMatrix x_lambda(std::size_t d, double a, double lambda);

// Cyclic shift S|k> = |k+1 mod d>.
ComplexMatrix shift(std::size_t d);

// S^k X(lambda) S^-k, built by direct index relabeling (exact zeros).
ComplexMatrix conjugated_block(std::size_t d, double a, double lambda, std::size_t k);

BipartiteState make_state(const FamilyParams& p);

double normalization(const FamilyParams& p); // the constant N

// |psi_k> = |k> (x) ( sqrt((1-a)/2)|k> + sqrt((1+a)/2)|k+1> ), k = 1..d
// (1-based k to match the construction; wraps at d).
ComplexMatrix product_vector(const FamilyParams& p, std::size_t k);

// rho = N * (x_ent + x_sep):  x_sep is the lambda-weighted mixture of the
// product vectors, x_ent = a*(d P+ + Q) with
// Q = I - sum_k (P_k (x) P_k + lambda_k P_k (x) P_{k+1}).
struct EntSepSplit {
    ComplexMatrix x_ent;
    ComplexMatrix x_sep;
    double norm; // the same N as in make_state
};
EntSepSplit ent_sep_split(const FamilyParams& p);

// ── invariant subspace index sets ───────────────────────────────────────────
//
// rho decomposes over H0 = span{|ii>, |i,i+1>} plus the one-dimensional
// spans of |kl> for pairs with l != k, l != k+1 (mod d); its partial
// transpose decomposes over the 3-dimensional spans {|kk>,|k,k+1>,|k+1,k>}
// plus two-dimensional spans {|kl>,|lk>} for k < l, l != k+1, (k,l) != (0,d-1).

// (k,l), k != l, l != k+1 mod d; lexicographic; exactly d(d-2) pairs.
std::vector<std::pair<std::size_t, std::size_t>> phase_pairs(std::size_t d);

// k < l, l != k+1, (k,l) != (0, d-1); lexicographic; exactly d(d-3)/2 pairs.
std::vector<std::pair<std::size_t, std::size_t>> pt_phase_pairs(std::size_t d);

// Same set enumerated with explicit per-k bounds on l; used to cross-check
// that both descriptions agree.
std::vector<std::pair<std::size_t, std::size_t>> pt_phase_pairs_bounded(std::size_t d);

// Diagonal unitary commuting with rho: identity on H0, a free phase on
// each |kl> from phase_pairs(d) (phases in that order).
ComplexMatrix symmetry_unitary(std::size_t d, const std::vector<double>& phases);

// Diagonal unitary commuting with the partial transpose of rho: one free
// phase beta_m per 3-dimensional block (m = 0..d-1), one gamma per pair
// from pt_phase_pairs(d).
ComplexMatrix pt_symmetry_unitary(std::size_t d, const std::vector<double>& beta,
                                  const std::vector<double>& gamma);

// ── block compressions ──────────────────────────────────────────────────────

struct BlockForm {
    // Restriction of the unnormalized state (rho / N) to H0 in the pair
    // basis (|ii>, |i,i+1>) for i < d-1 and (|d-1,0>, |d-1,d-1>) for the
    // last pair; 2d x 2d.
    ComplexMatrix m_big;
    // Restriction of the unnormalized partial transpose to each block
    // {|kk>, |k,k+1>, |k+1,k>}; d matrices, 3x3 each.
    std::vector<ComplexMatrix> m_tilde;
    // The vector phi with m_big - a*|phi><phi| exactly block diagonal
    // (phi is |ii> summed over i, expressed in the pair basis).
    ComplexMatrix phi; // 2d x 1
    // Flattened basis indices backing m_big: pair i occupies slots 2i, 2i+1.
    std::vector<std::size_t> h0_basis;
};
BlockForm block_form(const FamilyParams& p);

} // namespace pptkit
