#pragma once

/*
 * Dense primal-dual interior-point solver for block linear matrix
 * inequalities:
 *
 *     maximize  c.x   subject to   F0 + sum_i x_i F_i  >= 0   (every block)
 *
 * The search direction is HKM with a Mehrotra predictor-corrector; the
 * Schur complement is assembled from sparse representations of the F_i
 * and factored with a dense Cholesky.  An infeasible start is allowed:
 * the primal slack X starts at a scaled identity and the residual
 * F(x) - X is driven to zero along the way.
 *
 * The associated dual problem is  minimize <F0, Z>  over  Z >= 0  with
 * <F_i, Z> = -c_i; the reported dual blocks certify the objective bound.
 * Everything is deterministic: fixed starting point, fixed loop orders,
 * no pivoting and no randomness.
 */

#include "pptkit/realmat.hpp"

#include <cstddef>
#include <vector>

namespace pptkit {

struct LmiBlock {
    std::size_t size = 0;
    RealMatrix f0;
    std::vector<RealMatrix> fi; // one coefficient matrix per variable
};

struct LmiProblem {
    std::size_t n_vars = 0;
    std::vector<LmiBlock> blocks;
    std::vector<double> objective;

    // symmetry within 1e-12, consistent sizes, at least one block
    void validate() const; // throws std::invalid_argument
};

struct SolveOptions {
    double gap_tol = 1e-8;      // relative duality gap
    double residual_tol = 1e-8; // relative primal/dual residuals
    std::size_t max_iterations = 200;
    double step_fraction = 0.98; // fraction-to-boundary
};

enum class SolveStatus { Optimal, MaxIterations, LinearAlgebraFailure };

const char* to_string(SolveStatus s);

// One line per iteration, kept for invariant checks: the dual bound
// c.x + <X,Z> majorizes the primal objective at every iterate.
struct IterateRecord {
    double primal_objective = 0.0;
    double dual_bound = 0.0;
    double mu = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

struct SdpSolution {
    std::vector<double> x;
    double objective = 0.0;
    SolveStatus status = SolveStatus::LinearAlgebraFailure;
    std::size_t iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0; // <X,Z> summed over blocks
    std::vector<RealMatrix> dual_blocks;
    std::vector<IterateRecord> trace;
};

SdpSolution solve(const LmiProblem& p, const SolveOptions& opts = {});

// Residuals recomputed from nothing but (p, sol.x, sol.dual_blocks); no
// solver state is consulted, so this doubles as an independent audit.
struct CertifiedResiduals {
    double primal_min_eigenvalue = 0.0;          // min over blocks of min eig F(x)
    std::vector<double> block_min_eigenvalues;   // per block
    double dual_min_eigenvalue = 0.0;            // min over blocks of min eig Z
    double dual_feasibility = 0.0;               // || c + <F, Z> ||_2
    double duality_gap = 0.0;                    // <F(x), Z> summed over blocks
};

CertifiedResiduals certify(const LmiProblem& p, const SdpSolution& sol);

} // namespace pptkit
