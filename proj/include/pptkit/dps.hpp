#pragma once

/*
 * Level-k symmetric-extension test for bipartite states, with optional
 * partial-transpose (PPT) strengthening and dual witness extraction.
 *
 * A state rho on A (x) B passes level k when there is a PSD operator
 * sigma on A (x) Sym^k(B) whose lift to A (x) B^{(x) k} has first-copy
 * marginal rho, and (with PPT blocks on) whose partial transposes over
 * the last m copies stay PSD for every cut m.  Separable states pass
 * every level, so a certified failure proves entanglement.
 *
 * The search is phrased as a linear matrix inequality: sigma is written
 * in an orthonormal Hermitian basis, the marginal-matching equalities
 * are eliminated through an orthonormal null-space parametrization, and
 * the solver maximizes t such that sigma - t I and every transposed
 * block - t I stay PSD.  t* well below zero certifies that no extension
 * exists, and the dual blocks of that run assemble into an entanglement
 * witness on A (x) B; t* near zero yields a candidate extension that is
 * re-verified independently of the solver.
 */

#include "pptkit/criteria.hpp"
#include "pptkit/sdp.hpp"
#include "pptkit/states.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pptkit {

// Thrown when the marginal-matching equalities admit no solution at all
// (cannot happen for a well-formed Hermitian target; kept as a guard).
class infeasible_constraints : public std::runtime_error {
public:
    explicit infeasible_constraints(const std::string& what) : std::runtime_error(what) {}
};

struct ExtensionSpec {
    std::size_t level = 2;         // copies of subsystem B, at least 2
    bool with_ppt = true;          // add partial-transpose blocks
    std::vector<std::size_t> cuts; // transposed-copy counts; empty = {1..level}

    void validate() const; // throws std::invalid_argument
    // sorted, deduplicated cut list actually used ({} when with_ppt is off)
    std::vector<std::size_t> effective_cuts() const;
};

// ── orthonormal Hermitian operator basis ─────────────────────────────────────
//
// Fixed basis of the Hermitian dim x dim matrices under <A,B> = tr(AB):
// scaled identity and the diagonal generators first, then the symmetric
// pair generators (i<j lexicographic), then the antisymmetric ones.  It
// pins the variable ordering of every serialized extension problem.

// number of generators: dim^2
std::size_t hermitian_basis_size(std::size_t dim);
// out += coeff * G_alpha  (out must be dim x dim)
void hermitian_accumulate(ComplexMatrix& out, std::size_t dim, std::size_t alpha, double coeff);
// <G_alpha, H> for Hermitian H
double hermitian_coordinate(const ComplexMatrix& h, std::size_t alpha);
// sum_alpha y_alpha G_alpha
ComplexMatrix matrix_from_coordinates(const std::vector<double>& y, std::size_t dim);
// inverse of the above for Hermitian input
std::vector<double> coordinates_from_matrix(const ComplexMatrix& h);

// ── problem construction ─────────────────────────────────────────────────────

// Everything derived on the way from (rho, spec) to the LMI.  Kept whole
// so that solution interpretation and witness extraction reuse the same
// deterministic bases and factorizations.
struct ExtensionAssembly {
    std::size_t dim_a = 0, dim_b = 0, level = 0;
    std::size_t sym_dim = 0;  // C(dim_b + level - 1, level)
    std::size_t ext_dim = 0;  // dim_a * sym_dim: side of sigma
    std::size_t lift_dim = 0; // dim_a * dim_b^level: side of the lifted operator
    std::vector<std::size_t> cuts;

    ComplexMatrix isometry; // Sym^level(B) -> B^{(x) level}

    // marginal-matching equalities E y = r in Hermitian coordinates
    RealMatrix constraints;           // (dim_a*dim_b)^2 x ext_dim^2
    std::vector<double> particular;   // least-norm solution of E y = r
    RealMatrix null_basis;            // ext_dim^2 x n_free, orthonormal columns

    // variables: null-space coordinates, then t (objective maximizes t);
    // blocks: sigma - t I, then one transposed block - t I per cut
    LmiProblem lmi;
};

ExtensionAssembly build_extension_assembly(const BipartiteState& rho, const ExtensionSpec& spec);
LmiProblem build_extension_problem(const BipartiteState& rho, const ExtensionSpec& spec);

// sigma for the LMI variable values x (t entry ignored)
ComplexMatrix extension_from_variables(const ExtensionAssembly& assembly,
                                       const std::vector<double>& x);

// ── solution interpretation ──────────────────────────────────────────────────

enum class ExtensionStatus { ExtensionFound, NoExtension, NumericalFailure };

const char* to_string(ExtensionStatus s);

// t* below -kEntangledThreshold certifies that no extension exists;
// t* of at least -kFeasibleThreshold makes the recovered sigma a
// candidate, accepted only when it re-verifies at the same tolerance.
// The band between the two is reported as NumericalFailure: the
// separable family endpoints sit exactly at t* = 0, and an asymmetric
// pair of thresholds keeps solver noise from flapping the verdict.
inline constexpr double kEntangledThreshold = 1e-6;
inline constexpr double kFeasibleThreshold = 1e-7;

struct ExtensionResult {
    ExtensionStatus status = ExtensionStatus::NumericalFailure;
    double t_star = 0.0;
    std::optional<ComplexMatrix> extension;  // present for ExtensionFound
    std::vector<RealMatrix> dual_blocks;     // certificate for NoExtension
    ExtensionSpec spec;
    SolveStatus solver_status = SolveStatus::LinearAlgebraFailure;
    std::size_t iterations = 0;
    StructureReport verification; // filled when a candidate sigma was checked
    std::string diagnostics;      // human-readable failure context
};

// Solver-independent audit of a claimed extension: Hermiticity, PSD,
// first-copy marginal against rho, permutation invariance of the lifted
// operator, and PSD of every transposed cut block.
StructureReport verify_extension(const ComplexMatrix& sigma, const BipartiteState& rho,
                                 const ExtensionSpec& spec, double tol);

ExtensionResult run_dps(const BipartiteState& rho, const ExtensionSpec& spec = {});

// run_dps at spec.level; when that finds an extension, retry once at
// level + 1 and report which level decided.
struct EscalationResult {
    ExtensionResult result;
    std::size_t decided_level = 0;
    bool escalated = false;
};

EscalationResult run_dps_escalating(const BipartiteState& rho, ExtensionSpec spec = {});

// ── dual witness ─────────────────────────────────────────────────────────────

inline constexpr double kWitnessProductTol = 1e-9;
inline constexpr std::size_t kWitnessSamples = 10000;

struct WitnessResult {
    ComplexMatrix w;                 // Hermitian on A (x) B, trace 1 when trace != 0
    double state_overlap = 0.0;      // tr(W rho); negative certifies entanglement
    double min_product_value = 0.0;  // smallest <xy|W|xy> over the validation sample
    std::size_t samples = 0;
    bool valid = false; // state_overlap < 0 and min_product_value >= -kWitnessProductTol
};

// Assemble the witness from the dual blocks of a NoExtension result:
// W represents sigma |-> <sigma, Z_sigma> + sum_m <PT_m(lift sigma), Z_m>
// pushed through the marginal map, so it is nonnegative on product
// states by construction and negative on rho by duality.  The sampled
// validation uses the given seed.
WitnessResult extract_witness(const ExtensionResult& result, const BipartiteState& rho,
                              std::uint64_t seed = 1234567);

// Exact level-k extension for the a = 0 member of the family, which is
// an explicit mixture of d product states: the normalized sum of
// lambda_k |k><k| (x) sym-compressed (v_k v_k^dag)^{(x) k} with v_k the
// B factor of the k-th product vector.
ComplexMatrix separable_extension(const FamilyParams& p, std::size_t level);

} // namespace pptkit
