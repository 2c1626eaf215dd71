#pragma once

#include "pptkit/states.hpp"

#include <string>
#include <vector>

namespace pptkit {

enum class Outcome { Entangled, NotDetected, SeparableConsistent };

const char* to_string(Outcome o);

// Uniform result record for every separability test.  `evidence` is the raw
// scalar the decision was made on (minimum eigenvalue, trace norm of the
// realignment, or an SDP objective) so scans can plot the landscape instead
// of a binary mask.
struct Verdict {
    std::string criterion;
    Outcome outcome = Outcome::NotDetected;
    double evidence = 0.0;
    double tol = 0.0;
};

// One order above the eigensolver residual bound; keeps separable boundary
// points from flipping to Entangled on rounding noise.
inline constexpr double kCriterionTol = 1e-9;

// Entangled iff min eig(rho^Gamma) < -tol; evidence is that eigenvalue.
Verdict ppt_check(const BipartiteState& state, double tol = kCriterionTol);

// Entangled iff the trace norm of the realigned matrix exceeds 1 + tol;
// evidence is the trace norm itself.
Verdict realignment_check(const BipartiteState& state, double tol = kCriterionTol);

// ── structural verification of the family ───────────────────────────────────

struct StructureCheck {
    std::string name;
    bool passed = false;
    double residual = 0.0; // meaning depends on the check; see structure_check
};

struct StructureReport {
    std::vector<StructureCheck> checks;

    bool all_passed() const;
    const StructureCheck& check(const std::string& name) const; // throws if absent
};

// Verifies, for the state built from p:
//   state-direct-sum      rho has exactly zero entries outside the invariant
//                         subspace H0 (off-diagonal) and the diagonal
//   pt-direct-sum         rho^Gamma likewise splits into the 3x3 blocks
//                         {|kk>,|k,k+1>,|k+1,k>} and 2x2 blocks {|kl>,|lk>}
//   m-psd / m-tilde-psd   min eigenvalue of M_d resp. every M~_k >= -1e-10
//   m-assembly            M_d equals the explicit 2x2-block pattern built
//                         from B_k = [[b_k,c_k],[c_k,b_k]] and the rank-one
//                         coupling entries a
//   m-tilde-formula       every M~_k equals [[b_k,c_k,0],[c_k,b_k,a],[0,a,a]]
//   rank-one-correction   M_d - a|phi><phi| is exactly 2x2 block diagonal,
//                         with blocks [[l_k(b-a), l_k c],[l_k c, a+l_k(b-a)]]
//                         (k < d) and [[b,c],[c,b-a]] (k = d)
//   pt-residual-blocks    the 2x2 blocks of rho^Gamma are [[a,a],[a,a]]
//   pair-count-I/II       the index sets have sizes d(d-2) and d(d-3)/2
//   pair-enumeration      the two enumerations of the second set agree
// Residuals for the formula checks are max-abs deviations; for the count
// checks the absolute difference from the expected size.
StructureReport structure_check(const FamilyParams& p);

} // namespace pptkit
