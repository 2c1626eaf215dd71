#include "pptkit/criteria.hpp"

#include <cmath>
#include <stdexcept>

namespace pptkit {

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Entangled: return "Entangled";
        case Outcome::NotDetected: return "NotDetected";
        case Outcome::SeparableConsistent: return "SeparableConsistent";
    }
    throw std::logic_error("to_string: unknown Outcome");
}

namespace {

void check_state(const BipartiteState& s) {
    if (s.dim_a * s.dim_b != s.matrix.rows() || s.matrix.rows() != s.matrix.cols())
        throw std::invalid_argument("criteria: state dimensions do not match its matrix");
}

} // namespace

Verdict ppt_check(const BipartiteState& state, double tol) {
    check_state(state);
    ComplexMatrix pt = partial_transpose(state.matrix, state.dim_a, state.dim_b, Subsystem::B);
    const double lo = min_eigenvalue(pt);
    Verdict v;
    v.criterion = "ppt";
    v.evidence = lo;
    v.tol = tol;
    v.outcome = (lo < -tol) ? Outcome::Entangled : Outcome::NotDetected;
    return v;
}

Verdict realignment_check(const BipartiteState& state, double tol) {
    check_state(state);
    ComplexMatrix r = realign(state.matrix, state.dim_a, state.dim_b);
    const double value = trace_norm(r);
    Verdict v;
    v.criterion = "realignment";
    v.evidence = value;
    v.tol = tol;
    v.outcome = (value > 1.0 + tol) ? Outcome::Entangled : Outcome::NotDetected;
    return v;
}

bool StructureReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

const StructureCheck& StructureReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("StructureReport: no check named " + name);
}

namespace {

double lambda_of_pair(const FamilyParams& p, std::size_t i) {
    return (i + 1 < p.d) ? p.lambdas[i] : 1.0;
}

// expected M_d: B_k on the diagonal, a at every phi x phi cross position
ComplexMatrix expected_m(const FamilyParams& p) {
    const std::size_t d = p.d;
    ComplexMatrix m(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) {
        const double bk = b_entry(p.a, lambda_of_pair(p, i));
        const double ck = c_entry(p.a, lambda_of_pair(p, i));
        m(2 * i, 2 * i) = bk;
        m(2 * i + 1, 2 * i + 1) = bk;
        m(2 * i, 2 * i + 1) = ck;
        m(2 * i + 1, 2 * i) = ck;
    }
    // |ii> sits at slot 2i for i < d-1 and at slot 2d-1 for the last pair
    std::vector<std::size_t> diag_slot(d);
    for (std::size_t i = 0; i + 1 < d; ++i) diag_slot[i] = 2 * i;
    diag_slot[d - 1] = 2 * d - 1;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) m(diag_slot[i], diag_slot[j]) = p.a;
    return m;
}

// expected M_d - a|phi><phi|: corrected 2x2 blocks, zero elsewhere
ComplexMatrix expected_m_corrected(const FamilyParams& p) {
    const std::size_t d = p.d;
    const double b = (1.0 + p.a) / 2.0;
    const double c = std::sqrt(1.0 - p.a * p.a) / 2.0;
    ComplexMatrix m(2 * d, 2 * d);
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const double l = p.lambdas[i];
        m(2 * i, 2 * i) = l * (b - p.a);
        m(2 * i, 2 * i + 1) = l * c;
        m(2 * i + 1, 2 * i) = l * c;
        m(2 * i + 1, 2 * i + 1) = p.a + l * (b - p.a);
    }
    m(2 * d - 2, 2 * d - 2) = b;
    m(2 * d - 2, 2 * d - 1) = c;
    m(2 * d - 1, 2 * d - 2) = c;
    m(2 * d - 1, 2 * d - 1) = b - p.a;
    return m;
}

} // namespace

StructureReport structure_check(const FamilyParams& p) {
    p.validate();
    const std::size_t d = p.d;
    const double n = normalization(p);
    const ComplexMatrix rho = make_state(p).matrix;
    const ComplexMatrix pt = partial_transpose(rho, d, d, Subsystem::B);
    const BlockForm bf = block_form(p);

    StructureReport rep;
    auto add = [&rep](const std::string& name, bool passed, double residual) {
        rep.checks.push_back({name, passed, residual});
    };

    // direct sum of rho: off-diagonal entries only inside H0
    std::vector<bool> in_h0(d * d, false);
    for (std::size_t idx : bf.h0_basis) in_h0[idx] = true;
    double worst = 0.0;
    for (std::size_t r = 0; r < d * d; ++r)
        for (std::size_t c = 0; c < d * d; ++c) {
            if (r == c || (in_h0[r] && in_h0[c])) continue;
            worst = std::max(worst, std::abs(rho(r, c)));
        }
    add("state-direct-sum", worst == 0.0, worst);

    // direct sum of rho^Gamma: 3x3 blocks per k plus 2x2 pair blocks
    const auto pairs2 = pt_phase_pairs(d);
    std::vector<std::size_t> block_id(d * d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
            std::size_t id;
            if (l == k || l == (k + 1) % d) {
                id = k;
            } else if (k == (l + 1) % d) {
                id = l;
            } else {
                const std::size_t lo = std::min(k, l), hi = std::max(k, l);
                std::size_t at = pairs2.size();
                for (std::size_t m = 0; m < pairs2.size(); ++m)
                    if (pairs2[m].first == lo && pairs2[m].second == hi) at = m;
                if (at == pairs2.size())
                    throw std::logic_error("structure_check: index outside every block");
                id = d + at;
            }
            block_id[k * d + l] = id;
        }
    worst = 0.0;
    for (std::size_t r = 0; r < d * d; ++r)
        for (std::size_t c = 0; c < d * d; ++c) {
            if (r == c || block_id[r] == block_id[c]) continue;
            worst = std::max(worst, std::abs(pt(r, c)));
        }
    add("pt-direct-sum", worst == 0.0, worst);

    // spectra of the compressions
    double lo_m = min_eigenvalue(bf.m_big);
    add("m-psd", lo_m >= -1e-10, lo_m);
    double lo_t = 0.0;
    for (const auto& blk : bf.m_tilde) lo_t = std::min(lo_t, min_eigenvalue(blk));
    add("m-tilde-psd", lo_t >= -1e-10, lo_t);

    // entrywise block formulas
    worst = max_abs_diff(bf.m_big, expected_m(p));
    add("m-assembly", worst <= 1e-14, worst);

    worst = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double bk = b_entry(p.a, lambda_of_pair(p, k));
        const double ck = c_entry(p.a, lambda_of_pair(p, k));
        ComplexMatrix want(3, 3);
        want(0, 0) = bk;
        want(0, 1) = ck;
        want(1, 0) = ck;
        want(1, 1) = bk;
        want(1, 2) = p.a;
        want(2, 1) = p.a;
        want(2, 2) = p.a;
        worst = std::max(worst, max_abs_diff(bf.m_tilde[k], want));
    }
    add("m-tilde-formula", worst <= 1e-14, worst);

    // rank-one correction: subtracting a|phi><phi| leaves the block diagonal
    ComplexMatrix corrected = bf.m_big;
    for (std::size_t r = 0; r < 2 * d; ++r)
        for (std::size_t c = 0; c < 2 * d; ++c)
            corrected(r, c) -= p.a * bf.phi(r, 0) * std::conj(bf.phi(c, 0));
    worst = max_abs_diff(corrected, expected_m_corrected(p));
    add("rank-one-correction", worst <= 1e-13, worst);

    // remaining 2x2 blocks of rho^Gamma are a * [[1,1],[1,1]] (times N here)
    worst = 0.0;
    const Cx na = n * p.a;
    for (const auto& [k, l] : pairs2) {
        const std::size_t kl = k * d + l, lk = l * d + k;
        worst = std::max({worst, std::abs(pt(kl, kl) - na), std::abs(pt(lk, lk) - na),
                          std::abs(pt(kl, lk) - na), std::abs(pt(lk, kl) - na)});
    }
    add("pt-residual-blocks", worst == 0.0, worst);

    const auto pairs1 = phase_pairs(d);
    const double want1 = static_cast<double>(d * (d - 2));
    add("pair-count-I", pairs1.size() == d * (d - 2),
        std::abs(static_cast<double>(pairs1.size()) - want1));
    const double want2 = static_cast<double>(d * (d - 3) / 2);
    add("pair-count-II", pairs2.size() == d * (d - 3) / 2,
        std::abs(static_cast<double>(pairs2.size()) - want2));
    const auto bounded = pt_phase_pairs_bounded(d);
    add("pair-enumeration", bounded == pairs2,
        bounded == pairs2 ? 0.0 : 1.0);

    return rep;
}

} // namespace pptkit
