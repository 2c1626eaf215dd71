#include "pptkit/states.hpp"

#include <cmath>

namespace pptkit {

namespace {

// lambda_i for 0-based block index i, with the closing lambda_{d-1} = 1
double lam_at(const FamilyParams& p, std::size_t i) {
    return (i + 1 < p.d) ? p.lambdas[i] : 1.0;
}

} // namespace

double b_entry(double a, double lambda) { return a + lambda * ((1.0 + a) / 2.0 - a); }
double c_entry(double a, double lambda) { return lambda * std::sqrt(1.0 - a * a) / 2.0; }

void FamilyParams::validate() const {
    if (d < 3) throw std::invalid_argument("FamilyParams: d must be >= 3");
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("FamilyParams: a must lie in [0,1]");
    if (lambdas.size() != d - 1)
        throw std::invalid_argument("FamilyParams: need exactly d-1 lambda values");
    for (double l : lambdas)
        if (!(l >= 0.0 && l <= 1.0))
            throw std::invalid_argument("FamilyParams: lambdas must lie in [0,1]");
}

ComplexMatrix x_lambda(std::size_t d, double a, double lambda) {
    if (d < 3) throw std::invalid_argument("x_lambda: d must be >= 3");
    ComplexMatrix x(d, d);
    x(0, 0) = b_entry(a, lambda);
    x(d - 1, d - 1) = b_entry(a, lambda);
    x(0, d - 1) = c_entry(a, lambda);
    x(d - 1, 0) = c_entry(a, lambda);
    for (std::size_t k = 1; k + 1 < d; ++k) x(k, k) = a;
    return x;
}

ComplexMatrix shift(std::size_t d) {
    ComplexMatrix s(d, d);
    for (std::size_t k = 0; k < d; ++k) s((k + 1) % d, k) = 1.0;
    return s;
}

ComplexMatrix conjugated_block(std::size_t d, double a, double lambda, std::size_t k) {
    // (S^k X S^-k)_{pq} = X_{p-k, q-k} (mod d): relabel indices directly so
    // zero entries stay exactly zero
    ComplexMatrix x = x_lambda(d, a, lambda);
    ComplexMatrix out(d, d);
    const std::size_t r = k % d;
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) out((p + r) % d, (q + r) % d) = x(p, q);
    return out;
}

double normalization(const FamilyParams& p) {
    double sum_l = 0.0;
    for (double l : p.lambdas) sum_l += l;
    const double dd = static_cast<double>(p.d);
    return 1.0 / ((dd * dd - 1.0) * p.a + 1.0 + (1.0 - p.a) * sum_l);
}

BipartiteState make_state(const FamilyParams& p) {
    p.validate();
    const std::size_t d = p.d;
    const double n = normalization(p);
    ComplexMatrix rho(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i) {
        // diagonal block: S^{i+1} X(lambda_i) S^{-(i+1)} (1-based power)
        ComplexMatrix blk = conjugated_block(d, p.a, lam_at(p, i), i + 1);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                if (blk(r, c) != Cx(0.0, 0.0)) rho(i * d + r, i * d + c) = n * blk(r, c);
        // off-diagonal blocks: a |i><j| at entry (i,j)
        for (std::size_t j = 0; j < d; ++j) {
            if (j == i || p.a == 0.0) continue;
            rho(i * d + i, j * d + j) = n * p.a;
        }
    }
    return BipartiteState{std::move(rho), d, d};
}

ComplexMatrix product_vector(const FamilyParams& p, std::size_t k) {
    p.validate();
    if (k < 1 || k > p.d) throw std::invalid_argument("product_vector: k must lie in 1..d");
    const std::size_t m = k - 1;
    const std::size_t d = p.d;
    ComplexMatrix v(d * d, 1);
    v(m * d + m, 0) = std::sqrt((1.0 - p.a) / 2.0);
    v(m * d + (m + 1) % d, 0) = std::sqrt((1.0 + p.a) / 2.0);
    return v;
}

EntSepSplit ent_sep_split(const FamilyParams& p) {
    p.validate();
    const std::size_t d = p.d;
    const std::size_t n = d * d;

    ComplexMatrix x_sep(n, n);
    for (std::size_t k = 1; k <= d; ++k) {
        const double l = lam_at(p, k - 1);
        if (l == 0.0) continue;
        ComplexMatrix v = product_vector(p, k);
        for (std::size_t r = 0; r < n; ++r) {
            if (v(r, 0) == Cx(0.0, 0.0)) continue;
            for (std::size_t c = 0; c < n; ++c)
                if (v(c, 0) != Cx(0.0, 0.0)) x_sep(r, c) += l * v(r, 0) * std::conj(v(c, 0));
        }
    }

    // x_ent = a * (d P+ + Q); exactly zero when a = 0
    ComplexMatrix x_ent(n, n);
    if (p.a != 0.0) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) x_ent(i * d + i, j * d + j) = p.a; // a * dP+
        for (std::size_t x = 0; x < n; ++x) x_ent(x, x) += p.a;                    // a * I
        for (std::size_t k = 0; k < d; ++k) {
            x_ent(k * d + k, k * d + k) -= p.a;
            const std::size_t kk1 = k * d + (k + 1) % d;
            x_ent(kk1, kk1) -= p.a * lam_at(p, k);
        }
    }
    return EntSepSplit{std::move(x_ent), std::move(x_sep), normalization(p)};
}

// ── index pair sets ──────────────────────────────────────────────────────────

std::vector<std::pair<std::size_t, std::size_t>> phase_pairs(std::size_t d) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
            if (l != k && l != (k + 1) % d) out.emplace_back(k, l);
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> pt_phase_pairs(std::size_t d) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = k + 1; l < d; ++l) {
            if (l == k + 1) continue;
            if (k == (l + 1) % d) continue; // excludes (0, d-1)
            out.emplace_back(k, l);
        }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> pt_phase_pairs_bounded(std::size_t d) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (d < 4) return out;
    // first row stops one short of the wrap-around partner
    for (std::size_t l = 2; l + 1 < d; ++l) out.emplace_back(0, l);
    for (std::size_t k = 1; k + 2 < d; ++k)
        for (std::size_t l = k + 2; l < d; ++l) out.emplace_back(k, l);
    return out;
}

ComplexMatrix symmetry_unitary(std::size_t d, const std::vector<double>& phases) {
    if (d < 3) throw std::invalid_argument("symmetry_unitary: d must be >= 3");
    const auto pairs = phase_pairs(d);
    if (phases.size() != pairs.size())
        throw std::invalid_argument("symmetry_unitary: need d(d-2) phases");
    ComplexMatrix u(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i) {
        u(i * d + i, i * d + i) = 1.0;
        const std::size_t j = (i + 1) % d;
        u(i * d + j, i * d + j) = 1.0;
    }
    for (std::size_t m = 0; m < pairs.size(); ++m) {
        const std::size_t f = pairs[m].first * d + pairs[m].second;
        u(f, f) = std::polar(1.0, phases[m]);
    }
    return u;
}

ComplexMatrix pt_symmetry_unitary(std::size_t d, const std::vector<double>& beta,
                                  const std::vector<double>& gamma) {
    if (d < 3) throw std::invalid_argument("pt_symmetry_unitary: d must be >= 3");
    const auto pairs = pt_phase_pairs(d);
    if (beta.size() != d) throw std::invalid_argument("pt_symmetry_unitary: need d beta phases");
    if (gamma.size() != pairs.size())
        throw std::invalid_argument("pt_symmetry_unitary: need d(d-3)/2 gamma phases");
    ComplexMatrix u(d * d, d * d);
    for (std::size_t m = 0; m < d; ++m) {
        const Cx ph = std::polar(1.0, beta[m]);
        const std::size_t m1 = (m + 1) % d;
        u(m * d + m, m * d + m) = ph;
        u(m * d + m1, m * d + m1) = ph;
        u(m1 * d + m, m1 * d + m) = ph;
    }
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        const auto [k, l] = pairs[t];
        const Cx ph = std::polar(1.0, gamma[t]);
        u(k * d + l, k * d + l) = ph;
        u(l * d + k, l * d + k) = ph;
    }
    return u;
}

// ── block compressions ──────────────────────────────────────────────────────

BlockForm block_form(const FamilyParams& p) {
    p.validate();
    const std::size_t d = p.d;
    const double n = normalization(p);
    ComplexMatrix rho = make_state(p).matrix;

    BlockForm out;
    out.h0_basis.reserve(2 * d);
    for (std::size_t i = 0; i + 1 < d; ++i) {
        out.h0_basis.push_back(i * d + i);
        out.h0_basis.push_back(i * d + i + 1);
    }
    // last pair in the order (|d-1,0>, |d-1,d-1>), matching the block
    // pattern with the a-corrections A' in the final column
    out.h0_basis.push_back((d - 1) * d + 0);
    out.h0_basis.push_back((d - 1) * d + (d - 1));

    out.m_big = ComplexMatrix(2 * d, 2 * d);
    for (std::size_t r = 0; r < 2 * d; ++r)
        for (std::size_t c = 0; c < 2 * d; ++c)
            out.m_big(r, c) = rho(out.h0_basis[r], out.h0_basis[c]) / n;

    ComplexMatrix pt = partial_transpose(rho, d, d, Subsystem::B);
    out.m_tilde.reserve(d);
    for (std::size_t k = 0; k < d; ++k) {
        const std::size_t k1 = (k + 1) % d;
        const std::size_t basis[3] = {k * d + k, k * d + k1, k1 * d + k};
        ComplexMatrix blk(3, 3);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) blk(r, c) = pt(basis[r], basis[c]) / n;
        out.m_tilde.push_back(std::move(blk));
    }

    out.phi = ComplexMatrix(2 * d, 1);
    for (std::size_t i = 0; i + 1 < d; ++i) out.phi(2 * i, 0) = 1.0;
    out.phi(2 * d - 1, 0) = 1.0;
    return out;
}

} // namespace pptkit
