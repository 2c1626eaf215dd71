#include "pptkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace pptkit {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Cx aij = a(i, j);
            if (aij == Cx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

// ── Jacobi eigensolver ───────────────────────────────────────────────────────

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double offdiag_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p < a.rows(); ++p)
        for (std::size_t q = 0; q < a.cols(); ++q)
            if (p != q) s += std::norm(a(p, q));
    return std::sqrt(s);
}

} // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& m, double herm_tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigen: matrix not square");
    const std::size_t n = m.rows();
    const double herr = m.hermiticity_error();
    if (herr > herm_tol)
        throw std::invalid_argument("hermitian_eigen: input not Hermitian within tolerance");

    // work on the exactly Hermitian average (M + M^dag)/2
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = Cx(m(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Cx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }

    HermitianEigen out;
    out.symmetrize_correction = herr * 0.5;
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double fro = a.frobenius_norm();
    const double stop = 1e-14 * fro;
    // acceptance level for a stalled sweep: (near-)multiple eigenvalues can
    // floor the off-diagonal mass at rounding level above `stop`, and a
    // sweep that no longer halves the mass cannot push below that floor
    const double stop_stalled = 1e-11 * fro;
    constexpr int kMaxSweeps = 60;

    if (n > 1 && fro > 0.0) {
        double mass = offdiag_frobenius(a);
        bool converged = mass <= stop;
        int sweep = 0;
        while (!converged) {
            if (sweep++ >= kMaxSweeps)
                throw numerical_error("hermitian_eigen: Jacobi did not converge in 60 sweeps");
            for (std::size_t p = 0; p < n - 1; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const Cx apq = a(p, q);
                    const double beta = std::abs(apq);
                    if (beta == 0.0) continue;
                    const double alpha = a(p, p).real();
                    const double gamma = a(q, q).real();
                    // entries that cannot move either diagonal get dropped
                    // rather than rotated: a 45-degree rotation driven by
                    // rounding dust inside a degenerate cluster shuffles real
                    // residual mass around forever instead of annihilating it
                    if (100.0 * beta <= kEps * std::abs(alpha) &&
                        100.0 * beta <= kEps * std::abs(gamma)) {
                        a(p, q) = 0.0;
                        a(q, p) = 0.0;
                        continue;
                    }
                    const Cx phase = apq / beta; // e^{i theta}
                    // real rotation zeroing [[alpha, beta],[beta, gamma]]
                    const double tau = (gamma - alpha) / (2.0 * beta);
                    const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    const Cx sp = s * phase;            // applied on the q column
                    const Cx spc = s * std::conj(phase); // conjugate on the p column

                    for (std::size_t i = 0; i < n; ++i) {
                        if (i == p || i == q) continue;
                        const Cx aip = a(i, p), aiq = a(i, q);
                        a(i, p) = c * aip - spc * aiq;
                        a(i, q) = sp * aip + c * aiq;
                        a(p, i) = std::conj(a(i, p));
                        a(q, i) = std::conj(a(i, q));
                    }
                    a(p, p) = Cx(alpha - t * beta, 0.0);
                    a(q, q) = Cx(gamma + t * beta, 0.0);
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const Cx vip = v(i, p), viq = v(i, q);
                        v(i, p) = c * vip - spc * viq;
                        v(i, q) = sp * vip + c * viq;
                    }
                }
            }
            const double next = offdiag_frobenius(a);
            converged = next <= stop || (next > 0.5 * mass && next <= stop_stalled);
            mass = next;
        }
    }

    // sort ascending, stable in the original column order
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });

    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double herm_tol) {
    return hermitian_eigen(m, herm_tol).values;
}

double min_eigenvalue(const ComplexMatrix& m, double herm_tol) {
    return hermitian_eigen(m, herm_tol).values.front();
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    // eigendecompose the smaller Gram matrix ...
    const bool tall = m.cols() <= m.rows();
    const ComplexMatrix g = tall ? m.adjoint() * m : m * m.adjoint();
    // Gram matrices are Hermitian by construction; rounding can still leave
    // ~eps asymmetry, so pass a scale-aware tolerance.
    auto eig = hermitian_eigen(g, 1e-10 * (1.0 + g.max_abs()));
    // ... but read each value off as ||M v|| rather than sqrt(lambda):
    // squaring in the Gram matrix floors tiny singular values at
    // sqrt(eps)*||M||, while the product form resolves them to ~eps.
    const ComplexMatrix prod = tall ? m * eig.vectors : m.adjoint() * eig.vectors;
    std::vector<double> sv(eig.values.size());
    for (std::size_t i = 0; i < sv.size(); ++i) {
        const std::size_t col = sv.size() - 1 - i; // descending
        double s = 0.0;
        for (std::size_t r = 0; r < prod.rows(); ++r) s += std::norm(prod(r, col));
        sv[i] = std::sqrt(s);
    }
    // the refined values can swap order inside near-degenerate clusters
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    const double cutoff = sv.empty() ? 0.0 : 1e-12 * sv.front();
    for (auto& s : sv)
        if (s < cutoff) s = 0.0;
    return sv;
}

double trace_norm(const ComplexMatrix& m) {
    auto sv = singular_values(m);
    double t = 0.0;
    for (double s : sv) t += s;
    return t;
}

// ── reshapes ─────────────────────────────────────────────────────────────────

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                                Subsystem which) {
    const std::size_t n = dim_a * dim_b;
    if (m.rows() != n || m.cols() != n)
        throw std::invalid_argument("partial_transpose: shape does not match dims");
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t j = 0; j < dim_b; ++j)
            for (std::size_t k = 0; k < dim_a; ++k)
                for (std::size_t l = 0; l < dim_b; ++l) {
                    if (which == Subsystem::B)
                        out(i * dim_b + j, k * dim_b + l) = m(i * dim_b + l, k * dim_b + j);
                    else
                        out(i * dim_b + j, k * dim_b + l) = m(k * dim_b + j, i * dim_b + l);
                }
    return out;
}

ComplexMatrix partial_transpose_multi(const ComplexMatrix& m, const TensorIndex& idx,
                                      const std::vector<std::size_t>& transposed_factors) {
    const std::size_t n = idx.total();
    if (m.rows() != n || m.cols() != n)
        throw std::invalid_argument("partial_transpose_multi: shape does not match dims");
    std::vector<bool> flip(idx.dims.size(), false);
    for (auto f : transposed_factors) {
        if (f >= idx.dims.size())
            throw std::invalid_argument("partial_transpose_multi: factor out of range");
        flip[f] = true;
    }
    ComplexMatrix out(n, n);
    std::vector<std::size_t> ri, ci;
    for (std::size_t r = 0; r < n; ++r) {
        ri = idx.unflatten(r);
        for (std::size_t c = 0; c < n; ++c) {
            ci = idx.unflatten(c);
            std::vector<std::size_t> sr = ri, sc = ci;
            for (std::size_t k = 0; k < flip.size(); ++k)
                if (flip[k]) std::swap(sr[k], sc[k]);
            out(idx.flatten(sr), idx.flatten(sc)) = m(r, c);
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorIndex& idx,
                            const std::vector<std::size_t>& keep) {
    const std::size_t n = idx.total();
    if (m.rows() != n || m.cols() != n)
        throw std::invalid_argument("partial_trace: shape does not match dims");
    for (std::size_t k = 0; k + 1 < keep.size(); ++k)
        if (keep[k] >= keep[k + 1]) throw std::invalid_argument("partial_trace: keep not sorted");
    std::vector<std::size_t> traced;
    for (std::size_t k = 0; k < idx.dims.size(); ++k)
        if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);
    for (auto k : keep)
        if (k >= idx.dims.size()) throw std::invalid_argument("partial_trace: keep out of range");

    std::size_t kept_total = 1;
    for (auto k : keep) kept_total *= idx.dims[k];
    std::size_t traced_total = 1;
    for (auto k : traced) traced_total *= idx.dims[k];

    ComplexMatrix out(kept_total, kept_total);
    TensorIndex kept_idx([&] {
        std::vector<std::size_t> d;
        for (auto k : keep) d.push_back(idx.dims[k]);
        return d.empty() ? std::vector<std::size_t>{1} : d;
    }());
    TensorIndex traced_idx([&] {
        std::vector<std::size_t> d;
        for (auto k : traced) d.push_back(idx.dims[k]);
        return d.empty() ? std::vector<std::size_t>{1} : d;
    }());

    std::vector<std::size_t> full_r(idx.dims.size()), full_c(idx.dims.size());
    for (std::size_t r = 0; r < kept_total; ++r) {
        const auto rk = kept_idx.unflatten(r);
        for (std::size_t c = 0; c < kept_total; ++c) {
            const auto ck = kept_idx.unflatten(c);
            Cx sum = 0.0;
            for (std::size_t t = 0; t < traced_total; ++t) {
                const auto tt = traced_idx.unflatten(t);
                for (std::size_t k = 0; k < keep.size(); ++k) {
                    full_r[keep[k]] = rk[k];
                    full_c[keep[k]] = ck[k];
                }
                for (std::size_t k = 0; k < traced.size(); ++k) {
                    full_r[traced[k]] = tt[k];
                    full_c[traced[k]] = tt[k];
                }
                sum += m(idx.flatten(full_r), idx.flatten(full_c));
            }
            out(r, c) = sum;
        }
    }
    return out;
}

ComplexMatrix realign(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b) {
    const std::size_t n = dim_a * dim_b;
    if (m.rows() != n || m.cols() != n)
        throw std::invalid_argument("realign: shape does not match dims");
    ComplexMatrix out(dim_a * dim_a, dim_b * dim_b);
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t k = 0; k < dim_a; ++k)
            for (std::size_t j = 0; j < dim_b; ++j)
                for (std::size_t l = 0; l < dim_b; ++l)
                    out(i * dim_a + k, j * dim_b + l) = m(i * dim_b + j, k * dim_b + l);
    return out;
}

ComplexMatrix realign_inverse(const ComplexMatrix& r, std::size_t dim_a, std::size_t dim_b) {
    if (r.rows() != dim_a * dim_a || r.cols() != dim_b * dim_b)
        throw std::invalid_argument("realign_inverse: shape does not match dims");
    ComplexMatrix out(dim_a * dim_b, dim_a * dim_b);
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t k = 0; k < dim_a; ++k)
            for (std::size_t j = 0; j < dim_b; ++j)
                for (std::size_t l = 0; l < dim_b; ++l)
                    out(i * dim_b + j, k * dim_b + l) = r(i * dim_a + k, j * dim_b + l);
    return out;
}

// ── symmetric subspace ───────────────────────────────────────────────────────

std::size_t sym_dimension(std::size_t d, std::size_t k) {
    // C(d+k-1, k) using exact integer steps
    std::size_t num = 1, den = 1;
    for (std::size_t i = 0; i < k; ++i) {
        num *= (d + i);
        den *= (i + 1);
        const std::size_t g = std::gcd(num, den);
        num /= g;
        den /= g;
    }
    return num / den;
}

namespace {

void enumerate_multisets(std::size_t d, std::size_t k, std::size_t start,
                         std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t v = start; v < d; ++v) {
        cur.push_back(v);
        enumerate_multisets(d, k, v, cur, out);
        cur.pop_back();
    }
}

} // namespace

ComplexMatrix sym_isometry(std::size_t d, std::size_t k) {
    if (d == 0 || k == 0) throw std::invalid_argument("sym_isometry: d and k must be positive");
    std::vector<std::vector<std::size_t>> multisets;
    std::vector<std::size_t> cur;
    enumerate_multisets(d, k, 0, cur, multisets);

    std::size_t dk = 1;
    for (std::size_t i = 0; i < k; ++i) dk *= d;
    ComplexMatrix v(dk, multisets.size());
    TensorIndex idx(std::vector<std::size_t>(k, d));

    for (std::size_t col = 0; col < multisets.size(); ++col) {
        // weight: sqrt(prod multiplicities! / k!) on each distinct arrangement
        std::vector<std::size_t> word = multisets[col];
        double mult_fact = 1.0;
        std::size_t run = 1;
        for (std::size_t i = 1; i <= word.size(); ++i) {
            if (i < word.size() && word[i] == word[i - 1]) {
                ++run;
                mult_fact *= static_cast<double>(run);
            } else {
                run = 1;
            }
        }
        double k_fact = 1.0;
        for (std::size_t i = 2; i <= k; ++i) k_fact *= static_cast<double>(i);
        const double w = std::sqrt(mult_fact / k_fact);

        // word is sorted: std::next_permutation walks every distinct arrangement
        std::vector<std::size_t> arr = word;
        do {
            v(idx.flatten(arr), col) = w;
        } while (std::next_permutation(arr.begin(), arr.end()));
    }
    return v;
}

ComplexMatrix permutation_operator(std::size_t d, const std::vector<std::size_t>& perm) {
    const std::size_t k = perm.size();
    std::vector<bool> seen(k, false);
    for (auto p : perm) {
        if (p >= k || seen[p]) throw std::invalid_argument("permutation_operator: not a permutation");
        seen[p] = true;
    }
    std::vector<std::size_t> inv(k);
    for (std::size_t i = 0; i < k; ++i) inv[perm[i]] = i;

    TensorIndex idx(std::vector<std::size_t>(k, d));
    const std::size_t n = idx.total();
    ComplexMatrix p(n, n);
    std::vector<std::size_t> dst(k);
    for (std::size_t c = 0; c < n; ++c) {
        const auto src = idx.unflatten(c);
        for (std::size_t m = 0; m < k; ++m) dst[m] = src[inv[m]];
        p(idx.flatten(dst), c) = 1.0;
    }
    return p;
}

ComplexMatrix max_entangled_projector(std::size_t d) {
    if (d == 0) throw std::invalid_argument("max_entangled_projector: d must be positive");
    ComplexMatrix p(d * d, d * d);
    const double w = 1.0 / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p(i * d + i, j * d + j) = w;
    return p;
}

} // namespace pptkit
