#include "pptkit/sdp.hpp"

#include "pptkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pptkit {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::MaxIterations: return "MaxIterations";
        case SolveStatus::LinearAlgebraFailure: return "LinearAlgebraFailure";
    }
    throw std::logic_error("to_string: unknown SolveStatus");
}

void LmiProblem::validate() const {
    if (n_vars == 0) throw std::invalid_argument("LmiProblem: no variables");
    if (blocks.empty()) throw std::invalid_argument("LmiProblem: no blocks");
    if (objective.size() != n_vars)
        throw std::invalid_argument("LmiProblem: objective length does not match n_vars");
    for (const LmiBlock& b : blocks) {
        if (b.size == 0) throw std::invalid_argument("LmiProblem: empty block");
        if (b.f0.rows() != b.size || b.f0.cols() != b.size)
            throw std::invalid_argument("LmiProblem: F0 size mismatch");
        if (b.f0.symmetry_error() > 1e-12)
            throw std::invalid_argument("LmiProblem: F0 not symmetric");
        if (b.fi.size() != n_vars)
            throw std::invalid_argument("LmiProblem: coefficient count does not match n_vars");
        for (const RealMatrix& f : b.fi) {
            if (f.rows() != b.size || f.cols() != b.size)
                throw std::invalid_argument("LmiProblem: Fi size mismatch");
            if (f.symmetry_error() > 1e-12)
                throw std::invalid_argument("LmiProblem: Fi not symmetric");
        }
    }
}

namespace {

struct SparseMat {
    std::vector<std::size_t> r, c;
    std::vector<double> v;
};

SparseMat to_sparse(const RealMatrix& m) {
    SparseMat s;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) {
                s.r.push_back(i);
                s.c.push_back(j);
                s.v.push_back(m(i, j));
            }
    return s;
}

// tr(F * S) = sum F_rc S_cr
double sparse_trace_product(const SparseMat& f, const RealMatrix& s) {
    double t = 0.0;
    for (std::size_t k = 0; k < f.v.size(); ++k) t += f.v[k] * s(f.c[k], f.r[k]);
    return t;
}

void sparse_axpy(double alpha, const SparseMat& f, RealMatrix& out) {
    for (std::size_t k = 0; k < f.v.size(); ++k) out(f.r[k], f.c[k]) += alpha * f.v[k];
}

void symmetrize(RealMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// largest step alpha with M + alpha*D >= 0, via the smallest eigenvalue of
// L^{-1} D L^{-T} where M = L L^T (deterministic, no Cholesky probing)
double max_step(const RealMatrix& chol, const RealMatrix& d) {
    RealMatrix w = congruence_inverse(chol, d);
    const double lo = sym_eigenvalues(std::move(w)).front();
    if (lo >= 0.0) return 1e40;
    return -1.0 / lo;
}

RealMatrix inverse_from_cholesky(const RealMatrix& l) {
    RealMatrix inv =
        back_substitute_transposed(l, forward_substitute(l, RealMatrix::identity(l.rows())));
    symmetrize(inv);
    return inv;
}

} // namespace

SdpSolution solve(const LmiProblem& p, const SolveOptions& opts) {
    p.validate();
    const std::size_t n = p.n_vars;
    const std::size_t nb = p.blocks.size();

    std::vector<std::vector<SparseMat>> sp(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        sp[b].reserve(n);
        for (std::size_t i = 0; i < n; ++i) sp[b].push_back(to_sparse(p.blocks[b].fi[i]));
    }

    double f0_norm = 0.0;
    std::size_t total_dim = 0;
    for (const LmiBlock& b : p.blocks) {
        f0_norm = std::max(f0_norm, b.f0.frobenius_norm());
        total_dim += b.size;
    }
    const double scale = 1.0 + f0_norm;
    const double c_norm = norm2(p.objective);

    std::vector<double> x(n, 0.0);
    std::vector<RealMatrix> xm(nb), zm(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        xm[b] = RealMatrix::identity(p.blocks[b].size);
        xm[b] *= scale;
        zm[b] = xm[b];
    }

    SdpSolution sol;
    sol.x = x;
    sol.dual_blocks = zm;
    sol.status = SolveStatus::MaxIterations;

    auto finish = [&](SolveStatus status, std::size_t iters, double pres, double dres,
                      double gap) {
        sol.status = status;
        sol.iterations = iters;
        sol.x = x;
        sol.objective = dot(p.objective, x);
        sol.dual_blocks = zm;
        sol.primal_residual = pres;
        sol.dual_residual = dres;
        sol.gap = gap;
        return sol;
    };

    std::vector<RealMatrix> rp(nb), xinv(nb), xchol(nb), zchol(nb);
    std::vector<double> rd(n), rhs(n), dx(n), dx_aff(n);
    RealMatrix h(n, n), hchol;

    for (std::size_t iter = 0; iter <= opts.max_iterations; ++iter) {
        // residuals at the current iterate
        double pres = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            RealMatrix f = p.blocks[b].f0;
            for (std::size_t i = 0; i < n; ++i)
                if (x[i] != 0.0) sparse_axpy(x[i], sp[b][i], f);
            f -= xm[b];
            pres = std::max(pres, f.frobenius_norm());
            rp[b] = std::move(f);
        }
        pres /= 1.0 + f0_norm;

        for (std::size_t i = 0; i < n; ++i) {
            double s = p.objective[i];
            for (std::size_t b = 0; b < nb; ++b) s += sparse_trace_product(sp[b][i], zm[b]);
            rd[i] = s;
        }
        const double dres = norm2(rd) / (1.0 + c_norm);

        double gap = 0.0;
        for (std::size_t b = 0; b < nb; ++b) gap += inner(xm[b], zm[b]);
        const double obj = dot(p.objective, x);
        const double mu = gap / static_cast<double>(total_dim);

        sol.trace.push_back({obj, obj + gap, mu, pres, dres});

        if (pres <= opts.residual_tol && dres <= opts.residual_tol &&
            gap <= opts.gap_tol * (1.0 + std::abs(obj)))
            return finish(SolveStatus::Optimal, iter, pres, dres, gap);
        if (iter == opts.max_iterations) break;

        // factorizations of the current iterate
        bool ok = true;
        for (std::size_t b = 0; b < nb && ok; ++b) {
            ok = cholesky(xm[b], xchol[b]) && cholesky(zm[b], zchol[b]);
            if (ok) xinv[b] = inverse_from_cholesky(xchol[b]);
        }
        if (!ok) return finish(SolveStatus::LinearAlgebraFailure, iter, pres, dres, gap);

        // Schur complement H_ij = sum_b tr(F_i X^-1 F_j Z), symmetrized.
        // Two assembly strategies per block, picked by flop count: the
        // all-sparse quadruple loop (wins when the F_i have few entries,
        // as in the extension problems) or X^-1 F_j Z products (wins for
        // dense coefficients).
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            const RealMatrix& xi = xinv[b];
            const RealMatrix& z = zm[b];
            double nnz_total = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                nnz_total += static_cast<double>(sp[b][i].v.size());
            const double size = static_cast<double>(p.blocks[b].size);
            const bool use_sparse =
                nnz_total * nnz_total <=
                static_cast<double>(n) * (2.0 * size * size * size + nnz_total);
            if (use_sparse) {
                for (std::size_t i = 0; i < n; ++i) {
                    const SparseMat& fi = sp[b][i];
                    for (std::size_t j = 0; j < n; ++j) {
                        const SparseMat& fj = sp[b][j];
                        double s = 0.0;
                        for (std::size_t ki = 0; ki < fi.v.size(); ++ki)
                            for (std::size_t kj = 0; kj < fj.v.size(); ++kj)
                                s += fi.v[ki] * xi(fi.c[ki], fj.r[kj]) * fj.v[kj] *
                                     z(fj.c[kj], fi.r[ki]);
                        h(i, j) += s;
                    }
                }
            } else {
                for (std::size_t j = 0; j < n; ++j) {
                    RealMatrix cj = matmul(xi, matmul(p.blocks[b].fi[j], z));
                    for (std::size_t i = 0; i < n; ++i)
                        h(i, j) += sparse_trace_product(sp[b][i], cj);
                }
            }
        }
        symmetrize(h);

        if (!cholesky(h, hchol)) {
            double shift = 0.0;
            for (std::size_t i = 0; i < n; ++i) shift = std::max(shift, h(i, i));
            for (std::size_t i = 0; i < n; ++i) h(i, i) += 1e-12 * (1.0 + shift);
            if (!cholesky(h, hchol))
                return finish(SolveStatus::LinearAlgebraFailure, iter, pres, dres, gap);
        }

        // shared pieces of the right-hand side:  U = sym(X^-1 Rp Z)
        std::vector<RealMatrix> u(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            u[b] = matmul(xinv[b], matmul(rp[b], zm[b]));
            RealMatrix ut = u[b].transpose();
            u[b] += ut;
            u[b] *= 0.5;
        }

        // direction for a given complementarity target M; fills dxv and the
        // matrix steps
        auto direction = [&](const std::vector<RealMatrix>& target, std::vector<double>& dxv,
                             std::vector<RealMatrix>& dxm, std::vector<RealMatrix>& dzm) {
            for (std::size_t i = 0; i < n; ++i) rhs[i] = rd[i];
            for (std::size_t b = 0; b < nb; ++b) {
                RealMatrix t = matmul(xinv[b], target[b]);
                RealMatrix tt = t.transpose();
                t += tt;
                t *= 0.5;
                t -= u[b];
                for (std::size_t i = 0; i < n; ++i)
                    rhs[i] += sparse_trace_product(sp[b][i], t);
            }
            dxv = cholesky_solve(hchol, rhs);
            dxm.resize(nb);
            dzm.resize(nb);
            for (std::size_t b = 0; b < nb; ++b) {
                RealMatrix dxb = rp[b];
                for (std::size_t i = 0; i < n; ++i)
                    if (dxv[i] != 0.0) sparse_axpy(dxv[i], sp[b][i], dxb);
                RealMatrix dzb = matmul(xinv[b], target[b] - matmul(dxb, zm[b]));
                symmetrize(dzb);
                dxm[b] = std::move(dxb);
                dzm[b] = std::move(dzb);
            }
        };

        auto step_lengths = [&](const std::vector<RealMatrix>& dxm,
                                const std::vector<RealMatrix>& dzm, double& ap, double& ad) {
            ap = ad = 1e40;
            for (std::size_t b = 0; b < nb; ++b) {
                ap = std::min(ap, max_step(xchol[b], dxm[b]));
                ad = std::min(ad, max_step(zchol[b], dzm[b]));
            }
            ap = std::min(1.0, opts.step_fraction * ap);
            ad = std::min(1.0, opts.step_fraction * ad);
        };

        std::vector<RealMatrix> target(nb), dxm, dzm;
        try {
            // predictor: aim at complementarity zero
            for (std::size_t b = 0; b < nb; ++b) {
                target[b] = matmul(xm[b], zm[b]);
                target[b] *= -1.0;
            }
            direction(target, dx_aff, dxm, dzm);
            double ap, ad;
            step_lengths(dxm, dzm, ap, ad);

            double gap_aff = 0.0;
            for (std::size_t b = 0; b < nb; ++b) {
                RealMatrix xa = xm[b];
                RealMatrix xs = dxm[b];
                xs *= ap;
                xa += xs;
                RealMatrix za = zm[b];
                RealMatrix zs = dzm[b];
                zs *= ad;
                za += zs;
                gap_aff += inner(xa, za);
            }
            const double mu_aff = std::max(gap_aff, 0.0) / static_cast<double>(total_dim);
            double sigma = (mu > 0.0) ? std::pow(mu_aff / mu, 3.0) : 0.0;
            sigma = std::clamp(sigma, 0.0, 1.0);

            // corrector: recenter and compensate the second-order term
            for (std::size_t b = 0; b < nb; ++b) {
                RealMatrix t = matmul(xm[b], zm[b]);
                t *= -1.0;
                RealMatrix corr = matmul(dxm[b], dzm[b]);
                t -= corr;
                const double smu = sigma * mu;
                for (std::size_t i = 0; i < p.blocks[b].size; ++i) t(i, i) += smu;
                target[b] = std::move(t);
            }
            std::vector<RealMatrix> dxm2, dzm2;
            direction(target, dx, dxm2, dzm2);
            step_lengths(dxm2, dzm2, ap, ad);

            for (std::size_t i = 0; i < n; ++i) x[i] += ap * dx[i];
            for (std::size_t b = 0; b < nb; ++b) {
                dxm2[b] *= ap;
                xm[b] += dxm2[b];
                symmetrize(xm[b]);
                dzm2[b] *= ad;
                zm[b] += dzm2[b];
                symmetrize(zm[b]);
            }
        } catch (const numerical_error&) {
            return finish(SolveStatus::LinearAlgebraFailure, iter, pres, dres, gap);
        }
    }

    const IterateRecord& last = sol.trace.back();
    return finish(SolveStatus::MaxIterations, opts.max_iterations, last.primal_residual,
                  last.dual_residual, last.dual_bound - last.primal_objective);
}

CertifiedResiduals certify(const LmiProblem& p, const SdpSolution& sol) {
    p.validate();
    if (sol.x.size() != p.n_vars)
        throw std::invalid_argument("certify: solution size does not match the problem");
    const bool have_dual = !sol.dual_blocks.empty();
    if (have_dual && sol.dual_blocks.size() != p.blocks.size())
        throw std::invalid_argument("certify: dual block count does not match the problem");

    CertifiedResiduals out;
    out.primal_min_eigenvalue = std::numeric_limits<double>::infinity();
    out.dual_min_eigenvalue = have_dual ? std::numeric_limits<double>::infinity() : 0.0;

    std::vector<double> dual_violation(p.objective);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        const LmiBlock& blk = p.blocks[b];
        RealMatrix f = blk.f0;
        for (std::size_t i = 0; i < p.n_vars; ++i) {
            if (sol.x[i] == 0.0) continue;
            RealMatrix term = blk.fi[i];
            term *= sol.x[i];
            f += term;
        }
        const double lo = sym_eigenvalues(f).front();
        out.block_min_eigenvalues.push_back(lo);
        out.primal_min_eigenvalue = std::min(out.primal_min_eigenvalue, lo);

        if (have_dual) {
            const RealMatrix& z = sol.dual_blocks[b];
            if (z.rows() != blk.size || z.cols() != blk.size)
                throw std::invalid_argument("certify: dual block size mismatch");
            out.dual_min_eigenvalue = std::min(out.dual_min_eigenvalue, sym_eigenvalues(z).front());
            for (std::size_t i = 0; i < p.n_vars; ++i) dual_violation[i] += inner(blk.fi[i], z);
            out.duality_gap += inner(f, z);
        }
    }
    out.dual_feasibility = norm2(dual_violation);
    return out;
}

} // namespace pptkit
