#include "pptkit/realmat.hpp"
#include "pptkit/linalg.hpp" // numerical_error

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pptkit {

RealMatrix& RealMatrix::operator+=(const RealMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("RealMatrix: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}
RealMatrix& RealMatrix::operator-=(const RealMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("RealMatrix: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}
RealMatrix& RealMatrix::operator*=(double s) {
    for (auto& v : a_) v *= s;
    return *this;
}

RealMatrix RealMatrix::transpose() const {
    RealMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double RealMatrix::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("RealMatrix::trace: not square");
    double t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double RealMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double RealMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double RealMatrix::symmetry_error() const {
    if (rows_ != cols_) return max_abs();
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    RealMatrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* crow = c.data() + i * n;
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

double inner(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("inner: shape mismatch");
    const double* pa = a.data();
    const double* pb = b.data();
    double s = 0.0;
    const std::size_t n = a.rows() * a.cols();
    for (std::size_t k = 0; k < n; ++k) s += pa[k] * pb[k];
    return s;
}

bool cholesky(const RealMatrix& a, RealMatrix& l) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: not square");
    const std::size_t n = a.rows();
    l = RealMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return true;
}

RealMatrix forward_substitute(const RealMatrix& l, const RealMatrix& b) {
    const std::size_t n = l.rows();
    if (b.rows() != n) throw std::invalid_argument("forward_substitute: shape mismatch");
    RealMatrix x = b;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            const double lik = l(i, k);
            if (lik == 0.0) continue;
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= lik * x(k, j);
        }
        const double d = l(i, i);
        for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) /= d;
    }
    return x;
}

RealMatrix back_substitute_transposed(const RealMatrix& l, const RealMatrix& b) {
    const std::size_t n = l.rows();
    if (b.rows() != n) throw std::invalid_argument("back_substitute: shape mismatch");
    RealMatrix x = b;
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) {
            const double lki = l(k, ii); // (L^T)_{ii,k}
            if (lki == 0.0) continue;
            for (std::size_t j = 0; j < x.cols(); ++j) x(ii, j) -= lki * x(k, j);
        }
        const double d = l(ii, ii);
        for (std::size_t j = 0; j < x.cols(); ++j) x(ii, j) /= d;
    }
    return x;
}

std::vector<double> cholesky_solve(const RealMatrix& l, const std::vector<double>& b) {
    RealMatrix rhs(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
    RealMatrix y = back_substitute_transposed(l, forward_substitute(l, rhs));
    std::vector<double> x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) x[i] = y(i, 0);
    return x;
}

RealMatrix congruence_inverse(const RealMatrix& l, const RealMatrix& m) {
    // L^{-1} M L^{-T} = forward-solve on rows, then on columns
    RealMatrix y = forward_substitute(l, m);
    RealMatrix z = forward_substitute(l, y.transpose());
    // z = L^{-1} (L^{-1} M)^T; result should be symmetric for symmetric M
    RealMatrix w(z.rows(), z.cols());
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t j = 0; j < z.cols(); ++j) w(i, j) = 0.5 * (z(i, j) + z(j, i));
    return w;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double offdiag_mass(const RealMatrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p < a.rows(); ++p)
        for (std::size_t q = 0; q < a.cols(); ++q)
            if (p != q) s += a(p, q) * a(p, q);
    return std::sqrt(s);
}

void jacobi_sym(RealMatrix& a, RealMatrix* v) {
    const std::size_t n = a.rows();
    if (n < 2) return;
    const double fro = a.frobenius_norm();
    if (fro == 0.0) return;
    const double stop = 1e-14 * fro;
    // Matrices with (near-)multiple eigenvalues -- every complex-embedded
    // operator has a doubled spectrum -- can floor the off-diagonal mass at
    // rounding level above `stop`.  A sweep that no longer halves the mass
    // has hit that floor, so accept once the leftover is harmless.
    const double stop_stalled = 1e-11 * fro;
    constexpr int kMaxSweeps = 60;
    int sweep = 0;
    double mass = offdiag_mass(a);
    while (mass > stop) {
        if (sweep++ >= kMaxSweeps)
            throw numerical_error("sym_eigen: Jacobi did not converge in 60 sweeps");
        for (std::size_t p = 0; p < n - 1; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double alpha = a(p, p), gamma = a(q, q);
                // entries that cannot move either diagonal get dropped rather
                // than rotated: a 45-degree rotation driven by rounding dust
                // inside a degenerate cluster shuffles real residual mass
                // around forever instead of annihilating it
                if (100.0 * std::abs(apq) <= kEps * std::abs(alpha) &&
                    100.0 * std::abs(apq) <= kEps * std::abs(gamma)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const double tau = (gamma - alpha) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                    a(p, i) = a(i, p);
                    a(q, i) = a(i, q);
                }
                a(p, p) = alpha - t * apq;
                a(q, q) = gamma + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                if (v) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const double vip = (*v)(i, p), viq = (*v)(i, q);
                        (*v)(i, p) = c * vip - s * viq;
                        (*v)(i, q) = s * vip + c * viq;
                    }
                }
            }
        }
        const double next = offdiag_mass(a);
        if (next > 0.5 * mass && next <= stop_stalled) return;
        mass = next;
    }
}

} // namespace

std::vector<double> sym_eigenvalues(RealMatrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("sym_eigenvalues: not square");
    // symmetrize defensively; callers hold symmetric data
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
    jacobi_sym(a, nullptr);
    std::vector<double> ev(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

void sym_eigen(RealMatrix a, std::vector<double>& values, RealMatrix& vectors) {
    if (a.rows() != a.cols()) throw std::invalid_argument("sym_eigen: not square");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
    RealMatrix v = RealMatrix::identity(n);
    jacobi_sym(a, &v);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
    values.resize(n);
    vectors = RealMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) vectors(i, k) = v(i, order[k]);
    }
}

RealMatrix orthonormal_complement(const RealMatrix& v) {
    const std::size_t n = v.rows(), r = v.cols();
    if (r > n) throw std::invalid_argument("orthonormal_complement: more columns than rows");

    // Householder QR of v: after r reflections, columns r..n-1 of the
    // accumulated Q span the orthogonal complement.
    RealMatrix a = v;
    RealMatrix q = RealMatrix::identity(n);
    for (std::size_t k = 0; k < r; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) norm2 += a(i, k) * a(i, k);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) continue;
        const double alpha = (a(k, k) >= 0.0) ? -norm : norm;
        std::vector<double> w(n, 0.0);
        w[k] = a(k, k) - alpha;
        for (std::size_t i = k + 1; i < n; ++i) w[i] = a(i, k);
        double wn2 = 0.0;
        for (std::size_t i = k; i < n; ++i) wn2 += w[i] * w[i];
        if (wn2 == 0.0) continue;
        const double beta = 2.0 / wn2;
        // apply H = I - beta w w^T to a (columns k..r-1) and accumulate in q
        for (std::size_t j = k; j < r; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += w[i] * a(i, j);
            dot *= beta;
            for (std::size_t i = k; i < n; ++i) a(i, j) -= dot * w[i];
        }
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += w[i] * q(i, j);
            dot *= beta;
            for (std::size_t i = k; i < n; ++i) q(i, j) -= dot * w[i];
        }
    }
    // q currently holds H_r ... H_1; Q = (H_r ... H_1)^T, complement = last n-r columns
    RealMatrix comp(n, n - r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n - r; ++j) comp(i, j) = q(r + j, i);
    return comp;
}

RealMatrix embed_hermitian(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("embed_hermitian: not square");
    const std::size_t n = h.rows();
    RealMatrix t(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = h(i, j).real(), im = h(i, j).imag();
            t(i, j) = re;
            t(n + i, n + j) = re;
            t(i, n + j) = -im;
            t(n + i, j) = im;
        }
    return t;
}

ComplexMatrix unembed_hermitian(const RealMatrix& t) {
    if (t.rows() != t.cols() || t.rows() % 2 != 0)
        throw std::invalid_argument("unembed_hermitian: need even square matrix");
    const std::size_t n = t.rows() / 2;
    // average over the complex structure J = [[0,-I],[I,0]]: (T + J^T T J)/2,
    // which keeps PSD inputs PSD and lands exactly on an embedded Hermitian
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = 0.5 * (t(i, j) + t(n + i, n + j));
            const double im = 0.5 * (t(n + i, j) - t(i, n + j));
            h(i, j) = Cx(re, im);
        }
    // enforce exact Hermiticity of the output
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = Cx(h(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Cx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

} // namespace pptkit
