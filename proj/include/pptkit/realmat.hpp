#pragma once

/*
 * Real dense kernels backing the LMI solver: symmetric Jacobi
 * eigenvalues, Cholesky factorization, Householder orthonormal
 * completion, and the standard embedding of Hermitian matrices into
 * real symmetric ones,
 *
 *     H = R + iS   ->   [[R, -S], [S, R]]   (2n x 2n, symmetric),
 *
 * which preserves positive semidefiniteness and doubles every
 * eigenvalue's multiplicity.  All routines are deterministic (fixed
 * orders, no pivoting choices that depend on ties).
 */

#include "pptkit/complex_matrix.hpp"

#include <vector>

namespace pptkit {

class RealMatrix {
public:
    RealMatrix() : rows_(0), cols_(0) {}
    RealMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    static RealMatrix identity(std::size_t n) {
        RealMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }
    const std::vector<double>& flat() const { return a_; }

    RealMatrix& operator+=(const RealMatrix& o);
    RealMatrix& operator-=(const RealMatrix& o);
    RealMatrix& operator*=(double s);
    friend RealMatrix operator+(RealMatrix a, const RealMatrix& b) { return a += b; }
    friend RealMatrix operator-(RealMatrix a, const RealMatrix& b) { return a -= b; }
    friend RealMatrix operator*(double s, RealMatrix a) { return a *= s; }

    RealMatrix transpose() const;
    double trace() const;
    double max_abs() const;
    double frobenius_norm() const;
    double symmetry_error() const; // max |M - M^T| entrywise

private:
    std::size_t rows_, cols_;
    std::vector<double> a_;
};

// C = A * B, cache-friendly loop order
RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
// sum_ij A_ij B_ij
double inner(const RealMatrix& a, const RealMatrix& b);

// Lower-triangular Cholesky A = L L^T.  Returns false (leaving `l`
// unspecified) when a pivot is not strictly positive.
bool cholesky(const RealMatrix& a, RealMatrix& l);

// Solve L y = b / L^T x = y for several right-hand sides (columns of b).
RealMatrix forward_substitute(const RealMatrix& l, const RealMatrix& b);
RealMatrix back_substitute_transposed(const RealMatrix& l, const RealMatrix& b);
std::vector<double> cholesky_solve(const RealMatrix& l, const std::vector<double>& b);

// W = L^{-1} M L^{-T}; M must be square with the same size as L.
RealMatrix congruence_inverse(const RealMatrix& l, const RealMatrix& m);

// Eigenvalues (ascending) of a symmetric matrix by cyclic Jacobi; same
// convergence contract as the complex version (1e-14 relative off-diagonal
// mass, 60 sweeps).
std::vector<double> sym_eigenvalues(RealMatrix a);
// Full decomposition; eigenvectors returned as columns.
void sym_eigen(RealMatrix a, std::vector<double>& values, RealMatrix& vectors);

// Given an n x r matrix with orthonormal columns, return an n x (n-r)
// matrix whose columns complete them to an orthonormal basis (via
// Householder reflections of the input).
RealMatrix orthonormal_complement(const RealMatrix& v);

// Hermitian <-> real symmetric embedding
RealMatrix embed_hermitian(const ComplexMatrix& h);
// Project a real 2n x 2n matrix back onto the image of the embedding and
// return the corresponding Hermitian matrix (PSD inputs map to PSD).
ComplexMatrix unembed_hermitian(const RealMatrix& t);

} // namespace pptkit
