#pragma once

/*
 * Dense complex matrices, row-major.
 *
 * Everything in this library runs on small operators (dimension a few
 * hundred at most), so the representation is deliberately plain: a flat
 * std::vector<std::complex<double>> plus a shape.  Indices are 0-based
 * throughout the code base; any 1-based labelling used in the literature
 * is translated at construction boundaries.
 */

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pptkit {

using Cx = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Cx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return a_.empty(); }

    Cx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Cx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Cx* data() { return a_.data(); }
    const Cx* data() const { return a_.data(); }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    ComplexMatrix& operator*=(Cx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Cx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, Cx s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Cx aik = a(i, k);
                if (aik == Cx(0.0, 0.0)) continue;
                const Cx* brow = &b.a_[k * b.cols_];
                Cx* crow = &c.a_[i * c.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
            }
        }
        return c;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }
    ComplexMatrix transpose() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    ComplexMatrix conj() const {
        ComplexMatrix m(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = std::conj(a_[k]);
        return m;
    }

    Cx trace() const {
        if (rows_ != cols_) throw std::invalid_argument("trace: matrix not square");
        Cx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }
    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    // max |M - M^dagger| entrywise; 0 for an exactly Hermitian matrix
    double hermiticity_error() const {
        if (rows_ != cols_) return max_abs();
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

private:
    void check_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix arithmetic: shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<Cx> a_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

} // namespace pptkit
