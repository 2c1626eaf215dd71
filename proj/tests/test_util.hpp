#pragma once

// Shared helpers for the test suites: a deterministic RNG with a hand-rolled
// Box-Muller transform (so sampled values are identical across standard
// libraries), random Hermitian/unitary matrices, and small conveniences.

#include "pptkit/complex_matrix.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace testutil {

using pptkit::ComplexMatrix;
using pptkit::Cx;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { // in [0, 1)
        return std::ldexp(static_cast<double>(gen_() >> 11), -53);
    }
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }
    Cx cgauss() { return Cx(gauss(), gauss()); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline ComplexMatrix random_complex(std::size_t r, std::size_t c, Rng& rng) {
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.cgauss();
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = rng.gauss();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Cx v = rng.cgauss();
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return m;
}

// modified Gram-Schmidt on a random Gaussian matrix
inline ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
    ComplexMatrix a = random_complex(n, n, rng);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            Cx dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += std::conj(a(i, p)) * a(i, c);
            for (std::size_t i = 0; i < n; ++i) a(i, c) -= dot * a(i, p);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(a(i, c));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) a(i, c) /= norm;
    }
    return a;
}

inline ComplexMatrix diag(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

} // namespace testutil
