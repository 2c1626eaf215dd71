#include "pptkit/dps.hpp"

#include "pptkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace pptkit {

namespace {

constexpr double kRankCutoff = 1e-10; // relative singular-value cutoff for E

// lexicographic (i, j) with i < j from a flat pair index
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t dim, std::size_t p) {
    std::size_t i = 0, row = dim - 1;
    while (p >= row) {
        p -= row;
        ++i;
        --row;
    }
    return {i, i + 1 + p};
}

std::vector<std::size_t> lift_dims(std::size_t dim_a, std::size_t dim_b, std::size_t level) {
    std::vector<std::size_t> dims(1 + level, dim_b);
    dims[0] = dim_a;
    return dims;
}

// factor indices of the last m copies (factor 0 is A, factors 1..level the copies)
std::vector<std::size_t> cut_factors(std::size_t level, std::size_t m) {
    std::vector<std::size_t> f;
    for (std::size_t q = level - m + 1; q <= level; ++q) f.push_back(q);
    return f;
}

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t += (a(i, j) * b(j, i)).real();
    return t;
}

} // namespace

// ── Hermitian basis ──────────────────────────────────────────────────────────

std::size_t hermitian_basis_size(std::size_t dim) { return dim * dim; }

void hermitian_accumulate(ComplexMatrix& out, std::size_t dim, std::size_t alpha, double coeff) {
    if (out.rows() != dim || out.cols() != dim)
        throw std::invalid_argument("hermitian_accumulate: shape mismatch");
    if (alpha >= dim * dim) throw std::invalid_argument("hermitian_accumulate: index out of range");
    const std::size_t pairs = dim * (dim - 1) / 2;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (alpha == 0) {
        const double s = coeff / std::sqrt(static_cast<double>(dim));
        for (std::size_t d = 0; d < dim; ++d) out(d, d) += s;
    } else if (alpha < dim) {
        const std::size_t l = alpha;
        const double s = coeff / std::sqrt(static_cast<double>(l) * (l + 1));
        for (std::size_t d = 0; d < l; ++d) out(d, d) += s;
        out(l, l) -= static_cast<double>(l) * s;
    } else if (alpha < dim + pairs) {
        const auto [i, j] = pair_from_index(dim, alpha - dim);
        out(i, j) += coeff * inv_sqrt2;
        out(j, i) += coeff * inv_sqrt2;
    } else {
        const auto [i, j] = pair_from_index(dim, alpha - dim - pairs);
        out(i, j) += Cx(0.0, -coeff * inv_sqrt2);
        out(j, i) += Cx(0.0, coeff * inv_sqrt2);
    }
}

double hermitian_coordinate(const ComplexMatrix& h, std::size_t alpha) {
    if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_coordinate: not square");
    const std::size_t dim = h.rows();
    if (alpha >= dim * dim) throw std::invalid_argument("hermitian_coordinate: index out of range");
    const std::size_t pairs = dim * (dim - 1) / 2;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (alpha == 0) {
        double t = 0.0;
        for (std::size_t d = 0; d < dim; ++d) t += h(d, d).real();
        return t / std::sqrt(static_cast<double>(dim));
    }
    if (alpha < dim) {
        const std::size_t l = alpha;
        double t = 0.0;
        for (std::size_t d = 0; d < l; ++d) t += h(d, d).real();
        t -= static_cast<double>(l) * h(l, l).real();
        return t / std::sqrt(static_cast<double>(l) * (l + 1));
    }
    if (alpha < dim + pairs) {
        const auto [i, j] = pair_from_index(dim, alpha - dim);
        return (h(i, j).real() + h(j, i).real()) * inv_sqrt2;
    }
    const auto [i, j] = pair_from_index(dim, alpha - dim - pairs);
    return (h(j, i).imag() - h(i, j).imag()) * inv_sqrt2;
}

ComplexMatrix matrix_from_coordinates(const std::vector<double>& y, std::size_t dim) {
    if (y.size() != dim * dim)
        throw std::invalid_argument("matrix_from_coordinates: coordinate count mismatch");
    ComplexMatrix out(dim, dim);
    for (std::size_t alpha = 0; alpha < y.size(); ++alpha)
        if (y[alpha] != 0.0) hermitian_accumulate(out, dim, alpha, y[alpha]);
    return out;
}

std::vector<double> coordinates_from_matrix(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("coordinates_from_matrix: not square");
    std::vector<double> y(h.rows() * h.rows());
    for (std::size_t alpha = 0; alpha < y.size(); ++alpha) y[alpha] = hermitian_coordinate(h, alpha);
    return y;
}

// ── ExtensionSpec ────────────────────────────────────────────────────────────

void ExtensionSpec::validate() const {
    if (level < 2) throw std::invalid_argument("ExtensionSpec: level must be at least 2");
    if (with_ppt)
        for (auto m : cuts)
            if (m < 1 || m > level)
                throw std::invalid_argument("ExtensionSpec: cut outside {1..level}");
}

std::vector<std::size_t> ExtensionSpec::effective_cuts() const {
    if (!with_ppt) return {};
    std::vector<std::size_t> c = cuts;
    if (c.empty())
        for (std::size_t m = 1; m <= level; ++m) c.push_back(m);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

// ── problem construction ─────────────────────────────────────────────────────

ExtensionAssembly build_extension_assembly(const BipartiteState& rho, const ExtensionSpec& spec) {
    spec.validate();
    if (rho.dim_a == 0 || rho.dim_b == 0 || rho.matrix.rows() != rho.dim_a * rho.dim_b ||
        rho.matrix.cols() != rho.matrix.rows())
        throw std::invalid_argument("build_extension_assembly: state dimensions inconsistent");
    if (rho.matrix.hermiticity_error() > 1e-10)
        throw std::invalid_argument("build_extension_assembly: state matrix is not Hermitian");

    ExtensionAssembly as;
    as.dim_a = rho.dim_a;
    as.dim_b = rho.dim_b;
    as.level = spec.level;
    as.sym_dim = sym_dimension(as.dim_b, as.level);
    as.ext_dim = as.dim_a * as.sym_dim;
    std::size_t bk = 1;
    for (std::size_t q = 0; q < as.level; ++q) bk *= as.dim_b;
    as.lift_dim = as.dim_a * bk;
    as.cuts = spec.effective_cuts();
    as.isometry = sym_isometry(as.dim_b, as.level);

    const ComplexMatrix w = kron(ComplexMatrix::identity(as.dim_a), as.isometry);
    const ComplexMatrix wd = w.adjoint();
    const TensorIndex idx(lift_dims(as.dim_a, as.dim_b, as.level));
    auto lift = [&](const ComplexMatrix& sigma) { return w * sigma * wd; };

    // marginal-matching equalities in Hermitian coordinates
    const std::size_t n = as.ext_dim;
    const std::size_t n2 = n * n;
    const std::size_t ab = as.dim_a * as.dim_b;
    const std::size_t rows = ab * ab;
    as.constraints = RealMatrix(rows, n2);
    for (std::size_t alpha = 0; alpha < n2; ++alpha) {
        ComplexMatrix g(n, n);
        hermitian_accumulate(g, n, alpha, 1.0);
        const ComplexMatrix marg = partial_trace(lift(g), idx, {0, 1});
        for (std::size_t beta = 0; beta < rows; ++beta)
            as.constraints(beta, alpha) = hermitian_coordinate(marg, beta);
    }
    std::vector<double> r(rows);
    double r_scale = 0.0;
    for (std::size_t beta = 0; beta < rows; ++beta) {
        r[beta] = hermitian_coordinate(rho.matrix, beta);
        r_scale = std::max(r_scale, std::abs(r[beta]));
    }

    // least-norm particular solution and orthonormal null basis through
    // the eigendecomposition of E E^T
    RealMatrix gram = matmul(as.constraints, as.constraints.transpose());
    std::vector<double> vals;
    RealMatrix vecs;
    sym_eigen(gram, vals, vecs);
    const double lmax = std::max(vals.empty() ? 0.0 : vals.back(), 0.0);
    const double lcut = kRankCutoff * kRankCutoff * lmax;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (vals[i] > lcut && vals[i] > 0.0) kept.push_back(i);

    std::vector<double> u(rows, 0.0);
    for (auto i : kept) {
        double proj = 0.0;
        for (std::size_t beta = 0; beta < rows; ++beta) proj += vecs(beta, i) * r[beta];
        proj /= vals[i];
        for (std::size_t beta = 0; beta < rows; ++beta) u[beta] += vecs(beta, i) * proj;
    }
    as.particular.assign(n2, 0.0);
    for (std::size_t alpha = 0; alpha < n2; ++alpha) {
        double t = 0.0;
        for (std::size_t beta = 0; beta < rows; ++beta) t += as.constraints(beta, alpha) * u[beta];
        as.particular[alpha] = t;
    }
    double residual = 0.0;
    for (std::size_t beta = 0; beta < rows; ++beta) {
        double t = -r[beta];
        for (std::size_t alpha = 0; alpha < n2; ++alpha)
            t += as.constraints(beta, alpha) * as.particular[alpha];
        residual = std::max(residual, std::abs(t));
    }
    if (residual > 1e-8 * (1.0 + r_scale))
        throw infeasible_constraints("build_extension_assembly: no operator matches the marginal");

    RealMatrix rowspace(n2, kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c) {
        const double inv_s = 1.0 / std::sqrt(vals[kept[c]]);
        for (std::size_t alpha = 0; alpha < n2; ++alpha) {
            double t = 0.0;
            for (std::size_t beta = 0; beta < rows; ++beta)
                t += as.constraints(beta, alpha) * vecs(beta, kept[c]);
            rowspace(alpha, c) = t * inv_s;
        }
    }
    as.null_basis = orthonormal_complement(rowspace);

    // LMI: variables are the null-space coordinates plus t (last)
    const std::size_t nfree = as.null_basis.cols();
    as.lmi.n_vars = nfree + 1;
    as.lmi.objective.assign(nfree + 1, 0.0);
    as.lmi.objective[nfree] = 1.0;

    const ComplexMatrix sigma0 = matrix_from_coordinates(as.particular, n);
    std::vector<ComplexMatrix> dirs;
    dirs.reserve(nfree);
    std::vector<double> column(n2);
    for (std::size_t j = 0; j < nfree; ++j) {
        for (std::size_t alpha = 0; alpha < n2; ++alpha) column[alpha] = as.null_basis(alpha, j);
        dirs.push_back(matrix_from_coordinates(column, n));
    }

    LmiBlock base;
    base.size = 2 * n;
    base.f0 = embed_hermitian(sigma0);
    base.fi.reserve(nfree + 1);
    for (const auto& d : dirs) base.fi.push_back(embed_hermitian(d));
    RealMatrix neg = RealMatrix::identity(2 * n);
    neg *= -1.0;
    base.fi.push_back(std::move(neg));
    as.lmi.blocks.push_back(std::move(base));

    for (auto m : as.cuts) {
        const auto factors = cut_factors(as.level, m);
        LmiBlock blk;
        blk.size = 2 * as.lift_dim;
        blk.f0 = embed_hermitian(partial_transpose_multi(lift(sigma0), idx, factors));
        blk.fi.reserve(nfree + 1);
        for (const auto& d : dirs)
            blk.fi.push_back(embed_hermitian(partial_transpose_multi(lift(d), idx, factors)));
        RealMatrix negc = RealMatrix::identity(2 * as.lift_dim);
        negc *= -1.0;
        blk.fi.push_back(std::move(negc));
        as.lmi.blocks.push_back(std::move(blk));
    }
    as.lmi.validate();
    return as;
}

LmiProblem build_extension_problem(const BipartiteState& rho, const ExtensionSpec& spec) {
    return build_extension_assembly(rho, spec).lmi;
}

ComplexMatrix extension_from_variables(const ExtensionAssembly& assembly,
                                       const std::vector<double>& x) {
    const std::size_t nfree = assembly.null_basis.cols();
    if (x.size() < nfree)
        throw std::invalid_argument("extension_from_variables: variable count mismatch");
    std::vector<double> y = assembly.particular;
    for (std::size_t j = 0; j < nfree; ++j)
        for (std::size_t alpha = 0; alpha < y.size(); ++alpha)
            y[alpha] += assembly.null_basis(alpha, j) * x[j];
    return matrix_from_coordinates(y, assembly.ext_dim);
}

// ── interpretation ───────────────────────────────────────────────────────────

const char* to_string(ExtensionStatus s) {
    switch (s) {
    case ExtensionStatus::ExtensionFound: return "ExtensionFound";
    case ExtensionStatus::NoExtension: return "NoExtension";
    case ExtensionStatus::NumericalFailure: return "NumericalFailure";
    }
    return "?";
}

StructureReport verify_extension(const ComplexMatrix& sigma, const BipartiteState& rho,
                                 const ExtensionSpec& spec, double tol) {
    spec.validate();
    if (rho.matrix.rows() != rho.dim_a * rho.dim_b || rho.matrix.cols() != rho.matrix.rows())
        throw std::invalid_argument("verify_extension: state dimensions inconsistent");
    const std::size_t n = rho.dim_a * sym_dimension(rho.dim_b, spec.level);
    if (sigma.rows() != n || sigma.cols() != n)
        throw std::invalid_argument("verify_extension: sigma has the wrong dimension");

    StructureReport rep;
    auto add = [&](const std::string& name, double residual) {
        rep.checks.push_back({name, residual <= tol, residual});
    };

    add("hermiticity", sigma.hermiticity_error());
    const ComplexMatrix h = (sigma + sigma.adjoint()) * Cx(0.5, 0.0);
    add("psd", std::max(0.0, -min_eigenvalue(h)));

    const ComplexMatrix w =
        kron(ComplexMatrix::identity(rho.dim_a), sym_isometry(rho.dim_b, spec.level));
    const ComplexMatrix lifted = w * h * w.adjoint();
    const TensorIndex idx(lift_dims(rho.dim_a, rho.dim_b, spec.level));

    add("marginal", (partial_trace(lifted, idx, {0, 1}) - rho.matrix).max_abs());

    double swap_residual = 0.0;
    for (std::size_t i = 0; i + 1 < spec.level; ++i) {
        std::vector<std::size_t> perm(spec.level);
        for (std::size_t q = 0; q < spec.level; ++q) perm[q] = q;
        std::swap(perm[i], perm[i + 1]);
        const ComplexMatrix p = kron(ComplexMatrix::identity(rho.dim_a),
                                     permutation_operator(rho.dim_b, perm));
        swap_residual = std::max(swap_residual, (p * lifted * p.adjoint() - lifted).max_abs());
    }
    add("permutation-invariance", swap_residual);

    for (auto m : spec.effective_cuts()) {
        const ComplexMatrix cut =
            partial_transpose_multi(lifted, idx, cut_factors(spec.level, m));
        add("cut-psd-" + std::to_string(m), std::max(0.0, -min_eigenvalue(cut)));
    }
    return rep;
}

ExtensionResult run_dps(const BipartiteState& rho, const ExtensionSpec& spec) {
    ExtensionResult res;
    res.spec = spec;
    const ExtensionAssembly assembly = build_extension_assembly(rho, spec);

    SolveOptions opts;
    opts.gap_tol = 1e-9;
    opts.residual_tol = 1e-10; // keeps the dual certificate tight enough for a witness
    opts.max_iterations = 300;
    const SdpSolution sol = solve(assembly.lmi, opts);

    res.solver_status = sol.status;
    res.iterations = sol.iterations;
    res.t_star = sol.x.empty() ? 0.0 : sol.x.back();
    if (sol.status != SolveStatus::Optimal) {
        res.status = ExtensionStatus::NumericalFailure;
        res.diagnostics = std::string("solver: ") + to_string(sol.status);
        return res;
    }
    if (res.t_star < -kEntangledThreshold) {
        res.status = ExtensionStatus::NoExtension;
        res.dual_blocks = sol.dual_blocks;
        return res;
    }
    if (res.t_star >= -kFeasibleThreshold) {
        ComplexMatrix sigma = extension_from_variables(assembly, sol.x);
        res.verification = verify_extension(sigma, rho, spec, kFeasibleThreshold);
        if (res.verification.all_passed()) {
            res.status = ExtensionStatus::ExtensionFound;
            res.extension = std::move(sigma);
        } else {
            res.status = ExtensionStatus::NumericalFailure;
            res.diagnostics = "candidate extension failed verification";
            res.dual_blocks = sol.dual_blocks;
        }
        return res;
    }
    res.status = ExtensionStatus::NumericalFailure;
    res.diagnostics = "objective in the inconclusive band";
    res.dual_blocks = sol.dual_blocks;
    return res;
}

EscalationResult run_dps_escalating(const BipartiteState& rho, ExtensionSpec spec) {
    EscalationResult er;
    er.result = run_dps(rho, spec);
    er.decided_level = spec.level;
    if (er.result.status != ExtensionStatus::ExtensionFound) return er;

    ExtensionSpec next = spec;
    next.level = spec.level + 1;
    ExtensionResult second = run_dps(rho, next);
    er.escalated = true;
    if (second.status != ExtensionStatus::NumericalFailure) {
        er.result = std::move(second);
        er.decided_level = next.level;
    }
    return er;
}

// ── witness ──────────────────────────────────────────────────────────────────

WitnessResult extract_witness(const ExtensionResult& result, const BipartiteState& rho,
                              std::uint64_t seed) {
    if (result.status != ExtensionStatus::NoExtension || result.dual_blocks.empty())
        throw std::invalid_argument("extract_witness: needs a NoExtension result with dual blocks");
    const ExtensionAssembly assembly = build_extension_assembly(rho, result.spec);
    if (result.dual_blocks.size() != 1 + assembly.cuts.size())
        throw std::invalid_argument("extract_witness: dual block count mismatch");

    const ComplexMatrix w = kron(ComplexMatrix::identity(assembly.dim_a), assembly.isometry);
    const ComplexMatrix wd = w.adjoint();
    const TensorIndex idx(lift_dims(assembly.dim_a, assembly.dim_b, assembly.level));

    // pull every dual block back to the sigma side
    ComplexMatrix ytot = unembed_hermitian(result.dual_blocks[0]);
    for (std::size_t i = 0; i < assembly.cuts.size(); ++i) {
        const ComplexMatrix z = unembed_hermitian(result.dual_blocks[1 + i]);
        const auto factors = cut_factors(assembly.level, assembly.cuts[i]);
        ytot += wd * partial_transpose_multi(z, idx, factors) * w;
    }

    // represent ytot through the marginal map: least squares E^T mu = y
    const std::vector<double> y = coordinates_from_matrix(ytot);
    const std::size_t rows = assembly.constraints.rows();
    std::vector<double> ey(rows, 0.0);
    for (std::size_t beta = 0; beta < rows; ++beta) {
        double t = 0.0;
        for (std::size_t alpha = 0; alpha < y.size(); ++alpha)
            t += assembly.constraints(beta, alpha) * y[alpha];
        ey[beta] = t;
    }
    RealMatrix gram = matmul(assembly.constraints, assembly.constraints.transpose());
    std::vector<double> vals;
    RealMatrix vecs;
    sym_eigen(gram, vals, vecs);
    const double lmax = std::max(vals.empty() ? 0.0 : vals.back(), 0.0);
    const double lcut = kRankCutoff * kRankCutoff * lmax;
    std::vector<double> mu(rows, 0.0);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] <= lcut || vals[i] <= 0.0) continue;
        double proj = 0.0;
        for (std::size_t beta = 0; beta < rows; ++beta) proj += vecs(beta, i) * ey[beta];
        proj /= vals[i];
        for (std::size_t beta = 0; beta < rows; ++beta) mu[beta] += vecs(beta, i) * proj;
    }

    ComplexMatrix witness = matrix_from_coordinates(mu, assembly.dim_a * assembly.dim_b);
    const double tr = witness.trace().real();
    if (std::abs(tr) > 1e-12) witness *= Cx(1.0 / tr, 0.0);

    WitnessResult out;
    out.state_overlap = real_trace_product(witness, rho.matrix);

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_unit = [&](std::size_t dim) {
        std::vector<Cx> v(dim);
        double norm2 = 0.0;
        for (auto& c : v) {
            c = Cx(gauss(gen), gauss(gen));
            norm2 += std::norm(c);
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : v) c *= inv;
        return v;
    };
    double worst = 0.0;
    std::vector<Cx> xy(assembly.dim_a * assembly.dim_b);
    for (std::size_t s = 0; s < kWitnessSamples; ++s) {
        const auto x = random_unit(assembly.dim_a);
        const auto yv = random_unit(assembly.dim_b);
        for (std::size_t i = 0; i < assembly.dim_a; ++i)
            for (std::size_t j = 0; j < assembly.dim_b; ++j)
                xy[i * assembly.dim_b + j] = x[i] * yv[j];
        Cx val(0.0, 0.0);
        for (std::size_t r = 0; r < xy.size(); ++r) {
            Cx row(0.0, 0.0);
            for (std::size_t c = 0; c < xy.size(); ++c) row += witness(r, c) * xy[c];
            val += std::conj(xy[r]) * row;
        }
        worst = (s == 0) ? val.real() : std::min(worst, val.real());
    }
    out.w = std::move(witness);
    out.min_product_value = worst;
    out.samples = kWitnessSamples;
    out.valid = out.state_overlap < 0.0 && out.min_product_value >= -kWitnessProductTol;
    return out;
}

// ── closed-form endpoint extension ───────────────────────────────────────────

ComplexMatrix separable_extension(const FamilyParams& p, std::size_t level) {
    p.validate();
    if (p.a != 0.0)
        throw std::invalid_argument("separable_extension: closed form only covers a = 0");
    if (level < 1) throw std::invalid_argument("separable_extension: level must be positive");

    const std::size_t d = p.d;
    const ComplexMatrix v = sym_isometry(d, level);
    const std::size_t s = v.cols();
    const std::size_t bk = v.rows();
    const double scale = normalization(p);

    ComplexMatrix sigma(d * s, d * s);
    for (std::size_t m = 0; m < d; ++m) {
        const double lam = (m + 1 < d) ? p.lambdas[m] : 1.0;
        if (lam == 0.0) continue;
        const ComplexMatrix psi = product_vector(p, m + 1);
        std::vector<Cx> factor(d);
        for (std::size_t b = 0; b < d; ++b) factor[b] = psi(m * d + b, 0);
        ComplexMatrix word(bk, 1);
        for (std::size_t r = 0; r < bk; ++r) {
            Cx prod(1.0, 0.0);
            std::size_t rem = r;
            for (std::size_t q = 0; q < level; ++q) {
                prod *= factor[rem % d];
                rem /= d;
            }
            word(r, 0) = prod;
        }
        const ComplexMatrix comp = v.adjoint() * word; // coordinates in Sym^level
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                sigma(m * s + i, m * s + j) += scale * lam * comp(i, 0) * std::conj(comp(j, 0));
    }
    return sigma;
}

} // namespace pptkit
