#include "pptkit/json_io.hpp"

#include <fstream>
#include <string>

namespace pptkit {

using nlohmann::json;

namespace {

json part_rows(const ComplexMatrix& m, bool imaginary) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(imaginary ? m(i, j).imag() : m(i, j).real());
        rows.push_back(std::move(row));
    }
    return rows;
}

// reads one n x m nested array of the expected shape into `put`
template <typename Put>
void read_part(const json& part, std::size_t rows, std::size_t cols, const char* key, Put put) {
    if (!part.is_array() || part.size() != rows)
        throw std::invalid_argument(std::string("matrix JSON: '") + key + "' has wrong row count");
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = part[i];
        if (!row.is_array() || row.size() != cols)
            throw std::invalid_argument(std::string("matrix JSON: '") + key +
                                        "' has a wrong-length row");
        for (std::size_t j = 0; j < cols; ++j) put(i, j, row[j].get<double>());
    }
}

Outcome outcome_from_string(const std::string& s) {
    if (s == "Entangled") return Outcome::Entangled;
    if (s == "NotDetected") return Outcome::NotDetected;
    if (s == "SeparableConsistent") return Outcome::SeparableConsistent;
    throw std::invalid_argument("verdict JSON: unknown outcome '" + s + "'");
}

SolveStatus status_from_string(const std::string& s) {
    if (s == "Optimal") return SolveStatus::Optimal;
    if (s == "MaxIterations") return SolveStatus::MaxIterations;
    if (s == "LinearAlgebraFailure") return SolveStatus::LinearAlgebraFailure;
    throw std::invalid_argument("solution JSON: unknown status '" + s + "'");
}

} // namespace

void to_json(json& j, const ComplexMatrix& m) {
    j = json{{"rows", m.rows()},
             {"cols", m.cols()},
             {"re", part_rows(m, false)},
             {"im", part_rows(m, true)}};
}

void from_json(const json& j, ComplexMatrix& m) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    m = ComplexMatrix(rows, cols);
    // assign the parts rather than accumulate them: adding to the zero fill
    // would wipe the sign of a stored -0.0
    read_part(j.at("re"), rows, cols, "re",
              [&](std::size_t i, std::size_t k, double v) { m(i, k).real(v); });
    read_part(j.at("im"), rows, cols, "im",
              [&](std::size_t i, std::size_t k, double v) { m(i, k).imag(v); });
}

void to_json(json& j, const RealMatrix& m) {
    ComplexMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) c(i, k) = Cx(m(i, k), 0.0);
    to_json(j, c);
}

void from_json(const json& j, RealMatrix& m) {
    ComplexMatrix c = j.get<ComplexMatrix>();
    m = RealMatrix(c.rows(), c.cols());
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t k = 0; k < c.cols(); ++k) {
            if (c(i, k).imag() != 0.0)
                throw std::invalid_argument("matrix JSON: expected a real matrix, got 'im' != 0");
            m(i, k) = c(i, k).real();
        }
}

void to_json(json& j, const BipartiteState& s) {
    to_json(j, s.matrix);
    j["dims"] = json::array({s.dim_a, s.dim_b});
}

void from_json(const json& j, BipartiteState& s) {
    from_json(j, s.matrix);
    const json& dims = j.at("dims");
    if (!dims.is_array() || dims.size() != 2)
        throw std::invalid_argument("state JSON: 'dims' must be [dA, dB]");
    s.dim_a = dims[0].get<std::size_t>();
    s.dim_b = dims[1].get<std::size_t>();
    if (s.dim_a * s.dim_b != s.matrix.rows() || s.matrix.rows() != s.matrix.cols())
        throw std::invalid_argument("state JSON: 'dims' do not match the matrix shape");
}

void to_json(json& j, const FamilyParams& p) {
    j = json{{"d", p.d}, {"a", p.a}, {"lambdas", p.lambdas}};
}

void from_json(const json& j, FamilyParams& p) {
    p.d = j.at("d").get<std::size_t>();
    p.a = j.at("a").get<double>();
    p.lambdas = j.at("lambdas").get<std::vector<double>>();
}

void to_json(json& j, const Verdict& v) {
    j = json{{"criterion", v.criterion},
             {"outcome", to_string(v.outcome)},
             {"evidence", v.evidence},
             {"tol", v.tol}};
}

void from_json(const json& j, Verdict& v) {
    v.criterion = j.at("criterion").get<std::string>();
    v.outcome = outcome_from_string(j.at("outcome").get<std::string>());
    v.evidence = j.at("evidence").get<double>();
    v.tol = j.at("tol").get<double>();
}

void to_json(json& j, const LmiBlock& b) {
    j = json{{"size", b.size}, {"F0", b.f0}, {"Fi", b.fi}};
}

void from_json(const json& j, LmiBlock& b) {
    b.size = j.at("size").get<std::size_t>();
    b.f0 = j.at("F0").get<RealMatrix>();
    b.fi = j.at("Fi").get<std::vector<RealMatrix>>();
    if (b.f0.rows() != b.size || b.f0.cols() != b.size)
        throw std::invalid_argument("LMI JSON: 'F0' does not match the block size");
    for (const RealMatrix& f : b.fi)
        if (f.rows() != b.size || f.cols() != b.size)
            throw std::invalid_argument("LMI JSON: an 'Fi' entry does not match the block size");
}

void to_json(json& j, const LmiProblem& p) {
    j = json{{"blocks", p.blocks}, {"objective", p.objective}};
}

void from_json(const json& j, LmiProblem& p) {
    p.blocks = j.at("blocks").get<std::vector<LmiBlock>>();
    p.objective = j.at("objective").get<std::vector<double>>();
    p.n_vars = p.objective.size();
    p.validate();
}

void to_json(json& j, const SdpSolution& s) {
    j = json{{"x", s.x},
             {"objective", s.objective},
             {"status", to_string(s.status)},
             {"iterations", s.iterations},
             {"primal_residual", s.primal_residual},
             {"dual_residual", s.dual_residual},
             {"gap", s.gap}};
}

void from_json(const json& j, SdpSolution& s) {
    s = SdpSolution{};
    s.x = j.at("x").get<std::vector<double>>();
    s.objective = j.at("objective").get<double>();
    s.status = status_from_string(j.at("status").get<std::string>());
    s.iterations = j.at("iterations").get<std::size_t>();
    s.primal_residual = j.at("primal_residual").get<double>();
    s.dual_residual = j.at("dual_residual").get<double>();
    s.gap = j.at("gap").get<double>();
}

void to_json(json& j, const WitnessResult& w) {
    j = json{{"matrix", w.w},
             {"state_overlap", w.state_overlap},
             {"min_product_value", w.min_product_value},
             {"samples", w.samples},
             {"valid", w.valid}};
}

void from_json(const json& j, WitnessResult& w) {
    w.w = j.at("matrix").get<ComplexMatrix>();
    w.state_overlap = j.at("state_overlap").get<double>();
    w.min_product_value = j.at("min_product_value").get<double>();
    w.samples = j.at("samples").get<std::size_t>();
    w.valid = j.at("valid").get<bool>();
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

void save_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

} // namespace pptkit
