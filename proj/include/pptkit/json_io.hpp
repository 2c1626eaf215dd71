#pragma once

/*
 * JSON round-tripping for every value that crosses the process boundary:
 * matrices, bipartite states, family parameters, verdicts, LMI problems,
 * solver solutions, and witnesses.  The matrix layout is
 *
 *     {"rows": n, "cols": m, "re": [[...]], "im": [[...]]}
 *
 * with row-major nested arrays; bipartite states add "dims": [dA, dB].
 * Doubles are emitted with the shortest decimal form that parses back to
 * the identical bits, so parse(dump(x)) == x holds exactly.
 *
 * The functions follow the to_json/from_json ADL convention, so values
 * convert implicitly: nlohmann::json j = state; auto s = j.get<...>().
 * Parsing throws nlohmann::json::exception for missing/mistyped keys and
 * std::invalid_argument for structurally inconsistent payloads.
 */

#include "pptkit/criteria.hpp"
#include "pptkit/dps.hpp"
#include "pptkit/sdp.hpp"
#include "pptkit/states.hpp"

#include "json.hpp"

#include <filesystem>

namespace pptkit {

void to_json(nlohmann::json& j, const ComplexMatrix& m);
void from_json(const nlohmann::json& j, ComplexMatrix& m);

// real matrices reuse the matrix layout with an all-zero "im" part, which
// parsing requires (a genuinely complex payload is rejected, not truncated)
void to_json(nlohmann::json& j, const RealMatrix& m);
void from_json(const nlohmann::json& j, RealMatrix& m);

void to_json(nlohmann::json& j, const BipartiteState& s);
void from_json(const nlohmann::json& j, BipartiteState& s);

// {"d": 3, "a": 0.8, "lambdas": [0.3, 0.7]}
void to_json(nlohmann::json& j, const FamilyParams& p);
void from_json(const nlohmann::json& j, FamilyParams& p);

// {"criterion": "realignment", "outcome": "Entangled", "evidence": ..., "tol": ...}
void to_json(nlohmann::json& j, const Verdict& v);
void from_json(const nlohmann::json& j, Verdict& v);

// {"blocks": [{"size": n, "F0": ..., "Fi": [...]}], "objective": [...]}
void to_json(nlohmann::json& j, const LmiBlock& b);
void from_json(const nlohmann::json& j, LmiBlock& b);
void to_json(nlohmann::json& j, const LmiProblem& p);
void from_json(const nlohmann::json& j, LmiProblem& p);

// the archival subset of a solve: x, objective, status, iterations and the
// three residuals; dual blocks and the iterate trace stay in-process
void to_json(nlohmann::json& j, const SdpSolution& s);
void from_json(const nlohmann::json& j, SdpSolution& s);

void to_json(nlohmann::json& j, const WitnessResult& w);
void from_json(const nlohmann::json& j, WitnessResult& w);

// whole-file helpers; I/O failures surface as std::runtime_error
nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& j);

} // namespace pptkit
