#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "hodge/hodge_ops.hpp"

// JSON and text formats of the hodge tool. Every reader throws hodge::InputError
// with a message naming the offending key, index or token.
namespace hodge::io {

using json = nlohmann::ordered_json;

// {"n": n, "entries": [[...], ...]}, row-major, finite, n >= 1.
RealMatrix matrix_from_json(const json& j, std::string_view what);
json matrix_to_json(const RealMatrix& m);

// {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}
json complex_matrix_to_json(const ComplexMatrix& m);

// Any subset of E, T, S. A bare matrix object is read as S.
struct OperatorFile {
    std::optional<RealMatrix> E;
    std::optional<RealMatrix> T;
    std::optional<RealMatrix> S;
};

OperatorFile operators_from_json(const json& j);
json operators_to_json(const OperatorFile& ops);

// [{"p": p, "q": q, "mult": m}, ...]
HodgeType type_from_json(const json& j);
json type_to_json(const HodgeType& type);

// "(p,q)xM+(p,q)+..." with optional whitespace; xM defaults to 1.
HodgeType parse_type_spec(std::string_view text);

json report_to_json(const VerificationReport& report);
json decomposition_to_json(const HodgeDecomposition& dec);
json filtration_to_json(const FiltrationComplement& fc);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Pretty-printed with a trailing newline; -0.0 is printed as 0.0.
std::string dump(const json& j);

}  // namespace hodge::io
