#include "io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hodge/errors.hpp"

namespace hodge::io {

namespace {

void require_keys(const json& j, std::string_view what, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw InputError(std::string(what) + ": unknown key \"" + key + "\"");
    }
}

std::int64_t integer_field(const json& j, const char* key, std::string_view what) {
    if (!j.contains(key)) throw InputError(std::string(what) + ": missing \"" + key + "\"");
    const json& v = j.at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) {
            return static_cast<std::int64_t>(d);
        }
    }
    throw InputError(std::string(what) + ": \"" + key + "\" must be an integer");
}

double clean(double x) { return x == 0.0 ? 0.0 : x; }

json rows_of(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(clean(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

void scrub_zeros(json& j) {
    if (j.is_number_float()) {
        j = clean(j.get<double>());
    } else if (j.is_structured()) {
        for (auto& child : j) scrub_zeros(child);
    }
}

std::string pq_key(std::int64_t p, std::int64_t q) {
    return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

}  // namespace

RealMatrix matrix_from_json(const json& j, std::string_view what) {
    require_keys(j, what, {"n", "entries"});
    const std::int64_t n = integer_field(j, "n", what);
    if (n < 1) throw InputError(std::string(what) + ": n must be at least 1");
    if (!j.contains("entries") || !j.at("entries").is_array()) {
        throw InputError(std::string(what) + ": \"entries\" must be an array of rows");
    }
    const json& rows = j.at("entries");
    if (static_cast<std::int64_t>(rows.size()) != n) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(n) + " rows, got " +
                             std::to_string(rows.size()));
    }
    RealMatrix m(n, n);
    for (std::int64_t i = 0; i < n; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<std::int64_t>(row.size()) != n) {
            throw DimensionError(std::string(what) + ": row " + std::to_string(i) + " must have " +
                                 std::to_string(n) + " entries");
        }
        for (std::int64_t k = 0; k < n; ++k) {
            const json& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) {
                throw InputError(std::string(what) + ": entry [" + std::to_string(i) + "][" +
                                 std::to_string(k) + "] is not a number");
            }
            const double d = v.get<double>();
            if (!std::isfinite(d)) {
                throw InputError(std::string(what) + ": entry [" + std::to_string(i) + "][" +
                                 std::to_string(k) + "] is not finite");
            }
            m(i, k) = d;
        }
    }
    return m;
}

json matrix_to_json(const RealMatrix& m) {
    json j;
    j["n"] = m.rows();
    j["entries"] = rows_of(m);
    return j;
}

json complex_matrix_to_json(const ComplexMatrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["re"] = rows_of(m.real());
    j["im"] = rows_of(m.imag());
    return j;
}

OperatorFile operators_from_json(const json& j) {
    if (j.is_object() && j.contains("entries")) return {{}, {}, matrix_from_json(j, "S")};
    require_keys(j, "operator file", {"E", "T", "S"});
    OperatorFile ops;
    if (j.contains("E")) ops.E = matrix_from_json(j.at("E"), "E");
    if (j.contains("T")) ops.T = matrix_from_json(j.at("T"), "T");
    if (j.contains("S")) ops.S = matrix_from_json(j.at("S"), "S");
    if (!ops.E && !ops.T && !ops.S) throw InputError("operator file: needs at least one of E, T, S");
    if (ops.E.has_value() != ops.T.has_value()) {
        throw InputError("operator file: E and T must be given together");
    }
    const auto size = [](const std::optional<RealMatrix>& m) { return m ? m->rows() : -1; };
    const Eigen::Index n = ops.S ? ops.S->rows() : ops.E->rows();
    for (const auto* m : {&ops.E, &ops.T, &ops.S}) {
        if (m->has_value() && size(*m) != n) throw DimensionError("operator file: E, T, S differ in size");
    }
    return ops;
}

json operators_to_json(const OperatorFile& ops) {
    json j = json::object();
    if (ops.E) j["E"] = matrix_to_json(*ops.E);
    if (ops.T) j["T"] = matrix_to_json(*ops.T);
    if (ops.S) j["S"] = matrix_to_json(*ops.S);
    return j;
}

HodgeType type_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("hodge type: expected a non-empty array");
    HodgeType type;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string what = "hodge type[" + std::to_string(i) + "]";
        require_keys(j[i], what, {"p", "q", "mult"});
        const std::int64_t mult = j[i].contains("mult") ? integer_field(j[i], "mult", what) : 1;
        if (mult < 1) throw InputError(what + ": mult must be at least 1");
        type.add(integer_field(j[i], "p", what), integer_field(j[i], "q", what), mult);
    }
    return type;
}

json type_to_json(const HodgeType& type) {
    json arr = json::array();
    for (const auto& s : type.summands()) {
        arr.push_back({{"p", s.p}, {"q", s.q}, {"mult", s.mult}});
    }
    return arr;
}

HodgeType parse_type_spec(std::string_view text) {
    std::size_t pos = 0;
    auto skip = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    auto fail = [&](const std::string& expected) -> InputError {
        skip();
        std::string token = pos < text.size() ? std::string(1, text[pos]) : std::string("end of input");
        return InputError("type spec: expected " + expected + " at offset " + std::to_string(pos) +
                          ", found '" + token + "'");
    };
    auto expect = [&](char c) {
        skip();
        if (pos >= text.size() || text[pos] != c) throw fail(std::string("'") + c + "'");
        ++pos;
    };
    auto integer = [&]() -> std::int64_t {
        skip();
        const std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        const std::size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == digits || pos - digits > 15) {
            pos = start;
            throw fail("an integer");
        }
        return std::stoll(std::string(text.substr(start, pos - start)));
    };

    HodgeType type;
    for (;;) {
        expect('(');
        const std::int64_t p = integer();
        expect(',');
        const std::int64_t q = integer();
        expect(')');
        std::int64_t mult = 1;
        skip();
        if (pos < text.size() && (text[pos] == 'x' || text[pos] == 'X')) {
            ++pos;
            const std::size_t at = pos;
            mult = integer();
            if (mult < 1) {
                pos = at;
                throw fail("a positive multiplicity");
            }
        }
        type.add(p, q, mult);
        skip();
        if (pos < text.size() && text[pos] == '+') {
            ++pos;
            continue;
        }
        break;
    }
    if (pos != text.size()) throw fail("'+' or end of input");
    return type;
}

json report_to_json(const VerificationReport& report) {
    json j;
    j["verdict"] = report.verdict;
    j["threshold"] = report.threshold;
    json residuals = json::object();
    if (report.commutator_norm) residuals["commutator"] = *report.commutator_norm;
    if (report.sin_E_norm) residuals["sin_E"] = *report.sin_E_norm;
    if (report.sinh_T_norm) residuals["sinh_T"] = *report.sinh_T_norm;
    if (report.parity_norm) residuals["parity"] = *report.parity_norm;
    if (report.sigma_norm) residuals["sigma"] = *report.sigma_norm;
    j["residuals"] = std::move(residuals);
    json witnesses = json::array();
    for (const auto& w : report.witnesses) witnesses.push_back({{"kind", w.kind}, {"detail", w.detail}});
    j["witnesses"] = std::move(witnesses);
    return j;
}

json decomposition_to_json(const HodgeDecomposition& dec) {
    json j;
    j["n"] = dec.n;
    if (const auto w = dec.pure_weight()) {
        j["pure_weight"] = *w;
    } else {
        j["pure_weight"] = nullptr;
    }
    json comps = json::array();
    for (const auto& [pq, basis] : dec.components) {
        comps.push_back({{"p", pq.p},
                         {"q", pq.q},
                         {"label", pq_key(pq.p, pq.q)},
                         {"dim", basis.cols()},
                         {"basis", complex_matrix_to_json(basis)}});
    }
    j["components"] = std::move(comps);
    json weights = json::array();
    for (const auto& [w, basis] : dec.weights) {
        weights.push_back({{"weight", w}, {"dim", basis.cols()}});
    }
    j["weights"] = std::move(weights);
    return j;
}

json filtration_to_json(const FiltrationComplement& fc) {
    return {{"weight", fc.weight},     {"r", fc.r},
            {"dim_F_r", fc.dim_f},     {"dim_conj_F_complement", fc.dim_conj},
            {"rank_sum", fc.rank_sum}, {"complementary", fc.complementary}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("write failed for " + path.string());
}

std::string dump(const json& j) {
    json copy = j;
    scrub_zeros(copy);
    return copy.dump(2) + "\n";
}

}  // namespace hodge::io
