// hodge: command-line front end.
//
// Exit codes: 0 success (or verdict true), 1 verdict false, 2 bad input.
// Errors go to stderr as {"error": kind, "message": text}.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "hodge/errors.hpp"
#include "hodge/hodge_ops.hpp"
#include "hodge/instance_gen.hpp"
#include "hodge/weierstrass.hpp"
#include "io.hpp"

namespace {

using hodge::io::json;

double default_tolerance() {
    const char* env = std::getenv("HODGE_SIGMA_TOL");
    if (env == nullptr || *env == '\0') return hodge::linalg::default_tolerance;
    std::size_t used = 0;
    double tol = 0.0;
    try {
        tol = std::stod(env, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != std::string(env).size() || !(tol > 0.0) || !std::isfinite(tol)) {
        throw hodge::InputError(std::string("HODGE_SIGMA_TOL: not a positive number: ") + env);
    }
    return tol;
}

void require_tol(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw hodge::InputError("--tol must be a positive number");
}

int print_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
    return 2;
}

void emit(const json& j, const std::string& out) {
    const std::string text = hodge::io::dump(j);
    if (out.empty()) {
        std::cout << text;
    } else {
        hodge::io::write_text_file(out, text);
    }
}

// S from an operator file, falling back to E + T.
hodge::RealMatrix operator_s(const hodge::io::OperatorFile& ops) {
    if (ops.S) return *ops.S;
    return *ops.E + *ops.T;
}

hodge::OperatorTriple triple_of(const hodge::io::OperatorFile& ops, double tol) {
    if (ops.E) return {*ops.E, *ops.T, operator_s(ops)};
    auto pair = hodge::split(*ops.S, tol);
    return {std::move(pair.E), std::move(pair.T), *ops.S};
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

struct Options {
    double tol = 0.0;
    double re = 0.0;
    double im = 0.0;
    double radius = 0.0;
    int grid = 0;
    std::string type_spec;
    std::uint64_t seed = 0;
    bool conjugate = false;
    std::string file;
    std::string out;
    std::int64_t r = 0;
    double x = 0.0;
    double y = 0.0;
};

int run_sigma_eval(const Options& o) {
    require_tol(o.tol);
    hodge::weierstrass::SigmaOptions so;
    so.z_bound = std::max(hodge::weierstrass::default_z_bound, std::abs(std::complex<double>(o.re, o.im)));
    const auto z = std::complex<double>(o.re, o.im);
    const auto value = hodge::weierstrass::sigma(z, o.tol, so);
    emit({{"z", complex_json(z)}, {"sigma", complex_json(value)}}, "");
    return 0;
}

int run_sigma_scan(const Options& o) {
    require_tol(o.tol);
    if (!(o.radius > 0.0) || !std::isfinite(o.radius)) throw hodge::InputError("--radius must be positive");
    if (o.grid < 1) throw hodge::InputError("--grid must be at least 1");
    const auto plan = hodge::weierstrass::plan_truncation(o.radius * std::sqrt(2.0), o.tol);
    std::ostringstream csv;
    csv.precision(17);
    csv << "x,y,abs_sigma\n";
    const double step = o.grid > 1 ? 2.0 * o.radius / (o.grid - 1) : 0.0;
    for (int i = 0; i < o.grid; ++i) {
        const double y = o.grid > 1 ? -o.radius + step * i : 0.0;
        for (int k = 0; k < o.grid; ++k) {
            const double x = o.grid > 1 ? -o.radius + step * k : 0.0;
            const double a = std::abs(hodge::weierstrass::sigma({x, y}, plan));
            csv << (x == 0.0 ? 0.0 : x) << ',' << (y == 0.0 ? 0.0 : y) << ',' << a << '\n';
        }
    }
    if (o.out.empty()) {
        std::cout << csv.str();
    } else {
        hodge::io::write_text_file(o.out, csv.str());
    }
    return 0;
}

int run_gen(const Options& o) {
    hodge::gen::GenConfig cfg;
    cfg.seed = o.seed;
    const hodge::HodgeType type =
        o.type_spec.empty() ? hodge::gen::random_hodge_type(cfg) : hodge::io::parse_type_spec(o.type_spec);
    std::optional<hodge::RealMatrix> conj;
    if (o.conjugate) conj = hodge::gen::random_unimodular(static_cast<std::int64_t>(type.dimension()), cfg);
    const auto triple = hodge::assemble(type, conj);
    emit(hodge::io::operators_to_json({triple.E, triple.T, triple.S}), o.out);
    return 0;
}

int run_verify(const Options& o) {
    require_tol(o.tol);
    const auto ops = hodge::io::operators_from_json(hodge::io::read_json_file(o.file));
    hodge::VerificationReport report;
    if (ops.E) {
        report = hodge::verify_pair(*ops.E, *ops.T, o.tol);
        if (ops.S) {
            const double gap = (*ops.S - (*ops.E + *ops.T)).norm();
            if (gap > report.threshold) {
                report.witnesses.push_back({"sum", "||S - (E+T)|| = " + std::to_string(gap)});
                report.verdict = false;
            }
        }
        report = report.merged(hodge::verify_sigma(operator_s(ops), o.tol));
    } else {
        report = hodge::verify_sigma(*ops.S, o.tol);
    }
    emit(hodge::io::report_to_json(report), "");
    return report.verdict ? 0 : 1;
}

int run_split(const Options& o) {
    require_tol(o.tol);
    const auto ops = hodge::io::operators_from_json(hodge::io::read_json_file(o.file));
    auto pair = hodge::split(operator_s(ops), o.tol);
    emit(hodge::io::operators_to_json({std::move(pair.E), std::move(pair.T), {}}), o.out);
    return 0;
}

int run_classify(const Options& o) {
    require_tol(o.tol);
    const auto ops = hodge::io::operators_from_json(hodge::io::read_json_file(o.file));
    const auto type = hodge::classify(operator_s(ops), o.tol);
    emit({{"spec", type.to_string()}, {"dimension", type.dimension()}, {"summands", hodge::io::type_to_json(type)}},
         "");
    return 0;
}

int run_decompose(const Options& o) {
    require_tol(o.tol);
    const auto ops = hodge::io::operators_from_json(hodge::io::read_json_file(o.file));
    const auto dec = hodge::hodge_decomposition(triple_of(ops, o.tol), o.tol);
    emit(hodge::io::decomposition_to_json(dec), o.out);
    return 0;
}

int run_filtration(const Options& o) {
    require_tol(o.tol);
    const auto ops = hodge::io::operators_from_json(hodge::io::read_json_file(o.file));
    const auto dec = hodge::hodge_decomposition(triple_of(ops, o.tol), o.tol);
    emit(hodge::io::filtration_to_json(hodge::filtration_complement(dec, o.r)), "");
    return 0;
}

int run_rho(const Options& o) {
    require_tol(o.tol);
    if (!std::isfinite(o.x) || !std::isfinite(o.y)) throw hodge::InputError("--x and --y must be finite");
    const auto ops = hodge::io::operators_from_json(hodge::io::read_json_file(o.file));
    emit(hodge::io::matrix_to_json(hodge::rho_eval(triple_of(ops, o.tol), o.x, o.y, o.tol)), o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    try {
        o.tol = default_tolerance();
    } catch (const hodge::Error& e) {
        return print_error(e.kind(), e.what());
    }

    CLI::App app{"Hodge structures as operator pairs, checked against the sigma function of Z(1-i)+Z(1+i)"};
    app.require_subcommand(1);

    auto add_tol = [&](CLI::App* cmd) { cmd->add_option("--tol", o.tol, "Tolerance (default 1e-8 or HODGE_SIGMA_TOL)"); };
    auto add_file = [&](CLI::App* cmd) { cmd->add_option("file", o.file, "Operator JSON file")->required(); };

    auto* eval = app.add_subcommand("sigma-eval", "Evaluate sigma at one point");
    eval->add_option("--re", o.re, "Real part")->required();
    eval->add_option("--im", o.im, "Imaginary part")->required();
    add_tol(eval);

    auto* scan = app.add_subcommand("sigma-scan", "CSV of |sigma| over a square grid");
    scan->add_option("--radius", o.radius, "Half-width of the square")->required();
    scan->add_option("--grid", o.grid, "Points per side")->required();
    scan->add_option("--out", o.out, "CSV file (stdout if omitted)");
    add_tol(scan);

    auto* gen = app.add_subcommand("gen", "Assemble an operator file from a Hodge type");
    gen->add_option("--type", o.type_spec, "Type spec such as \"(1,0)x2+(1,1)x1\" (random if omitted)");
    gen->add_option("--seed", o.seed, "Seed for the random type and conjugator");
    gen->add_flag("--conjugate", o.conjugate, "Conjugate by a random unimodular matrix");
    gen->add_option("--out", o.out, "Output file (stdout if omitted)");

    auto* verify = app.add_subcommand("verify", "Check an operator file; exit 1 if it is not a Hodge structure");
    add_file(verify);
    add_tol(verify);

    auto* split = app.add_subcommand("split", "Recover E and T from S");
    add_file(split);
    split->add_option("--out", o.out, "Output file (stdout if omitted)");
    add_tol(split);

    auto* classify = app.add_subcommand("classify", "Hodge type of S");
    add_file(classify);
    add_tol(classify);

    auto* decompose = app.add_subcommand("decompose", "Subspaces V^{p,q} and weight spaces");
    add_file(decompose);
    decompose->add_option("--out", o.out, "Output file (stdout if omitted)");
    add_tol(decompose);

    auto* filtration = app.add_subcommand("filtration", "Check F^r against the conjugate of F^{n-r+1}");
    add_file(filtration);
    filtration->add_option("--r", o.r, "Filtration index")->required();
    add_tol(filtration);

    auto* rho = app.add_subcommand("rho", "exp(xE + yT), the action of e^{x+iy}");
    add_file(rho);
    rho->add_option("--x", o.x, "Real part")->required();
    rho->add_option("--y", o.y, "Imaginary part")->required();
    rho->add_option("--out", o.out, "Output file (stdout if omitted)");
    add_tol(rho);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return print_error("UsageError", e.what());
    }

    try {
        if (*eval) return run_sigma_eval(o);
        if (*scan) return run_sigma_scan(o);
        if (*gen) return run_gen(o);
        if (*verify) return run_verify(o);
        if (*split) return run_split(o);
        if (*classify) return run_classify(o);
        if (*decompose) return run_decompose(o);
        if (*filtration) return run_filtration(o);
        if (*rho) return run_rho(o);
    } catch (const hodge::Error& e) {
        return print_error(e.kind(), e.what());
    } catch (const std::exception& e) {
        return print_error("InternalError", e.what());
    }
    return 2;
}
