#include "hodge/hodge_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hodge/errors.hpp"
#include "hodge/weierstrass.hpp"

namespace hodge {

namespace {

using linalg::SpectralData;

RealMatrix rotation_generator() {
    RealMatrix j(2, 2);
    j << 0.0, -1.0, 1.0, 0.0;
    return j;
}

std::string pq_string(std::int64_t p, std::int64_t q) {
    return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

bool is_integral(const RealMatrix& m) {
    return (m.array() == m.array().round()).all() && m.cwiseAbs().maxCoeff() < 1e15;
}

// Inverse of the conjugator. Integer matrices with determinant +-1 have an
// integer inverse; rounding the LU inverse recovers it exactly when it checks.
RealMatrix conjugator_inverse(const RealMatrix& p) {
    const Eigen::FullPivLU<RealMatrix> lu(p);
    if (!lu.isInvertible()) {
        throw SingularMatrixError("assemble: conjugator is singular (rank " +
                                  std::to_string(lu.rank()) + " of " + std::to_string(p.rows()) +
                                  ")");
    }
    RealMatrix inv = lu.inverse();
    if (is_integral(p) && std::abs(std::abs(lu.determinant()) - 1.0) < 1e-6) {
        const RealMatrix rounded = inv.array().round().matrix();
        const RealMatrix check = p * rounded;
        if (check == RealMatrix::Identity(p.rows(), p.cols())) return rounded;
    }
    return inv;
}

void require_same_square(const RealMatrix& a, const RealMatrix& b, const char* what) {
    linalg::require_square_finite(a, what);
    linalg::require_square_finite(b, what);
    if (a.rows() != b.rows()) {
        throw DimensionError(std::string(what) + ": operands have different dimensions");
    }
}

template <typename F>
std::optional<double> residual(F&& compute, std::vector<Witness>& witnesses, const char* kind) {
    try {
        return compute();
    } catch (const NumericalError& e) {
        witnesses.push_back({kind, e.what()});
        return std::nullopt;
    }
}

}  // namespace

// --- HodgeType -------------------------------------------------------------

HodgeType& HodgeType::add(std::int64_t p, std::int64_t q, std::int64_t mult) {
    if (mult < 1) {
        throw InputError("HodgeType: multiplicity of " + pq_string(p, q) + " must be positive");
    }
    if (q > p) std::swap(p, q);
    counts_[PQ{p, q}] += mult;
    return *this;
}

std::size_t HodgeType::dimension() const noexcept {
    std::size_t dim = 0;
    for (const auto& [pq, mult] : counts_) {
        dim += static_cast<std::size_t>(mult) * (pq.p == pq.q ? 1u : 2u);
    }
    return dim;
}

std::int64_t HodgeType::multiplicity(std::int64_t p, std::int64_t q) const {
    if (q > p) std::swap(p, q);
    const auto it = counts_.find(PQ{p, q});
    return it == counts_.end() ? 0 : it->second;
}

std::vector<Summand> HodgeType::summands() const {
    std::vector<Summand> out;
    out.reserve(counts_.size());
    for (const auto& [pq, mult] : counts_) out.push_back({pq.p, pq.q, mult});
    std::sort(out.begin(), out.end(), [](const Summand& x, const Summand& y) {
        if (x.p + x.q != y.p + y.q) return x.p + x.q < y.p + y.q;
        return x.p - x.q < y.p - y.q;
    });
    return out;
}

std::string HodgeType::to_string() const {
    std::string out;
    for (const auto& s : summands()) {
        if (!out.empty()) out += "+";
        out += pq_string(s.p, s.q) + "x" + std::to_string(s.mult);
    }
    return out;
}

// --- reports ---------------------------------------------------------------

VerificationReport VerificationReport::merged(const VerificationReport& other) const {
    VerificationReport out = *this;
    auto take = [](std::optional<double>& mine, const std::optional<double>& theirs) {
        if (!mine) mine = theirs;
    };
    take(out.commutator_norm, other.commutator_norm);
    take(out.sin_E_norm, other.sin_E_norm);
    take(out.sinh_T_norm, other.sinh_T_norm);
    take(out.parity_norm, other.parity_norm);
    take(out.sigma_norm, other.sigma_norm);
    out.threshold = std::max(threshold, other.threshold);
    out.verdict = verdict && other.verdict;
    out.witnesses.insert(out.witnesses.end(), other.witnesses.begin(), other.witnesses.end());
    return out;
}

std::size_t HodgeDecomposition::dim(std::int64_t p, std::int64_t q) const {
    const auto it = components.find(PQ{p, q});
    return it == components.end() ? 0 : static_cast<std::size_t>(it->second.cols());
}

std::optional<std::int64_t> HodgeDecomposition::pure_weight() const {
    std::optional<std::int64_t> weight;
    for (const auto& [pq, basis] : components) {
        if (basis.cols() == 0) continue;
        if (weight && *weight != pq.p + pq.q) return std::nullopt;
        weight = pq.p + pq.q;
    }
    return weight;
}

// --- construction ----------------------------------------------------------

BlockPair build_block(std::int64_t p, std::int64_t q) {
    if (q > p) std::swap(p, q);
    if (p == q) {
        RealMatrix e(1, 1);
        e(0, 0) = static_cast<double>(2 * p);
        return {e, RealMatrix::Zero(1, 1)};
    }
    return {static_cast<double>(p + q) * RealMatrix::Identity(2, 2),
            static_cast<double>(p - q) * rotation_generator()};
}

OperatorTriple assemble(const HodgeType& type, const std::optional<RealMatrix>& conjugator) {
    const auto n = static_cast<Eigen::Index>(type.dimension());
    RealMatrix e = RealMatrix::Zero(n, n);
    RealMatrix t = RealMatrix::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& s : type.summands()) {
        const BlockPair block = build_block(s.p, s.q);
        const auto k = block.E.rows();
        for (std::int64_t copy = 0; copy < s.mult; ++copy) {
            e.block(at, at, k, k) = block.E;
            t.block(at, at, k, k) = block.T;
            at += k;
        }
    }
    if (conjugator) {
        const RealMatrix& p = *conjugator;
        if (p.rows() != n || p.cols() != n) {
            throw DimensionError("assemble: conjugator is " + std::to_string(p.rows()) + "x" +
                                 std::to_string(p.cols()) + ", type has dimension " +
                                 std::to_string(n));
        }
        if (!p.allFinite()) throw InputError("assemble: conjugator has non-finite entries");
        const RealMatrix inv = conjugator_inverse(p);
        e = p * e * inv;
        t = p * t * inv;
    }
    RealMatrix s = e + t;
    return {std::move(e), std::move(t), std::move(s)};
}

// --- verification ----------------------------------------------------------

VerificationReport verify_pair(const RealMatrix& e, const RealMatrix& t, double tol) {
    require_same_square(e, t, "verify_pair");
    if (!(tol > 0.0)) throw InputError("verify_pair: tolerance must be positive");
    constexpr double pi = std::numbers::pi;

    VerificationReport report;
    report.threshold = tol * std::max(1.0, e.norm() + t.norm());
    report.commutator_norm = linalg::commutator(e, t).norm();
    report.sin_E_norm = residual([&] { return linalg::mat_sin(pi * e, tol).norm(); },
                                 report.witnesses, "sin_E");
    report.sinh_T_norm = residual([&] { return linalg::mat_sinh(pi * t, tol).norm(); },
                                  report.witnesses, "sinh_T");
    report.parity_norm = residual(
        [&] { return linalg::mat_sin((pi / 2.0) * (e * e + t * t), tol).norm(); },
        report.witnesses, "parity");

    auto check = [&](const std::optional<double>& value, const char* kind, const char* label) {
        if (value && *value > report.threshold) {
            std::ostringstream os;
            os << label << " residual " << *value << " exceeds " << report.threshold;
            report.witnesses.push_back({kind, os.str()});
        }
    };
    check(report.commutator_norm, "commutator", "[E,T]");
    check(report.sin_E_norm, "sin_E", "sin(pi E)");
    check(report.sinh_T_norm, "sinh_T", "sinh(pi T)");
    check(report.parity_norm, "parity", "sin(pi/2 (E^2+T^2))");
    report.verdict = report.witnesses.empty();
    return report;
}

VerificationReport verify_sigma(const RealMatrix& s, double tol) {
    linalg::require_square_finite(s, "verify_sigma");
    if (!(tol > 0.0)) throw InputError("verify_sigma: tolerance must be positive");
    VerificationReport report;
    report.threshold = tol * std::max(1.0, s.norm());

    const auto result = linalg::lattice_spectrum(s, tol);
    if (const auto* failure = std::get_if<linalg::SpectrumFailure>(&result)) {
        report.witnesses.push_back({linalg::kind_name(failure->kind), failure->witness});
    }
    report.verdict = report.witnesses.empty();
    try {
        report.sigma_norm = weierstrass::sigma_matrix(s, tol).norm();
    } catch (const ResourceError&) {
        // Spectral radius too large for the product at this tolerance.
    }
    return report;
}

// --- splitting and classification ------------------------------------------

BlockPair split(const SpectralData& spectrum, double tol) {
    const ComplexMatrix basis = spectrum.stacked_basis();
    const Eigen::VectorXcd lambda = spectrum.stacked_eigenvalues();
    const Eigen::PartialPivLU<ComplexMatrix> lu(basis);
    const ComplexMatrix inv = lu.inverse();
    const Eigen::VectorXcd re = lambda.real().cast<std::complex<double>>();
    const ComplexMatrix ec = basis * re.asDiagonal() * inv;
    const ComplexMatrix s = basis * lambda.asDiagonal() * inv;

    const RealMatrix e = ec.real();
    const double residue = ec.imag().norm();
    const double scale = std::max(1.0, s.norm());
    if (!(residue <= std::sqrt(tol) * scale)) {
        throw NumericalError("split: spectral projector sum has imaginary residue " +
                             std::to_string(residue));
    }
    // T takes the rest so that E + T reproduces S to rounding.
    const RealMatrix t = s.real() - e;
    return {e, t};
}

BlockPair split(const RealMatrix& s, double tol) {
    const SpectralData spectrum = linalg::require_spectrum(linalg::lattice_spectrum(s, tol));
    BlockPair pair = split(spectrum, tol);
    // S is given exactly; prefer it over the reconstruction.
    pair.T = s - pair.E;
    return pair;
}

HodgeType classify(const SpectralData& spectrum) {
    HodgeType type;
    for (const auto& entry : spectrum.entries) {
        const auto& lambda = entry.lambda;
        const PQ pq = lattice::pq_of_lambda(lambda);
        const auto dim = static_cast<std::int64_t>(entry.dim());
        if (lambda.b == 0) {
            type.add(pq.p, pq.q, dim);
            continue;
        }
        const linalg::SpectralEntry* mirror = spectrum.find(lambda.conj());
        if (mirror == nullptr || mirror->dim() != entry.dim()) {
            throw NumericalError("classify: eigenvalue " + std::to_string(lambda.a) + "+" +
                                 std::to_string(lambda.b) +
                                 "i and its conjugate have different multiplicities");
        }
        if (lambda.b > 0) type.add(pq.p, pq.q, dim);
    }
    return type;
}

HodgeType classify(const RealMatrix& s, double tol) {
    return classify(linalg::require_spectrum(linalg::lattice_spectrum(s, tol)));
}

bool verify_restricted(const RealMatrix& s, const std::set<PQ>& allowed, double tol) {
    const SpectralData spectrum = linalg::require_spectrum(linalg::lattice_spectrum(s, tol));
    return std::all_of(spectrum.entries.begin(), spectrum.entries.end(), [&](const auto& entry) {
        const PQ pq = lattice::pq_of_lambda(entry.lambda);
        return allowed.contains(pq) || allowed.contains(PQ{pq.q, pq.p});
    });
}

// --- decompositions --------------------------------------------------------

std::map<std::int64_t, RealMatrix> weight_decomposition(const OperatorTriple& triple, double tol) {
    linalg::require_square_finite(triple.E, "weight_decomposition");
    const SpectralData spectrum =
        linalg::require_spectrum(linalg::lattice_spectrum(triple.S, tol));
    std::set<std::int64_t> weights;
    for (const auto& entry : spectrum.entries) weights.insert(entry.lambda.a);

    const ComplexMatrix ec = linalg::complexify(triple.E);
    const auto n = ec.rows();
    std::map<std::int64_t, RealMatrix> out;
    std::size_t total = 0;
    for (const auto w : weights) {
        const ComplexMatrix shifted =
            ec - std::complex<double>(static_cast<double>(w)) * ComplexMatrix::Identity(n, n);
        // Real input keeps the elimination real.
        const RealMatrix basis = linalg::kernel_basis(shifted, tol).real();
        total += static_cast<std::size_t>(basis.cols());
        out.emplace(w, basis);
    }
    if (total != triple.n()) {
        throw NumericalError("weight_decomposition: weight spaces span " + std::to_string(total) +
                             " of " + std::to_string(triple.n()) + " dimensions");
    }
    return out;
}

HodgeDecomposition hodge_decomposition(const OperatorTriple& triple, double tol) {
    const SpectralData spectrum =
        linalg::require_spectrum(linalg::lattice_spectrum(triple.S, tol));
    HodgeDecomposition dec;
    dec.n = triple.n();
    dec.tolerance = tol;

    const ComplexMatrix ec = linalg::complexify(triple.E);
    const ComplexMatrix tc = linalg::complexify(triple.T);
    const double bound = std::sqrt(tol) * std::max(1.0, triple.E.norm() + triple.T.norm());
    for (const auto& entry : spectrum.entries) {
        const PQ pq = lattice::pq_of_lambda(entry.lambda);
        const std::complex<double> e_value(static_cast<double>(entry.lambda.a), 0.0);
        const std::complex<double> t_value(0.0, static_cast<double>(entry.lambda.b));
        const double e_res = (ec * entry.basis - e_value * entry.basis).norm();
        const double t_res = (tc * entry.basis - t_value * entry.basis).norm();
        if (e_res > bound || t_res > bound) {
            throw NumericalError("hodge_decomposition: eigenspace of S for " +
                                 pq_string(pq.p, pq.q) +
                                 " is not a common eigenspace of E and T");
        }
        dec.components.emplace(pq, entry.basis);
    }
    dec.weights = weight_decomposition(triple, tol);
    return dec;
}

ComplexMatrix build_filtration(const HodgeDecomposition& dec, std::int64_t r) {
    std::vector<const ComplexMatrix*> parts;
    Eigen::Index cols = 0;
    for (const auto& [pq, basis] : dec.components) {
        if (pq.p >= r) {
            parts.push_back(&basis);
            cols += basis.cols();
        }
    }
    ComplexMatrix all(static_cast<Eigen::Index>(dec.n), cols);
    Eigen::Index at = 0;
    for (const auto* part : parts) {
        all.middleCols(at, part->cols()) = *part;
        at += part->cols();
    }
    return linalg::orthonormalize(all, dec.tolerance);
}

FiltrationComplement filtration_complement(const HodgeDecomposition& dec, std::int64_t r) {
    const auto weight = dec.pure_weight();
    if (!weight) {
        throw InputError("filtration_complement: decomposition has mixed weights");
    }
    FiltrationComplement out;
    out.weight = *weight;
    out.r = r;
    const ComplexMatrix f = build_filtration(dec, r);
    const ComplexMatrix g = build_filtration(dec, *weight - r + 1).conjugate();
    out.dim_f = static_cast<std::size_t>(f.cols());
    out.dim_conj = static_cast<std::size_t>(g.cols());
    ComplexMatrix both(static_cast<Eigen::Index>(dec.n), f.cols() + g.cols());
    both << f, g;
    out.rank_sum = both.cols() == 0 ? 0 : linalg::numerical_rank(both, dec.tolerance);
    out.complementary = out.dim_f + out.dim_conj == dec.n && out.rank_sum == dec.n;
    return out;
}

RealMatrix rho_eval(const OperatorTriple& triple, double x, double y, double tol) {
    require_same_square(triple.E, triple.T, "rho_eval");
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw InputError("rho_eval: x and y must be finite");
    }
    return linalg::mat_exp(RealMatrix(x * triple.E + y * triple.T), tol);
}

}  // namespace hodge
