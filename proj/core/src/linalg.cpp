#include "hodge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace hodge::linalg {

namespace {

template <typename Matrix>
void check_square_finite(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + ": matrix must be square, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.allFinite()) {
        throw InputError(std::string(what) + ": matrix has non-finite entries");
    }
}

void check_tol(double tol, const char* what) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw InputError(std::string(what) + ": tolerance must be a positive finite number");
    }
}

template <typename Matrix>
Matrix mat_exp_impl(const Matrix& m, double tol) {
    check_square_finite(m, "mat_exp");
    check_tol(tol, "mat_exp");
    const auto n = m.rows();
    const double mnorm = m.norm();

    int squarings = 0;
    if (mnorm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(mnorm / 0.5)));
    }
    const Matrix a = m / std::ldexp(1.0, squarings);

    // ||a|| <= 1/2, so term k is bounded by 2^-k / k!. The per-step target is
    // scaled down because every squaring roughly doubles the relative error.
    const double target =
        std::max(tol * std::ldexp(1.0, -squarings) / 16.0, std::numeric_limits<double>::epsilon());
    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = (term * a) / static_cast<double>(k);
        result += term;
        if (term.norm() <= target * 1e-2) break;
    }
    for (int s = 0; s < squarings; ++s) result = (result * result).eval();
    return result;
}

// Gauss-Jordan with complete pivoting. On return `work` holds [I F; 0 ~0] in
// permuted coordinates, `cols` the column permutation, and the rank.
std::size_t eliminate(ComplexMatrix& work, std::vector<Eigen::Index>& cols, double tol) {
    const Eigen::Index rows = work.rows();
    const Eigen::Index ncols = work.cols();
    cols.resize(static_cast<std::size_t>(ncols));
    std::iota(cols.begin(), cols.end(), Eigen::Index{0});

    double scale = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) scale = std::max(scale, work.row(i).cwiseAbs().sum());
    const double threshold = tol * std::max(1.0, scale);

    Eigen::Index rank = 0;
    const Eigen::Index steps = std::min(rows, ncols);
    for (; rank < steps; ++rank) {
        Eigen::Index pr = rank;
        Eigen::Index pc = rank;
        double best = -1.0;
        for (Eigen::Index j = rank; j < ncols; ++j) {
            for (Eigen::Index i = rank; i < rows; ++i) {
                const double mag = std::abs(work(i, j));
                if (mag > best) {
                    best = mag;
                    pr = i;
                    pc = j;
                }
            }
        }
        if (best <= threshold) break;
        work.row(rank).swap(work.row(pr));
        work.col(rank).swap(work.col(pc));
        std::swap(cols[static_cast<std::size_t>(rank)], cols[static_cast<std::size_t>(pc)]);

        const std::complex<double> pivot = work(rank, rank);
        work.row(rank) /= pivot;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == rank) continue;
            const std::complex<double> f = work(i, rank);
            if (f != std::complex<double>(0.0)) work.row(i) -= f * work.row(rank);
        }
    }
    return static_cast<std::size_t>(rank);
}

std::string format_complex(std::complex<double> z) {
    char buf[96];
    const double re = std::abs(z.real()) < 5e-7 ? 0.0 : z.real();
    const double im = std::abs(z.imag()) < 5e-7 ? 0.0 : z.imag();
    if (im == 0.0) {
        std::snprintf(buf, sizeof buf, "%.6g", re + 0.0);
    } else if (re == 0.0) {
        std::snprintf(buf, sizeof buf, "%.6gi", im);
    } else {
        std::snprintf(buf, sizeof buf, "%.6g%+.6gi", re, im);
    }
    return buf;
}

// Names an eigenvalue responsible for a failed lattice_spectrum. Uses a dense
// eigensolver only to produce the witness; the verdict never depends on it.
SpectrumFailure diagnose(const RealMatrix& s, const SpectralData& found, double tol) {
    SpectrumFailure failure;
    failure.n = static_cast<std::size_t>(s.rows());
    failure.found_dim = found.total_dim();
    if (failure.found_dim > failure.n) {
        failure.kind = SpectrumFailure::Kind::Inconsistent;
        failure.witness = "kernel dimensions sum to " + std::to_string(failure.found_dim) +
                          " > n = " + std::to_string(failure.n) + " (tolerance too loose)";
        return failure;
    }

    const Eigen::EigenSolver<RealMatrix> solver(s, false);
    const Eigen::VectorXcd eig = solver.eigenvalues();
    // Jordan blocks of size k split eigenvalues by about (eps ||S||)^(1/k);
    // anything farther than this from L is reported as off-lattice.
    const double snap = std::max(1e-3, std::sqrt(tol));

    std::optional<std::complex<double>> worst;
    double worst_dist = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        const std::complex<double> mu = eig(i);
        const double dist = std::abs(mu - lattice::nearest(mu).value());
        if (dist > snap && dist > worst_dist) {
            worst_dist = dist;
            worst = mu;
        }
    }
    if (worst) {
        failure.kind = SpectrumFailure::Kind::OffLattice;
        failure.lambda = *worst;
        failure.witness = "lambda=" + format_complex(*worst) + " off-lattice";
        return failure;
    }

    failure.kind = SpectrumFailure::Kind::Defective;
    // Algebraic multiplicity per lattice point vs. the kernel dimension found.
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        const std::complex<double> mu = eig(i);
        const lattice::LatticePoint lp = lattice::nearest(mu);
        std::size_t algebraic = 0;
        for (Eigen::Index j = 0; j < eig.size(); ++j) {
            if (std::abs(eig(j) - lp.value()) <= snap) ++algebraic;
        }
        const SpectralEntry* entry = found.find(lp);
        const std::size_t geometric = entry ? entry->dim() : 0;
        if (geometric < algebraic) {
            failure.lambda = lp.value();
            failure.witness = "lambda=" + format_complex(lp.value()) + " defective (geometric " +
                              std::to_string(geometric) + " < algebraic " +
                              std::to_string(algebraic) + ")";
            return failure;
        }
    }
    failure.witness = "eigenspaces span " + std::to_string(failure.found_dim) + " of " +
                      std::to_string(failure.n) + " dimensions";
    return failure;
}

template <typename Matrix>
double radius_bound(const Matrix& m) {
    double best = m.norm();
    Matrix power = m;
    for (int k = 2; k <= 16; k *= 2) {
        power = (power * power).eval();
        const double nrm = power.norm();
        if (!std::isfinite(nrm)) break;
        best = std::min(best, std::pow(nrm, 1.0 / k));
    }
    return best;
}

}  // namespace

void require_square_finite(const RealMatrix& m, const char* what) { check_square_finite(m, what); }
void require_square_finite(const ComplexMatrix& m, const char* what) {
    check_square_finite(m, what);
}

double norm(const RealMatrix& m) { return m.norm(); }
double norm(const ComplexMatrix& m) { return m.norm(); }

double norm_inf(const ComplexMatrix& m) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).cwiseAbs().sum());
    return best;
}

ComplexMatrix complexify(const RealMatrix& m) { return m.cast<std::complex<double>>(); }

ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol) {
    check_tol(tol, "kernel_basis");
    if (!m.allFinite()) throw InputError("kernel_basis: matrix has non-finite entries");
    ComplexMatrix work = m;
    std::vector<Eigen::Index> cols;
    const auto rank = static_cast<Eigen::Index>(eliminate(work, cols, tol));
    const Eigen::Index ncols = m.cols();
    const Eigen::Index nullity = ncols - rank;

    ComplexMatrix raw = ComplexMatrix::Zero(ncols, nullity);
    for (Eigen::Index f = 0; f < nullity; ++f) {
        const Eigen::Index free_col = rank + f;
        raw(cols[static_cast<std::size_t>(free_col)], f) = 1.0;
        for (Eigen::Index r = 0; r < rank; ++r) {
            raw(cols[static_cast<std::size_t>(r)], f) = -work(r, free_col);
        }
    }
    // The raw vectors are independent (identity block on the free columns).
    return orthonormalize(raw, std::numeric_limits<double>::epsilon());
}

std::size_t numerical_rank(const ComplexMatrix& m, double tol) {
    check_tol(tol, "numerical_rank");
    ComplexMatrix work = m;
    std::vector<Eigen::Index> cols;
    return eliminate(work, cols, tol);
}

ComplexMatrix orthonormalize(const ComplexMatrix& columns, double tol) {
    ComplexMatrix q(columns.rows(), columns.cols());
    Eigen::Index kept = 0;
    for (Eigen::Index j = 0; j < columns.cols(); ++j) {
        ComplexVector v = columns.col(j);
        const double original = v.norm();
        if (original == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index k = 0; k < kept; ++k) {
                v -= q.col(k).dot(v) * q.col(k);
            }
        }
        const double remaining = v.norm();
        if (remaining <= tol * original) continue;
        q.col(kept++) = v / remaining;
    }
    return q.leftCols(kept);
}

RealMatrix mat_exp(const RealMatrix& m, double tol) { return mat_exp_impl(m, tol); }
ComplexMatrix mat_exp(const ComplexMatrix& m, double tol) { return mat_exp_impl(m, tol); }

namespace {

RealMatrix real_part_checked(const ComplexMatrix& value, double tol, const char* what) {
    const RealMatrix re = value.real();
    const double residue = value.imag().norm();
    if (residue > 100.0 * tol * std::max(1.0, re.norm())) {
        throw NumericalError(std::string(what) + ": imaginary residue " + std::to_string(residue) +
                             " of a real matrix function");
    }
    return re;
}

}  // namespace

RealMatrix mat_sin(const RealMatrix& m, double tol) {
    check_square_finite(m, "mat_sin");
    const std::complex<double> i{0.0, 1.0};
    const ComplexMatrix mc = complexify(m);
    const ComplexMatrix value = (mat_exp(ComplexMatrix(i * mc), tol) -
                                 mat_exp(ComplexMatrix(-i * mc), tol)) /
                                (2.0 * i);
    return real_part_checked(value, tol, "mat_sin");
}

RealMatrix mat_sinh(const RealMatrix& m, double tol) {
    check_square_finite(m, "mat_sinh");
    const ComplexMatrix mc = complexify(m);
    const ComplexMatrix value =
        (mat_exp(mc, tol) - mat_exp(ComplexMatrix(-mc), tol)) / std::complex<double>(2.0);
    return real_part_checked(value, tol, "mat_sinh");
}

RealMatrix commutator(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw DimensionError("commutator: operands must be square of the same size");
    }
    return a * b - b * a;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw DimensionError("commutator: operands must be square of the same size");
    }
    return a * b - b * a;
}

std::size_t SpectralData::total_dim() const noexcept {
    std::size_t total = 0;
    for (const auto& e : entries) total += e.dim();
    return total;
}

const SpectralEntry* SpectralData::find(const lattice::LatticePoint& lambda) const noexcept {
    for (const auto& e : entries) {
        if (e.lambda == lambda) return &e;
    }
    return nullptr;
}

ComplexMatrix SpectralData::stacked_basis() const {
    ComplexMatrix b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(total_dim()));
    Eigen::Index col = 0;
    for (const auto& e : entries) {
        b.middleCols(col, e.basis.cols()) = e.basis;
        col += e.basis.cols();
    }
    return b;
}

Eigen::VectorXcd SpectralData::stacked_eigenvalues() const {
    Eigen::VectorXcd values(static_cast<Eigen::Index>(total_dim()));
    Eigen::Index k = 0;
    for (const auto& e : entries) {
        for (std::size_t j = 0; j < e.dim(); ++j) values(k++) = e.lambda.value();
    }
    return values;
}

const char* kind_name(SpectrumFailure::Kind kind) noexcept {
    switch (kind) {
        case SpectrumFailure::Kind::OffLattice:
            return "off-lattice";
        case SpectrumFailure::Kind::Defective:
            return "defective";
        case SpectrumFailure::Kind::Inconsistent:
            return "inconsistent";
    }
    return "unknown";
}

double spectral_radius_bound(const RealMatrix& m) { return radius_bound(m); }
double spectral_radius_bound(const ComplexMatrix& m) { return radius_bound(m); }

SpectrumResult lattice_spectrum(const RealMatrix& s, double tol) {
    check_square_finite(s, "lattice_spectrum");
    check_tol(tol, "lattice_spectrum");
    // Slack so that rounding in the bound never drops an extreme eigenvalue.
    const double radius = spectral_radius_bound(s) * (1.0 + 1e-9) + 1e-9;
    const auto candidates = lattice::enumerate(radius);
    return lattice_spectrum(s, tol, candidates);
}

SpectrumResult lattice_spectrum(const RealMatrix& s, double tol,
                                std::span<const lattice::LatticePoint> candidates) {
    check_square_finite(s, "lattice_spectrum");
    check_tol(tol, "lattice_spectrum");
    const auto n = static_cast<std::size_t>(s.rows());
    const ComplexMatrix sc = complexify(s);
    const ComplexMatrix id = ComplexMatrix::Identity(s.rows(), s.cols());

    SpectralData data;
    data.tolerance = tol;
    data.n = n;
    for (const auto& lambda : candidates) {
        if (data.total_dim() >= n) break;
        // Real S: the eigenspace of conj(lambda) is the conjugate of this one.
        if (lambda.b < 0) {
            if (const SpectralEntry* mirror = data.find(lambda.conj())) {
                data.entries.push_back({lambda, mirror->basis.conjugate()});
                continue;
            }
        }
        ComplexMatrix basis = kernel_basis(sc - lambda.value() * id, tol);
        if (basis.cols() > 0) data.entries.push_back({lambda, std::move(basis)});
    }
    if (data.total_dim() != n) return diagnose(s, data, tol);
    return data;
}

StructuralError::StructuralError(SpectrumFailure failure)
    : Error(failure.kind == SpectrumFailure::Kind::OffLattice ? "SpectrumOffLattice"
            : failure.kind == SpectrumFailure::Kind::Defective ? "NotDiagonalizable"
                                                               : "NumericalError",
            failure.witness),
      failure_(std::move(failure)) {}

SpectralData require_spectrum(SpectrumResult result) {
    if (auto* failure = std::get_if<SpectrumFailure>(&result)) {
        throw StructuralError(std::move(*failure));
    }
    return std::get<SpectralData>(std::move(result));
}

}  // namespace hodge::linalg
