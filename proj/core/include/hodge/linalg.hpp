#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hodge/errors.hpp"
#include "hodge/lattice.hpp"

// Dense matrix kernel. Every norm in this namespace is the Frobenius norm
// unless the name says otherwise.
namespace hodge::linalg {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double default_tolerance = 1e-8;

// Throws DimensionError unless m is square, InputError on NaN/inf entries.
void require_square_finite(const RealMatrix& m, const char* what);
void require_square_finite(const ComplexMatrix& m, const char* what);

double norm(const RealMatrix& m);
double norm(const ComplexMatrix& m);
double norm_inf(const ComplexMatrix& m);

ComplexMatrix complexify(const RealMatrix& m);

// Orthonormal basis (columns) of the numerical kernel of m, which may be
// rectangular. Gauss-Jordan elimination with complete pivoting stops once the
// largest remaining entry is <= tol * max(1, ||m||_inf); the free columns give
// the kernel, orthonormalised by twice-iterated modified Gram-Schmidt.
ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol);

// Number of pivots the same elimination accepts.
std::size_t numerical_rank(const ComplexMatrix& m, double tol);

// Orthonormal basis of the column span, dropping columns whose remainder after
// projection falls below tol times their original norm.
ComplexMatrix orthonormalize(const ComplexMatrix& columns, double tol);

// Scaling and squaring: M / 2^s with ||M / 2^s|| <= 1/2, Taylor series summed
// until the next term is below tol * 2^-s / 16, then s squarings.
RealMatrix mat_exp(const RealMatrix& m, double tol);
ComplexMatrix mat_exp(const ComplexMatrix& m, double tol);

// (exp(iM) - exp(-iM)) / 2i and (exp(M) - exp(-M)) / 2 on the complexification.
// Throws NumericalError when the imaginary residue exceeds 100 * tol * max(1, ||result||).
RealMatrix mat_sin(const RealMatrix& m, double tol);
RealMatrix mat_sinh(const RealMatrix& m, double tol);

RealMatrix commutator(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// One eigenvalue of S in L with an orthonormal basis (columns) of its
// eigenspace in C^n.
struct SpectralEntry {
    lattice::LatticePoint lambda;
    ComplexMatrix basis;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(basis.cols()); }
};

struct SpectralData {
    std::vector<SpectralEntry> entries;  // in candidate order
    double tolerance = default_tolerance;
    std::size_t n = 0;

    std::size_t total_dim() const noexcept;
    const SpectralEntry* find(const lattice::LatticePoint& lambda) const noexcept;
    // All bases side by side, and the matching eigenvalues.
    ComplexMatrix stacked_basis() const;
    Eigen::VectorXcd stacked_eigenvalues() const;
};

struct SpectrumFailure {
    enum class Kind {
        OffLattice,    // some eigenvalue is not in L
        Defective,     // eigenvalues in L but an eigenspace is too small
        Inconsistent,  // kernel dimensions overshoot n (tolerance too loose)
    };
    Kind kind = Kind::Defective;
    std::size_t found_dim = 0;
    std::size_t n = 0;
    std::optional<std::complex<double>> lambda;  // offending eigenvalue, if identified
    std::string witness;
};

// Short kind tags: "off-lattice", "defective", "inconsistent".
const char* kind_name(SpectrumFailure::Kind kind) noexcept;

using SpectrumResult = std::variant<SpectralData, SpectrumFailure>;

// min over k in {1,2,4,8,16} of ||M^k||_F^(1/k); never below the spectral radius.
double spectral_radius_bound(const RealMatrix& m);
double spectral_radius_bound(const ComplexMatrix& m);

// Candidates are the lattice points with |lambda| <= spectral_radius_bound(s), in
// enumeration order; for each one the kernel of complexify(S) - lambda I is
// taken. Succeeds iff the kernel dimensions add up to n.
SpectrumResult lattice_spectrum(const RealMatrix& s, double tol);

// Same, with the candidate order supplied by the caller. The result does not
// depend on the order beyond the listing order of its entries.
SpectrumResult lattice_spectrum(const RealMatrix& s, double tol,
                                std::span<const lattice::LatticePoint> candidates);

// Thrown by operations that require a successful lattice_spectrum.
class StructuralError : public Error {
public:
    explicit StructuralError(SpectrumFailure failure);
    const SpectrumFailure& failure() const noexcept { return failure_; }

private:
    SpectrumFailure failure_;
};

// Unwraps a SpectrumResult or throws StructuralError.
SpectralData require_spectrum(SpectrumResult result);

}  // namespace hodge::linalg
