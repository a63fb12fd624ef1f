#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "hodge/lattice.hpp"
#include "hodge/linalg.hpp"

// Weierstrass sigma and zeta functions of L = Z(1-i) + Z(1+i).
//
// sigma(z) = z * prod_{w != 0} (1 - z/w) exp(z/w + z^2/(2 w^2)).
//
// Evaluation keeps the factors with 0 < |w| <= R literally. The included set
// is a disc, so it is closed under w -> -w, w -> iw and w -> conj(w); the
// factors are multiplied one orbit of that group at a time:
//
//   {+-w, +-iw}           ->  1 - z^4/w^4
//   {+-w, +-iw, conj...}  ->  (|w|^8 - 2 Re(w^4) z^4 + z^8) / |w|^8
//
// The exp(z/w) factors cancel in +-w pairs and the z^2/(2w^2) terms are
// collected into exp(c2 z^2), with c2 summed orbit by orbit (exactly 0).
//
// The omitted factors |w| > R contribute exp(-sum_m T_m z^{4m} / (4m)) where
// T_m = sum_{|w|>R} w^{-4m}. T_1 and T_2 come from the closed forms
// G4 = -varpi^4/60 (varpi the lemniscate constant) and G8 = 3 G4^2 / 7 minus
// the included partial sums; T_m for m >= 3 are summed directly up to a far
// radius. Lattice points inside the disc stay exact zeros because their
// factor numerator is formed in exact integer arithmetic.
namespace hodge::weierstrass {

using linalg::ComplexMatrix;
using linalg::RealMatrix;

inline constexpr double default_z_bound = 20.0;

// One symmetry orbit of included lattice points.
struct OrbitFactor {
    lattice::LatticePoint rep;  // representative with 0 <= arg <= pi/4
    int size = 0;               // 4 (axis or diagonal) or 8
    std::complex<double> w4;    // rep^4 (real when size == 4)
    double k0 = 0.0;            // numerator(z) = k0 + k1 z^4 + k2 z^8
    double k1 = 0.0;
    double k2 = 0.0;
};

struct TruncationPlan {
    double radius = 0.0;  // literal factors for 0 < |w| <= radius
    bool pair_symmetric = true;
    // Bound on |log(exact / evaluated)| from everything outside the literal
    // product: truncation of the tail series, the remainder of the direct far
    // sums, and cancellation in T_1, T_2. Rounding inside the literal product
    // is not included.
    double estimated_error = 0.0;
    double scale = 0.0;  // |z|, or the spectral radius bound for matrices
    std::complex<double> c2{};
    std::vector<OrbitFactor> orbits;
    std::vector<double> tail;  // tail[m-1] = T_m (real by symmetry)
    double far_radius = 0.0;
};

enum class PlanKind { Sigma, Zeta };

// Builds the truncation for arguments with modulus (or spectral radius) at
// most `scale`. Throws InputError for tol <= 0 and ResourceError when the tail
// cannot be brought below tol within `cap` enumerated points.
TruncationPlan plan_truncation(double scale, double tol, PlanKind kind = PlanKind::Sigma,
                               std::size_t cap = lattice::default_enumeration_cap);

struct SigmaOptions {
    double z_bound = default_z_bound;
    // Reduce z into the cell around 0 with sigma(z + w) = psi(w) exp(eta(w)(z + w/2)) sigma(z)
    // before evaluating; off by default.
    bool quasi_periodic = false;
    std::size_t cap = lattice::default_enumeration_cap;
};

// tol bounds the error relative to max(1, |sigma(z)|) from truncation.
std::complex<double> sigma(std::complex<double> z, double tol, const SigmaOptions& options = {});

// Evaluates with a caller-supplied plan (scale must cover |z|).
std::complex<double> sigma(std::complex<double> z, const TruncationPlan& plan);

// Closed forms of the lattice constants used for the tail.
long double eisenstein_g4();
long double eisenstein_g8();

// M * prod_orbits F_w(M) * exp(c2 M^2 - sum_m T_m M^{4m}/(4m)). All factors are
// polynomials in M, so the order only matters up to rounding; the plan is
// built for linalg::spectral_radius_bound(M).
RealMatrix sigma_matrix(const RealMatrix& m, double tol,
                        std::size_t cap = lattice::default_enumeration_cap);
ComplexMatrix sigma_matrix(const ComplexMatrix& m, double tol,
                           std::size_t cap = lattice::default_enumeration_cap);
RealMatrix sigma_matrix(const RealMatrix& m, const TruncationPlan& plan, double exp_tol);
ComplexMatrix sigma_matrix(const ComplexMatrix& m, const TruncationPlan& plan, double exp_tol);

// zeta(z) = 1/z + sum'_{|w|<=R} [1/(z-w) + 1/w + z/w^2] - sum_m T_m z^{4m-1}.
// Throws PoleError within 1e-12 of a lattice point.
std::complex<double> zeta(std::complex<double> z, double tol,
                          std::size_t cap = lattice::default_enumeration_cap);

// eta(w) with zeta(z + w) = zeta(z) + eta(w), from eta_k = 2 zeta(omega_k / 2).
std::complex<double> quasi_period(const lattice::LatticePoint& w, double tol);

}  // namespace hodge::weierstrass
