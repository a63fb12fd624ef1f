#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hodge/lattice.hpp"
#include "hodge/linalg.hpp"

// Real Hodge structures as operators. A structure on V is a pair of commuting
// real operators (E, T): E acts on V^{p,q} by p+q and T by i(p-q). Their sum
// S = E + T is annihilated by sigma, and S alone determines E and T.
namespace hodge {

using linalg::ComplexMatrix;
using linalg::RealMatrix;
using lattice::PQ;

struct Summand {
    std::int64_t p = 0;
    std::int64_t q = 0;
    std::int64_t mult = 0;
    friend bool operator==(const Summand&, const Summand&) = default;
};

// Multiset of irreducible real summands rho_{p,q}, stored with q <= p.
class HodgeType {
public:
    HodgeType() = default;

    // Adds mult copies of rho_{p,q}; (p,q) with q > p is stored as (q,p).
    // Throws InputError for mult < 1.
    HodgeType& add(std::int64_t p, std::int64_t q, std::int64_t mult = 1);

    // Real dimension: 2 per summand with p != q, 1 per p = q.
    std::size_t dimension() const noexcept;
    bool empty() const noexcept { return counts_.empty(); }
    std::int64_t multiplicity(std::int64_t p, std::int64_t q) const;

    // Summands in block order: ascending p+q, then ascending p-q.
    std::vector<Summand> summands() const;

    // "(1,0)x2+(1,1)x1" in block order.
    std::string to_string() const;

    friend bool operator==(const HodgeType&, const HodgeType&) = default;

private:
    std::map<PQ, std::int64_t> counts_;
};

struct OperatorTriple {
    RealMatrix E;
    RealMatrix T;
    RealMatrix S;

    std::size_t n() const noexcept { return static_cast<std::size_t>(S.rows()); }
};

struct BlockPair {
    RealMatrix E;
    RealMatrix T;
};

struct Witness {
    std::string kind;    // "commutator", "sin_E", "sinh_T", "parity", "off-lattice", ...
    std::string detail;
};

struct VerificationReport {
    std::optional<double> commutator_norm;
    std::optional<double> sin_E_norm;
    std::optional<double> sinh_T_norm;
    std::optional<double> parity_norm;  // || sin(pi/2 (E^2 + T^2)) ||
    std::optional<double> sigma_norm;   // || sigma(S) ||, corroborating only
    double threshold = 0.0;
    bool verdict = false;
    std::vector<Witness> witnesses;

    // Logical AND of two reports on the same space; fills whichever residuals
    // either side computed.
    VerificationReport merged(const VerificationReport& other) const;
};

struct HodgeDecomposition {
    std::map<PQ, ComplexMatrix> components;        // V^{p,q}, orthonormal columns in C^n
    std::map<std::int64_t, RealMatrix> weights;    // weight n subspace, orthonormal columns in R^n
    std::size_t n = 0;
    double tolerance = linalg::default_tolerance;

    std::size_t dim(std::int64_t p, std::int64_t q) const;
    // Weight when every component has the same p+q.
    std::optional<std::int64_t> pure_weight() const;
};

struct FiltrationComplement {
    std::int64_t weight = 0;
    std::int64_t r = 0;
    std::size_t dim_f = 0;          // dim F^r
    std::size_t dim_conj = 0;       // dim conj(F^{n-r+1})
    std::size_t rank_sum = 0;       // rank of both bases side by side
    bool complementary = false;     // dims add to n and the sum is direct
};

// Blocks of L(rho_{p,q}): E = (p+q) I, T = (p-q) J with J = [[0,-1],[1,0]]
// for p != q (normalised to q < p), and 1x1 blocks (2p), (0) for p = q.
BlockPair build_block(std::int64_t p, std::int64_t q);

// Block-diagonal E, T from the summands in block order, then conjugated by P
// when given: E = P E0 P^-1, T = P T0 P^-1, S = E + T. An integer P with
// determinant +-1 gets an exact integer inverse.
OperatorTriple assemble(const HodgeType& type, const std::optional<RealMatrix>& conjugator = {});

// Residuals of [E,T] = 0, sin(pi E) = 0, sinh(pi T) = 0 and
// sin(pi/2 (E^2 + T^2)) = 0, each against tol * max(1, ||E|| + ||T||).
VerificationReport verify_pair(const RealMatrix& e, const RealMatrix& t, double tol);

// Structural check of sigma(S) = 0: S diagonalisable over C with spectrum in L.
// sigma_norm is recorded from the product evaluation when it is affordable.
VerificationReport verify_sigma(const RealMatrix& s, double tol);

// The unique (E, T) with S = E + T: E acts by a, T by ib on the eigenspace of
// a + ib. Throws linalg::StructuralError when S fails the structural check.
BlockPair split(const RealMatrix& s, double tol);
BlockPair split(const linalg::SpectralData& spectrum, double tol);

HodgeType classify(const RealMatrix& s, double tol);
HodgeType classify(const linalg::SpectralData& spectrum);

HodgeDecomposition hodge_decomposition(const OperatorTriple& triple, double tol);

// F^r = sum of V^{p,q} with p >= r, orthonormal columns.
ComplexMatrix build_filtration(const HodgeDecomposition& dec, std::int64_t r);

// Checks F^r (+) conj(F^{n-r+1}) = V_C for a pure decomposition of weight n.
// Throws InputError (mixed weight) otherwise.
FiltrationComplement filtration_complement(const HodgeDecomposition& dec, std::int64_t r);

// exp(xE + yT), the action of e^{x+iy}.
RealMatrix rho_eval(const OperatorTriple& triple, double x, double y,
                    double tol = linalg::default_tolerance);

// Real eigenspaces of E, keyed by the (integer) eigenvalue.
std::map<std::int64_t, RealMatrix> weight_decomposition(const OperatorTriple& triple, double tol);

// True iff every eigenvalue of S maps to an allowed (p,q) or its swap.
bool verify_restricted(const RealMatrix& s, const std::set<PQ>& allowed, double tol);

}  // namespace hodge
