#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

// The lattice L = Z(1-i) + Z(1+i) = { a+ib : a, b integers, a = b mod 2 }.
namespace hodge::lattice {

// Generators of L.
inline constexpr std::complex<double> omega1{1.0, -1.0};
inline constexpr std::complex<double> omega2{1.0, 1.0};

inline constexpr std::size_t default_enumeration_cap = 1'000'000;

// A point a+ib of L. Construct through `make` or `from_pq` to keep the parity
// invariant; the aggregate form exists for brace-initialised constants.
struct LatticePoint {
    std::int64_t a = 0;
    std::int64_t b = 0;

    std::int64_t p() const noexcept { return (a + b) / 2; }
    std::int64_t q() const noexcept { return (a - b) / 2; }
    std::int64_t norm() const noexcept { return a * a + b * b; }
    std::complex<double> value() const noexcept {
        return {static_cast<double>(a), static_cast<double>(b)};
    }
    LatticePoint conj() const noexcept { return {a, -b}; }
    LatticePoint operator-() const noexcept { return {-a, -b}; }

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct PQ {
    std::int64_t p = 0;
    std::int64_t q = 0;
    friend bool operator==(const PQ&, const PQ&) = default;
    friend auto operator<=>(const PQ&, const PQ&) = default;
};

bool is_lattice_point(std::int64_t a, std::int64_t b) noexcept;

// Rejects non-integer parts with InputError, then tests parity.
bool is_lattice_point(std::complex<double> z);

// Throws InputError when a - b is odd.
LatticePoint make(std::int64_t a, std::int64_t b);

PQ pq_of_lambda(const LatticePoint& lambda) noexcept;
LatticePoint lambda_of_pq(std::int64_t p, std::int64_t q) noexcept;

// A point of L closest to z (ties broken by enumeration order).
LatticePoint nearest(std::complex<double> z);

// Ordering used everywhere a deterministic listing is needed: |w| first, then
// arg w taken in [0, 2pi).
bool enumeration_less(const LatticePoint& x, const LatticePoint& y) noexcept;

// All w in L with |w| <= radius, in enumeration order. Throws InputError for a
// negative or non-finite radius and ResourceError when the disc would hold more
// than `cap` points.
std::vector<LatticePoint> enumerate(double radius,
                                    std::size_t cap = default_enumeration_cap);

// Upper estimate of the number of points enumerate(radius) returns.
std::size_t estimated_count(double radius) noexcept;

}  // namespace hodge::lattice
