#include "hodge/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hodge/errors.hpp"

namespace hodge::lattice {

bool is_lattice_point(std::int64_t a, std::int64_t b) noexcept {
    return ((a - b) & 1) == 0;
}

bool is_lattice_point(std::complex<double> z) {
    const double re = z.real();
    const double im = z.imag();
    if (!std::isfinite(re) || !std::isfinite(im) || std::trunc(re) != re ||
        std::trunc(im) != im || std::abs(re) > 9.0e15 || std::abs(im) > 9.0e15) {
        throw InputError("is_lattice_point: real and imaginary parts must be integers");
    }
    return is_lattice_point(static_cast<std::int64_t>(re), static_cast<std::int64_t>(im));
}

LatticePoint make(std::int64_t a, std::int64_t b) {
    if (!is_lattice_point(a, b)) {
        throw InputError("not a lattice point: " + std::to_string(a) + (b < 0 ? "" : "+") +
                         std::to_string(b) + "i has odd a-b");
    }
    return {a, b};
}

PQ pq_of_lambda(const LatticePoint& lambda) noexcept {
    return {lambda.p(), lambda.q()};
}

LatticePoint lambda_of_pq(std::int64_t p, std::int64_t q) noexcept {
    return {p + q, p - q};
}

namespace {

// 0 for arg in [0, pi), 1 for arg in [pi, 2pi).
int half_plane(const LatticePoint& w) noexcept {
    return (w.b > 0 || (w.b == 0 && w.a >= 0)) ? 0 : 1;
}

}  // namespace

bool enumeration_less(const LatticePoint& x, const LatticePoint& y) noexcept {
    const auto nx = x.norm();
    const auto ny = y.norm();
    if (nx != ny) return nx < ny;
    const int hx = half_plane(x);
    const int hy = half_plane(y);
    if (hx != hy) return hx < hy;
    // Same half plane: x precedes y iff y is counter-clockwise of x.
    return x.a * y.b - x.b * y.a > 0;
}

LatticePoint nearest(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InputError("nearest: argument must be finite");
    }
    // Two opposite corners of the unit square around z lie in L and one of
    // them is a closest lattice point.
    const auto x0 = static_cast<std::int64_t>(std::floor(z.real()));
    const auto y0 = static_cast<std::int64_t>(std::floor(z.imag()));
    LatticePoint best{};
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::int64_t dx = 0; dx <= 1; ++dx) {
        for (std::int64_t dy = 0; dy <= 1; ++dy) {
            const LatticePoint c{x0 + dx, y0 + dy};
            if (!is_lattice_point(c.a, c.b)) continue;
            const double d = std::abs(z - c.value());
            if (d < best_dist || (d == best_dist && enumeration_less(c, best))) {
                best = c;
                best_dist = d;
            }
        }
    }
    return best;
}

std::size_t estimated_count(double radius) noexcept {
    // One point per cell of area 2; cells meeting the disc lie in radius + 2.
    const double r = radius + 2.0;
    return static_cast<std::size_t>(std::numbers::pi * r * r / 2.0) + 1;
}

std::vector<LatticePoint> enumerate(double radius, std::size_t cap) {
    if (!std::isfinite(radius) || radius < 0.0) {
        throw InputError("enumerate: radius must be a finite nonnegative number");
    }
    if (radius > 1.0e8 || estimated_count(radius) > cap) {
        throw ResourceError("enumerate: radius " + std::to_string(radius) +
                            " exceeds the enumeration cap of " + std::to_string(cap) +
                            " points");
    }
    const auto bound = static_cast<std::int64_t>(std::ceil(radius));
    const double r2 = radius * radius;
    std::vector<LatticePoint> points;
    points.reserve(estimated_count(radius));
    for (std::int64_t a = -bound; a <= bound; ++a) {
        // Step b over the parity class of a.
        std::int64_t b = -bound;
        if (!is_lattice_point(a, b)) ++b;
        for (; b <= bound; b += 2) {
            if (static_cast<double>(a * a + b * b) <= r2) points.push_back({a, b});
        }
    }
    std::sort(points.begin(), points.end(), enumeration_less);
    return points;
}

}  // namespace hodge::lattice
