#include "hodge/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hodge/errors.hpp"

namespace hodge::weierstrass {

namespace {

using cplx = std::complex<double>;
using lattice::LatticePoint;

constexpr int max_tail_terms = 64;

// sum_{|w| > x} |w|^-k <= (1 + 1/x)^k * pi * (x - 1)^(2-k) / (k - 2), k > 2:
// every point owns a square cell of area 2 within distance 1 of it, and on
// that cell |u| <= |w| (1 + 1/x).
double tail_sum_bound(double x, int k) {
    if (x <= 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(1.0 + 1.0 / x, k) * std::numbers::pi * std::pow(x - 1.0, 2 - k) / (k - 2);
}

// Weight of T_m in the quantity being bounded: the log of sigma carries
// z^{4m}/(4m), zeta carries z^{4m-1}.
double term_weight(PlanKind kind, double scale, int m) {
    if (kind == PlanKind::Sigma) return std::pow(scale, 4 * m) / (4.0 * m);
    return std::pow(scale, 4 * m - 1);
}

bool is_orbit_rep(const LatticePoint& w) { return w.a > 0 && w.b >= 0 && w.b <= w.a; }

OrbitFactor make_orbit(const LatticePoint& w) {
    OrbitFactor f;
    f.rep = w;
    const double a = static_cast<double>(w.a);
    const double b = static_cast<double>(w.b);
    const cplx w2{a * a - b * b, 2.0 * a * b};
    f.w4 = w2 * w2;
    if (w.b == 0 || w.b == w.a) {
        // Axis or diagonal: conj(w) is already among +-w, +-iw and w^4 is real.
        f.size = 4;
        f.w4 = {f.w4.real(), 0.0};
        f.k0 = f.w4.real();
        f.k1 = -1.0;
        f.k2 = 0.0;
    } else {
        f.size = 8;
        const double n = a * a + b * b;
        f.k0 = n * n * n * n;
        f.k1 = -2.0 * f.w4.real();
        f.k2 = 1.0;
    }
    return f;
}

// sum over the orbit of w^{-4m}: 4 w^{-4m} for size 4, 8 Re(w^{-4m}) for size 8.
long double orbit_power_sum(const OrbitFactor& f, int m) {
    const std::complex<long double> w4(f.w4.real(), f.w4.imag());
    const std::complex<long double> inv = std::pow(1.0L / w4, m);
    return f.size == 4 ? 4.0L * inv.real() : 8.0L * inv.real();
}

}  // namespace

long double eisenstein_g4() {
    // varpi = Gamma(1/4)^2 / (2 sqrt(2 pi)); G4(Z[i]) = varpi^4 / 15 and
    // L = (1+i) Z[i] scales it by (1+i)^-4 = -1/4.
    const long double pi = std::numbers::pi_v<long double>;
    const long double g = std::tgamma(0.25L);
    const long double varpi = g * g / (2.0L * std::sqrt(2.0L * pi));
    const long double v2 = varpi * varpi;
    return -(v2 * v2) / 60.0L;
}

long double eisenstein_g8() {
    // G6 = 0 for this square lattice, which forces 7 G8 = 3 G4^2.
    const long double g4 = eisenstein_g4();
    return 3.0L * g4 * g4 / 7.0L;
}

TruncationPlan plan_truncation(double scale, double tol, PlanKind kind, std::size_t cap) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw InputError("plan_truncation: tolerance must be a positive finite number");
    }
    if (!(scale >= 0.0) || !std::isfinite(scale)) {
        throw InputError("plan_truncation: scale must be finite and nonnegative");
    }
    TruncationPlan plan;
    plan.scale = scale;
    plan.radius = std::max(2.0 * scale + 2.0, 4.0);

    const auto near = lattice::enumerate(plan.radius, cap);
    for (const auto& w : near) {
        if (is_orbit_rep(w)) plan.orbits.push_back(make_orbit(w));
    }
    // c2 = sum 1/(2 w^2), accumulated over {w, iw, -w, -iw} groups so the
    // cancellation is exact.
    cplx c2{};
    for (const auto& f : plan.orbits) {
        const LatticePoint w = f.rep;
        const LatticePoint group[] = {w, {-w.b, w.a}, {-w.a, -w.b}, {w.b, -w.a}};
        cplx g{};
        for (const auto& u : group) {
            const cplx uv = u.value();
            g += 1.0 / (2.0 * uv * uv);
        }
        c2 += g;
        if (f.size == 8) {
            const LatticePoint wc = w.conj();
            const LatticePoint cgroup[] = {wc, {-wc.b, wc.a}, {-wc.a, -wc.b}, {wc.b, -wc.a}};
            cplx h{};
            for (const auto& u : cgroup) {
                const cplx uv = u.value();
                h += 1.0 / (2.0 * uv * uv);
            }
            c2 += h;
        }
    }
    plan.c2 = c2;

    // Number of tail terms: stop once the remaining weights are negligible
    // even with the crude bound on T_m at the near radius.
    const double r = plan.radius;
    int terms = 2;
    double remainder = 0.0;
    for (;;) {
        double rest = 0.0;
        for (int m = terms + 1; m <= max_tail_terms; ++m) {
            const double t = term_weight(kind, scale, m) * tail_sum_bound(r, 4 * m);
            rest += t;
            if (t < 1e-3 * rest) break;
        }
        if (rest <= tol / 4.0 || terms == max_tail_terms) {
            remainder = rest;
            break;
        }
        ++terms;
    }

    // T_1, T_2 from the closed forms. Their cancellation error is of the size
    // of the long double rounding of G4 and G8.
    long double partial1 = 0.0L;
    long double partial2 = 0.0L;
    for (const auto& f : plan.orbits) {
        partial1 += orbit_power_sum(f, 1);
        partial2 += orbit_power_sum(f, 2);
    }
    plan.tail.assign(static_cast<std::size_t>(terms), 0.0);
    plan.tail[0] = static_cast<double>(eisenstein_g4() - partial1);
    plan.tail[1] = static_cast<double>(eisenstein_g8() - partial2);
    const double ld_eps = static_cast<double>(std::numeric_limits<long double>::epsilon());
    // |G4|, |G8| and the partial sums are all below 1.
    double rounding = 8.0 * ld_eps * (term_weight(kind, scale, 1) + term_weight(kind, scale, 2));
    // Converting T_m to double.
    rounding += std::numeric_limits<double>::epsilon() *
                (term_weight(kind, scale, 1) * std::abs(plan.tail[0]) +
                 term_weight(kind, scale, 2) * std::abs(plan.tail[1]));

    // T_m for m >= 3: direct sums over r < |w| <= far.
    double far = r;
    double far_error = 0.0;
    if (terms >= 3) {
        for (;;) {
            far_error = 0.0;
            for (int m = 3; m <= terms; ++m) {
                far_error += term_weight(kind, scale, m) * tail_sum_bound(far, 4 * m);
            }
            if (far_error <= tol / 4.0) break;
            far *= 1.5;
            if (lattice::estimated_count(far) > cap) {
                throw ResourceError("sigma: tolerance " + std::to_string(tol) +
                                    " unreachable within the enumeration cap at |z| = " +
                                    std::to_string(scale));
            }
        }
        std::vector<long double> sums(static_cast<std::size_t>(terms + 1), 0.0L);
        for (const auto& w : lattice::enumerate(far, cap)) {
            if (!is_orbit_rep(w) || static_cast<double>(w.norm()) <= r * r) continue;
            const OrbitFactor f = make_orbit(w);
            for (int m = 3; m <= terms; ++m) sums[static_cast<std::size_t>(m)] += orbit_power_sum(f, m);
        }
        for (int m = 3; m <= terms; ++m) {
            plan.tail[static_cast<std::size_t>(m - 1)] =
                static_cast<double>(sums[static_cast<std::size_t>(m)]);
        }
    }
    plan.far_radius = far;
    plan.estimated_error = remainder + far_error + rounding;
    if (plan.estimated_error > tol) {
        throw ResourceError("sigma: tolerance " + std::to_string(tol) +
                            " unreachable in double precision at |z| = " + std::to_string(scale) +
                            " (error floor " + std::to_string(plan.estimated_error) + ")");
    }
    return plan;
}

namespace {

// -sum_m T_m x^m / (4m) with x = z^4, by Horner.
template <typename T>
T tail_exponent(const TruncationPlan& plan, const T& x) {
    T acc{};
    for (auto m = static_cast<int>(plan.tail.size()); m >= 1; --m) {
        acc = acc * x + T(plan.tail[static_cast<std::size_t>(m - 1)] / (4.0 * m));
    }
    return -(acc * x);
}

cplx sigma_product(cplx z, const TruncationPlan& plan) {
    if (z == cplx{}) return {};
    const cplx z2 = z * z;
    const cplx z4 = z2 * z2;
    cplx value = z;
    for (const auto& f : plan.orbits) {
        if (f.size == 4) {
            value *= (f.w4 - z4) / f.k0;
        } else {
            value *= ((f.w4 - z4) * (std::conj(f.w4) - z4)) / f.k0;
        }
    }
    return value * std::exp(plan.c2 * z2 + tail_exponent(plan, z4));
}

void check_argument(cplx z, double bound) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InputError("sigma: argument must be finite");
    }
    if (std::abs(z) > bound) {
        throw InputError("sigma: |z| = " + std::to_string(std::abs(z)) +
                         " exceeds the configured bound " + std::to_string(bound));
    }
}

// Lattice point w = m omega1 + n omega2 nearest to z in those coordinates.
void reduce(cplx z, std::int64_t& m, std::int64_t& n) {
    m = static_cast<std::int64_t>(std::round((z.real() - z.imag()) / 2.0));
    n = static_cast<std::int64_t>(std::round((z.real() + z.imag()) / 2.0));
}

template <typename Matrix>
Matrix sigma_matrix_impl(const Matrix& m, const TruncationPlan& plan, double exp_tol) {
    using Scalar = typename Matrix::Scalar;
    const auto n = m.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix m2 = m * m;
    const Matrix a = m2 * m2;
    const Matrix a2 = a * a;

    Matrix value = m;
    for (const auto& f : plan.orbits) {
        // Numerator in integer-valued arithmetic first so exact zeros survive.
        Matrix factor = f.k1 * a;
        factor.diagonal().array() += Scalar(f.k0);
        if (f.k2 != 0.0) factor += f.k2 * a2;
        value = ((value * factor) / f.k0).eval();
    }

    Matrix poly = Matrix::Zero(n, n);
    for (auto k = static_cast<int>(plan.tail.size()); k >= 1; --k) {
        poly = (poly * a).eval();
        poly.diagonal().array() += Scalar(plan.tail[static_cast<std::size_t>(k - 1)] / (4.0 * k));
    }
    Matrix exponent = -(poly * a);
    if constexpr (std::is_same_v<Scalar, double>) {
        // c2 is real (exactly zero) for the symmetric disc.
        exponent += plan.c2.real() * m2;
    } else {
        exponent += Scalar(plan.c2) * m2;
    }
    return value * linalg::mat_exp(exponent, exp_tol);
}

}  // namespace

std::complex<double> sigma(std::complex<double> z, const TruncationPlan& plan) {
    if (std::abs(z) > plan.scale * (1.0 + 1e-12) + 1e-12) {
        throw InputError("sigma: plan built for |z| <= " + std::to_string(plan.scale));
    }
    return sigma_product(z, plan);
}

std::complex<double> sigma(std::complex<double> z, double tol, const SigmaOptions& options) {
    check_argument(z, options.z_bound);
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw InputError("sigma: tolerance must be a positive finite number");
    }
    if (!options.quasi_periodic) {
        return sigma_product(z, plan_truncation(std::abs(z), tol, PlanKind::Sigma, options.cap));
    }
    std::int64_t m = 0;
    std::int64_t n = 0;
    reduce(z, m, n);
    const LatticePoint w{m + n, n - m};
    const cplx z0 = z - w.value();
    const cplx base =
        sigma_product(z0, plan_truncation(std::abs(z0), tol / 4.0, PlanKind::Sigma, options.cap));
    if (w == LatticePoint{}) return base;
    const cplx eta = quasi_period(w, tol / 4.0);
    const double psi = ((m + n + m * n) % 2 == 0) ? 1.0 : -1.0;
    return psi * std::exp(eta * (z0 + w.value() / 2.0)) * base;
}

RealMatrix sigma_matrix(const RealMatrix& m, const TruncationPlan& plan, double exp_tol) {
    linalg::require_square_finite(m, "sigma_matrix");
    return sigma_matrix_impl(m, plan, exp_tol);
}

ComplexMatrix sigma_matrix(const ComplexMatrix& m, const TruncationPlan& plan, double exp_tol) {
    linalg::require_square_finite(m, "sigma_matrix");
    return sigma_matrix_impl(m, plan, exp_tol);
}

RealMatrix sigma_matrix(const RealMatrix& m, double tol, std::size_t cap) {
    linalg::require_square_finite(m, "sigma_matrix");
    const auto plan =
        plan_truncation(linalg::spectral_radius_bound(m), tol, PlanKind::Sigma, cap);
    return sigma_matrix_impl(m, plan, tol);
}

ComplexMatrix sigma_matrix(const ComplexMatrix& m, double tol, std::size_t cap) {
    linalg::require_square_finite(m, "sigma_matrix");
    const auto plan =
        plan_truncation(linalg::spectral_radius_bound(m), tol, PlanKind::Sigma, cap);
    return sigma_matrix_impl(m, plan, tol);
}

std::complex<double> zeta(std::complex<double> z, double tol, std::size_t cap) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InputError("zeta: argument must be finite");
    }
    const LatticePoint pole = lattice::nearest(z);
    if (std::abs(z - pole.value()) < 1e-12) {
        throw PoleError("zeta: argument within 1e-12 of the lattice point " +
                        std::to_string(pole.a) + (pole.b < 0 ? "" : "+") +
                        std::to_string(pole.b) + "i");
    }
    const TruncationPlan plan = plan_truncation(std::abs(z), tol, PlanKind::Zeta, cap);
    cplx value = 1.0 / z;
    for (const auto& w : lattice::enumerate(plan.radius, cap)) {
        if (w == LatticePoint{}) continue;
        const cplx wv = w.value();
        value += 1.0 / (z - wv) + 1.0 / wv + z / (wv * wv);
    }
    // Derivative of the sigma tail exponent: -sum_m T_m z^{4m-1}.
    const cplx z4 = (z * z) * (z * z);
    cplx acc{};
    for (auto m = static_cast<int>(plan.tail.size()); m >= 1; --m) {
        acc = acc * z4 + plan.tail[static_cast<std::size_t>(m - 1)];
    }
    return value - acc * (z * z * z);
}

std::complex<double> quasi_period(const LatticePoint& w, double tol) {
    const cplx eta1 = 2.0 * zeta(lattice::omega1 / 2.0, tol);
    const cplx eta2 = 2.0 * zeta(lattice::omega2 / 2.0, tol);
    // w = m omega1 + n omega2 with a = m + n, b = n - m.
    const auto m = static_cast<double>((w.a - w.b) / 2);
    const auto n = static_cast<double>((w.a + w.b) / 2);
    return m * eta1 + n * eta2;
}

}  // namespace hodge::weierstrass
