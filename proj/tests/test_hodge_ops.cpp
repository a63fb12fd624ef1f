#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hodge/errors.hpp"
#include "hodge/hodge_ops.hpp"
#include "hodge/instance_gen.hpp"
#include "hodge/weierstrass.hpp"

using namespace hodge;
using cplx = std::complex<double>;

namespace {

RealMatrix J() {
    RealMatrix j(2, 2);
    j << 0, -1, 1, 0;
    return j;
}

RealMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index k = 0;
        for (const double v : r) m(i, k++) = v;
        ++i;
    }
    return m;
}

HodgeType type_of(std::initializer_list<Summand> s) {
    HodgeType t;
    for (const auto& x : s) t.add(x.p, x.q, x.mult);
    return t;
}

const gen::Instance& instance(std::uint64_t seed) {
    static std::map<std::uint64_t, gen::Instance> cache;
    auto it = cache.find(seed);
    if (it == cache.end()) {
        gen::GenConfig cfg;
        cfg.seed = seed;
        it = cache.emplace(seed, gen::random_instance(cfg)).first;
    }
    return it->second;
}

}  // namespace

TEST_CASE("HodgeType bookkeeping") {
    HodgeType t;
    t.add(0, 1).add(1, 0).add(1, 1);
    CHECK(t.multiplicity(1, 0) == 2);
    CHECK(t.multiplicity(0, 1) == 2);
    CHECK(t.dimension() == 5);
    CHECK(t.to_string() == "(1,0)x2+(1,1)x1");
    CHECK_THROWS_AS(t.add(1, 0, 0), InputError);
    const auto s = type_of({{2, 0, 1}, {-1, -1, 3}, {1, 0, 1}}).summands();
    REQUIRE(s.size() == 3);
    CHECK(s[0] == Summand{-1, -1, 3});
    CHECK(s[1] == Summand{1, 0, 1});
    CHECK(s[2] == Summand{2, 0, 1});
}

TEST_CASE("build_block") {
    auto b = build_block(1, 0);
    CHECK(b.E == RealMatrix::Identity(2, 2));
    CHECK(b.T == J());
    b = build_block(1, 1);
    CHECK(b.E == mat({{2}}));
    CHECK(b.T == mat({{0}}));
    b = build_block(2, 0);
    CHECK(b.E == RealMatrix(2 * RealMatrix::Identity(2, 2)));
    CHECK(b.T == RealMatrix(2 * J()));
    b = build_block(0, 2);
    CHECK(b.T == RealMatrix(2 * J()));
}

TEST_CASE("assemble") {
    auto t = assemble(type_of({{1, 0, 1}}));
    CHECK(t.E == RealMatrix::Identity(2, 2));
    CHECK(t.T == J());
    CHECK(t.S == mat({{1, -1}, {1, 1}}));
    t = assemble(type_of({{0, 0, 1}}));
    CHECK(t.S == mat({{0}}));
    CHECK(t.E == mat({{0}}));
    t = assemble(type_of({{1, 0, 1}, {1, 1, 1}}));
    CHECK(t.E == mat({{1, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
    CHECK(t.T == mat({{0, -1, 0}, {1, 0, 0}, {0, 0, 0}}));
    CHECK(t.S == t.E + t.T);

    CHECK_THROWS_AS(assemble(type_of({{1, 0, 1}}), RealMatrix(RealMatrix::Identity(3, 3))), DimensionError);
    CHECK_THROWS_AS(assemble(type_of({{1, 0, 1}}), mat({{1, 2}, {2, 4}})), SingularMatrixError);
    try {
        assemble(type_of({{1, 0, 1}}), mat({{1, 2}, {2, 4}}));
    } catch (const Error& e) {
        CHECK(e.kind() == "SingularConjugator");
    }
    // Non-integer conjugators fall back to LU.
    const RealMatrix p = mat({{2, 1}, {0.5, 1}});
    t = assemble(type_of({{1, 0, 1}}), p);
    CHECK((t.E - RealMatrix::Identity(2, 2)).norm() <= 1e-14);
}

TEST_CASE("verify_pair examples") {
    auto r = verify_pair(RealMatrix::Identity(2, 2), J(), 1e-8);
    CHECK(r.verdict);
    CHECK(*r.commutator_norm <= 1e-10);
    CHECK(*r.sin_E_norm <= 1e-10);
    CHECK(*r.sinh_T_norm <= 1e-10);
    CHECK(*r.parity_norm <= 1e-10);

    r = verify_pair(mat({{1}}), mat({{0}}), 1e-8);
    CHECK_FALSE(r.verdict);
    CHECK(std::abs(*r.parity_norm - 1.0) <= 1e-12);
    CHECK(*r.commutator_norm <= 1e-12);
    CHECK(*r.sin_E_norm <= 1e-12);
    CHECK(*r.sinh_T_norm <= 1e-12);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].kind == "parity");

    r = verify_pair(RealMatrix::Zero(3, 3), RealMatrix::Zero(3, 3), 1e-8);
    CHECK(r.verdict);

    r = verify_pair(mat({{1, 0}, {0, 2}}), J(), 1e-8);
    CHECK_FALSE(r.verdict);
    CHECK(std::any_of(r.witnesses.begin(), r.witnesses.end(), [](const Witness& w) { return w.kind == "commutator"; }));

    CHECK_THROWS_AS(verify_pair(RealMatrix::Zero(2, 2), RealMatrix::Zero(3, 3), 1e-8), DimensionError);
}

TEST_CASE("verify_sigma examples") {
    auto r = verify_sigma(mat({{1, -1}, {1, 1}}), 1e-8);
    CHECK(r.verdict);
    CHECK(r.witnesses.empty());
    r = verify_sigma(mat({{1}}), 1e-8);
    CHECK_FALSE(r.verdict);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].kind == "off-lattice");
    CHECK(r.witnesses[0].detail == "lambda=1 off-lattice");
    r = verify_sigma(mat({{0, 1}, {0, 0}}), 1e-8);
    CHECK_FALSE(r.verdict);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].kind == "defective");
}

TEST_CASE("split examples") {
    auto p = split(mat({{1, -1}, {1, 1}}), 1e-8);
    CHECK((p.E - RealMatrix::Identity(2, 2)).norm() <= 1e-12);
    CHECK((p.T - J()).norm() <= 1e-12);
    p = split(mat({{2}}), 1e-8);
    CHECK(std::abs(p.E(0, 0) - 2.0) <= 1e-14);
    CHECK(std::abs(p.T(0, 0)) <= 1e-14);
    p = split(RealMatrix::Zero(3, 3), 1e-8);
    CHECK(p.E.norm() == 0.0);
    CHECK(p.T.norm() == 0.0);
    CHECK_THROWS_AS(split(mat({{1}}), 1e-8), linalg::StructuralError);
    try {
        split(mat({{1}}), 1e-8);
    } catch (const Error& e) {
        CHECK(e.kind() == "SpectrumOffLattice");
    }
}

TEST_CASE("classify examples") {
    CHECK(classify(mat({{1, -1}, {1, 1}}), 1e-8) == type_of({{1, 0, 1}}));
    CHECK(classify(mat({{2}}), 1e-8) == type_of({{1, 1, 1}}));
    CHECK(classify(RealMatrix::Zero(2, 2), 1e-8) == type_of({{0, 0, 2}}));
}

TEST_CASE("hodge_decomposition examples") {
    auto dec = hodge_decomposition(assemble(type_of({{1, 0, 1}})), 1e-8);
    CHECK(dec.dim(1, 0) == 1);
    CHECK(dec.dim(0, 1) == 1);
    const ComplexMatrix& v10 = dec.components.at({1, 0});
    CHECK(std::abs(v10(1, 0) / v10(0, 0) - cplx(0, -1)) <= 1e-12);
    const ComplexMatrix& v01 = dec.components.at({0, 1});
    CHECK(std::abs(v01(1, 0) / v01(0, 0) - cplx(0, 1)) <= 1e-12);

    dec = hodge_decomposition(assemble(type_of({{1, 1, 1}})), 1e-8);
    CHECK(dec.components.size() == 1);
    CHECK(dec.dim(1, 1) == 1);

    dec = hodge_decomposition(assemble(type_of({{2, 0, 1}, {1, 1, 2}})), 1e-8);
    CHECK(dec.dim(2, 0) == 1);
    CHECK(dec.dim(0, 2) == 1);
    CHECK(dec.dim(1, 1) == 2);
    CHECK(dec.pure_weight() == 2);
}

TEST_CASE("filtration examples") {
    const auto dec = hodge_decomposition(assemble(type_of({{1, 0, 1}})), 1e-8);
    CHECK(build_filtration(dec, 1).cols() == 1);
    CHECK(build_filtration(dec, 0).cols() == 2);
    CHECK(build_filtration(dec, 2).cols() == 0);
    CHECK(build_filtration(dec, -5).cols() == 2);
    CHECK(build_filtration(dec, 9).cols() == 0);
    for (std::int64_t r = -1; r <= 3; ++r) {
        const auto fc = filtration_complement(dec, r);
        CHECK(fc.complementary);
        CHECK(fc.dim_f + fc.dim_conj == 2);
    }
    const auto mixed = hodge_decomposition(assemble(type_of({{1, 0, 1}, {1, 1, 1}})), 1e-8);
    CHECK(build_filtration(mixed, 1).cols() == 2);
    CHECK_THROWS_AS(filtration_complement(mixed, 1), InputError);
}

TEST_CASE("rho_eval examples") {
    const auto t = assemble(type_of({{1, 0, 1}}));
    CHECK((rho_eval(t, 0, 0) - RealMatrix::Identity(2, 2)).norm() == 0.0);
    for (const double phi : {0.1, 0.7, 2.0}) {
        RealMatrix r(2, 2);
        r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
        CHECK((rho_eval(t, 0, phi, 1e-12) - r).norm() <= 1e-10);
    }
    const double radius = 1.7;
    CHECK((rho_eval(t, std::log(radius), 0, 1e-12) - radius * RealMatrix::Identity(2, 2)).norm() <= 1e-12);
    // r^{p+q} rotation by (p-q) phi for (3,1).
    const auto t31 = assemble(type_of({{3, 1, 1}}));
    const double phi = 0.4;
    RealMatrix r(2, 2);
    r << std::cos(2 * phi), -std::sin(2 * phi), std::sin(2 * phi), std::cos(2 * phi);
    CHECK((rho_eval(t31, std::log(radius), phi, 1e-13) - std::pow(radius, 4) * r).norm() <= 1e-10);
}

TEST_CASE("weight_decomposition") {
    auto w = weight_decomposition(assemble(type_of({{1, 0, 1}, {1, 1, 1}})), 1e-8);
    REQUIRE(w.size() == 2);
    CHECK(w.at(1).cols() == 2);
    CHECK(w.at(2).cols() == 1);
    w = weight_decomposition(assemble(type_of({{0, 0, 3}})), 1e-8);
    REQUIRE(w.size() == 1);
    CHECK(w.at(0).cols() == 3);
    const auto t = assemble(type_of({{1, 0, 1}, {1, 1, 1}}));
    const auto wd = weight_decomposition(t, 1e-8);
    const double x = 0.3;
    const RealMatrix g = rho_eval(t, x, 0, 1e-12);
    const RealMatrix v = wd.at(2);
    CHECK((g * v - std::exp(2 * x) * v).norm() <= 1e-8);
}

TEST_CASE("verify_restricted") {
    const auto s10 = assemble(type_of({{1, 0, 1}})).S;
    CHECK(verify_restricted(s10, {{1, 0}}, 1e-8));
    CHECK(verify_restricted(s10, {{0, 1}}, 1e-8));
    CHECK_FALSE(verify_restricted(assemble(type_of({{1, 1, 1}})).S, {{1, 0}}, 1e-8));
    // No restriction: agrees with verify_sigma.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto& inst = instance(seed);
        std::set<PQ> all;
        const auto k = static_cast<std::int64_t>(std::ceil(inst.triple.S.norm()));
        for (std::int64_t p = -k; p <= k; ++p)
            for (std::int64_t q = -k; q <= k; ++q) all.insert({p, q});
        CHECK(verify_restricted(inst.triple.S, all, 1e-8) == verify_sigma(inst.triple.S, 1e-8).verdict);
    }
    CHECK_THROWS_AS(verify_restricted(mat({{1}}), {{0, 0}}, 1e-8), linalg::StructuralError);
}

TEST_CASE("round trip over the random suite") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto& inst = instance(seed);
        const double tol = 1e-8;
        CAPTURE(seed);
        CHECK(classify(inst.triple.S, tol) == inst.type);
        const auto pair = split(inst.triple.S, tol);
        const double bound = 1e-6 * (1 + inst.triple.S.norm());
        CHECK((pair.E - inst.triple.E).cwiseAbs().maxCoeff() <= bound);
        CHECK((pair.T - inst.triple.T).cwiseAbs().maxCoeff() <= bound);
    }
}

TEST_CASE("split is independent of candidate order") {
    std::mt19937_64 rng(99);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto& inst = instance(seed);
        const double tol = 1e-8;
        const auto base = split(inst.triple.S, tol);
        auto candidates = lattice::enumerate(linalg::spectral_radius_bound(inst.triple.S) + 1e-6);
        std::shuffle(candidates.begin(), candidates.end(), rng);
        const auto spectrum = linalg::require_spectrum(linalg::lattice_spectrum(inst.triple.S, tol, candidates));
        const auto shuffled = split(spectrum, tol);
        CAPTURE(seed);
        CHECK((shuffled.E - base.E).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, inst.triple.S.norm()));
        CHECK(classify(spectrum) == inst.type);
    }
}

TEST_CASE("parity residual on block-diagonal pairs") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto t = assemble(instance(seed).type);
        CAPTURE(seed);
        CHECK(*verify_pair(t.E, t.T, 1e-8).parity_norm <= 1e-10);
    }
    const auto r = verify_pair(mat({{1}}), mat({{0}}), 1e-8);
    CHECK(std::abs(*r.parity_norm - 1.0) <= 1e-12);
}

TEST_CASE("parity residual on conjugated pairs") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto& inst = instance(seed);
        const auto r = verify_pair(inst.triple.E, inst.triple.T, 1e-10);
        CAPTURE(seed);
        CAPTURE(*r.parity_norm);
        CHECK(*r.parity_norm <= r.threshold);
    }
}

TEST_CASE("assembled pairs verify at the default tolerance") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto& inst = instance(seed);
        CAPTURE(seed);
        CHECK(verify_pair(inst.triple.E, inst.triple.T, 1e-8).verdict);
    }
}

TEST_CASE("conjugate symmetry and dimension count") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto& inst = instance(seed);
        const double tol = 1e-8;
        const auto dec = hodge_decomposition(inst.triple, tol);
        std::size_t total = 0;
        for (const auto& [pq, basis] : dec.components) {
            total += static_cast<std::size_t>(basis.cols());
            CHECK(dec.dim(pq.p, pq.q) == dec.dim(pq.q, pq.p));
            // conj(V^{p,q}) lies in V^{q,p}.
            const ComplexMatrix& mirror = dec.components.at({pq.q, pq.p});
            const ComplexMatrix c = basis.conjugate();
            const ComplexMatrix residual = c - mirror * (mirror.adjoint() * c);
            CHECK(residual.norm() <= std::sqrt(tol));
        }
        CHECK(total == inst.triple.n());
    }
}

TEST_CASE("rho is a homomorphism") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto& t = instance(seed).triple;
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const double x1 = u(rng), y1 = u(rng), x2 = u(rng), y2 = u(rng);
            const RealMatrix lhs = rho_eval(t, x1 + x2, y1 + y2, 1e-12);
            const RealMatrix rhs = rho_eval(t, x1, y1, 1e-12) * rho_eval(t, x2, y2, 1e-12);
            worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, lhs.norm()));
        }
        CAPTURE(seed);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("sigma consistency") {
    // Structural verdict true <=> ||sigma(S)|| <= 1e-6; false <=> > 1e-3.
    auto consistent = [](const RealMatrix& s) {
        const auto r = verify_sigma(s, 1e-8);
        const double nrm = weierstrass::sigma_matrix(s, 1e-8).norm();
        return r.verdict ? nrm <= 1e-6 : nrm > 1e-3;
    };
    int agree = 0;
    int total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ++total;
        agree += consistent(instance(seed).triple.S) ? 1 : 0;
    }
    for (const auto& s : {mat({{1}}), mat({{0, 1}, {0, 0}})}) {
        ++total;
        agree += consistent(s) ? 1 : 0;
    }
    // Pair E=[[1]], T=[[0]] gives S=[[1]] again.
    ++total;
    agree += consistent(mat({{1}}) + mat({{0}})) ? 1 : 0;
    CHECK(agree == total);
}
