#include "hodge/instance_gen.hpp"

#include <limits>
#include <string>

#include "hodge/errors.hpp"

namespace hodge::gen {

namespace {

// Separate streams for the type and the conjugator of the same seed.
constexpr std::uint64_t type_stream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t conj_stream = 0xc2b2ae3d27d4eb4fULL;

std::int64_t uniform_in(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

}  // namespace

void GenConfig::validate() const {
    if (max_abs_pq < 1 || max_dim < 1 || conj_steps < 1 || conj_entry_bound < 1) {
        throw InputError("GenConfig: all bounds must be positive");
    }
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw InputError("uniform_below: bound must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

HodgeType random_hodge_type(const GenConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed ^ type_stream);
    const std::int64_t k = cfg.max_abs_pq;
    const std::int64_t target = uniform_in(rng, 1, cfg.max_dim);

    HodgeType type;
    std::int64_t remaining = target;
    while (remaining > 0) {
        std::int64_t p = 0;
        std::int64_t q = 0;
        if (remaining == 1) {
            p = q = uniform_in(rng, -k, k);
        } else {
            // Uniform over the pairs in [-k, k]^2 with q <= p.
            do {
                p = uniform_in(rng, -k, k);
                q = uniform_in(rng, -k, k);
            } while (q > p);
        }
        type.add(p, q, 1);
        remaining -= (p == q) ? 1 : 2;
    }
    return type;
}

RealMatrix random_unimodular(std::int64_t n, const GenConfig& cfg) {
    cfg.validate();
    if (n < 1) throw InputError("random_unimodular: dimension must be at least 1");
    std::mt19937_64 rng(cfg.seed ^ conj_stream ^ static_cast<std::uint64_t>(n));
    RealMatrix m = RealMatrix::Identity(n, n);
    if (n == 1) return m;
    const auto bound = static_cast<double>(cfg.conj_entry_bound);
    for (std::int64_t step = 0; step < cfg.conj_steps; ++step) {
        const auto i = static_cast<Eigen::Index>(uniform_below(rng, static_cast<std::uint64_t>(n)));
        auto j = static_cast<Eigen::Index>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)));
        if (j >= i) ++j;
        const double sign = uniform_below(rng, 2) == 0 ? 1.0 : -1.0;
        const Eigen::RowVectorXd row = m.row(i) + sign * m.row(j);
        if (row.cwiseAbs().maxCoeff() > bound) continue;
        m.row(i) = row;
    }
    return m;
}

Instance random_instance(const GenConfig& cfg) {
    Instance inst;
    inst.type = random_hodge_type(cfg);
    inst.conjugator = random_unimodular(static_cast<std::int64_t>(inst.type.dimension()), cfg);
    inst.triple = assemble(inst.type, inst.conjugator);
    return inst;
}

}  // namespace hodge::gen
