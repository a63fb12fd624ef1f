#pragma once

#include <cstdint>
#include <random>

#include "hodge/hodge_ops.hpp"

// Seeded instances for property tests and the CLI.
//
// All randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard, and integers are drawn from its raw 64-bit output by
// rejection (uniform_below), never through std::uniform_int_distribution,
// whose algorithm is implementation-defined. The same seed therefore gives
// the same instance on every platform.
namespace hodge::gen {

struct GenConfig {
    std::uint64_t seed = 0;
    std::int64_t max_abs_pq = 5;
    std::int64_t max_dim = 20;
    std::int64_t conj_steps = 30;
    std::int64_t conj_entry_bound = 8;

    // Throws InputError unless every bound is positive.
    void validate() const;
};

// Uniform integer in [0, bound), bound > 0.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// Target dimension uniform in [1, max_dim]; summands drawn uniformly from the
// pairs q <= p with |p|, |q| <= max_abs_pq that still fit (only p = q once one
// dimension is left).
HodgeType random_hodge_type(const GenConfig& cfg);

// I followed by conj_steps row additions row_i += s row_j (i != j, s = +-1),
// skipping any step that would push an entry beyond conj_entry_bound. The
// determinant stays exactly 1.
RealMatrix random_unimodular(std::int64_t n, const GenConfig& cfg);

struct Instance {
    HodgeType type;
    RealMatrix conjugator;
    OperatorTriple triple;
};

// random_hodge_type(cfg), a conjugator of matching size, and their assembly.
Instance random_instance(const GenConfig& cfg);

}  // namespace hodge::gen
