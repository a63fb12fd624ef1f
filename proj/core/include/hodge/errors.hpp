#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hodge {

// Base of everything the library throws. `kind()` is a stable machine-readable
// tag; the CLI forwards it in its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Malformed or out-of-contract input (non-finite entries, bad tolerances...).
struct InputError : Error {
    explicit InputError(const std::string& what) : Error("InputError", what) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error("DimensionMismatch", what) {}
};

// A request that would exceed a configured enumeration or work cap.
struct ResourceError : Error {
    explicit ResourceError(const std::string& what) : Error("ResourceError", what) {}
};

// zeta evaluated on (or numerically at) a lattice point.
struct PoleError : Error {
    explicit PoleError(const std::string& what) : Error("PoleError", what) {}
};

// A computed quantity violated a consistency check it must satisfy for valid
// input (imaginary residue of a real matrix function, conjugate multiplicity
// mismatch...). Usually means the tolerance is misconfigured.
struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error("NumericalError", what) {}
};

struct SingularMatrixError : Error {
    explicit SingularMatrixError(const std::string& what) : Error("SingularConjugator", what) {}
};

}  // namespace hodge
