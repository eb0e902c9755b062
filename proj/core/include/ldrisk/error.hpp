#pragma once

#include <stdexcept>
#include <string>

namespace ldrisk {

enum class Errc {
    asymmetric_distance,
    nonzero_diagonal,
    triangle_violation,
    unknown_point,
    invalid_argument,
    horizon_missing,
    not_max_stable,
    invalid_penalty,
    no_convergence,
    no_bracket,
    order_violation,
    not_a_bijection,
};

const char* errc_name(Errc c);

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::asymmetric_distance: return "AsymmetricDistance";
        case Errc::nonzero_diagonal: return "NonzeroDiagonal";
        case Errc::triangle_violation: return "TriangleViolation";
        case Errc::unknown_point: return "UnknownPoint";
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::horizon_missing: return "HorizonMissing";
        case Errc::not_max_stable: return "NotMaxStable";
        case Errc::invalid_penalty: return "InvalidPenalty";
        case Errc::no_convergence: return "NoConvergence";
        case Errc::no_bracket: return "NoBracket";
        case Errc::order_violation: return "OrderViolation";
        case Errc::not_a_bijection: return "NotABijection";
    }
    return "UnknownError";
}

}  // namespace ldrisk
