#pragma once

#include <stdexcept>
#include <string>

namespace backorb {

/// Numeric policy shared by the dynamical computations. The underlying
/// mathematics is exact; every tolerance here is artifact policy.
struct Tolerances {
    /// Chordal tolerance for identifying two sphere points as equal
    /// (backward-orbit dedup, forward-orbit hit detection, measure merging).
    double dedup_tol = 1e-9;

    /// Chordal radius for merging root approximations into one multiple root.
    /// Must sit well above the solver's m-fold root splitting radius
    /// (~eps^(1/m)) and well below genuine root separations.
    double cluster_tol = 1e-5;

    /// 53 = binary64 throughout; 54..64 adds an extended-precision polishing
    /// pass to the root finder. Values outside [53, 64] are rejected.
    int precision_bits = 53;
};

inline void validate(const Tolerances& t) {
    if (!(t.dedup_tol >= 0.0))
        throw std::invalid_argument("dedup_tol must be nonnegative");
    if (!(t.cluster_tol > 0.0))
        throw std::invalid_argument("cluster_tol must be positive");
    if (t.precision_bits < 53 || t.precision_bits > 64)
        throw std::invalid_argument("precision_bits must be in [53, 64]");
}

/// Numerical failure after the configured escalation step was exhausted.
/// Carries the worst residual seen so the caller can retry or report.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double worst_residual = 0.0)
        : std::runtime_error(what), worst_residual_(worst_residual) {}
    double worst_residual() const { return worst_residual_; }

private:
    double worst_residual_;
};

class RootFindingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace backorb
