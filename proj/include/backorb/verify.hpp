#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "backorb/ratmap.hpp"

namespace backorb {

struct CheckResult {
    std::string name;
    bool pass;
    /// Compact deterministic summary (goes verbatim into the CLI emission).
    std::string detail;
};

/// The full reproduction suite: golden b-sequences for the worked quadratic
/// examples, the z^2-1 closed form, structural fiber/Riemann-Hurwitz
/// identities over the sample corpus, oracle equivalence, family parameters,
/// KMS recovery and telescoping, seeded property suites, and pairwise
/// distinguishing. All randomness derives from the seed; identical seeds and
/// jobs-independent evaluation give identical results.
std::vector<CheckResult> run_verification(std::uint64_t seed, int jobs,
                                          const Tolerances& tols = {});

/// M R M^{-1} for M(z) = (az+b)/(cz+d), ad - bc != 0. Verification utility:
/// conjugation transports backward orbits bijectively, so every
/// backward-orbit count is preserved.
RationalMap mobius_conjugate(const RationalMap& map, Complex a, Complex b, Complex c, Complex d);

/// The ten-map sample corpus used by the structural checks.
std::vector<std::pair<std::string, RationalMap>> sample_corpus(const Tolerances& tols = {});

}  // namespace backorb
