#pragma once

#include <optional>
#include <vector>

#include "backorb/ratmap.hpp"

namespace backorb {

/// b_n(z): sizes of the backward orbits R^{-n}(z) counted without
/// multiplicity.
using BSequence = std::vector<long long>;

/// Level-by-level backward orbit: levels[n] is the deduplicated point set
/// R^{-n}(z) in canonical order, counts[n] its size.
struct OrbitLevels {
    SpherePoint start;
    std::vector<std::vector<SpherePoint>> levels;
    BSequence counts;
};

/// Enumerates levels 0..depth by repeated fiber application with chordal
/// dedup inside each level. Deterministic: candidates are gathered in parent
/// order and canonically sorted before the dedup sweep, so the result does
/// not depend on evaluation order (jobs > 1 splits fiber solves across
/// threads).
OrbitLevels backward_levels(const RationalMap& map, const SpherePoint& z, int depth, int jobs = 1);

/// b_0..b_kmax through the level-count recurrence
///   b_{n+1} = N b_n - sum over branched points x with R^{n+1}(x) = z of (e(x) - 1),
/// which holds because fibers of distinct points are disjoint. Needs only the
/// forward orbits of the branched points, so it reaches depths where the
/// orbit itself is far too large to enumerate. Counts are kept exact in
/// binary64; the call fails once b_n would exceed 2^52.
BSequence bseq_by_forward_orbits(const RationalMap& map, const SpherePoint& z, int kmax);

struct ClosedFormReport {
    bool pass;
    int first_mismatch;  // -1 when pass
    BSequence computed;
    BSequence expected;
};

/// Checks b(0) for z^2 - 1 against b_{2n} = (1 + 2^(2n+1))/3 and
/// b_{2n+1} = (2 + 2^(2n+2))/3 up to n_max.
ClosedFormReport bseq_closed_form_check(const RationalMap& map, int n_max);

struct ExceptionalCertificate {
    bool exceptional;
    /// The finite grand backward orbit when exceptional.
    std::vector<SpherePoint> orbit;
    /// First level whose accumulated orbit exceeded two points, with its
    /// size; level -1 when exceptional.
    int witness_level = -1;
    long long witness_count = 0;
};

/// A point is exceptional iff its grand backward orbit is finite, which for
/// deg >= 2 forces at most 2 points closed under taking fibers.
ExceptionalCertificate is_exceptional(const RationalMap& map, const SpherePoint& z,
                                      int probe_depth = 4);

/// Brute-force cross-check: composes the homogenized pair n times, solves the
/// single degree-N^n fiber polynomial for R^n(x) = z and counts distinct
/// solutions. Guarded by N^n <= 10^4.
long long oracle_bn(const RationalMap& map, const SpherePoint& z, int n);

}  // namespace backorb
