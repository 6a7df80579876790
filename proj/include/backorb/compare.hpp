#pragma once

#include <string>
#include <vector>

#include "backorb/orbit.hpp"

namespace backorb {

/// The backward-orbit invariant of a map: the truncated b-sequence at every
/// branched point.
struct OrbitInvariant {
    std::string map_label;
    struct Entry {
        SpherePoint critical_point;
        int branch_index;
        BSequence counts;
    };
    std::vector<Entry> entries;
    int depth;
};

OrbitInvariant invariant(const RationalMap& map, int depth, const std::string& label = "");

/// Result of comparing two invariants. The sequence families are compared
/// both as multisets (one sequence per branched point) and as sets; extreme
/// KMS states biject with branched points, so the multiset is also an
/// invariant, and any case where the two readings disagree is surfaced.
struct Verdict {
    bool equal_multiset;
    bool equal_set;
    /// Distinguishing witness when the multisets differ: an unmatched
    /// sequence, its closest candidate from the other side (longest common
    /// prefix), and the first index where they differ.
    BSequence witness;
    BSequence witness_best;
    int witness_index = -1;
    std::string witness_side;  // label of the invariant owning the witness
};

/// Exact integer comparison of equal-depth truncations; no tolerance enters
/// the verdict.
Verdict compare_invariants(const OrbitInvariant& a, const OrbitInvariant& b);

}  // namespace backorb
