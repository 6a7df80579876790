#include "backorb/compare.hpp"

#include <algorithm>
#include <map>

namespace backorb {

OrbitInvariant invariant(const RationalMap& map, int depth, const std::string& label) {
    if (depth < 1) throw std::invalid_argument("invariant: depth must be >= 1");
    OrbitInvariant inv;
    inv.map_label = label;
    inv.depth = depth;
    for (const auto& cp : map.critical_points()) {
        OrbitLevels lv = backward_levels(map, cp.location, depth);
        inv.entries.push_back({cp.location, cp.branch_index, lv.counts});
    }
    return inv;
}

namespace {

std::vector<BSequence> sorted_sequences(const OrbitInvariant& inv) {
    std::vector<BSequence> out;
    for (const auto& e : inv.entries) out.push_back(e.counts);
    std::sort(out.begin(), out.end());
    return out;
}

int first_difference(const BSequence& a, const BSequence& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return static_cast<int>(i);
    return a.size() == b.size() ? -1 : static_cast<int>(n);
}

// Closest candidate by longest common prefix.
BSequence best_candidate(const BSequence& target, const std::vector<BSequence>& pool) {
    BSequence best;
    int best_prefix = -1;
    for (const auto& s : pool) {
        int d = first_difference(target, s);
        int prefix = (d < 0) ? static_cast<int>(target.size()) : d;
        if (prefix > best_prefix) {
            best_prefix = prefix;
            best = s;
        }
    }
    return best;
}

}  // namespace

Verdict compare_invariants(const OrbitInvariant& a, const OrbitInvariant& b) {
    if (a.depth != b.depth)
        throw std::invalid_argument("compare_invariants: depths must match");

    auto sa = sorted_sequences(a);
    auto sb = sorted_sequences(b);

    Verdict v;
    v.equal_multiset = sa == sb;

    auto set_a = sa;
    auto set_b = sb;
    set_a.erase(std::unique(set_a.begin(), set_a.end()), set_a.end());
    set_b.erase(std::unique(set_b.begin(), set_b.end()), set_b.end());
    v.equal_set = set_a == set_b;

    if (!v.equal_multiset) {
        // First sequence whose multiplicity differs between the two sides.
        std::map<BSequence, long long> count;
        for (const auto& s : sa) ++count[s];
        for (const auto& s : sb) --count[s];
        for (const auto& [seq, c] : count) {
            if (c != 0) {
                v.witness = seq;
                v.witness_side = c > 0 ? a.map_label : b.map_label;
                const auto& pool = c > 0 ? sb : sa;
                v.witness_best = best_candidate(seq, pool);
                v.witness_index = first_difference(seq, v.witness_best);
                break;
            }
        }
    }
    return v;
}

}  // namespace backorb
