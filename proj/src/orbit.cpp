#include "backorb/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace backorb {

namespace {

constexpr long long kLevelBudget = 1LL << 22;

std::vector<SpherePoint> next_level(const RationalMap& map,
                                    const std::vector<SpherePoint>& level, int jobs) {
    std::vector<std::vector<SpherePoint>> per_parent(level.size());
    auto run_range = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            Fiber f = map.fiber(level[i]);
            for (const auto& m : f.members) per_parent[i].push_back(m.location);
        }
    };
    int threads = std::max(1, jobs);
    if (threads == 1 || level.size() < 8) {
        run_range(0, level.size());
    } else {
        size_t chunk = (level.size() + static_cast<size_t>(threads) - 1) / static_cast<size_t>(threads);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
        size_t slot = 0;
        for (size_t lo = 0; lo < level.size(); lo += chunk, ++slot) {
            size_t hi = std::min(lo + chunk, level.size());
            pool.emplace_back([&, lo, hi, slot] {
                try {
                    run_range(lo, hi);
                } catch (...) {
                    errors[slot] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    std::vector<SpherePoint> candidates;
    for (const auto& v : per_parent) candidates.insert(candidates.end(), v.begin(), v.end());
    return dedup_points(std::move(candidates), map.tols().dedup_tol);
}

}  // namespace

OrbitLevels backward_levels(const RationalMap& map, const SpherePoint& z, int depth, int jobs) {
    if (depth < 0) throw std::invalid_argument("backward_levels: depth must be >= 0");
    OrbitLevels out;
    out.start = z;
    out.levels.push_back({z});
    out.counts.push_back(1);
    for (int n = 0; n < depth; ++n) {
        long long expected = static_cast<long long>(map.degree()) * out.counts.back();
        if (expected > kLevelBudget)
            throw std::invalid_argument("backward_levels: level size budget exceeded; lower the depth");
        out.levels.push_back(next_level(map, out.levels.back(), jobs));
        out.counts.push_back(static_cast<long long>(out.levels.back().size()));
    }
    return out;
}

BSequence bseq_by_forward_orbits(const RationalMap& map, const SpherePoint& z, int kmax) {
    if (kmax < 0) throw std::invalid_argument("bseq_by_forward_orbits: kmax must be >= 0");
    auto crit = map.critical_points();
    const double tol = map.tols().dedup_tol;

    // hits[n] = sum of (e(x)-1) over branched points with R^n(x) = z.
    std::vector<long long> hits(static_cast<size_t>(kmax) + 1, 0);
    for (const auto& cp : crit) {
        SpherePoint y = cp.location;
        for (int n = 1; n <= kmax; ++n) {
            y = map.apply(y);
            if (points_equal(y, z, tol)) hits[static_cast<size_t>(n)] += cp.branch_index - 1;
        }
    }

    constexpr double kExactLimit = 4503599627370496.0;  // 2^52
    BSequence b;
    b.push_back(1);
    double bn = 1.0;
    for (int n = 1; n <= kmax; ++n) {
        bn = bn * map.degree() - static_cast<double>(hits[static_cast<size_t>(n)]);
        if (bn > kExactLimit)
            throw std::invalid_argument("bseq_by_forward_orbits: counts exceed exact integer range");
        b.push_back(static_cast<long long>(bn));
    }
    return b;
}

ClosedFormReport bseq_closed_form_check(const RationalMap& map, int n_max) {
    if (n_max < 0) throw std::invalid_argument("bseq_closed_form_check: n_max must be >= 0");
    OrbitLevels lv = backward_levels(map, SpherePoint::zero(), n_max);
    ClosedFormReport rep;
    rep.computed = lv.counts;
    for (int k = 0; k <= n_max; ++k) {
        long long expect = (k % 2 == 0) ? (1LL + (1LL << (k + 1))) / 3
                                        : (2LL + (1LL << (k + 1))) / 3;
        rep.expected.push_back(expect);
    }
    rep.first_mismatch = -1;
    for (int k = 0; k <= n_max; ++k) {
        if (rep.computed[static_cast<size_t>(k)] != rep.expected[static_cast<size_t>(k)]) {
            rep.first_mismatch = k;
            break;
        }
    }
    rep.pass = rep.first_mismatch < 0;
    return rep;
}

ExceptionalCertificate is_exceptional(const RationalMap& map, const SpherePoint& z,
                                      int probe_depth) {
    if (probe_depth < 2) throw std::invalid_argument("is_exceptional: probe_depth must be >= 2");
    const double tol = map.tols().dedup_tol;
    ExceptionalCertificate cert;
    std::vector<SpherePoint> acc{z};
    std::vector<SpherePoint> level{z};
    for (int n = 1; n <= probe_depth; ++n) {
        std::vector<SpherePoint> next;
        for (const auto& p : level) {
            Fiber f = map.fiber(p);
            for (const auto& m : f.members) next.push_back(m.location);
        }
        level = dedup_points(std::move(next), tol);
        std::vector<SpherePoint> merged = acc;
        merged.insert(merged.end(), level.begin(), level.end());
        acc = dedup_points(std::move(merged), tol);
        if (acc.size() > 2) {
            cert.exceptional = false;
            cert.witness_level = n;
            cert.witness_count = static_cast<long long>(level.size());
            return cert;
        }
    }
    // At most two accumulated points; exceptional iff the set is closed
    // under taking fibers.
    for (const auto& p : acc) {
        Fiber f = map.fiber(p);
        for (const auto& m : f.members) {
            bool inside = false;
            for (const auto& a : acc)
                if (points_equal(m.location, a, tol)) inside = true;
            if (!inside) {
                cert.exceptional = false;
                cert.witness_level = probe_depth + 1;
                cert.witness_count = static_cast<long long>(acc.size()) + 1;
                return cert;
            }
        }
    }
    cert.exceptional = true;
    cert.orbit = acc;
    return cert;
}

long long oracle_bn(const RationalMap& map, const SpherePoint& z, int n) {
    if (n < 0) throw std::invalid_argument("oracle_bn: n must be >= 0");
    double total = std::pow(static_cast<double>(map.degree()), n);
    if (total > 1e4) throw std::invalid_argument("oracle_bn: N^n guard exceeded (max 10^4)");
    if (n == 0) return 1;

    std::pair<Polynomial, Polynomial> iter{map.p(), map.q()};
    std::pair<Polynomial, Polynomial> base{map.p(), map.q()};
    for (int k = 1; k < n; ++k) iter = compose_pairs(base, iter);

    int big_n = static_cast<int>(std::llround(total));
    std::vector<Complex> fc(static_cast<size_t>(big_n) + 1);
    for (int i = 0; i <= big_n; ++i)
        fc[static_cast<size_t>(i)] = z.den() * iter.first.coeff(i) - z.num() * iter.second.coeff(i);
    Polynomial f = trim_leading(Polynomial(std::move(fc)));
    if (f.is_zero()) throw NumericalError("oracle_bn: zero fiber polynomial");

    std::vector<SpherePoint> pts;
    if (f.degree() >= 1) {
        RootSet rs = all_roots(f, map.tols().precision_bits, map.tols().cluster_tol);
        for (const auto& r : rs.roots) pts.push_back(SpherePoint::from_complex(r.location));
    }
    if (f.degree() < big_n) pts.push_back(SpherePoint::infinity());
    // Distinct solutions under the multiplicity-cluster radius, matching the
    // merge decisions taken inside per-level fibers.
    pts = dedup_points(std::move(pts), map.tols().cluster_tol);
    return static_cast<long long>(pts.size());
}

}  // namespace backorb
