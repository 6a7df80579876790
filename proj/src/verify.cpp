#include "backorb/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "backorb/compare.hpp"
#include "backorb/family.hpp"
#include "backorb/kms.hpp"
#include "backorb/orbit.hpp"

namespace backorb {

namespace {

struct Rng {
    explicit Rng(std::uint64_t seed) : g(seed) {}
    double unit() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    Complex box(double r) { return {uniform(-r, r), uniform(-r, r)}; }
    std::mt19937_64 g;
};

std::vector<std::pair<std::string, RationalMap>> paper_quadratics(const Tolerances& tols) {
    std::vector<std::pair<std::string, RationalMap>> maps;
    maps.emplace_back("z^2", RationalMap::polynomial(Polynomial({0.0, 0.0, 1.0}), tols));
    maps.emplace_back("z^2+1", RationalMap::polynomial(Polynomial({1.0, 0.0, 1.0}), tols));
    maps.emplace_back("z^2-1", RationalMap::polynomial(Polynomial({-1.0, 0.0, 1.0}), tols));
    maps.emplace_back("z^2+c3", family_map(3, tols));
    return maps;
}

BSequence ones(int depth) { return BSequence(static_cast<size_t>(depth) + 1, 1); }

BSequence powers_of_two(int depth) {
    BSequence b;
    for (int k = 0; k <= depth; ++k) b.push_back(1LL << k);
    return b;
}

std::string seq_to_string(const BSequence& b) {
    std::string s = "(";
    for (size_t i = 0; i < b.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(b[i]);
    }
    return s + ")";
}

struct Failure {
    std::ostringstream msg;
    bool failed = false;
    void record(const std::string& m) {
        if (!failed) msg << m;
        failed = true;
    }
};

CheckResult golden_bsequences(const Tolerances& tols, int jobs) {
    const int depth = 6;
    auto maps = paper_quadratics(tols);
    std::vector<std::pair<BSequence, BSequence>> expected = {
        {ones(depth), ones(depth)},
        {powers_of_two(depth), ones(depth)},
        {{1, 2, 3, 6, 11, 22, 43}, ones(depth)},
        {{1, 2, 4, 7, 14, 28, 55}, ones(depth)},
    };
    Failure f;
    for (size_t i = 0; i < maps.size(); ++i) {
        const auto& [label, map] = maps[i];
        auto crit = map.critical_points();
        if (crit.size() != 2 || !points_equal(crit[0].location, SpherePoint::zero(), 1e-9) ||
            !crit[1].location.is_infinity()) {
            f.record(label + ": branched points are not {0, inf}");
            continue;
        }
        BSequence at_zero = backward_levels(map, SpherePoint::zero(), depth, jobs).counts;
        BSequence at_inf = backward_levels(map, SpherePoint::infinity(), depth, jobs).counts;
        if (at_zero != expected[i].first)
            f.record(label + ": b(0) = " + seq_to_string(at_zero) + ", expected " +
                     seq_to_string(expected[i].first));
        if (at_inf != expected[i].second)
            f.record(label + ": b(inf) = " + seq_to_string(at_inf));
    }
    return {"golden-bsequences", !f.failed,
            f.failed ? f.msg.str() : "4 quadratic maps, both branched points, depth 6, exact"};
}

CheckResult closed_form(const Tolerances& tols, int jobs) {
    (void)jobs;
    RationalMap map = RationalMap::polynomial(Polynomial({-1.0, 0.0, 1.0}), tols);
    ClosedFormReport rep = bseq_closed_form_check(map, 11);
    std::string detail = rep.pass
        ? "b(0) of z^2-1 matches (1+2^(2n+1))/3, (2+2^(2n+2))/3 through n = 11"
        : "first mismatch at n = " + std::to_string(rep.first_mismatch) + ": computed " +
              seq_to_string(rep.computed) + " expected " + seq_to_string(rep.expected);
    return {"closed-form", rep.pass, detail};
}

SpherePoint random_target(Rng& rng) {
    double u = rng.unit();
    if (u < 0.02) return SpherePoint::infinity();
    if (u < 0.10) return SpherePoint::from_complex(rng.box(50.0));
    return SpherePoint::from_complex(rng.box(3.0));
}

CheckResult structural_identities(const Tolerances& tols, Rng& rng) {
    Failure f;
    for (const auto& [label, map] : sample_corpus(tols)) {
        auto rh = map.verify_riemann_hurwitz();
        if (!rh.pass)
            f.record(label + ": Riemann-Hurwitz sum " + std::to_string(rh.sum_e_minus_1) +
                     " != " + std::to_string(rh.expected));

        std::vector<SpherePoint> critical_values;
        for (const auto& cp : rh.points) critical_values.push_back(map.apply(cp.location));

        for (int t = 0; t < 200; ++t) {
            SpherePoint y = random_target(rng);
            Fiber fib = map.fiber(y);
            if (fib.total_index() != map.degree()) {
                f.record(label + ": fiber indices sum to " + std::to_string(fib.total_index()));
                break;
            }
            double worst = 0.0;
            for (const auto& m : fib.members)
                worst = std::max(worst, chordal_distance(map.apply(m.location), y));
            if (worst > 1e-8) {
                f.record(label + ": fiber member maps back off-target by " + format_double(worst, 6));
                break;
            }
            bool near_critical_value = false;
            for (const auto& cv : critical_values)
                if (chordal_distance(y, cv) < 1e-4) near_critical_value = true;
            if (!near_critical_value) {
                bool regular = fib.members.size() == static_cast<size_t>(map.degree());
                for (const auto& m : fib.members)
                    if (m.branch_index != 1) regular = false;
                if (!regular) {
                    f.record(label + ": regular target without N simple preimages");
                    break;
                }
            }
        }

        for (const auto& cv : critical_values) {
            Fiber fib = map.fiber(cv);
            if (fib.members.size() >= static_cast<size_t>(map.degree())) {
                f.record(label + ": critical value with a full fiber");
                break;
            }
        }
    }
    return {"structural-identities", !f.failed,
            f.failed ? f.msg.str() : "10-map corpus, 200 targets each: fiber sums and Riemann-Hurwitz exact"};
}

CheckResult oracle_equivalence(const Tolerances& tols) {
    Failure f;
    auto run = [&](const std::string& label, const RationalMap& map, int max_n) {
        std::vector<SpherePoint> starts;
        for (const auto& cp : map.critical_points()) starts.push_back(cp.location);
        starts.push_back(SpherePoint::from_complex(Complex(1.0, 0.5)));
        for (const auto& z : starts) {
            BSequence counts = backward_levels(map, z, max_n).counts;
            for (int n = 0; n <= max_n; ++n) {
                long long direct = oracle_bn(map, z, n);
                if (direct != counts[static_cast<size_t>(n)]) {
                    f.record(label + " at " + format_point(z, 6) + ", n=" + std::to_string(n) +
                             ": oracle " + std::to_string(direct) + " vs levels " +
                             std::to_string(counts[static_cast<size_t>(n)]));
                    return;
                }
            }
        }
    };
    for (const auto& [label, map] : paper_quadratics(tols)) run(label, map, 3);
    run("z^2+i", RationalMap::polynomial(Polynomial({Complex(0.0, 1.0), 0.0, 1.0}), tols), 3);
    run("z^3-3z", RationalMap::polynomial(Polynomial({0.0, -3.0, 0.0, 1.0}), tols), 2);
    run("(z^3+1)/(3z)",
        RationalMap::create(Polynomial({1.0, 0.0, 0.0, 1.0}), Polynomial({0.0, 3.0}), tols), 2);
    return {"oracle-equivalence", !f.failed,
            f.failed ? f.msg.str()
                     : "composed-map root counts match level enumeration (quadratics n<=3, cubics n<=2)"};
}

CheckResult family_parameters(const Tolerances& tols) {
    Failure f;
    std::vector<FamilyParameter> params;
    for (int m = 2; m <= 6; ++m) params.push_back(solve_cm(m));

    if (params[0].c != -1.0) f.record("c_2 != -1 exactly");
    for (const auto& p : params) {
        if (p.bracket_hi - p.bracket_lo > 1e-12)
            f.record("c_" + std::to_string(p.m) + ": bracket wider than 1e-12");
        if (!(p.c > -2.0 && p.c <= -1.0))
            f.record("c_" + std::to_string(p.m) + " outside (-2, -1]");
    }
    for (size_t i = 0; i + 1 < params.size(); ++i)
        if (!(params[i + 1].bracket_hi < params[i].bracket_lo))
            f.record("c_" + std::to_string(params[i + 1].m) + " not certified below c_" +
                     std::to_string(params[i].m));

    for (int m = 2; m <= 5; ++m) {
        Polynomial fn = family_polynomial(m + 1);
        double v = fn.eval(Complex(params[static_cast<size_t>(m - 2)].c)).real();
        if (std::abs(v - 1.0) > 1e-9)
            f.record("f_" + std::to_string(m + 1) + "(c_" + std::to_string(m) + ") != 1");
    }

    for (int m = 2; m <= 6; ++m) {
        CriticalOrbitReport rep = verify_critical_orbit(m);
        if (!rep.pass) f.record("critical orbit check failed for m = " + std::to_string(m));
        BSequence b = family_bseq(m, m + 1, tols);
        if (b[static_cast<size_t>(m)] != (1LL << m) - 1)
            f.record("b_m != 2^m - 1 for m = " + std::to_string(m));
    }
    return {"family-parameters", !f.failed,
            f.failed ? f.msg.str()
                     : "c_2..c_6 certified, strictly decreasing, periodic critical orbits verified"};
}

CheckResult kms_recovery(const Tolerances& tols) {
    Failure f;
    const std::vector<double> betas = {std::log(2.0) + 0.5, std::log(2.0) + 2.0, 3.0};
    const int truncation = 40;
    const int depth = 6;
    for (const auto& [label, map] : paper_quadratics(tols)) {
        for (const auto& cp : map.critical_points()) {
            BSequence reference = backward_levels(map, cp.location, depth).counts;
            for (double beta : betas) {
                KmsParams params = KmsParams::create(beta, truncation, map);
                CSequence cs = c_sequence(map, cp.location, params, depth + 1);
                RecoveredB rec = recover_bseq(cs.values, beta);
                BSequence got(rec.values.begin(),
                              rec.values.begin() + static_cast<long>(depth) + 1);
                if (got != reference) {
                    f.record(label + " at " + format_point(cp.location, 6) + ", beta=" +
                             format_double(beta, 6) + ": recovered " + seq_to_string(got) +
                             " vs " + seq_to_string(reference));
                    continue;
                }
                if (rec.max_residual >= 1e-6)
                    f.record(label + ": pre-rounding residual " + format_double(rec.max_residual, 6));
            }
        }
    }
    // Closed-form case: z^2 at infinity has c_n = e^{-n beta} exactly.
    RationalMap sq = RationalMap::polynomial(Polynomial({0.0, 0.0, 1.0}), tols);
    for (double beta : betas) {
        KmsParams params = KmsParams::create(beta, truncation, sq);
        CSequence cs = c_sequence(sq, SpherePoint::infinity(), params, depth + 1);
        for (int n = 0; n <= depth; ++n) {
            double expect = std::exp(-beta * n);
            if (std::abs(cs.values[static_cast<size_t>(n)] - expect) > 1e-12)
                f.record("z^2 at inf: |c_n - e^{-n beta}| > 1e-12 at n = " + std::to_string(n));
        }
        RecoveredB rec = recover_bseq(cs.values, beta);
        for (long long v : rec.values)
            if (v != 1) f.record("z^2 at inf: recovered b != 1");
    }
    return {"kms-recovery", !f.failed,
            f.failed ? f.msg.str()
                     : "K=40 recovery exact for all paper quadratics at both branched points, 3 betas"};
}

CheckResult telescoping(const Tolerances& tols) {
    Failure f;
    const std::vector<double> betas = {std::log(2.0) + 0.5, std::log(2.0) + 2.0, 3.0};
    const int truncation = 12;
    for (const auto& [label, map] : paper_quadratics(tols)) {
        for (const auto& cp : map.critical_points()) {
            for (double beta : betas) {
                KmsParams params = KmsParams::create(beta, truncation, map);
                TelescopingReport rep = telescoping_report(map, cp.location, params);
                if (!rep.pass)
                    f.record(label + " at " + format_point(cp.location, 6) + ", beta=" +
                             format_double(beta, 6) + ": deviation " +
                             format_double(rep.deviation, 6) + " bound " +
                             format_double(rep.bound_at_z, 6));
            }
        }
    }
    return {"telescoping", !f.failed,
            f.failed ? f.msg.str()
                     : "tau - F_{X,beta} tau concentrates weight m at z within m*tail (K=12)"};
}

CheckResult chordal_axioms(Rng& rng) {
    Failure f;
    for (int t = 0; t < 500; ++t) {
        SpherePoint a = random_target(rng);
        SpherePoint b = random_target(rng);
        SpherePoint c = random_target(rng);
        if (chordal_distance(a, a) > 1e-15) f.record("d(a,a) != 0");
        if (std::abs(chordal_distance(a, b) - chordal_distance(b, a)) > 1e-15)
            f.record("asymmetric distance");
        if (chordal_distance(a, c) > chordal_distance(a, b) + chordal_distance(b, c) + 1e-12)
            f.record("triangle inequality violated");
        if (chordal_distance(a, b) > 2.0 + 1e-12) f.record("distance above 2");

        Complex z = rng.box(2.0), w = rng.box(2.0);
        if (std::abs(z) + std::abs(w) < 1e-3) continue;
        Complex lambda = rng.box(3.0);
        if (std::abs(lambda) < 1e-3) continue;
        SpherePoint p = SpherePoint::normalize(z, w);
        SpherePoint q = SpherePoint::normalize(lambda * z, lambda * w);
        if (chordal_distance(p, q) > 1e-12) f.record("scale invariance violated");
    }
    return {"chordal-axioms", !f.failed,
            f.failed ? f.msg.str() : "identity, symmetry, triangle, bound, scale invariance (500 cases)"};
}

CheckResult root_reconstruction(Rng& rng) {
    Failure f;
    for (int t = 0; t < 500; ++t) {
        int deg = 1 + static_cast<int>(rng.unit() * 12.0);
        if (deg > 12) deg = 12;
        std::vector<Complex> roots;
        int guard = 0;
        while (static_cast<int>(roots.size()) < deg && guard < 4000) {
            ++guard;
            Complex cand = rng.box(2.0);
            bool ok = true;
            for (const auto& r : roots)
                if (std::abs(cand - r) < 0.35) ok = false;
            if (ok) roots.push_back(cand);
        }
        if (static_cast<int>(roots.size()) < deg) continue;
        Complex lead = std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.28));
        Polynomial p = Polynomial::constant(lead);
        for (const auto& r : roots) p = p * Polynomial({-r, Complex(1.0)});

        RootSet rs = all_roots(p);
        if (rs.total_multiplicity() != deg) {
            f.record("multiplicities do not sum to the degree");
            continue;
        }
        Polynomial rec = Polynomial::constant(p.leading());
        for (const auto& r : rs.roots)
            for (int k = 0; k < r.multiplicity; ++k) rec = rec * Polynomial({-r.location, Complex(1.0)});
        double scale = 0.0, err = 0.0;
        for (int i = 0; i <= deg; ++i) {
            scale = std::max(scale, std::abs(p.coeff(i)));
            err = std::max(err, std::abs(p.coeff(i) - rec.coeff(i)));
        }
        if (err > 1e-8 * scale) f.record("reconstruction error " + format_double(err / scale, 6));
    }
    return {"root-reconstruction", !f.failed,
            f.failed ? f.msg.str() : "degree <= 12, separated roots: coefficients match to 1e-8 (500 cases)"};
}

CheckResult monotone_growth(const Tolerances& tols, Rng& rng, int jobs) {
    Failure f;
    auto corpus = sample_corpus(tols);
    for (int t = 0; t < 500; ++t) {
        const RationalMap* map;
        RationalMap scratch = RationalMap::polynomial(Polynomial({rng.box(1.5), 0.0, 1.0}), tols);
        if (t % 2 == 0)
            map = &corpus[static_cast<size_t>(t / 2) % corpus.size()].second;
        else
            map = &scratch;
        SpherePoint z = rng.unit() < 0.1 ? SpherePoint::infinity() : SpherePoint::from_complex(rng.box(2.0));
        int depth = map->degree() == 2 ? 5 : 4;
        BSequence b = backward_levels(*map, z, depth, jobs).counts;
        for (size_t n = 0; n + 1 < b.size(); ++n) {
            if (b[n + 1] < b[n]) f.record("b not monotone");
            if (b[n + 1] > map->degree() * b[n]) f.record("growth bound violated");
        }
    }
    return {"monotone-growth", !f.failed,
            f.failed ? f.msg.str() : "b nondecreasing and b_{n+1} <= N b_n (500 cases)"};
}

CheckResult mobius_equal(const Tolerances& tols, Rng& rng) {
    Failure f;
    int ran = 0;
    for (int t = 0; t < 500; ++t) {
        Complex lead = std::polar(rng.uniform(0.5, 1.5), rng.uniform(0.0, 6.28));
        Polynomial p({rng.box(1.0), rng.box(1.0), lead});
        RationalMap map = RationalMap::polynomial(p, tols);

        Complex a, b, c, d;
        do {
            a = rng.box(1.2);
            b = rng.box(1.2);
            c = rng.box(1.2);
            d = rng.box(1.2);
        } while (std::abs(a * d - b * c) < 0.4);
        RationalMap conj = mobius_conjugate(map, a, b, c, d);

        Verdict v = compare_invariants(invariant(map, 6, "R"), invariant(conj, 6, "MRM^-1"));
        ++ran;
        if (!v.equal_multiset) {
            f.record("conjugate pair distinguished at case " + std::to_string(t) + ": witness " +
                     seq_to_string(v.witness));
        }
    }
    return {"mobius-conjugation", !f.failed,
            f.failed ? f.msg.str()
                     : "conjugated quadratics compare EQUAL at depth 6 (" + std::to_string(ran) + " cases)"};
}

CheckResult distinguishing(const Tolerances& tols) {
    Failure f;
    auto maps = paper_quadratics(tols);
    std::vector<OrbitInvariant> invs;
    for (const auto& [label, map] : maps) invs.push_back(invariant(map, 3, label));
    for (size_t i = 0; i < invs.size(); ++i) {
        for (size_t j = i + 1; j < invs.size(); ++j) {
            Verdict v = compare_invariants(invs[i], invs[j]);
            if (v.equal_multiset)
                f.record(maps[i].first + " vs " + maps[j].first + " not distinguished");
        }
    }
    return {"distinguishing", !f.failed,
            f.failed ? f.msg.str() : "the four paper quadratics are pairwise distinguished at depth 3"};
}

}  // namespace

RationalMap mobius_conjugate(const RationalMap& map, Complex a, Complex b, Complex c, Complex d) {
    if (std::abs(a * d - b * c) == 0.0)
        throw std::invalid_argument("mobius_conjugate: singular coefficient matrix");
    std::pair<Polynomial, Polynomial> m{Polynomial({b, a}), Polynomial({d, c})};
    std::pair<Polynomial, Polynomial> minv{Polynomial({-b, d}), Polynomial({a, -c})};
    auto inner = compose_pairs({map.p(), map.q()}, minv);
    auto full = compose_pairs(m, inner);
    return RationalMap::create(trim_leading(full.first), trim_leading(full.second), map.tols());
}

std::vector<std::pair<std::string, RationalMap>> sample_corpus(const Tolerances& tols) {
    std::vector<std::pair<std::string, RationalMap>> maps = paper_quadratics(tols);
    maps.emplace_back("z^2+i", RationalMap::polynomial(Polynomial({Complex(0.0, 1.0), 0.0, 1.0}), tols));
    maps.emplace_back("z^2+0.3-0.2i",
                      RationalMap::polynomial(Polynomial({Complex(0.3, -0.2), 0.0, 1.0}), tols));
    maps.emplace_back("(z^2+1)/(2z)",
                      RationalMap::create(Polynomial({1.0, 0.0, 1.0}), Polynomial({0.0, 2.0}), tols));
    maps.emplace_back("(z^2-1)/(z^2+1)",
                      RationalMap::create(Polynomial({-1.0, 0.0, 1.0}), Polynomial({1.0, 0.0, 1.0}), tols));
    maps.emplace_back("z^3-3z", RationalMap::polynomial(Polynomial({0.0, -3.0, 0.0, 1.0}), tols));
    maps.emplace_back("(z^3+1)/(3z)",
                      RationalMap::create(Polynomial({1.0, 0.0, 0.0, 1.0}), Polynomial({0.0, 3.0}), tols));
    return maps;
}

std::vector<CheckResult> run_verification(std::uint64_t seed, int jobs, const Tolerances& tols) {
    std::vector<CheckResult> out;
    out.push_back(golden_bsequences(tols, jobs));
    out.push_back(closed_form(tols, jobs));
    {
        Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        out.push_back(structural_identities(tols, rng));
    }
    out.push_back(oracle_equivalence(tols));
    out.push_back(family_parameters(tols));
    out.push_back(kms_recovery(tols));
    out.push_back(telescoping(tols));
    {
        Rng rng(seed ^ 0x1000000001b3ULL);
        out.push_back(chordal_axioms(rng));
    }
    {
        Rng rng(seed ^ 0x853c49e6748fea9bULL);
        out.push_back(root_reconstruction(rng));
    }
    {
        Rng rng(seed ^ 0x2545f4914f6cdd1dULL);
        out.push_back(monotone_growth(tols, rng, jobs));
    }
    {
        Rng rng(seed ^ 0xda442d24691348feULL);
        out.push_back(mobius_equal(tols, rng));
    }
    out.push_back(distinguishing(tols));
    return out;
}

}  // namespace backorb
