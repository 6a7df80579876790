#include "backorb/kms.hpp"

#include <algorithm>
#include <cmath>

namespace backorb {

namespace {

constexpr long long kTraceBudget = 200000;

}  // namespace

FiniteMeasure FiniteMeasure::from_atoms(std::vector<Atom> atoms, double tol) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return point_less(a.point, b.point); });
    std::vector<Atom> merged;
    for (const auto& a : atoms) {
        if (!merged.empty() && chordal_distance(merged.back().point, a.point) <= tol)
            merged.back().weight += a.weight;
        else
            merged.push_back(a);
    }
    // Near-infinity stragglers sort first but belong to the infinity atom.
    if (merged.size() > 1 && merged.back().point.is_infinity()) {
        std::vector<Atom> out;
        for (size_t i = 0; i + 1 < merged.size(); ++i) {
            if (chordal_distance(merged[i].point, merged.back().point) <= tol)
                merged.back().weight += merged[i].weight;
            else
                out.push_back(merged[i]);
        }
        out.push_back(merged.back());
        merged = std::move(out);
    }
    std::vector<Atom> kept;
    double total = 0.0;
    for (const auto& a : merged) {
        if (a.weight > 0.0) {
            kept.push_back(a);
            total += a.weight;
        }
    }
    return FiniteMeasure(std::move(kept), total);
}

double FiniteMeasure::weight_at(const SpherePoint& p, double tol) const {
    for (const auto& a : atoms_)
        if (points_equal(a.point, p, tol)) return a.weight;
    return 0.0;
}

FiniteMeasure pf_apply(const RationalMap& map, const FiniteMeasure& mu) {
    std::vector<FiniteMeasure::Atom> out;
    for (const auto& a : mu.atoms()) {
        Fiber f = map.fiber(a.point);
        for (const auto& m : f.members) out.push_back({m.location, a.weight});
    }
    return FiniteMeasure::from_atoms(std::move(out), map.tols().dedup_tol);
}

std::vector<double> pf_mass_sequence(const RationalMap& map, const SpherePoint& z, int n_max) {
    if (n_max < 0) throw std::invalid_argument("pf_mass_sequence: n_max must be >= 0");
    std::vector<double> masses;
    FiniteMeasure mu = FiniteMeasure::dirac(z);
    masses.push_back(mu.total_mass());
    for (int n = 1; n <= n_max; ++n) {
        mu = pf_apply(map, mu);
        masses.push_back(mu.total_mass());
    }
    return masses;
}

KmsParams KmsParams::create(double beta, int depth, const RationalMap& map) {
    if (!(beta > 0.0)) throw std::invalid_argument("KmsParams: beta must be positive");
    if (depth < 1) throw std::invalid_argument("KmsParams: depth must be >= 1");
    double ratio = map.degree() * std::exp(-beta);
    if (!(ratio < 1.0))
        throw std::invalid_argument("KmsParams: need e^{-beta} deg R < 1 (beta > log deg R)");
    KmsParams p;
    p.beta = beta;
    p.depth = depth;
    p.tail_bound = std::pow(ratio, depth + 1) / (1.0 - ratio);
    return p;
}

namespace {

double truncated_sum(const BSequence& b, double beta, int from, int to) {
    double s = 0.0;
    for (int j = to; j >= from; --j)
        s += std::exp(-beta * j) * static_cast<double>(b[static_cast<size_t>(j)]);
    return s;
}

}  // namespace

Normalizer normalizer(const RationalMap& map, const SpherePoint& z, const KmsParams& params) {
    BSequence b = bseq_by_forward_orbits(map, z, params.depth);
    double s = truncated_sum(b, params.beta, 0, params.depth);
    Normalizer out;
    out.m = 1.0 / s;
    out.lower = 1.0 / (s + params.tail_bound);
    out.upper = out.m;
    return out;
}

FiniteMeasure kms_trace(const RationalMap& map, const SpherePoint& z, const KmsParams& params) {
    BSequence b = bseq_by_forward_orbits(map, z, params.depth);
    long long total_points = 0;
    for (long long v : b) total_points += v;
    if (total_points > kTraceBudget)
        throw std::invalid_argument("kms_trace: backward orbit too large to enumerate; lower K");

    OrbitLevels lv = backward_levels(map, z, params.depth);
    double m = 1.0 / truncated_sum(lv.counts, params.beta, 0, params.depth);
    std::vector<FiniteMeasure::Atom> atoms;
    for (int k = 0; k <= params.depth; ++k) {
        double wk = m * std::exp(-params.beta * k);
        for (const auto& p : lv.levels[static_cast<size_t>(k)]) atoms.push_back({p, wk});
    }
    return FiniteMeasure::from_atoms(std::move(atoms), map.tols().dedup_tol);
}

CSequence c_sequence(const RationalMap& map, const SpherePoint& z, const KmsParams& params,
                     int n_max) {
    if (n_max < 0) throw std::invalid_argument("c_sequence: n_max must be >= 0");
    if (n_max > params.depth)
        throw std::invalid_argument("c_sequence: n_max must not exceed the truncation depth");
    BSequence b = bseq_by_forward_orbits(map, z, params.depth);
    double s = truncated_sum(b, params.beta, 0, params.depth);
    double m = 1.0 / s;

    CSequence out;
    out.m = m;
    out.tail_bound = params.tail_bound;
    for (int n = 0; n <= n_max; ++n)
        out.values.push_back(m * truncated_sum(b, params.beta, n, params.depth));

    // Second route when the orbit is small enough: iterate the damped
    // operator on the actual truncated trace. The two routes differ only by
    // terms beyond the truncation depth.
    long long total_points = 0;
    for (long long v : b) total_points += v;
    if (total_points <= kTraceBudget / 4) {
        FiniteMeasure tau = kms_trace(map, z, params);
        double damp = std::exp(-params.beta);
        double worst = 0.0;
        FiniteMeasure mu = tau;
        for (int n = 0; n <= n_max; ++n) {
            worst = std::max(worst, std::abs(mu.total_mass() - out.values[static_cast<size_t>(n)]));
            if (n < n_max) {
                FiniteMeasure next = pf_apply(map, mu);
                std::vector<FiniteMeasure::Atom> scaled = next.atoms();
                for (auto& a : scaled) a.weight *= damp;
                mu = FiniteMeasure::from_atoms(std::move(scaled), map.tols().dedup_tol);
            }
        }
        out.cross_checked = true;
        out.max_route_discrepancy = worst;
        double allowance = 2.0 * m * params.tail_bound + 1e-10;
        if (worst > allowance)
            throw NumericalError("c_sequence: series and operator routes disagree", worst);
    }
    return out;
}

RecoveredB recover_bseq(const std::vector<double>& c, double beta) {
    if (c.size() < 2) throw std::invalid_argument("recover_bseq: need at least c_0 and c_1");
    double denom = 1.0 - c[1];
    if (!(denom > 0.0))
        throw NumericalError("recover_bseq: 1 - c_1 <= 0; parameters do not converge", denom);
    RecoveredB out;
    out.max_residual = 0.0;
    for (size_t n = 0; n + 1 < c.size(); ++n) {
        double quotient = (c[n] - c[n + 1]) / denom;
        double value = std::exp(beta * static_cast<double>(n)) * quotient;
        double rounded = std::round(value);
        out.prerounded.push_back(value);
        out.uncorrected.push_back(quotient);
        out.values.push_back(static_cast<long long>(rounded));
        out.max_residual = std::max(out.max_residual, std::abs(value - rounded));
    }
    return out;
}

TelescopingReport telescoping_report(const RationalMap& map, const SpherePoint& z,
                                     const KmsParams& params) {
    FiniteMeasure tau = kms_trace(map, z, params);
    FiniteMeasure pushed = pf_apply(map, tau);
    double damp = std::exp(-params.beta);

    // Signed difference tau - e^{-beta} F_X(tau), merged at dedup tolerance.
    std::vector<FiniteMeasure::Atom> diff = tau.atoms();
    for (const auto& a : pushed.atoms()) diff.push_back({a.point, -damp * a.weight});
    std::sort(diff.begin(), diff.end(), [](const FiniteMeasure::Atom& a, const FiniteMeasure::Atom& b) {
        return point_less(a.point, b.point);
    });
    std::vector<FiniteMeasure::Atom> merged;
    const double tol = map.tols().dedup_tol;
    for (const auto& a : diff) {
        if (!merged.empty() && chordal_distance(merged.back().point, a.point) <= tol)
            merged.back().weight += a.weight;
        else
            merged.push_back(a);
    }

    double s_trunc = 0.0;
    {
        BSequence b = bseq_by_forward_orbits(map, z, params.depth);
        s_trunc = truncated_sum(b, params.beta, 0, params.depth);
    }
    TelescopingReport rep;
    rep.m = 1.0 / s_trunc;
    rep.weight_at_z = 0.0;
    rep.max_other_atom = 0.0;
    for (const auto& a : merged) {
        if (points_equal(a.point, z, tol))
            rep.weight_at_z += a.weight;
        else
            rep.max_other_atom = std::max(rep.max_other_atom, std::abs(a.weight));
    }
    rep.deviation = std::abs(rep.weight_at_z - rep.m);
    rep.bound_at_z = rep.m * params.tail_bound;
    rep.bound_other = rep.m * std::exp(-params.beta * (params.depth + 1));
    rep.pass = rep.deviation <= rep.bound_at_z + 1e-12 &&
               rep.max_other_atom <= rep.bound_other + 1e-12;
    return rep;
}

}  // namespace backorb
