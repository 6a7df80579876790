#include "backorb/ratmap.hpp"

#include <algorithm>
#include <cmath>

namespace backorb {

namespace {

// P_h(z,w)/s and Q_h(z,w)/s for the homogenizations at common degree N,
// with the shared scale s = max(|z|,|w|)^N cancelled projectively.
std::pair<Complex, Complex> eval_homogeneous(const Polynomial& p, const Polynomial& q, int n,
                                             const SpherePoint& x) {
    Complex z = x.num(), w = x.den();
    auto horner_up = [n](const Polynomial& poly, Complex t) {
        // sum_i c_i t^i with zero padding up to degree n
        Complex y(0.0);
        for (int i = n; i >= 0; --i) y = y * t + poly.coeff(i);
        return y;
    };
    auto horner_down = [n](const Polynomial& poly, Complex t) {
        // sum_j c_{n-j} t^j
        Complex y(0.0);
        for (int j = n; j >= 0; --j) y = y * t + poly.coeff(n - j);
        return y;
    };
    if (std::abs(z) <= std::abs(w)) {
        Complex t = z / w;
        return {horner_up(p, t), horner_up(q, t)};
    }
    Complex t = w / z;
    return {horner_down(p, t), horner_down(q, t)};
}

}  // namespace

RationalMap RationalMap::create(Polynomial p, Polynomial q, Tolerances tols) {
    validate(tols);
    if (p.is_zero() && q.is_zero())
        throw std::invalid_argument("RationalMap: P and Q cannot both be zero");
    if (q.is_zero()) throw std::invalid_argument("RationalMap: Q must be nonzero");
    int n = std::max(p.degree(), q.degree());
    if (n < 2) throw std::invalid_argument("RationalMap: degree must be >= 2");
    if (p.degree() >= 1 && q.degree() >= 1 &&
        gcd_degree(p, q, tols.precision_bits, tols.cluster_tol) != 0)
        throw std::invalid_argument("RationalMap: P and Q must be relatively prime");
    return RationalMap(std::move(p), std::move(q), n, tols);
}

SpherePoint RationalMap::apply(const SpherePoint& x) const {
    auto [pv, qv] = eval_homogeneous(p_, q_, degree_, x);
    if (std::abs(pv) < 1e-150 && std::abs(qv) < 1e-150)
        throw NumericalError("apply: homogeneous pair underflow; inputs too close to a common zero");
    return SpherePoint::normalize(pv, qv);
}

SpherePoint RationalMap::iterate(const SpherePoint& x, int n) const {
    SpherePoint y = x;
    for (int i = 0; i < n; ++i) y = apply(y);
    return y;
}

Fiber RationalMap::fiber(const SpherePoint& y) const {
    const int n = degree_;
    std::vector<Complex> fc(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) fc[static_cast<size_t>(i)] = y.den() * p_.coeff(i) - y.num() * q_.coeff(i);
    Polynomial f = trim_leading(Polynomial(std::move(fc)));
    if (f.is_zero())
        throw NumericalError("fiber: zero fiber polynomial (map not in lowest terms?)");

    int inf_copies = n - f.degree();
    struct Raw {
        SpherePoint pt;
        int count;
    };
    std::vector<Raw> raws;
    if (f.degree() >= 1) {
        RootSet rs = all_roots(f, tols_.precision_bits, tols_.cluster_tol);
        for (const auto& r : rs.roots)
            raws.push_back({SpherePoint::from_complex(r.location), r.multiplicity});
    }
    if (inf_copies >= 1) raws.push_back({SpherePoint::infinity(), inf_copies});

    // Chordal single-linkage over the embedded members: folds any huge roots
    // left by a near-degree-drop into the infinity member.
    std::vector<int> parent(raws.size());
    for (size_t i = 0; i < raws.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) a = parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
        return a;
    };
    for (size_t i = 0; i < raws.size(); ++i)
        for (size_t j = i + 1; j < raws.size(); ++j)
            if (chordal_distance(raws[i].pt, raws[j].pt) <= tols_.cluster_tol)
                parent[static_cast<size_t>(find(static_cast<int>(i)))] = find(static_cast<int>(j));

    Fiber out;
    out.target = y;
    std::vector<int> slot(raws.size(), -1);
    for (size_t i = 0; i < raws.size(); ++i) {
        int r = find(static_cast<int>(i));
        if (slot[static_cast<size_t>(r)] < 0) {
            slot[static_cast<size_t>(r)] = static_cast<int>(out.members.size());
            out.members.push_back({raws[i].pt, 0});
        }
        auto& m = out.members[static_cast<size_t>(slot[static_cast<size_t>(r)])];
        m.branch_index += raws[i].count;
        // Infinity is its cluster's canonical representative.
        if (raws[i].pt.is_infinity()) m.location = raws[i].pt;
    }
    std::sort(out.members.begin(), out.members.end(),
              [](const Fiber::Member& a, const Fiber::Member& b) { return point_less(a.location, b.location); });

    for (const auto& m : out.members) {
        if (chordal_distance(apply(m.location), y) > 1e-6)
            throw NumericalError("fiber: member does not map back to the target",
                                 chordal_distance(apply(m.location), y));
    }
    return out;
}

std::vector<CriticalPoint> RationalMap::critical_points_at(int precision_bits,
                                                           double cluster_tol) const {
    Polynomial w = p_.derivative() * q_ - p_ * q_.derivative();
    w = trim_leading(w);
    if (w.is_zero())
        throw NumericalError("critical_points: vanishing Wronskian (degenerate map)");

    std::vector<CriticalPoint> out;
    if (w.degree() >= 1) {
        RootSet rs = all_roots(w, precision_bits, cluster_tol);
        for (const auto& r : rs.roots) {
            SpherePoint loc = SpherePoint::from_complex(r.location);
            // A Wronskian root this close to infinity is top-coefficient
            // noise; infinity's index comes from the fiber below.
            if (chordal_distance(loc, SpherePoint::infinity()) <= cluster_tol) continue;
            out.push_back({loc, r.multiplicity + 1});
        }
    }

    SpherePoint image_of_inf = apply(SpherePoint::infinity());
    Fiber fib = fiber(image_of_inf);
    int e_inf = 0;
    for (const auto& m : fib.members)
        if (m.location.is_infinity()) e_inf = m.branch_index;
    if (e_inf == 0)
        throw NumericalError("critical_points: infinity missing from its own fiber");
    if (e_inf >= 2) out.push_back({SpherePoint::infinity(), e_inf});

    long long sum = 0;
    for (const auto& cp : out) sum += cp.branch_index - 1;
    if (sum != 2LL * degree_ - 2)
        throw NumericalError("critical_points: Riemann-Hurwitz mismatch",
                             static_cast<double>(sum - (2LL * degree_ - 2)));

    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        return point_less(a.location, b.location);
    });
    return out;
}

std::vector<CriticalPoint> RationalMap::critical_points() const {
    try {
        return critical_points_at(tols_.precision_bits, tols_.cluster_tol);
    } catch (const NumericalError&) {
        // One escalation: extended precision, tighter clustering.
        return critical_points_at(64, tols_.cluster_tol / 10.0);
    }
}

RiemannHurwitzReport RationalMap::verify_riemann_hurwitz() const {
    RiemannHurwitzReport rep;
    rep.points = critical_points();
    rep.sum_e_minus_1 = 0;
    for (const auto& cp : rep.points) rep.sum_e_minus_1 += cp.branch_index - 1;
    rep.expected = 2LL * degree_ - 2;
    rep.pass = rep.sum_e_minus_1 == rep.expected;
    return rep;
}

std::pair<Polynomial, Polynomial> compose_pairs(const std::pair<Polynomial, Polynomial>& outer,
                                                const std::pair<Polynomial, Polynomial>& inner) {
    int n = std::max(outer.first.degree(), outer.second.degree());
    const Polynomial& a = inner.first;
    const Polynomial& b = inner.second;
    // Powers a^i, b^(n-i) up front; each output is sum_i c_i a^i b^(n-i).
    std::vector<Polynomial> pa(static_cast<size_t>(n) + 1), pb(static_cast<size_t>(n) + 1);
    pa[0] = Polynomial::constant(1.0);
    pb[0] = Polynomial::constant(1.0);
    for (int i = 1; i <= n; ++i) {
        pa[static_cast<size_t>(i)] = pa[static_cast<size_t>(i - 1)] * a;
        pb[static_cast<size_t>(i)] = pb[static_cast<size_t>(i - 1)] * b;
    }
    auto substitute = [&](const Polynomial& poly) {
        Polynomial acc;
        for (int i = 0; i <= n; ++i) {
            Complex ci = poly.coeff(i);
            if (ci == Complex(0.0)) continue;
            acc = acc + ci * (pa[static_cast<size_t>(i)] * pb[static_cast<size_t>(n - i)]);
        }
        return acc;
    };
    return {substitute(outer.first), substitute(outer.second)};
}

}  // namespace backorb
