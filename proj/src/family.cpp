#include "backorb/family.hpp"

#include <algorithm>
#include <cmath>

namespace backorb {

Polynomial family_polynomial(int m) {
    if (m < 1) throw std::invalid_argument("family_polynomial: m must be >= 1");
    if (m > 13) throw std::invalid_argument("family_polynomial: degree guard (m <= 13)");
    Polynomial f = Polynomial::constant(1.0);  // f_1
    Polynomial one = Polynomial::constant(1.0);
    Polynomial x = Polynomial::z();
    for (int k = 1; k < m; ++k) f = x * (f * f) + one;
    return f;
}

namespace {

double eval_real(const Polynomial& p, double x) {
    double y = 0.0;
    for (size_t i = p.coeffs().size(); i-- > 0;) y = y * x + p.coeffs()[i].real();
    return y;
}

}  // namespace

FamilyParameter solve_cm(int m) {
    if (m < 2) throw std::invalid_argument("solve_cm: m must be >= 2");
    Polynomial f = family_polynomial(m);

    // Real-root candidates from the complex solver.
    RootSet rs = all_roots(f);
    std::vector<double> reals;
    for (const auto& r : rs.roots)
        if (std::abs(r.location.imag()) < 1e-6) reals.push_back(r.location.real());
    if (reals.empty())
        throw NumericalError("solve_cm: no real root candidate found", rs.residual_bound);
    std::sort(reals.begin(), reals.end());
    double c0 = reals.front();

    // Bracket around the candidate: f -> -inf to the left of the minimum
    // real root (odd degree, positive leading coefficient).
    double w = 1e-4;
    double a = c0 - w;
    int guard = 0;
    while (eval_real(f, a) >= 0.0) {
        w *= 2.0;
        a = c0 - w;
        if (++guard > 200) throw NumericalError("solve_cm: no negative bracket endpoint");
    }
    // Right endpoint: positive value, kept below the next real candidate so
    // only the minimum root sits inside the bracket.
    double wb = 1e-4;
    if (reals.size() > 1) wb = std::min(wb, 0.25 * (reals[1] - reals[0]));
    double b = c0 + wb;
    guard = 0;
    while (eval_real(f, b) <= 0.0) {
        wb *= 0.5;
        b = c0 + wb;
        if (wb < 1e-13 || ++guard > 200)
            throw NumericalError("solve_cm: no positive bracket endpoint");
    }
    while (b - a > 1e-12) {
        double mid = 0.5 * (a + b);
        double fm = eval_real(f, mid);
        if (fm == 0.0) {
            a = mid;
            b = mid;
            break;
        }
        if (fm < 0.0)
            a = mid;
        else
            b = mid;
    }
    double c = (a == b) ? a : 0.5 * (a + b);

    FamilyParameter out;
    out.m = m;
    out.f = f;
    out.c = c;
    out.bracket_lo = a;
    out.bracket_hi = b;
    out.residual = std::abs(eval_real(f, c));
    return out;
}

CriticalOrbitReport verify_critical_orbit(int m) {
    FamilyParameter fp = solve_cm(m);
    const double c = fp.c;

    CriticalOrbitReport rep;
    rep.m = m;
    rep.c = c;
    rep.returns_to_zero = false;
    rep.stays_away_before = true;

    double z = 0.0;
    for (int k = 1; k <= m; ++k) {
        z = z * z + c;
        rep.forward_abs.push_back(std::abs(z));
    }
    rep.returns_to_zero = rep.forward_abs.back() <= 1e-8;
    for (int k = 1; k < m; ++k)
        if (rep.forward_abs[static_cast<size_t>(k - 1)] < 1e-4) rep.stays_away_before = false;

    // g_{n+1} = g_n^2 + c against c*f_n(c).
    rep.worst_g_identity = 0.0;
    double g = c;  // g_1
    for (int n = 1; n <= m; ++n) {
        double rhs = c * eval_real(family_polynomial(n), c);
        rep.worst_g_identity = std::max(rep.worst_g_identity, std::abs(g - rhs));
        g = g * g + c;
    }

    rep.pass = rep.returns_to_zero && rep.stays_away_before && rep.worst_g_identity <= 1e-10;
    return rep;
}

RationalMap family_map(int m, const Tolerances& tols) {
    FamilyParameter fp = solve_cm(m);
    return RationalMap::polynomial(Polynomial({Complex(fp.c), Complex(0.0), Complex(1.0)}), tols);
}

BSequence family_bseq(int m, int depth, const Tolerances& tols) {
    if (depth < m + 1) throw std::invalid_argument("family_bseq: depth must be >= m + 1");
    RationalMap map = family_map(m, tols);
    OrbitLevels lv = backward_levels(map, SpherePoint::zero(), depth);
    for (int k = 0; k < m; ++k)
        if (lv.counts[static_cast<size_t>(k)] != (1LL << k))
            throw NumericalError("family_bseq: expected b_k = 2^k before the period closes");
    if (lv.counts[static_cast<size_t>(m)] != (1LL << m) - 1)
        throw NumericalError("family_bseq: expected b_m = 2^m - 1");
    return lv.counts;
}

}  // namespace backorb
