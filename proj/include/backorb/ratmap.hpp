#pragma once

#include <string>
#include <utility>
#include <vector>

#include "backorb/poly.hpp"
#include "backorb/sphere.hpp"
#include "backorb/tolerances.hpp"

namespace backorb {

struct CriticalPoint {
    SpherePoint location;
    int branch_index;  // e(z) >= 2
};

/// The solution set R^{-1}(y): deduplicated points with branch indices
/// summing to deg R.
struct Fiber {
    SpherePoint target;
    struct Member {
        SpherePoint location;
        int branch_index;
    };
    std::vector<Member> members;

    int total_index() const {
        int s = 0;
        for (const auto& m : members) s += m.branch_index;
        return s;
    }
};

struct RiemannHurwitzReport {
    long long sum_e_minus_1;
    long long expected;  // 2N - 2
    bool pass;
    std::vector<CriticalPoint> points;
};

/// Rational map R = P/Q on the Riemann sphere, validated at construction:
/// relatively prime (P, Q) and degree N = max(deg P, deg Q) >= 2.
class RationalMap {
public:
    static RationalMap create(Polynomial p, Polynomial q, Tolerances tols = {});

    /// Polynomial map P(z), the common case in the worked examples.
    static RationalMap polynomial(Polynomial p, Tolerances tols = {}) {
        return create(std::move(p), Polynomial::constant(1.0), tols);
    }

    const Polynomial& p() const { return p_; }
    const Polynomial& q() const { return q_; }
    int degree() const { return degree_; }
    const Tolerances& tols() const { return tols_; }

    /// Homogeneous evaluation [P_h(z,w) : Q_h(z,w)], well defined at infinity
    /// and at poles.
    SpherePoint apply(const SpherePoint& x) const;

    /// n-fold forward iteration.
    SpherePoint iterate(const SpherePoint& x, int n) const;

    /// All branched points with branch indices, canonically sorted. The
    /// finite ones come from the Wronskian P'Q - PQ' (multiplicity m gives
    /// index m+1); infinity's index is read off the fiber over R(infinity).
    /// Riemann-Hurwitz must close exactly, with one extended-precision retry
    /// before the computation is declared failed.
    std::vector<CriticalPoint> critical_points() const;

    Fiber fiber(const SpherePoint& y) const;

    RiemannHurwitzReport verify_riemann_hurwitz() const;

private:
    RationalMap(Polynomial p, Polynomial q, int degree, Tolerances tols)
        : p_(std::move(p)), q_(std::move(q)), degree_(degree), tols_(tols) {}

    std::vector<CriticalPoint> critical_points_at(int precision_bits, double cluster_tol) const;

    Polynomial p_;
    Polynomial q_;
    int degree_;
    Tolerances tols_;
};

/// Homogeneous composition of coefficient pairs: (outer . inner) where outer
/// has homogeneous degree max(deg P_o, deg Q_o). Feeds the iterated-map
/// oracle and the Mobius conjugation used in tests.
std::pair<Polynomial, Polynomial> compose_pairs(const std::pair<Polynomial, Polynomial>& outer,
                                                const std::pair<Polynomial, Polynomial>& inner);

}  // namespace backorb
