#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "backorb/sphere.hpp"
#include "backorb/tolerances.hpp"

namespace backorb {

/// Dense univariate polynomial over complex<double>, constant term first.
/// Exactly-zero trailing coefficients are trimmed; the zero polynomial is
/// the empty coefficient list with degree() == -1.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }
    explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial constant(Complex v) { return Polynomial({v}); }
    /// The monomial z.
    static Polynomial z() { return Polynomial({Complex(0.0), Complex(1.0)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Complex>& coeffs() const { return c_; }
    Complex coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : Complex(0.0);
    }
    Complex leading() const { return c_.empty() ? Complex(0.0) : c_.back(); }

    /// Horner evaluation.
    Complex eval(Complex x) const;

    Polynomial derivative() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Complex s, const Polynomial& a);
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
    }
    std::vector<Complex> c_;
};

/// p(q(z)); degree (deg p)(deg q).
Polynomial compose(const Polynomial& p, const Polynomial& q);

/// Drops leading coefficients whose modulus is at most rel_tol times the
/// largest coefficient modulus. Used where exact algebra predicts a degree
/// drop that floating arithmetic turns into top-coefficient noise.
Polynomial trim_leading(const Polynomial& p, double rel_tol = 1e-12);

struct RootSet {
    struct Root {
        Complex location;
        int multiplicity;
    };
    std::vector<Root> roots;
    /// max_i |p(r_i)| / max_j |c_j|; the invariant |p(r)| <= residual_bound *
    /// coefficient scale holds by construction.
    double residual_bound = 0.0;
    /// Set when cluster separation stayed below 10x the cluster radius even
    /// after the extended-precision retry; multiplicities then reflect the
    /// merged reading.
    bool ambiguous_clusters = false;

    int total_multiplicity() const {
        int s = 0;
        for (const auto& r : roots) s += r.multiplicity;
        return s;
    }
};

/// All complex roots with multiplicity. Ehrlich-Aberth simultaneous iteration
/// from a Cauchy-bound circle, Newton polishing, then chordal single-linkage
/// clustering at cluster_tol to assign multiplicities. precision_bits > 53
/// adds an extended-precision polishing pass; the same pass is the automatic
/// escalation step when cluster separation validation fails.
///
/// Throws RootFindingError (with the worst residual) on non-convergence and
/// std::invalid_argument for the zero polynomial or degree < 1.
RootSet all_roots(const Polynomial& p, int precision_bits = 53, double cluster_tol = 1e-5);

/// Degree of the approximate GCD by root matching under cluster_tol.
int gcd_degree(const Polynomial& p, const Polynomial& q, int precision_bits = 53,
               double cluster_tol = 1e-5);

}  // namespace backorb
