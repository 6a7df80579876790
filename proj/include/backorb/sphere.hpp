#pragma once

#include <complex>
#include <string>
#include <vector>

namespace backorb {

using Complex = std::complex<double>;

/// A point of the Riemann sphere in normalized projective coordinates
/// [num : den]. Canonical form: |num|^2 + |den|^2 = 1 and the component of
/// largest modulus is real and positive (denominator wins ties), so equal
/// points have bitwise-close representations and can be ordered.
///
/// The point at infinity is exactly [1 : 0]; finite points embed as
/// normalize(z, 1). Immutable value type.
class SpherePoint {
public:
    /// Canonical representative of [z : w]. Rejects (0,0) and non-finite
    /// scalars. normalize(lambda*z, lambda*w) == normalize(z, w) for any
    /// nonzero lambda, up to roundoff.
    static SpherePoint normalize(Complex z, Complex w);

    /// Embedding of a finite complex number.
    static SpherePoint from_complex(Complex z) { return normalize(z, 1.0); }

    static SpherePoint infinity() { return SpherePoint(Complex(1.0, 0.0), Complex(0.0, 0.0)); }
    static SpherePoint zero() { return SpherePoint(Complex(0.0, 0.0), Complex(1.0, 0.0)); }

    Complex num() const { return num_; }
    Complex den() const { return den_; }

    bool is_infinity() const { return den_ == Complex(0.0, 0.0); }

    /// Affine coordinate num/den. Huge but finite for points near infinity;
    /// must not be called on the point at infinity itself.
    Complex affine() const;

    friend double chordal_distance(const SpherePoint& p, const SpherePoint& q);

private:
    SpherePoint(Complex num, Complex den) : num_(num), den_(den) {}
    Complex num_;
    Complex den_;
};

/// 2|z_p w_q - z_q w_p| / (|p| |q|). Symmetric, zero iff same point,
/// maximal value 2 at antipodes. Representatives are unit-norm, so the
/// denominator is 1 up to roundoff.
double chordal_distance(const SpherePoint& p, const SpherePoint& q);

inline bool points_equal(const SpherePoint& p, const SpherePoint& q, double tol) {
    return chordal_distance(p, q) <= tol;
}

/// Total order for deterministic emission: finite points lexicographic on
/// (Re, Im) of the affine coordinate, infinity last.
bool point_less(const SpherePoint& a, const SpherePoint& b);

/// Canonical sort + tolerance sweep. Points whose chordal distance to the
/// representative of the current run is <= tol merge into it; a final pass
/// folds near-infinity stragglers into the infinity cluster. Returns
/// deduplicated representatives in canonical order.
std::vector<SpherePoint> dedup_points(std::vector<SpherePoint> pts, double tol);

/// "inf", or "a+bi" / "a-bi" with the given number of significant digits
/// (17 round-trips binary64 exactly).
std::string format_point(const SpherePoint& p, int digits = 17);

/// Inverse of format_point: accepts "inf", "a", "bi", "i", "a+bi", "a-bi".
SpherePoint parse_point(const std::string& text);

std::string format_double(double v, int digits = 17);

}  // namespace backorb
