#pragma once

#include "backorb/orbit.hpp"
#include "backorb/poly.hpp"

namespace backorb {

/// Parameter of the quadratic family z^2 + c_m whose critical point 0 is
/// periodic of exact period m. c_m is the minimum real root of f_m, where
/// f_{m+1}(x) = x f_m(x)^2 + 1, f_1 = 1, f_2 = x + 1.
struct FamilyParameter {
    int m;
    Polynomial f;  // f_m, degree 2^(m-1) - 1
    double c;      // min real root, certified by the bracket below
    double bracket_lo;
    double bracket_hi;
    double residual;  // |f_m(c)|
};

/// f_m by the exact recursion. Coefficients are integers; they stay exactly
/// representable in binary64 through m = 7, which covers every check below.
/// Guarded by deg f_m = 2^(m-1) - 1 <= 4095 (m <= 13).
Polynomial family_polynomial(int m);

/// Minimum real root of f_m with a sign-change bracket refined by bisection
/// to width <= 1e-12.
FamilyParameter solve_cm(int m);

struct CriticalOrbitReport {
    int m;
    double c;
    /// |R^k(0)| for k = 1..m.
    std::vector<double> forward_abs;
    bool returns_to_zero;      // |R^m(0)| <= 1e-8
    bool stays_away_before;    // |R^k(0)| >= 1e-4 for k < m
    double worst_g_identity;   // max_n |g_n(c) - c f_n(c)|, n <= m
    bool pass;
};

/// Verifies R^m(0) = 0, R^k(0) != 0 for k < m, and the constant-term
/// identity g_n(c) = c f_n(c) with g_{n+1} = g_n^2 + c, g_1 = c.
CriticalOrbitReport verify_critical_orbit(int m);

/// b-sequence of z^2 + c_m at 0; asserts the pattern b_k = 2^k for k < m and
/// b_m = 2^m - 1 before returning.
BSequence family_bseq(int m, int depth, const Tolerances& tols = {});

/// The map z^2 + c_m.
RationalMap family_map(int m, const Tolerances& tols = {});

}  // namespace backorb
