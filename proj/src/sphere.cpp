#include "backorb/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace backorb {

SpherePoint SpherePoint::normalize(Complex z, Complex w) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        !std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw std::invalid_argument("SpherePoint: non-finite projective pair");
    double az = std::abs(z);
    double aw = std::abs(w);
    if (az == 0.0 && aw == 0.0)
        throw std::invalid_argument("SpherePoint: (0, 0) is not a projective point");

    // Scale by the larger modulus first so the norm never overflows.
    double s = std::max(az, aw);
    z /= s;
    w /= s;
    double n = std::sqrt(std::norm(z) + std::norm(w));
    z /= n;
    w /= n;

    // Rotate so the dominant component is exactly real-positive
    // (denominator wins ties). This pins the projective phase.
    bool den_dominant = std::abs(w) >= std::abs(z);
    Complex dom = den_dominant ? w : z;
    double adom = std::abs(dom);
    Complex phase = std::conj(dom) / adom;
    if (den_dominant) {
        z *= phase;
        w = Complex(adom, 0.0);
    } else {
        z = Complex(adom, 0.0);
        w *= phase;
    }
    return SpherePoint(z, w);
}

Complex SpherePoint::affine() const {
    return num_ / den_;
}

double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
    double cross = std::abs(p.num_ * q.den_ - q.num_ * p.den_);
    double np = std::sqrt(std::norm(p.num_) + std::norm(p.den_));
    double nq = std::sqrt(std::norm(q.num_) + std::norm(q.den_));
    return 2.0 * cross / (np * nq);
}

namespace {

// Ordering key; near-infinity representatives with a vanishing denominator
// collapse onto one tie value so the comparator stays a strict weak order.
struct Key {
    int inf_class;  // 0 finite, 1 infinity
    double re, im;
};

Key order_key(const SpherePoint& p) {
    if (p.is_infinity()) return {1, 0.0, 0.0};
    if (std::abs(p.den()) < 1e-100) return {0, 1e200, 0.0};
    Complex a = p.affine();
    return {0, a.real(), a.imag()};
}

}  // namespace

bool point_less(const SpherePoint& a, const SpherePoint& b) {
    Key ka = order_key(a), kb = order_key(b);
    if (ka.inf_class != kb.inf_class) return ka.inf_class < kb.inf_class;
    if (ka.re != kb.re) return ka.re < kb.re;
    return ka.im < kb.im;
}

std::vector<SpherePoint> dedup_points(std::vector<SpherePoint> pts, double tol) {
    if (pts.empty()) return pts;
    std::sort(pts.begin(), pts.end(), point_less);
    std::vector<SpherePoint> reps;
    reps.push_back(pts.front());
    for (size_t i = 1; i < pts.size(); ++i) {
        if (chordal_distance(reps.back(), pts[i]) > tol) reps.push_back(pts[i]);
    }
    // Points with huge negative real part sort first but sit chordally next
    // to infinity, which sorts last. Fold them into the infinity cluster.
    if (reps.size() > 1 && reps.back().is_infinity()) {
        std::vector<SpherePoint> out;
        for (size_t i = 0; i + 1 < reps.size(); ++i) {
            if (chordal_distance(reps[i], reps.back()) > tol) out.push_back(reps[i]);
        }
        out.push_back(reps.back());
        return out;
    }
    return reps;
}

std::string format_double(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

std::string format_point(const SpherePoint& p, int digits) {
    if (p.is_infinity()) return "inf";
    Complex a = p.affine();
    std::string s = format_double(a.real(), digits);
    double im = a.imag();
    if (std::signbit(im)) {
        s += "-";
        s += format_double(-im, digits);
    } else {
        s += "+";
        s += format_double(im, digits);
    }
    s += "i";
    return s;
}

namespace {

// Scans one signed decimal number starting at pos; returns false if none.
bool scan_number(const std::string& t, size_t& pos, double& out) {
    size_t start = pos;
    size_t i = pos;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
    size_t digits_begin = i;
    while (i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) || t[i] == '.')) ++i;
    if (i == digits_begin) return false;
    if (i < t.size() && (t[i] == 'e' || t[i] == 'E')) {
        size_t j = i + 1;
        if (j < t.size() && (t[j] == '+' || t[j] == '-')) ++j;
        size_t exp_begin = j;
        while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
        if (j > exp_begin) i = j;
    }
    try {
        size_t used = 0;
        out = std::stod(t.substr(start, i - start), &used);
        if (used != i - start) return false;
    } catch (const std::exception&) {
        return false;
    }
    pos = i;
    return true;
}

}  // namespace

SpherePoint parse_point(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t == "inf" || t == "Inf" || t == "INF") return SpherePoint::infinity();
    if (t.empty()) throw std::invalid_argument("empty point literal");

    size_t pos = 0;
    double first = 0.0;
    bool have_first_number = scan_number(t, pos, first);
    if (!have_first_number) {
        // Pure-imaginary shorthand: "i", "-i", "+i".
        double sign = 1.0;
        if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
            if (t[pos] == '-') sign = -1.0;
            ++pos;
        }
        if (pos + 1 == t.size() && t[pos] == 'i')
            return SpherePoint::from_complex(Complex(0.0, sign));
        throw std::invalid_argument("bad point literal: " + text);
    }
    if (pos == t.size()) return SpherePoint::from_complex(Complex(first, 0.0));
    if (t[pos] == 'i' && pos + 1 == t.size())
        return SpherePoint::from_complex(Complex(0.0, first));

    double second = 0.0;
    if (!scan_number(t, pos, second)) {
        // "a+i" / "a-i"
        if (pos + 2 == t.size() && (t[pos] == '+' || t[pos] == '-') && t[pos + 1] == 'i')
            return SpherePoint::from_complex(Complex(first, t[pos] == '+' ? 1.0 : -1.0));
        throw std::invalid_argument("bad point literal: " + text);
    }
    if (pos + 1 == t.size() && t[pos] == 'i')
        return SpherePoint::from_complex(Complex(first, second));
    throw std::invalid_argument("bad point literal: " + text);
}

}  // namespace backorb
