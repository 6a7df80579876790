#include "backorb/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace backorb {

Complex Polynomial::eval(Complex x) const {
    Complex y(0.0);
    for (size_t i = c_.size(); i-- > 0;) y = y * x + c_[i];
    return y;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Complex> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> out(std::max(a.c_.size(), b.c_.size()), Complex(0.0));
    for (size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
    return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> out(std::max(a.c_.size(), b.c_.size()), Complex(0.0));
    for (size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) out[i] -= b.c_[i];
    return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Complex> out(a.c_.size() + b.c_.size() - 1, Complex(0.0));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(out));
}

Polynomial operator*(Complex s, const Polynomial& a) {
    std::vector<Complex> out = a.c_;
    for (auto& v : out) v *= s;
    return Polynomial(std::move(out));
}

Polynomial compose(const Polynomial& p, const Polynomial& q) {
    Polynomial acc;
    for (size_t i = p.coeffs().size(); i-- > 0;) acc = acc * q + Polynomial::constant(p.coeffs()[i]);
    return acc;
}

Polynomial trim_leading(const Polynomial& p, double rel_tol) {
    if (p.is_zero()) return p;
    double maxc = 0.0;
    for (const auto& v : p.coeffs()) maxc = std::max(maxc, std::abs(v));
    std::vector<Complex> c = p.coeffs();
    while (!c.empty() && std::abs(c.back()) <= rel_tol * maxc) c.pop_back();
    return Polynomial(std::move(c));
}

namespace {

using std::size_t;
using LComplex = std::complex<long double>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Horner value plus the running magnitude sum used as a backward-error
// noise floor: |p(x)| <= floor means x is a root to working precision.
struct EvalWithScale {
    Complex value;
    double scale;
};

EvalWithScale eval_scaled(const std::vector<Complex>& c, Complex x) {
    Complex y(0.0);
    double s = 0.0;
    double ax = std::abs(x);
    for (size_t i = c.size(); i-- > 0;) {
        y = y * x + c[i];
        s = s * ax + std::abs(c[i]);
    }
    return {y, s};
}

double cauchy_bound(const std::vector<Complex>& c) {
    double lead = std::abs(c.back());
    double m = 0.0;
    for (size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i]));
    return 1.0 + m / lead;
}

void solve_linear(const std::vector<Complex>& c, std::vector<Complex>& out) {
    out.push_back(-c[0] / c[1]);
}

void solve_quadratic(const std::vector<Complex>& c, std::vector<Complex>& out) {
    Complex a = c[2], b = c[1], cc = c[0];
    Complex sq = std::sqrt(b * b - 4.0 * a * cc);
    Complex q = (std::abs(b + sq) >= std::abs(b - sq)) ? -0.5 * (b + sq) : -0.5 * (b - sq);
    if (std::abs(q) == 0.0) {
        Complex r = std::sqrt(-cc / a);
        out.push_back(r);
        out.push_back(-r);
        return;
    }
    out.push_back(q / a);
    out.push_back(cc / q);
}

// Ehrlich-Aberth simultaneous iteration. Convergence per root: either the
// correction is below 1e-14*(1+|x|) or the residual sits at the rounding
// noise floor (the only reachable criterion for multiple roots).
std::vector<Complex> ehrlich_aberth(const std::vector<Complex>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<Complex> x(static_cast<size_t>(n));
    std::vector<Complex> dcoeffs(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i)
        dcoeffs[static_cast<size_t>(i - 1)] = c[static_cast<size_t>(i)] * static_cast<double>(i);

    double r = cauchy_bound(c);
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * std::numbers::pi * i / n + 0.4;
        x[static_cast<size_t>(i)] = r * Complex(std::cos(th), std::sin(th));
    }

    std::vector<char> done(static_cast<size_t>(n), 0);
    const int max_iter = 500;
    for (int iter = 0; iter < max_iter; ++iter) {
        bool all_done = true;
        for (int i = 0; i < n; ++i) {
            if (done[static_cast<size_t>(i)]) continue;
            Complex xi = x[static_cast<size_t>(i)];
            auto [pv, scale] = eval_scaled(c, xi);
            if (std::abs(pv) <= 8.0 * kEps * scale) {
                done[static_cast<size_t>(i)] = 1;
                continue;
            }
            Complex dv(0.0);
            for (size_t k = dcoeffs.size(); k-- > 0;) dv = dv * xi + dcoeffs[k];
            if (std::abs(dv) == 0.0) {
                // Stationary start; nudge off the derivative zero.
                x[static_cast<size_t>(i)] += 1e-6 * (1.0 + std::abs(xi));
                all_done = false;
                continue;
            }
            Complex ratio = pv / dv;
            Complex sum(0.0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                Complex d = xi - x[static_cast<size_t>(j)];
                if (std::abs(d) == 0.0) d = Complex(1e-300, 0.0);
                sum += 1.0 / d;
            }
            Complex denom = 1.0 - ratio * sum;
            Complex w = (std::abs(denom) == 0.0) ? ratio : ratio / denom;
            x[static_cast<size_t>(i)] = xi - w;
            if (std::abs(w) <= 1e-14 * (1.0 + std::abs(xi)))
                done[static_cast<size_t>(i)] = 1;
            else
                all_done = false;
        }
        if (all_done) return x;
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(eval_scaled(c, x[static_cast<size_t>(i)]).value));
    throw RootFindingError("root iteration did not converge within budget", worst);
}

void newton_polish(const std::vector<Complex>& c, std::vector<Complex>& roots, int steps) {
    std::vector<Complex> d(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    for (auto& r : roots) {
        for (int s = 0; s < steps; ++s) {
            Complex pv(0.0), dv(0.0);
            for (size_t i = c.size(); i-- > 0;) pv = pv * r + c[i];
            for (size_t i = d.size(); i-- > 0;) dv = dv * r + d[i];
            if (std::abs(dv) == 0.0) break;
            Complex step = pv / dv;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            // A Newton step near a multiple root overshoots the cluster;
            // cap it so polishing never makes a root worse.
            if (std::abs(step) > 0.1 * (1.0 + std::abs(r))) break;
            r -= step;
        }
    }
}

void extended_polish(const std::vector<Complex>& c, std::vector<Complex>& roots, int steps) {
    std::vector<LComplex> lc(c.size()), ld(c.size() - 1);
    for (size_t i = 0; i < c.size(); ++i) lc[i] = LComplex(c[i].real(), c[i].imag());
    for (size_t i = 1; i < c.size(); ++i) ld[i - 1] = lc[i] * static_cast<long double>(i);
    for (auto& r0 : roots) {
        LComplex r(r0.real(), r0.imag());
        for (int s = 0; s < steps; ++s) {
            LComplex pv(0.0), dv(0.0);
            for (size_t i = lc.size(); i-- > 0;) pv = pv * r + lc[i];
            for (size_t i = ld.size(); i-- > 0;) dv = dv * r + ld[i];
            if (std::abs(dv) == 0.0L) break;
            LComplex step = pv / dv;
            if (!std::isfinite(static_cast<double>(step.real())) ||
                !std::isfinite(static_cast<double>(step.imag())))
                break;
            if (std::abs(step) > 0.1L * (1.0L + std::abs(r))) break;
            r -= step;
        }
        r0 = Complex(static_cast<double>(r.real()), static_cast<double>(r.imag()));
    }
}

struct Cluster {
    std::vector<Complex> members;
    Complex center;
};

// Single-linkage clustering in the chordal metric after embedding; keeps
// the merge decision identical to the one the orbit dedup would make.
std::vector<Cluster> cluster_roots(const std::vector<Complex>& roots, double tol) {
    size_t n = roots.size();
    std::vector<SpherePoint> emb;
    emb.reserve(n);
    for (const auto& r : roots) emb.push_back(SpherePoint::from_complex(r));
    std::vector<size_t> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (chordal_distance(emb[i], emb[j]) <= tol) parent[find(i)] = find(j);
    std::vector<Cluster> out;
    std::vector<int> slot(n, -1);
    for (size_t i = 0; i < n; ++i) {
        size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[static_cast<size_t>(slot[r])].members.push_back(roots[i]);
    }
    for (auto& cl : out) {
        Complex s(0.0);
        for (const auto& m : cl.members) s += m;
        cl.center = s / static_cast<double>(cl.members.size());
    }
    return out;
}

// Modified Newton x -= m p/p' converges quadratically to an m-fold root.
void polish_center(const std::vector<Complex>& c, Cluster& cl) {
    int m = static_cast<int>(cl.members.size());
    std::vector<Complex> d(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    Complex r = cl.center;
    for (int s = 0; s < 6; ++s) {
        Complex pv(0.0), dv(0.0);
        for (size_t i = c.size(); i-- > 0;) pv = pv * r + c[i];
        for (size_t i = d.size(); i-- > 0;) dv = dv * r + d[i];
        if (std::abs(dv) == 0.0) break;
        Complex step = static_cast<double>(m) * pv / dv;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        if (std::abs(step) > 0.05 * (1.0 + std::abs(r))) break;
        r -= step;
    }
    auto before = eval_scaled(c, cl.center);
    auto after = eval_scaled(c, r);
    if (std::abs(after.value) <= std::abs(before.value)) cl.center = r;
}

double min_cluster_separation(const std::vector<Cluster>& cls) {
    double sep = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < cls.size(); ++i)
        for (size_t j = i + 1; j < cls.size(); ++j)
            sep = std::min(sep, chordal_distance(SpherePoint::from_complex(cls[i].center),
                                                 SpherePoint::from_complex(cls[j].center)));
    return sep;
}

}  // namespace

RootSet all_roots(const Polynomial& p, int precision_bits, double cluster_tol) {
    if (p.is_zero()) throw std::invalid_argument("all_roots: zero polynomial");
    if (p.degree() < 1) throw std::invalid_argument("all_roots: degree must be >= 1");
    if (precision_bits < 53 || precision_bits > 64)
        throw std::invalid_argument("all_roots: precision_bits must be in [53, 64]");

    // Exact zeros at the origin come off first; every remaining coefficient
    // path then has a nonzero constant term.
    std::vector<Complex> c = p.coeffs();
    size_t zeros_at_origin = 0;
    while (zeros_at_origin < c.size() - 1 && c[zeros_at_origin] == Complex(0.0)) ++zeros_at_origin;
    std::vector<Complex> work(c.begin() + static_cast<long>(zeros_at_origin), c.end());

    std::vector<Complex> raw;
    int wdeg = static_cast<int>(work.size()) - 1;
    if (wdeg == 1) {
        solve_linear(work, raw);
    } else if (wdeg == 2) {
        solve_quadratic(work, raw);
    } else if (wdeg >= 3) {
        raw = ehrlich_aberth(work);
        newton_polish(work, raw, 3);
    }
    if (precision_bits > 53 && !raw.empty()) extended_polish(work, raw, 4);
    for (size_t i = 0; i < zeros_at_origin; ++i) raw.push_back(Complex(0.0));

    auto clusters = cluster_roots(raw, cluster_tol);
    for (auto& cl : clusters)
        if (cl.members.size() > 1) polish_center(c, cl);

    RootSet rs;
    double sep = min_cluster_separation(clusters);
    if (clusters.size() > 1 && sep < 10.0 * cluster_tol) {
        // Ambiguous clustering: one extended-precision retry at a tighter
        // radius; true multiple roots contract, distinct roots stay put.
        size_t head_count = raw.size() - zeros_at_origin;
        std::vector<Complex> head(raw.begin(), raw.begin() + static_cast<long>(head_count));
        extended_polish(work, head, 6);
        std::copy(head.begin(), head.end(), raw.begin());
        double tight = cluster_tol / 10.0;
        clusters = cluster_roots(raw, tight);
        for (auto& cl : clusters)
            if (cl.members.size() > 1) polish_center(c, cl);
        sep = min_cluster_separation(clusters);
        if (clusters.size() > 1 && sep < 10.0 * tight) {
            clusters = cluster_roots(raw, cluster_tol);
            for (auto& cl : clusters)
                if (cl.members.size() > 1) polish_center(c, cl);
            rs.ambiguous_clusters = true;
        }
    }

    double coeff_scale = 0.0;
    for (const auto& v : c) coeff_scale = std::max(coeff_scale, std::abs(v));
    double worst = 0.0;
    for (const auto& cl : clusters) {
        rs.roots.push_back({cl.center, static_cast<int>(cl.members.size())});
        worst = std::max(worst, std::abs(Polynomial(c).eval(cl.center)));
    }
    rs.residual_bound = worst / coeff_scale;
    std::sort(rs.roots.begin(), rs.roots.end(), [](const RootSet::Root& a, const RootSet::Root& b) {
        return point_less(SpherePoint::from_complex(a.location), SpherePoint::from_complex(b.location));
    });
    return rs;
}

int gcd_degree(const Polynomial& p, const Polynomial& q, int precision_bits, double cluster_tol) {
    if (p.is_zero() || q.is_zero())
        throw std::invalid_argument("gcd_degree: inputs must be nonzero");
    if (p.degree() < 1 || q.degree() < 1) return 0;
    RootSet rp = all_roots(p, precision_bits, cluster_tol);
    RootSet rq = all_roots(q, precision_bits, cluster_tol);
    std::vector<int> remaining(rq.roots.size());
    for (size_t i = 0; i < rq.roots.size(); ++i) remaining[i] = rq.roots[i].multiplicity;
    int total = 0;
    for (const auto& rootp : rp.roots) {
        SpherePoint a = SpherePoint::from_complex(rootp.location);
        int avail = rootp.multiplicity;
        for (size_t j = 0; j < rq.roots.size() && avail > 0; ++j) {
            if (remaining[j] == 0) continue;
            if (chordal_distance(a, SpherePoint::from_complex(rq.roots[j].location)) <= cluster_tol) {
                int take = std::min(avail, remaining[j]);
                total += take;
                avail -= take;
                remaining[j] -= take;
            }
        }
    }
    return total;
}

}  // namespace backorb
