#pragma once

#include <vector>

#include "backorb/orbit.hpp"
#include "backorb/ratmap.hpp"

namespace backorb {

/// Finitely supported nonnegative measure on the sphere. Atoms are pairwise
/// distinct under the chordal tolerance used to build them and stay in
/// canonical point order.
class FiniteMeasure {
public:
    struct Atom {
        SpherePoint point;
        double weight;
    };

    FiniteMeasure() = default;
    static FiniteMeasure dirac(const SpherePoint& p) { return FiniteMeasure({{p, 1.0}}, 0.0); }
    /// Merges atoms within tol, drops nonpositive weights, sorts canonically.
    static FiniteMeasure from_atoms(std::vector<Atom> atoms, double tol);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double total_mass() const { return total_mass_; }
    /// Weight of the atom at p (0 when absent).
    double weight_at(const SpherePoint& p, double tol) const;

private:
    FiniteMeasure(std::vector<Atom> atoms, double total) : atoms_(std::move(atoms)), total_mass_(total) {}
    std::vector<Atom> atoms_;
    double total_mass_ = 0.0;
};

/// F_X(mu) = sum_y mu({y}) sum over distinct x in R^{-1}(y) of delta_x.
/// Branch indices are ignored: the sum over the fiber is taken without
/// multiplicity.
FiniteMeasure pf_apply(const RationalMap& map, const FiniteMeasure& mu);

/// Total masses of F_X^n(delta_z) for n = 0..n_max; equals the b-sequence.
std::vector<double> pf_mass_sequence(const RationalMap& map, const SpherePoint& z, int n_max);

/// Parameters of the damped operator F_{X,beta} = e^{-beta} F_X and the
/// truncated trace tau_{beta,z}. Convergence needs e^{-beta} N < 1; the
/// tail bound (N e^{-beta})^(K+1) / (1 - N e^{-beta}) dominates every
/// truncation error below because b_k <= N^k.
struct KmsParams {
    double beta;
    int depth;  // truncation K
    double tail_bound;

    static KmsParams create(double beta, int depth, const RationalMap& map);
};

struct Normalizer {
    double m;  // 1 / S_K with S_K = sum_{k<=K} e^{-k beta} b_k(z)
    /// Rigorous enclosure of the untruncated constant:
    /// 1/(S_K + tail_bound) <= m_true <= 1/S_K.
    double lower;
    double upper;
};

Normalizer normalizer(const RationalMap& map, const SpherePoint& z, const KmsParams& params);

/// Truncation of tau_{beta,z} = m sum_k e^{-k beta} sum_{x in R^{-k}(z)}
/// delta_x to k <= K, atoms merged across levels. Requires enumerating the
/// backward orbit, so it is guarded by the total point budget.
FiniteMeasure kms_trace(const RationalMap& map, const SpherePoint& z, const KmsParams& params);

struct CSequence {
    /// c_n = m sum_{j=n..K} e^{-j beta} b_j(z) for n = 0..n_max; c_0 = 1.
    std::vector<double> values;
    double m;
    double tail_bound;
    /// When the backward orbit was small enough to enumerate, the same
    /// sequence was recomputed by iterating F_{X,beta} on the truncated trace
    /// and the largest discrepancy between the two routes recorded here.
    bool cross_checked = false;
    double max_route_discrepancy = 0.0;
};

CSequence c_sequence(const RationalMap& map, const SpherePoint& z, const KmsParams& params,
                     int n_max);

struct RecoveredB {
    BSequence values;
    std::vector<double> prerounded;  // e^(n beta) (c_n - c_{n+1}) / (1 - c_1)
    double max_residual;             // max |prerounded - rounded|
    /// The literal quotient (c_n - c_{n+1}) / (1 - c_1) without the e^(n beta)
    /// factor, kept so the two readings of the recovery formula can be
    /// compared; it decays like e^(-n beta) b_n instead of reproducing b_n.
    std::vector<double> uncorrected;
};

/// b_n = round(e^(n beta) (c_n - c_{n+1}) / (1 - c_1)) for n = 0..len(c)-2.
/// Fails when c_1 >= 1 (non-convergent parameters).
RecoveredB recover_bseq(const std::vector<double>& c, double beta);

struct TelescopingReport {
    double m;
    double weight_at_z;    // atom of tau - F_{X,beta}(tau) at z
    double deviation;      // |weight_at_z - m|
    double bound_at_z;     // m * tail_bound
    double max_other_atom; // largest residual atom away from z
    double bound_other;    // m * e^(-(K+1) beta)
    bool pass;
};

/// Checks tau - F_{X,beta}(tau) = m delta_z up to the truncation residue
/// m e^(-(K+1) beta) (level-(K+1) sum).
TelescopingReport telescoping_report(const RationalMap& map, const SpherePoint& z,
                                     const KmsParams& params);

}  // namespace backorb
