#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "qkt/spin_algebra.hpp"

namespace qkt {

/// Bell-diagonal coefficients (c_x, c_y, c_z) of the two-qubit initial
/// state rho = (I + sum_j c_j sigma_j ⊗ sigma_j) / 4.
struct BellDiagonalParams {
    double cx = 0.0;
    double cy = 0.0;
    double cz = 0.0;

    /// The four numbers (1 - cx - cy - cz), (1 - cx + cy + cz),
    /// (1 + cx - cy + cz), (1 + cx + cy - cz); all must be >= -1e-12 for
    /// the state to be physical.
    std::array<double, 4> validity_numbers() const;
    bool is_physical(double tol = 1e-12) const;
    void validate() const;  // throws std::invalid_argument
};

/// Two-qubit X state in the basis |00>, |01>, |10>, |11>: nonzero entries
/// on the diagonal and anti-diagonal only.
struct XState {
    Eigen::Matrix4cd rho;

    /// Checks hermiticity, unit trace, the X zero pattern, positivity
    /// (eigenvalues >= -1e-10) and maximally mixed marginals; throws
    /// std::invalid_argument on violation.
    void validate() const;
};

/// The dephased Bell-diagonal state: diagonal ((1+cz)/4, (1-cz)/4,
/// (1-cz)/4, (1+cz)/4), rho14 = (cx-cy) f / 4, rho23 = (cx+cy) f / 4.
/// Rejects unphysical c and |f| > 1 + 1e-12.
XState xstate(const BellDiagonalParams& c, Complex f);

/// Closed-form eigenvalues of the dephased state, in the fixed order
///   l1 = [1 + cz + |cx - cy| sqrt(F)] / 4,
///   l2 = [1 + cz - |cx - cy| sqrt(F)] / 4,
///   l3 = [1 - cz + |cx + cy| sqrt(F)] / 4,
///   l4 = [1 - cz - |cx + cy| sqrt(F)] / 4.
/// They depend on F = |f|^2 only, never on the phase of f.
std::array<double, 4> xstate_eigenvalues(const BellDiagonalParams& c, double F);

/// Diagnostics collected by the closed-form correlation formulas: the
/// printed theta_2 can marginally exceed 1 near alpha = pi/8 with large
/// c's, in which case it is clamped to [0, 1] before the entropy
/// evaluation and the excess is recorded here (when beyond 1e-9).
struct ThetaClampLog {
    int count = 0;
    double max_excess = 0.0;

    void record(double excess) {
        if (excess <= 1e-9) return;
        ++count;
        if (excess > max_excess) max_excess = excess;
    }
};

/// Classical correlation in bits:
///   CC = 1 - min_k H_b((1 + theta_k) / 2),
/// with theta_1 = |cz| and
///   theta_2 = sqrt([2(cx^2 + cy^2) + 2|cx^2 - cy^2|(|cos 2a| + |sin 2a|)] F) / 2.
double classical_correlation(const BellDiagonalParams& c, double F, double alpha,
                             ThetaClampLog* clamp_log = nullptr);

/// Quantum discord in bits: Q = 2 + sum_i l_i log2 l_i - CC.
/// Negative floating-point dust in [-1e-12, 0) is clipped to 0.
double quantum_discord(const BellDiagonalParams& c, double F, double alpha,
                       ThetaClampLog* clamp_log = nullptr);

/// Quantum mutual information S(rho_A) + S(rho_B) - S(rho_AB) in bits,
/// computed numerically from the density matrix (partial traces and a
/// 4x4 Hermitian eigensolve), independent of the closed forms above.
double mutual_information(const XState& s);

/// Result of the brute-force discord minimization.
struct NumericDiscord {
    double q = 0.0;        // MI - cc
    double cc = 0.0;       // S(rho_A) - min_Pi sum_j p_j S(rho_A|j)
    double theta = 0.0;    // argmin measurement direction on B (Bloch angles)
    double phi = 0.0;
};

/// Minimizes the conditional entropy over rank-one projective measurements
/// on qubit B, parameterized by a Bloch direction: coarse_grid^2 directions
/// on the half-sphere, then shrinking-step coordinate descent for
/// refine_iters rounds (step halved each round). Conditional qubit
/// entropies come from the Bloch-vector length.
NumericDiscord discord_numeric(const XState& s, int coarse_grid = 64, int refine_iters = 40);

/// Relative entropy of entanglement in bits:
/// E = 1 + b log2 b + (1 - b) log2(1 - b), b = max(1/2, l_max).
double ree(const BellDiagonalParams& c, double F);

/// Wootters concurrence via the X-state closed form
/// 2 max(0, |rho23| - sqrt(rho11 rho44), |rho14| - sqrt(rho22 rho33)).
double concurrence(const XState& s);

/// One time point of the full correlation record.
struct CorrelationRecord {
    double F = 0.0;
    double alpha = 0.0;
    std::array<double, 4> lambda{};
    double q = 0.0;
    double cc = 0.0;
    double mi = 0.0;
    double ree = 0.0;
    double concurrence = 0.0;
};

/// Assembles the record for one amplitude f: closed-form lambdas, Q, CC
/// and REE; MI and concurrence from the assembled density matrix.
CorrelationRecord correlation_record(const BellDiagonalParams& c, Complex f,
                                     ThetaClampLog* clamp_log = nullptr);

/// Binary entropy H_b(p) in bits with the 0 log 0 = 0 convention.
double binary_entropy_bits(double p);

/// Shannon entropy in bits of a probability list; values in [-1e-10, 0)
/// are clipped to 0, anything more negative throws std::invalid_argument.
double entropy_bits(const double* p, int n);

} // namespace qkt
