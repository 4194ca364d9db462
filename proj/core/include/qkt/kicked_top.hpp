#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "qkt/spin_algebra.hpp"

namespace qkt {

/// Kicked-top parameters: precession angle nu, kick strength eta, and the
/// qubit-top coupling epsilon. The kick period is the time unit (T = 1);
/// all series are indexed by kick count.
struct KickedTopParams {
    double nu = 0.0;
    double eta = 0.0;
    double epsilon = 0.0;
    SpinParams spin;

    void validate() const;  // throws std::invalid_argument

    /// Regime presets at nu = pi/2: regular for eta <= 2.5, chaotic for
    /// eta >= 3 (any eta is accepted; this is labeling only).
    enum class Regime { regular, mixed, chaotic };
    Regime regime() const {
        if (eta <= 2.5) return Regime::regular;
        if (eta >= 3.0) return Regime::chaotic;
        return Regime::mixed;
    }
};

/// Which qubit branch the Floquet operator is conditioned on: the sigma_z
/// eigenvalue s = +1, -1, or the unperturbed top (s = 0).
enum class FloquetBranch { plus, minus, unperturbed };

/// One-period propagator exp[-i(nu + s*eps)J_x] * exp[-i(eta/2j)J_z^2].
/// The kick factor is a diagonal matrix of unit-modulus phases.
MatrixC build_floquet(const KickedTopParams& params, const SpinOperatorSet& ops,
                      FloquetBranch branch);

/// U^n psi0 by repeated matrix-vector application.
VectorC evolve(const MatrixC& u, const VectorC& psi0, int n);

/// Per-kick echo amplitudes f_n = <psi0|(U_+^dag)^n (U_-)^n|psi0> with
/// derived F_n = |f_n|^2 and alpha_n = arg f_n in (-pi, pi].
struct FidelitySeries {
    std::vector<Complex> f;  // f[0] == 1
    double epsilon = 0.0;    // coupling the series was generated with

    int kicks() const { return static_cast<int>(f.size()) - 1; }
    double F(int n) const { return std::norm(f[static_cast<std::size_t>(n)]); }
    double alpha(int n) const { return std::arg(f[static_cast<std::size_t>(n)]); }

    std::vector<double> fidelity() const;
    std::vector<double> phase() const;           // principal values
    std::vector<double> phase_unwrapped() const; // cumulative-continuity branch
};

/// Co-evolves psi+ and psi- (two matrix-vector products per kick) and
/// records the overlap after each kick. Norm drift beyond 1e-8 on either
/// branch throws NumericalError.
FidelitySeries fidelity_series(const KickedTopParams& params, const SpinOperatorSet& ops,
                               const VectorC& psi0, int n_max);

/// Revival peaks of F_n and the empirical revival period. k_estimate is
/// period * epsilon (the constant in tau = k / epsilon, never assumed).
struct RevivalReport {
    std::vector<int> revival_times;      // strictly increasing, n > 0
    std::vector<double> revival_peaks;   // F at those kicks
    std::optional<double> estimated_period;
    std::optional<double> k_estimate;
};

/// Local maxima of F_n over a +-5 kick neighborhood with F >= threshold,
/// excluding n = 0. Period = mean gap once >= 2 revivals are found.
RevivalReport detect_revivals(const FidelitySeries& series, double threshold = 0.5);

enum class DecayModel { gaussian, exponential };

/// Inclusive kick-index interval.
struct KickWindow {
    int first = 0;
    int last = 0;
};

/// Zero-intercept least squares of log F on the window:
/// log F = -rate * n (exponential) or -rate * n^2 (gaussian).
struct DecayFit {
    DecayModel model = DecayModel::exponential;
    double rate = 0.0;
    KickWindow window;
    double residual = 0.0;  // RMS error on log F
};

/// Fits the requested model on the window. Windows containing F = 0 are
/// rejected (std::invalid_argument).
DecayFit fit_decay(const FidelitySeries& series, const KickWindow& window, DecayModel model);

/// Fits both models and returns the lower-residual one.
DecayFit fit_decay_best(const FidelitySeries& series, const KickWindow& window);

/// Default fit window: n = 1 up to the first n with F < e^-2, or the
/// series end.
KickWindow default_fit_window(const FidelitySeries& series);

} // namespace qkt
