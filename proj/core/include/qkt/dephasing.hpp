#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "qkt/correlations.hpp"
#include "qkt/kicked_top.hpp"

namespace qkt {

/// Markovian phase-damping amplitude f(n) = e^{-gamma n}; real positive,
/// so alpha = 0 for all n and F(n) = e^{-2 gamma n}.
Complex markovian_amplitude(double gamma, int n);

/// Interchangeable dephasing-amplitude source: a computed kicked-top
/// fidelity series or the analytic Markovian amplitude.
class DephasingSource {
public:
    enum class Kind { qkt, markovian };

    static DephasingSource from_series(FidelitySeries series);
    static DephasingSource markovian(double gamma);  // gamma >= 0

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    const FidelitySeries& series() const { return series_; }

    /// f(n); f(0) = 1, |f(n)| <= 1. For a qkt source n must be within the
    /// stored series (std::out_of_range otherwise).
    Complex f(int n) const;

    /// Largest usable n: series length for qkt, unbounded (nullopt) for
    /// markovian.
    std::optional<int> max_kicks() const;

private:
    DephasingSource() = default;
    Kind kind_ = Kind::markovian;
    double gamma_ = 0.0;
    FidelitySeries series_;
};

/// The three classical-correlation dynamics classes, determined by the
/// initial coefficients alone: constant when |cz| >= max(|cx|, |cy|)
/// (theta_1 branch always selected at alpha = 0), monotonic decay when
/// cz = 0, sudden change otherwise.
enum class CCDynamicsClass { constant, sudden_change, monotonic_decay };

CCDynamicsClass classify_cc_dynamics(const BellDiagonalParams& c);

/// Crossings of theta_1 - theta_2(n) along a dephasing trajectory.
struct SuddenChangeReport {
    std::vector<double> crossings;  // fractional kick times, ascending

    bool found() const { return !crossings.empty(); }
    double first() const { return crossings.front(); }
};

/// Locates every sign change of theta_1 - theta_2(n) for n in [0, n_max],
/// with theta_2 evaluated from the source's F(n) and alpha(n). Linear
/// interpolation between kicks gives fractional times; exact ties resolve
/// to the earlier index. Precondition: classify_cc_dynamics(c) ==
/// sudden_change (std::invalid_argument otherwise). An empty report means
/// no crossing in range.
SuddenChangeReport sudden_change_time(const BellDiagonalParams& c, const DephasingSource& source,
                                      int n_max);

} // namespace qkt
