#include "qkt/kicked_top.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qkt/errors.hpp"

namespace qkt {

namespace {

// Evolved-state norms may drift this far before the run is aborted; the
// tests pin the much tighter 1e-10 behavior at J = 100.
constexpr double norm_drift_limit = 1e-8;

double branch_sign(FloquetBranch b) {
    switch (b) {
        case FloquetBranch::plus: return 1.0;
        case FloquetBranch::minus: return -1.0;
        case FloquetBranch::unperturbed: return 0.0;
    }
    return 0.0;
}

} // namespace

void KickedTopParams::validate() const {
    if (!std::isfinite(nu)) throw std::invalid_argument("nu must be finite");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be >= 0");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("epsilon must be >= 0");
    SpinParams::make(spin.j);
}

MatrixC build_floquet(const KickedTopParams& params, const SpinOperatorSet& ops,
                      FloquetBranch branch) {
    params.validate();
    if (ops.params.dim != params.spin.dim || ops.params.j != params.spin.j)
        throw std::invalid_argument("operator set does not match spin parameters");

    const int dim = ops.params.dim;
    const double j = ops.params.j;
    const double angle = params.nu + branch_sign(branch) * params.epsilon;

    // Precession about x: V e^{-i angle L} V^T from the cached spectrum.
    const Eigen::MatrixXd& v = ops.jx_spectrum.eigenvectors;
    VectorC phases(dim);
    for (int k = 0; k < dim; ++k)
        phases[k] = std::polar(1.0, -angle * ops.jx_spectrum.eigenvalues[k]);
    MatrixC precession = v.cast<Complex>() * phases.asDiagonal() * v.transpose().cast<Complex>();

    // Kick factor: diagonal phases e^{-i (eta/2j) m^2}, m = j - k.
    VectorC kick(dim);
    for (int k = 0; k < dim; ++k) {
        const double m = j - k;
        kick[k] = std::polar(1.0, -(params.eta / (2.0 * j)) * m * m);
    }
    return precession * kick.asDiagonal();
}

VectorC evolve(const MatrixC& u, const VectorC& psi0, int n) {
    if (u.rows() != u.cols() || u.rows() != psi0.size())
        throw std::invalid_argument("evolve: dimension mismatch");
    if (n < 0) throw std::invalid_argument("evolve: kick count must be >= 0");
    VectorC psi = psi0;
    for (int k = 0; k < n; ++k) psi = u * psi;
    return psi;
}

std::vector<double> FidelitySeries::fidelity() const {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::norm(f[i]);
    return out;
}

std::vector<double> FidelitySeries::phase() const {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::arg(f[i]);
    return out;
}

std::vector<double> FidelitySeries::phase_unwrapped() const {
    std::vector<double> out(f.size(), 0.0);
    if (f.empty()) return out;
    out[0] = std::arg(f[0]);
    for (std::size_t i = 1; i < f.size(); ++i) {
        double step = std::arg(f[i]) - std::arg(f[i - 1]);
        while (step > std::numbers::pi) step -= 2.0 * std::numbers::pi;
        while (step <= -std::numbers::pi) step += 2.0 * std::numbers::pi;
        out[i] = out[i - 1] + step;
    }
    return out;
}

FidelitySeries fidelity_series(const KickedTopParams& params, const SpinOperatorSet& ops,
                               const VectorC& psi0, int n_max) {
    if (n_max < 0) throw std::invalid_argument("fidelity_series: n_max must be >= 0");
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("fidelity_series: psi0 must be normalized");

    const MatrixC u_plus = build_floquet(params, ops, FloquetBranch::plus);
    const MatrixC u_minus = build_floquet(params, ops, FloquetBranch::minus);

    FidelitySeries series;
    series.epsilon = params.epsilon;
    series.f.resize(static_cast<std::size_t>(n_max) + 1);
    series.f[0] = Complex(1.0, 0.0);

    VectorC psi_plus = psi0;
    VectorC psi_minus = psi0;
    for (int n = 1; n <= n_max; ++n) {
        psi_plus = u_plus * psi_plus;
        psi_minus = u_minus * psi_minus;
        if (std::abs(psi_plus.norm() - 1.0) > norm_drift_limit ||
            std::abs(psi_minus.norm() - 1.0) > norm_drift_limit)
            throw NumericalError("fidelity_series: evolved-state norm drifted beyond 1e-8");
        series.f[static_cast<std::size_t>(n)] = psi_plus.dot(psi_minus);
    }
    return series;
}

RevivalReport detect_revivals(const FidelitySeries& series, double threshold) {
    if (series.f.size() < 3)
        throw std::invalid_argument("detect_revivals: series needs at least 3 points");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("detect_revivals: threshold must lie in (0, 1)");

    const int n_last = series.kicks();
    constexpr int half_window = 5;

    RevivalReport report;
    for (int n = 1; n <= n_last; ++n) {
        const double fn = series.F(n);
        if (fn < threshold) continue;
        bool is_peak = true;
        const int lo = std::max(0, n - half_window);
        const int hi = std::min(n_last, n + half_window);
        for (int m = lo; m <= hi && is_peak; ++m) {
            if (m == n) continue;
            const double fm = series.F(m);
            // Ties resolve to the earlier index.
            if (fm > fn || (fm == fn && m < n)) is_peak = false;
        }
        if (is_peak) {
            report.revival_times.push_back(n);
            report.revival_peaks.push_back(fn);
        }
    }

    if (report.revival_times.size() >= 2) {
        double gap_sum = 0.0;
        for (std::size_t i = 1; i < report.revival_times.size(); ++i)
            gap_sum += report.revival_times[i] - report.revival_times[i - 1];
        const double period =
            gap_sum / static_cast<double>(report.revival_times.size() - 1);
        report.estimated_period = period;
        report.k_estimate = period * series.epsilon;
    }
    return report;
}

namespace {

void check_window(const FidelitySeries& series, const KickWindow& window) {
    if (window.first < 0 || window.last > series.kicks() || window.first > window.last)
        throw std::invalid_argument("fit window out of series bounds");
    for (int n = window.first; n <= window.last; ++n)
        if (series.F(n) <= 0.0)
            throw std::invalid_argument("fit window contains F = 0");
}

} // namespace

DecayFit fit_decay(const FidelitySeries& series, const KickWindow& window, DecayModel model) {
    check_window(series, window);

    // log F = -rate * x with x = n (exponential) or n^2 (gaussian); the
    // zero-intercept form pins log F(0) = 0.
    double sxx = 0.0;
    double sxy = 0.0;
    for (int n = window.first; n <= window.last; ++n) {
        const double x = (model == DecayModel::gaussian)
                             ? static_cast<double>(n) * static_cast<double>(n)
                             : static_cast<double>(n);
        const double y = std::log(series.F(n));
        sxx += x * x;
        sxy += x * y;
    }
    DecayFit fit;
    fit.model = model;
    fit.window = window;
    fit.rate = (sxx > 0.0) ? -sxy / sxx : 0.0;

    double sq = 0.0;
    int count = 0;
    for (int n = window.first; n <= window.last; ++n) {
        const double x = (model == DecayModel::gaussian)
                             ? static_cast<double>(n) * static_cast<double>(n)
                             : static_cast<double>(n);
        const double err = std::log(series.F(n)) + fit.rate * x;
        sq += err * err;
        ++count;
    }
    fit.residual = std::sqrt(sq / count);
    return fit;
}

DecayFit fit_decay_best(const FidelitySeries& series, const KickWindow& window) {
    const DecayFit g = fit_decay(series, window, DecayModel::gaussian);
    const DecayFit e = fit_decay(series, window, DecayModel::exponential);
    return (g.residual <= e.residual) ? g : e;
}

KickWindow default_fit_window(const FidelitySeries& series) {
    const double floor_value = std::exp(-2.0);
    int last = series.kicks();
    for (int n = 1; n <= series.kicks(); ++n) {
        if (series.F(n) < floor_value) {
            last = n;
            break;
        }
    }
    return KickWindow{1, std::max(1, last)};
}

} // namespace qkt
