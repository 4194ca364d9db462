#include "qkt/dephasing.hpp"

#include <cmath>
#include <stdexcept>

namespace qkt {

Complex markovian_amplitude(double gamma, int n) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("markovian_amplitude: gamma must be >= 0");
    if (n < 0) throw std::invalid_argument("markovian_amplitude: n must be >= 0");
    return Complex(std::exp(-gamma * n), 0.0);
}

DephasingSource DephasingSource::from_series(FidelitySeries series) {
    if (series.f.empty()) throw std::invalid_argument("DephasingSource: empty series");
    DephasingSource s;
    s.kind_ = Kind::qkt;
    s.series_ = std::move(series);
    return s;
}

DephasingSource DephasingSource::markovian(double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("DephasingSource: gamma must be >= 0");
    DephasingSource s;
    s.kind_ = Kind::markovian;
    s.gamma_ = gamma;
    return s;
}

Complex DephasingSource::f(int n) const {
    if (n < 0) throw std::out_of_range("DephasingSource::f: n must be >= 0");
    if (kind_ == Kind::markovian) return markovian_amplitude(gamma_, n);
    if (n >= static_cast<int>(series_.f.size()))
        throw std::out_of_range("DephasingSource::f: beyond stored series");
    return series_.f[static_cast<std::size_t>(n)];
}

std::optional<int> DephasingSource::max_kicks() const {
    if (kind_ == Kind::markovian) return std::nullopt;
    return series_.kicks();
}

CCDynamicsClass classify_cc_dynamics(const BellDiagonalParams& c) {
    c.validate();
    const double theta1 = std::abs(c.cz);
    if (theta1 >= std::max(std::abs(c.cx), std::abs(c.cy))) return CCDynamicsClass::constant;
    if (c.cz == 0.0) return CCDynamicsClass::monotonic_decay;
    return CCDynamicsClass::sudden_change;
}

namespace {

// theta_1 - theta_2(n) with theta_2 from the printed formula, evaluated
// on the source's amplitude.
double branch_gap(const BellDiagonalParams& c, const DephasingSource& source, int n) {
    const Complex f = source.f(n);
    const double F = std::norm(f);
    const double alpha = std::arg(f);
    const double cx2 = c.cx * c.cx;
    const double cy2 = c.cy * c.cy;
    const double w = std::abs(std::cos(2.0 * alpha)) + std::abs(std::sin(2.0 * alpha));
    const double theta2 =
        std::sqrt(std::max(0.0, (2.0 * (cx2 + cy2) + 2.0 * std::abs(cx2 - cy2) * w) * F)) / 2.0;
    return std::abs(c.cz) - theta2;
}

} // namespace

SuddenChangeReport sudden_change_time(const BellDiagonalParams& c, const DephasingSource& source,
                                      int n_max) {
    if (classify_cc_dynamics(c) != CCDynamicsClass::sudden_change)
        throw std::invalid_argument(
            "sudden_change_time requires the sudden_change dynamics class");
    if (n_max < 0) throw std::invalid_argument("sudden_change_time: n_max must be >= 0");
    if (auto limit = source.max_kicks(); limit && n_max > *limit)
        throw std::invalid_argument("sudden_change_time: n_max beyond stored series");

    SuddenChangeReport report;
    double prev = branch_gap(c, source, 0);
    if (prev == 0.0) report.crossings.push_back(0.0);  // tie at the start
    for (int n = 1; n <= n_max; ++n) {
        const double cur = branch_gap(c, source, n);
        if (cur == 0.0) {
            report.crossings.push_back(static_cast<double>(n));
        } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
            // Linear interpolation of the sign change inside (n-1, n).
            const double t = prev / (prev - cur);
            report.crossings.push_back(static_cast<double>(n - 1) + t);
        }
        prev = cur;
    }
    return report;
}

} // namespace qkt
