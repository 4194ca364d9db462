#include "qkt/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qkt {

namespace {

constexpr double psd_dust = 1e-10;  // eigenvalue dust tolerated below zero

double xlog2x(double x) { return (x > 0.0) ? x * std::log2(x) : 0.0; }

// Entropy term of one theta branch of the classical-correlation formula:
// H_b((1 + theta) / 2), theta clamped into [0, 1] first.
double theta_branch_entropy(double theta, ThetaClampLog* clamp_log) {
    if (theta > 1.0) {
        if (clamp_log) clamp_log->record(theta - 1.0);
        theta = 1.0;
    } else if (theta < 0.0) {
        if (clamp_log) clamp_log->record(-theta);
        theta = 0.0;
    }
    return binary_entropy_bits(0.5 * (1.0 + theta));
}

Eigen::Matrix2cd pauli(int k) {
    Eigen::Matrix2cd m;
    const Complex i(0.0, 1.0);
    switch (k) {
        case 0: m << 0, 1, 1, 0; break;        // sigma_x
        case 1: m << 0, -i, i, 0; break;       // sigma_y
        default: m << 1, 0, 0, -1; break;      // sigma_z
    }
    return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
    return out;
}

// Bloch decomposition rho = (I + a.sA + b.sB + sum T_kl sA_k sB_l) / 4.
struct BlochData {
    Eigen::Vector3d a, b;
    Eigen::Matrix3d t;
};

BlochData bloch_decompose(const Eigen::Matrix4cd& rho) {
    const Eigen::Matrix2cd id2 = Eigen::Matrix2cd::Identity();
    BlochData out;
    for (int k = 0; k < 3; ++k) {
        out.a[k] = (rho * kron2(pauli(k), id2)).trace().real();
        out.b[k] = (rho * kron2(id2, pauli(k))).trace().real();
        for (int l = 0; l < 3; ++l)
            out.t(k, l) = (rho * kron2(pauli(k), pauli(l))).trace().real();
    }
    return out;
}

// Conditional entropy sum_j p_j S(rho_A | Pi_j) for the projective
// measurement along Bloch direction n on qubit B.
double conditional_entropy(const BlochData& d, const Eigen::Vector3d& n) {
    const double bn = d.b.dot(n);
    const Eigen::Vector3d tn = d.t * n;
    double total = 0.0;
    for (double sign : {1.0, -1.0}) {
        const double p = 0.5 * (1.0 + sign * bn);
        if (p <= 0.0) continue;  // outcome never occurs
        const double r = std::min(1.0, ((d.a + sign * tn) / (2.0 * p)).norm());
        total += p * binary_entropy_bits(0.5 * (1.0 + r));
    }
    return total;
}

Eigen::Vector3d bloch_direction(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta)};
}

double qubit_entropy_from_diag(const Eigen::Matrix2cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
    const double p[2] = {es.eigenvalues()[0], es.eigenvalues()[1]};
    return entropy_bits(p, 2);
}

} // namespace

double binary_entropy_bits(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy_bits: p outside [0, 1]");
    return -xlog2x(p) - xlog2x(1.0 - p);
}

double entropy_bits(const double* p, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = p[i];
        if (v < 0.0) {
            if (v < -psd_dust) throw std::invalid_argument("entropy_bits: negative probability");
            v = 0.0;
        }
        s -= xlog2x(v);
    }
    return s;
}

std::array<double, 4> BellDiagonalParams::validity_numbers() const {
    return {1.0 - cx - cy - cz, 1.0 - cx + cy + cz, 1.0 + cx - cy + cz, 1.0 + cx + cy - cz};
}

bool BellDiagonalParams::is_physical(double tol) const {
    if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(cz)) return false;
    for (double v : validity_numbers())
        if (v < -tol) return false;
    return true;
}

void BellDiagonalParams::validate() const {
    if (!is_physical())
        throw std::invalid_argument("Bell-diagonal coefficients describe no physical state");
}

void XState::validate() const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("X state is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-12)
        throw std::invalid_argument("X state trace differs from 1");
    const int zero_rows[] = {0, 0, 1, 2};
    const int zero_cols[] = {1, 2, 3, 3};
    for (int i = 0; i < 4; ++i)
        if (std::abs(rho(zero_rows[i], zero_cols[i])) > 1e-12)
            throw std::invalid_argument("matrix violates the X zero pattern");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    if (es.eigenvalues().minCoeff() < -psd_dust)
        throw std::invalid_argument("X state is not positive semidefinite");
    // Both marginals must be I/2.
    const Complex a00 = rho(0, 0) + rho(1, 1);
    const Complex b00 = rho(0, 0) + rho(2, 2);
    if (std::abs(a00 - 0.5) > 1e-12 || std::abs(b00 - 0.5) > 1e-12)
        throw std::invalid_argument("X state marginals are not maximally mixed");
}

XState xstate(const BellDiagonalParams& c, Complex f) {
    c.validate();
    if (std::abs(f) > 1.0 + 1e-12)
        throw std::invalid_argument("dephasing amplitude must satisfy |f| <= 1");

    XState s;
    s.rho = Eigen::Matrix4cd::Zero();
    s.rho(0, 0) = (1.0 + c.cz) / 4.0;
    s.rho(1, 1) = (1.0 - c.cz) / 4.0;
    s.rho(2, 2) = (1.0 - c.cz) / 4.0;
    s.rho(3, 3) = (1.0 + c.cz) / 4.0;
    s.rho(0, 3) = (c.cx - c.cy) * f / 4.0;
    s.rho(3, 0) = std::conj(s.rho(0, 3));
    s.rho(1, 2) = (c.cx + c.cy) * f / 4.0;
    s.rho(2, 1) = std::conj(s.rho(1, 2));
    return s;
}

std::array<double, 4> xstate_eigenvalues(const BellDiagonalParams& c, double F) {
    // |f| may carry up to 1e-12 of slack, so F = |f|^2 may carry twice that.
    if (!(F >= 0.0 && F <= 1.0 + 1e-11)) throw std::invalid_argument("F must lie in [0, 1]");
    const double root = std::sqrt(std::min(F, 1.0));
    return {(1.0 + c.cz + std::abs(c.cx - c.cy) * root) / 4.0,
            (1.0 + c.cz - std::abs(c.cx - c.cy) * root) / 4.0,
            (1.0 - c.cz + std::abs(c.cx + c.cy) * root) / 4.0,
            (1.0 - c.cz - std::abs(c.cx + c.cy) * root) / 4.0};
}

double classical_correlation(const BellDiagonalParams& c, double F, double alpha,
                             ThetaClampLog* clamp_log) {
    if (!std::isfinite(F) || !std::isfinite(alpha))
        throw std::invalid_argument("classical_correlation: non-finite input");
    c.validate();
    if (!(F >= 0.0 && F <= 1.0 + 1e-11)) throw std::invalid_argument("F must lie in [0, 1]");

    const double theta1 = std::abs(c.cz);
    const double cx2 = c.cx * c.cx;
    const double cy2 = c.cy * c.cy;
    const double phase_weight = std::abs(std::cos(2.0 * alpha)) + std::abs(std::sin(2.0 * alpha));
    const double theta2 =
        std::sqrt(std::max(0.0, (2.0 * (cx2 + cy2) + 2.0 * std::abs(cx2 - cy2) * phase_weight) * F)) /
        2.0;

    const double h1 = theta_branch_entropy(theta1, clamp_log);
    const double h2 = theta_branch_entropy(theta2, clamp_log);
    return 1.0 - std::min(h1, h2);
}

double quantum_discord(const BellDiagonalParams& c, double F, double alpha,
                       ThetaClampLog* clamp_log) {
    const auto lam = xstate_eigenvalues(c, F);
    double s = 0.0;
    for (double l : lam) s += xlog2x(std::max(0.0, l));
    double q = 2.0 + s - classical_correlation(c, F, alpha, clamp_log);
    if (q < 0.0 && q >= -1e-12) q = 0.0;  // clip dust
    return q;
}

double mutual_information(const XState& s) {
    // Marginals by partial trace.
    Eigen::Matrix2cd rho_a, rho_b;
    rho_a << s.rho(0, 0) + s.rho(1, 1), s.rho(0, 2) + s.rho(1, 3),
        s.rho(2, 0) + s.rho(3, 1), s.rho(2, 2) + s.rho(3, 3);
    rho_b << s.rho(0, 0) + s.rho(2, 2), s.rho(0, 1) + s.rho(2, 3),
        s.rho(1, 0) + s.rho(3, 2), s.rho(1, 1) + s.rho(3, 3);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(s.rho);
    double joint[4];
    for (int i = 0; i < 4; ++i) joint[i] = es.eigenvalues()[i];

    return qubit_entropy_from_diag(rho_a) + qubit_entropy_from_diag(rho_b) -
           entropy_bits(joint, 4);
}

NumericDiscord discord_numeric(const XState& s, int coarse_grid, int refine_iters) {
    if (coarse_grid < 2) throw std::invalid_argument("discord_numeric: coarse_grid < 2");
    if (refine_iters < 0) throw std::invalid_argument("discord_numeric: refine_iters < 0");

    const BlochData d = bloch_decompose(s.rho);

    // Coarse scan over the half-sphere (antipodal directions define the
    // same projective measurement).
    const double half_pi = 0.5 * std::numbers::pi;
    double best_theta = 0.0;
    double best_phi = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < coarse_grid; ++i) {
        const double theta = half_pi * i / (coarse_grid - 1);
        for (int k = 0; k < coarse_grid; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / coarse_grid;
            const double value = conditional_entropy(d, bloch_direction(theta, phi));
            if (value < best) {
                best = value;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }

    // Shrinking-step coordinate descent, steps halved each round; each
    // step starts at its own grid spacing so the walk can reach any point
    // of the winning cell.
    double step_theta = half_pi / (coarse_grid - 1);
    double step_phi = 2.0 * std::numbers::pi / coarse_grid;
    for (int round = 0; round < refine_iters; ++round) {
        for (int coord = 0; coord < 2; ++coord) {
            const double step = (coord == 0) ? step_theta : step_phi;
            for (double sign : {1.0, -1.0}) {
                const double theta = best_theta + (coord == 0 ? sign * step : 0.0);
                const double phi = best_phi + (coord == 1 ? sign * step : 0.0);
                const double value = conditional_entropy(d, bloch_direction(theta, phi));
                if (value < best) {
                    best = value;
                    best_theta = theta;
                    best_phi = phi;
                }
            }
        }
        step_theta *= 0.5;
        step_phi *= 0.5;
    }

    // CC* = S(rho_A) - min conditional entropy; Q* = MI - CC*.
    Eigen::Matrix2cd rho_a;
    rho_a << s.rho(0, 0) + s.rho(1, 1), s.rho(0, 2) + s.rho(1, 3),
        s.rho(2, 0) + s.rho(3, 1), s.rho(2, 2) + s.rho(3, 3);

    NumericDiscord out;
    out.cc = qubit_entropy_from_diag(rho_a) - best;
    out.q = mutual_information(s) - out.cc;
    out.theta = best_theta;
    out.phi = best_phi;
    return out;
}

double ree(const BellDiagonalParams& c, double F) {
    const auto lam = xstate_eigenvalues(c, F);
    const double lam_max = *std::max_element(lam.begin(), lam.end());
    const double beta = std::max(0.5, lam_max);
    return 1.0 + xlog2x(beta) + xlog2x(1.0 - beta);
}

double concurrence(const XState& s) {
    const double r11 = s.rho(0, 0).real();
    const double r22 = s.rho(1, 1).real();
    const double r33 = s.rho(2, 2).real();
    const double r44 = s.rho(3, 3).real();
    const double inner = std::abs(s.rho(1, 2)) - std::sqrt(std::max(0.0, r11 * r44));
    const double outer = std::abs(s.rho(0, 3)) - std::sqrt(std::max(0.0, r22 * r33));
    return 2.0 * std::max({0.0, inner, outer});
}

CorrelationRecord correlation_record(const BellDiagonalParams& c, Complex f,
                                     ThetaClampLog* clamp_log) {
    const XState s = xstate(c, f);
    CorrelationRecord rec;
    rec.F = std::norm(f);
    rec.alpha = std::arg(f);
    rec.lambda = xstate_eigenvalues(c, rec.F);
    rec.cc = classical_correlation(c, rec.F, rec.alpha, clamp_log);
    double sum = 0.0;
    for (double l : rec.lambda) sum += xlog2x(std::max(0.0, l));
    rec.q = 2.0 + sum - rec.cc;  // same CC evaluation feeds Q and CC
    if (rec.q < 0.0 && rec.q >= -1e-12) rec.q = 0.0;
    rec.mi = mutual_information(s);
    rec.ree = ree(c, rec.F);
    rec.concurrence = qkt::concurrence(s);
    return rec;
}

} // namespace qkt
