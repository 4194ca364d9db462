#include "qkt/spin_algebra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qkt/rng.hpp"

namespace qkt {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Ladder coefficient sqrt(j(j+1) - m(m+1)) connecting m and m+1.
double ladder(double j, double m) { return std::sqrt(j * (j + 1.0) - m * (m + 1.0)); }

// Diagonal gauge that maps the x-y plane generator at azimuth phi onto the
// real symmetric J_x matrix: d_k = (-i e^{i phi})^k.
VectorC axis_gauge(int dim, double axis_phi) {
    const Complex step = Complex(0.0, -1.0) * std::polar(1.0, axis_phi);
    VectorC d(dim);
    Complex acc(1.0, 0.0);
    for (int k = 0; k < dim; ++k) {
        d[k] = acc;
        acc *= step;
    }
    return d;
}

} // namespace

SpinParams SpinParams::make(double j) {
    if (!(j > 0.0) || !std::isfinite(j))
        throw std::invalid_argument("spin j must be positive and finite");
    const double twoj = 2.0 * j;
    if (std::abs(twoj - std::round(twoj)) > 1e-9)
        throw std::invalid_argument("spin j must be integer or half-integer");
    if (j > 2048.0) throw std::invalid_argument("spin j > 2048 is not supported");
    SpinParams p;
    p.j = j;
    p.dim = static_cast<int>(std::llround(twoj)) + 1;
    return p;
}

SpinOperatorSet build_spin_operators(const SpinParams& p) {
    SpinParams checked = SpinParams::make(p.j);
    if (p.dim != 0 && p.dim != checked.dim)
        throw std::invalid_argument("inconsistent SpinParams: dim != 2j + 1");
    const int dim = checked.dim;
    const double j = checked.j;

    SpinOperatorSet ops;
    ops.params = checked;
    ops.jx = MatrixC::Zero(dim, dim);
    ops.jy = MatrixC::Zero(dim, dim);
    ops.jz = MatrixC::Zero(dim, dim);

    // Row k holds m = j - k, so |j, j> is the first basis vector.
    for (int k = 0; k < dim; ++k) ops.jz(k, k) = j - k;
    for (int k = 0; k + 1 < dim; ++k) {
        const double c = ladder(j, j - k - 1.0);  // <j-k|J_+|j-k-1>
        ops.jx(k, k + 1) = 0.5 * c;
        ops.jx(k + 1, k) = 0.5 * c;
        ops.jy(k, k + 1) = Complex(0.0, -0.5) * c;
        ops.jy(k + 1, k) = Complex(0.0, 0.5) * c;
    }

    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd offdiag(dim - 1);
    for (int k = 0; k + 1 < dim; ++k) offdiag[k] = 0.5 * ladder(j, j - k - 1.0);
    ops.jx_spectrum = eig_symmetric_tridiagonal(diag, offdiag);
    return ops;
}

VectorC apply_axis_rotation(const SpinOperatorSet& ops, double axis_phi, double angle,
                            const VectorC& psi) {
    const int dim = ops.params.dim;
    if (psi.size() != dim) throw std::invalid_argument("state dimension mismatch");

    const VectorC d = axis_gauge(dim, axis_phi);
    const Eigen::MatrixXd& v = ops.jx_spectrum.eigenvectors;

    VectorC w = d.conjugate().cwiseProduct(psi);
    VectorC modal = v.transpose() * w;
    for (int k = 0; k < dim; ++k)
        modal[k] *= std::polar(1.0, -angle * ops.jx_spectrum.eigenvalues[k]);
    VectorC rotated = v * modal;
    return d.cwiseProduct(rotated);
}

MatrixC axis_rotation_unitary(const SpinOperatorSet& ops, double axis_phi, double angle) {
    const int dim = ops.params.dim;
    const VectorC d = axis_gauge(dim, axis_phi);
    const Eigen::MatrixXd& v = ops.jx_spectrum.eigenvectors;

    VectorC phases(dim);
    for (int k = 0; k < dim; ++k)
        phases[k] = std::polar(1.0, -angle * ops.jx_spectrum.eigenvalues[k]);

    // D V e^{-i angle L} V^T D^dagger
    MatrixC core = v.cast<Complex>() * phases.asDiagonal() * v.transpose().cast<Complex>();
    return d.asDiagonal() * core * d.conjugate().asDiagonal();
}

VectorC spin_coherent_state(const SpinOperatorSet& ops, const SpinCoherentAngles& angles) {
    if (angles.theta < 0.0 || angles.theta > std::numbers::pi)
        throw std::invalid_argument("theta must lie in [0, pi]");
    if (angles.phi < 0.0 || angles.phi >= two_pi)
        throw std::invalid_argument("phi must lie in [0, 2*pi)");

    VectorC highest = VectorC::Zero(ops.params.dim);
    highest[0] = 1.0;
    VectorC state = apply_axis_rotation(ops, angles.phi, angles.theta, highest);
    state /= state.norm();
    return state;
}

SpinCoherentAngles random_sphere_angles(std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    const double cos_theta = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, two_pi);
    SpinCoherentAngles a;
    a.theta = std::acos(cos_theta);
    a.phi = phi;
    return a;
}

} // namespace qkt
