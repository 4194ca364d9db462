#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "qkt/tridiagonal.hpp"

namespace qkt {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

/// Spin quantum number j (integer or half-integer) and the Hilbert-space
/// dimension 2j + 1.
struct SpinParams {
    double j = 0.0;
    int dim = 0;

    /// Validates j > 0, 2j integral, j <= 2048 and computes dim.
    static SpinParams make(double j);
};

/// The (2j+1)-dimensional angular momentum matrices in the J_z eigenbasis,
/// ordered m = j down to -j (row 0 is |j, j>), plus the cached spectral
/// decomposition of J_x used for every rotation in the x-y plane.
struct SpinOperatorSet {
    SpinParams params;
    MatrixC jx, jy, jz;
    TridiagonalEigen jx_spectrum;  // eigenvalues ascending (-j..j), orthonormal real eigenvectors
};

/// Polar/azimuthal angles of a point on the sphere, theta in [0, pi],
/// phi in [0, 2*pi).
struct SpinCoherentAngles {
    double theta = 0.0;
    double phi = 0.0;
};

/// Builds J_x, J_y, J_z from the ladder-operator matrix elements
/// <m+-1|J_+-|m> = sqrt(j(j+1) - m(m+-1)) and diagonalizes J_x.
SpinOperatorSet build_spin_operators(const SpinParams& p);

/// exp[-i*angle*(J_x sin(axis_phi) - J_y cos(axis_phi))].
///
/// The generator is tridiagonal with a constant off-diagonal phase; a
/// diagonal gauge D = diag((-i e^{i phi})^k) reduces it to the real
/// symmetric J_x matrix, so the cached J_x spectrum serves every axis in
/// the x-y plane: U = D V e^{-i angle L} V^T D^dagger.
MatrixC axis_rotation_unitary(const SpinOperatorSet& ops, double axis_phi, double angle);

/// axis_rotation_unitary applied to a vector without forming the matrix.
VectorC apply_axis_rotation(const SpinOperatorSet& ops, double axis_phi, double angle,
                            const VectorC& psi);

/// The spin coherent state |theta, phi> = exp[-i theta (J_x sin phi -
/// J_y cos phi)] |j, j>, unit norm.
///
/// Phase convention is the one the matrix exponential produces:
/// c_m = sqrt(C(2j, j+m)) cos^{j+m}(theta/2) * (-e^{i phi} sin(theta/2))^{j-m}.
VectorC spin_coherent_state(const SpinOperatorSet& ops, const SpinCoherentAngles& angles);

/// Deterministic uniform direction on the sphere: cos(theta) uniform on
/// [-1, 1], phi uniform on [0, 2*pi). Uses the project RNG (xoshiro256++).
SpinCoherentAngles random_sphere_angles(std::uint64_t seed);

} // namespace qkt
