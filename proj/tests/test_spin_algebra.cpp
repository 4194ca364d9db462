#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "qkt/rng.hpp"
#include "qkt/spin_algebra.hpp"
#include "oracles.hpp"

using namespace qkt;
using std::numbers::pi;

namespace {

double max_abs(const MatrixC& m) { return m.cwiseAbs().maxCoeff(); }

MatrixC commutator(const MatrixC& a, const MatrixC& b) { return a * b - b * a; }

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

TEST_CASE("SpinParams validation") {
    CHECK(SpinParams::make(0.5).dim == 2);
    CHECK(SpinParams::make(1.0).dim == 3);
    CHECK(SpinParams::make(100.0).dim == 201);
    CHECK_THROWS_AS(SpinParams::make(0.0), std::invalid_argument);
    CHECK_THROWS_AS(SpinParams::make(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpinParams::make(0.3), std::invalid_argument);
    CHECK_THROWS_AS(SpinParams::make(2049.0), std::invalid_argument);
}

TEST_CASE("spin-1/2 operators are the Pauli matrices over two") {
    const auto ops = build_spin_operators(SpinParams::make(0.5));
    CHECK(std::abs(ops.jx(0, 1) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(ops.jx(1, 0) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(ops.jx(0, 0)) < 1e-15);
    CHECK(std::abs(ops.jz(0, 0) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(ops.jz(1, 1) - Complex(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(ops.jy(0, 1) - Complex(0.0, -0.5)) < 1e-15);
}

TEST_CASE("spin-1 operators match the standard matrices") {
    const auto ops = build_spin_operators(SpinParams::make(1.0));
    CHECK(ops.jz(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ops.jz(1, 1).real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ops.jz(2, 2).real() == doctest::Approx(-1.0).epsilon(1e-14));
    const double isq2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(ops.jx(0, 1) - Complex(isq2, 0.0)) < 1e-14);
    CHECK(std::abs(ops.jx(1, 2) - Complex(isq2, 0.0)) < 1e-14);
}

TEST_CASE("angular momentum algebra holds up to j = 100") {
    for (double j : {0.5, 1.0, 1.5, 2.0, 7.5, 40.0, 100.0}) {
        CAPTURE(j);
        const auto ops = build_spin_operators(SpinParams::make(j));

        CHECK(max_abs(ops.jx - ops.jx.adjoint()) < 1e-12);
        CHECK(max_abs(ops.jy - ops.jy.adjoint()) < 1e-12);
        CHECK(max_abs(ops.jz - ops.jz.adjoint()) < 1e-12);

        const Complex i(0.0, 1.0);
        CHECK(max_abs(commutator(ops.jx, ops.jy) - i * ops.jz) < 1e-10);
        CHECK(max_abs(commutator(ops.jy, ops.jz) - i * ops.jx) < 1e-10);
        CHECK(max_abs(commutator(ops.jz, ops.jx) - i * ops.jy) < 1e-10);

        const MatrixC casimir = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
        const MatrixC expect = j * (j + 1.0) * MatrixC::Identity(ops.params.dim, ops.params.dim);
        CHECK(max_abs(casimir - expect) < 1e-8);

        // Exact analytic spectrum of J_x: the same ladder -j..j as J_z.
        for (int k = 0; k < ops.params.dim; ++k)
            CHECK(std::abs(ops.jx_spectrum.eigenvalues[k] - (-j + k)) < 1e-8);
        const Eigen::MatrixXd& v = ops.jx_spectrum.eigenvectors;
        CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(v.rows(), v.cols()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }
}

TEST_CASE("tridiagonal eigensolver: 2x2 closed form") {
    Eigen::VectorXd d(2), e(1);
    d << 3.0, 3.0;
    e << 0.7;
    const auto sol = eig_symmetric_tridiagonal(d, e);
    CHECK(sol.eigenvalues[0] == doctest::Approx(3.0 - 0.7).epsilon(1e-14));
    CHECK(sol.eigenvalues[1] == doctest::Approx(3.0 + 0.7).epsilon(1e-14));
}

TEST_CASE("tridiagonal eigensolver: spin-1 J_x spectrum") {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(3);
    Eigen::VectorXd e(2);
    const double isq2 = 1.0 / std::sqrt(2.0);
    e << isq2, isq2;
    const auto sol = eig_symmetric_tridiagonal(d, e);
    CHECK(std::abs(sol.eigenvalues[0] + 1.0) < 1e-12);
    CHECK(std::abs(sol.eigenvalues[1]) < 1e-12);
    CHECK(std::abs(sol.eigenvalues[2] - 1.0) < 1e-12);
}

TEST_CASE("tridiagonal eigensolver vs dense Jacobi oracle on random 50x50") {
    Xoshiro256pp rng(314159);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 50;
        Eigen::VectorXd d(n), e(n - 1);
        for (int i = 0; i < n; ++i) d[i] = rng.uniform(-2.0, 2.0);
        for (int i = 0; i + 1 < n; ++i) e[i] = rng.uniform(-2.0, 2.0);

        const auto sol = eig_symmetric_tridiagonal(d, e);

        Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) dense(i, i) = d[i];
        for (int i = 0; i + 1 < n; ++i) {
            dense(i, i + 1) = e[i];
            dense(i + 1, i) = e[i];
        }
        const auto brute = oracles::jacobi_eigenvalues(dense);
        for (int i = 0; i < n; ++i) CHECK(std::abs(sol.eigenvalues[i] - brute[i]) < 1e-8);

        // Reconstruction and orthogonality.
        const Eigen::MatrixXd recon = sol.eigenvectors *
                                      sol.eigenvalues.asDiagonal() *
                                      sol.eigenvectors.transpose();
        CHECK((recon - dense).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((sol.eigenvectors.transpose() * sol.eigenvectors -
               Eigen::MatrixXd::Identity(n, n))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }
}

TEST_CASE("tridiagonal eigensolver at dimension 1024 against the exact ladder") {
    // J_x of j = 511.5 has the analytically known spectrum -j..j.
    const double j = 511.5;
    const int dim = 1024;
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd e(dim - 1);
    for (int k = 0; k + 1 < dim; ++k) {
        const double m = j - k - 1.0;
        e[k] = 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    const auto sol = eig_symmetric_tridiagonal(d, e);
    for (int k = 0; k < dim; ++k)
        CHECK(std::abs(sol.eigenvalues[k] - (-j + k)) < 1e-7);
}

TEST_CASE("tridiagonal eigensolver input validation") {
    Eigen::VectorXd empty(0), one(1), wrong(3);
    one << 2.0;
    CHECK_THROWS_AS(eig_symmetric_tridiagonal(empty, empty), std::invalid_argument);
    CHECK_THROWS_AS(eig_symmetric_tridiagonal(one, wrong), std::invalid_argument);
    const auto sol = eig_symmetric_tridiagonal(one, empty);
    CHECK(sol.eigenvalues[0] == doctest::Approx(2.0));
}

TEST_CASE("axis rotation: identity, qubit closed form, double cover") {
    const auto half = build_spin_operators(SpinParams::make(0.5));

    CHECK(max_abs(axis_rotation_unitary(half, 1.234, 0.0) -
                  MatrixC::Identity(2, 2)) < 1e-12);

    // axis_phi = pi/2 makes the generator J_x = sigma_x / 2.
    const double theta = 0.813;
    MatrixC expect(2, 2);
    const Complex i(0.0, 1.0);
    expect << std::cos(theta / 2.0), -i * std::sin(theta / 2.0),
        -i * std::sin(theta / 2.0), std::cos(theta / 2.0);
    CHECK(max_abs(axis_rotation_unitary(half, pi / 2.0, theta) - expect) < 1e-12);

    // 2*pi rotation: -I for half-integer j, +I for integer j.
    CHECK(max_abs(axis_rotation_unitary(half, 0.77, 2.0 * pi) + MatrixC::Identity(2, 2)) <
          1e-10);
    const auto one = build_spin_operators(SpinParams::make(1.0));
    CHECK(max_abs(axis_rotation_unitary(one, 0.77, 2.0 * pi) - MatrixC::Identity(3, 3)) <
          1e-10);
}

TEST_CASE("axis rotation: unitarity and same-axis additivity") {
    const auto ops = build_spin_operators(SpinParams::make(7.5));
    Xoshiro256pp rng(99);
    for (int trial = 0; trial < 4; ++trial) {
        const double phi = rng.uniform(0.0, 2.0 * pi);
        const double t1 = rng.uniform(-3.0, 3.0);
        const double t2 = rng.uniform(-3.0, 3.0);
        const MatrixC u1 = axis_rotation_unitary(ops, phi, t1);
        const MatrixC u2 = axis_rotation_unitary(ops, phi, t2);
        const MatrixC u12 = axis_rotation_unitary(ops, phi, t1 + t2);
        CHECK(max_abs(u1.adjoint() * u1 - MatrixC::Identity(16, 16)) < 1e-10);
        CHECK(max_abs(u1 * u2 - u12) < 1e-9);
    }
}

TEST_CASE("spin coherent state: pole, expectations, norm") {
    const auto ops = build_spin_operators(SpinParams::make(12.0));

    const VectorC pole = spin_coherent_state(ops, {0.0, 0.0});
    CHECK(std::abs(pole[0] - Complex(1.0, 0.0)) < 1e-14);
    CHECK(pole.tail(24).norm() < 1e-14);

    Xoshiro256pp rng(7);
    for (int trial = 0; trial < 8; ++trial) {
        const SpinCoherentAngles a{std::acos(rng.uniform(-1.0, 1.0)),
                                   rng.uniform(0.0, 2.0 * pi)};
        const VectorC psi = spin_coherent_state(ops, a);
        CHECK(std::abs(psi.norm() - 1.0) < 1e-12);

        const double jz = (psi.adjoint() * ops.jz * psi)(0, 0).real();
        const double jx = (psi.adjoint() * ops.jx * psi)(0, 0).real();
        CHECK(std::abs(jz - 12.0 * std::cos(a.theta)) < 1e-8);
        // The printed rotation sends the pole to azimuth phi + pi, so the
        // transverse expectation carries a minus sign.
        CHECK(std::abs(jx - (-12.0) * std::sin(a.theta) * std::cos(a.phi)) < 1e-8);
    }
}

TEST_CASE("spin coherent state: j = 2 binomial amplitudes") {
    const auto ops = build_spin_operators(SpinParams::make(2.0));
    Xoshiro256pp rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        const double theta = rng.uniform(0.0, pi);
        const double phi = rng.uniform(0.0, 2.0 * pi);
        const VectorC psi = spin_coherent_state(ops, {theta, phi});
        for (int k = 0; k <= 4; ++k) {
            const int jpm = 4 - k;  // j + m with m = 2 - k
            const double mag = std::sqrt(binom(4, jpm)) *
                               std::pow(std::cos(theta / 2.0), jpm) *
                               std::pow(std::sin(theta / 2.0), 4 - jpm);
            CHECK(std::abs(std::abs(psi[k]) - mag) < 1e-10);
            // Documented phase convention: c_m = |c_m| * (-e^{i phi})^{j - m}.
            const Complex expected =
                mag * std::pow(-std::polar(1.0, phi), static_cast<double>(k));
            CHECK(std::abs(psi[k] - expected) < 1e-10);
        }
    }
}

TEST_CASE("spin coherent state equals the rotation matrix applied to |j,j>") {
    const auto ops = build_spin_operators(SpinParams::make(1.5));
    const SpinCoherentAngles a{1.1, 2.2};
    VectorC e0 = VectorC::Zero(4);
    e0[0] = 1.0;
    const VectorC via_matrix = axis_rotation_unitary(ops, a.phi, a.theta) * e0;
    const VectorC direct = spin_coherent_state(ops, a);
    CHECK((via_matrix - direct).norm() < 1e-12);
}

TEST_CASE("random_sphere_angles: determinism, ranges, uniform cos(theta)") {
    const auto a1 = random_sphere_angles(2024);
    const auto a2 = random_sphere_angles(2024);
    CHECK(a1.theta == a2.theta);
    CHECK(a1.phi == a2.phi);
    CHECK(random_sphere_angles(2025).theta != a1.theta);

    const int n = 100000;
    std::vector<double> cosines(n);
    for (int i = 0; i < n; ++i) {
        const auto a = random_sphere_angles(1000 + static_cast<std::uint64_t>(i));
        CHECK(a.theta >= 0.0);
        CHECK(a.theta <= pi);
        CHECK(a.phi >= 0.0);
        CHECK(a.phi < 2.0 * pi);
        cosines[i] = std::cos(a.theta);
    }
    std::sort(cosines.begin(), cosines.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = (cosines[i] + 1.0) / 2.0;  // uniform on [-1, 1]
        ks = std::max(ks, std::abs(cdf - (i + 1.0) / n));
        ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
    }
    CHECK(ks < 0.01);
}
