// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qkt/correlations.hpp"
#include "qkt/dephasing.hpp"
#include "qkt/kicked_top.hpp"
#include "qkt/rng.hpp"
#include "qkt/runner.hpp"
#include "qkt/spin_algebra.hpp"
#include "oracles.hpp"

using namespace qkt;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

void criterion(int index, const std::string& name, const std::function<void(Checker&)>& body) {
    Checker c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = std::string("exception: ") + e.what();
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    if (c.ok) {
        std::printf("[PASS] criterion %d (%.2fs): %s\n", index, dt.count(), name.c_str());
    } else {
        std::printf("[FAIL] criterion %d (%.2fs): %s -- %s\n", index, dt.count(), name.c_str(),
                    c.detail.c_str());
        ++failures;
    }
    std::fflush(stdout);
}

std::string strip_comments(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (!line.starts_with('#')) out << line << '\n';
    return out.str();
}

const std::uint64_t kSeed = 42;  // the fixed random seed for every QKT run here

} // namespace

int main() {
    // 1. Algebraic identities over random valid (c, F, alpha).
    criterion(1, "algebraic identities CC = MI - Q, sum(lambda) = 1, spectrum match", [](Checker& c) {
        Xoshiro256pp rng(1111);
        for (int trial = 0; trial < 1000; ++trial) {
            const BellDiagonalParams bell = oracles::random_bell(rng);
            const double F = rng.uniform();
            const double alpha = rng.uniform(-pi, pi);

            const double q = quantum_discord(bell, F, alpha);
            const double cc = classical_correlation(bell, F, alpha);
            const XState s = xstate(bell, std::polar(std::sqrt(F), alpha));
            const double mi = mutual_information(s);
            c.require(std::abs(cc - (mi - q)) < 1e-9, "CC != MI - Q within 1e-9");

            auto lam = xstate_eigenvalues(bell, F);
            double sum = 0.0;
            for (double l : lam) sum += l;
            c.require(std::abs(sum - 1.0) < 1e-10, "sum(lambda) != 1 within 1e-10");

            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(s.rho);
            std::array<double, 4> numeric{es.eigenvalues()[0], es.eigenvalues()[1],
                                          es.eigenvalues()[2], es.eigenvalues()[3]};
            std::sort(lam.begin(), lam.end());
            for (int i = 0; i < 4; ++i)
                c.require(std::abs(lam[i] - numeric[i]) < 1e-10,
                          "closed-form eigenvalues differ from the 4x4 spectrum");
        }
    });

    // 2. j = 1/2 echo oracle.
    criterion(2, "j = 1/2 echo amplitude matches cos(n eps) + i sin(n eps) <sigma_x>", [](Checker& c) {
        Xoshiro256pp rng(2222);
        for (int draw = 0; draw < 10; ++draw) {
            KickedTopParams params;
            params.nu = rng.uniform(0.0, 2.0 * pi);
            params.eta = rng.uniform(0.0, 10.0);
            params.epsilon = rng.uniform(0.0, 0.5);
            params.spin = SpinParams::make(0.5);
            const auto ops = build_spin_operators(params.spin);
            const SpinCoherentAngles a{std::acos(rng.uniform(-1.0, 1.0)),
                                       rng.uniform(0.0, 2.0 * pi)};
            const VectorC psi0 = spin_coherent_state(ops, a);
            const double sx = 2.0 * (psi0.adjoint() * ops.jx * psi0)(0, 0).real();

            const auto series = fidelity_series(params, ops, psi0, 150);
            for (int n = 0; n <= 150; ++n) {
                const Complex expect(std::cos(n * params.epsilon),
                                     std::sin(n * params.epsilon) * sx);
                c.require(std::abs(series.f[n] - expect) < 1e-10,
                          "echo amplitude off the closed form at kick " + std::to_string(n));
            }
        }
    });

    // 3. Operator correctness at J = 100.
    criterion(3, "J = 100 operators: J_x spectrum, Floquet unitarity, coherent <J_z>", [](Checker& c) {
        const auto spin = SpinParams::make(100.0);
        const auto ops = build_spin_operators(spin);
        for (int k = 0; k < spin.dim; ++k)
            c.require(std::abs(ops.jx_spectrum.eigenvalues[k] - (-100.0 + k)) < 1e-8,
                      "J_x eigenvalue " + std::to_string(k) + " off the ladder");

        KickedTopParams params;
        params.nu = pi / 2.0;
        params.eta = 20.0;
        params.epsilon = 0.001;
        params.spin = spin;
        const MatrixC u = build_floquet(params, ops, FloquetBranch::plus);
        const double unitarity =
            (u.adjoint() * u - MatrixC::Identity(spin.dim, spin.dim)).cwiseAbs().maxCoeff();
        c.require(unitarity < 1e-10, "Floquet unitarity residual " + std::to_string(unitarity));

        Xoshiro256pp rng(3333);
        for (int trial = 0; trial < 5; ++trial) {
            const SpinCoherentAngles a{std::acos(rng.uniform(-1.0, 1.0)),
                                       rng.uniform(0.0, 2.0 * pi)};
            const VectorC psi = spin_coherent_state(ops, a);
            const double jz = (psi.adjoint() * ops.jz * psi)(0, 0).real();
            c.require(std::abs(jz - 100.0 * std::cos(a.theta)) < 1e-8,
                      "coherent-state <J_z> misses J cos(theta)");
        }
    });

    // 4. Fidelity-decay phenomenology at J = 100 (property form).
    criterion(4, "chaotic collapse, regular revivals, revival period ~ 1/epsilon", [](Checker& c) {
        KickedTopParams params;
        params.nu = pi / 2.0;
        params.epsilon = 0.001;
        params.spin = SpinParams::make(100.0);
        const auto ops = build_spin_operators(params.spin);
        const VectorC psi0 = spin_coherent_state(ops, random_sphere_angles(kSeed));

        params.eta = 20.0;
        const auto chaotic = fidelity_series(params, ops, psi0, 3000);
        double mean = 0.0;
        for (int n = 2000; n <= 3000; ++n) mean += chaotic.F(n);
        mean /= 1001.0;
        c.require(mean < 0.1, "chaotic mean F over kicks 2000-3000 = " + std::to_string(mean));

        params.eta = 0.1;
        const auto regular = fidelity_series(params, ops, psi0, 7000);
        const RevivalReport rep1 = detect_revivals(regular, 0.8);
        c.require(rep1.revival_times.size() >= 2,
                  "fewer than two revival peaks with F > 0.8");
        c.require(rep1.estimated_period.has_value(), "no revival period estimated");

        params.epsilon = 0.002;
        const auto regular2 = fidelity_series(params, ops, psi0, 7000);
        const RevivalReport rep2 = detect_revivals(regular2, 0.8);
        c.require(rep2.estimated_period.has_value(), "no revival period at 2x epsilon");
        if (rep1.estimated_period && rep2.estimated_period) {
            const double ratio = *rep1.estimated_period / *rep2.estimated_period;
            c.require(std::abs(ratio - 2.0) < 0.3,
                      "revival-period ratio " + std::to_string(ratio) + " not 2 within 15%");
        }
    });

    // 5. Sudden change under the Markovian source.
    criterion(5, "Markovian sudden change: plateau value, strict decay, crossing kick", [](Checker& c) {
        const BellDiagonalParams bell{0.95, -0.85, 0.85};
        const double gamma = 0.001;
        const double n_star = std::log(0.95 / 0.85) / gamma;  // about 111.23
        const DephasingSource src = DephasingSource::markovian(gamma);

        // Independent plateau value 1 - H_b(0.925).
        auto hb = [](double p) {
            auto t = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
            return -t(p) - t(1.0 - p);
        };
        const double plateau = 1.0 - hb(0.925);

        double prev = 2.0;
        double frozen_ref = 0.0;
        bool have_ref = false;
        for (int n = 0; n <= 300; ++n) {
            const Complex f = src.f(n);
            const double cc = classical_correlation(bell, std::norm(f), std::arg(f));
            if (std::norm(f) > std::pow(0.85 / 0.95, 2.0)) {
                if (n > 0)
                    c.require(cc < prev, "CC not strictly decreasing on the theta_2 side");
            } else {
                if (!have_ref) {
                    frozen_ref = cc;
                    have_ref = true;
                }
                c.require(cc == frozen_ref, "CC not pointwise constant on the theta_1 side");
                c.require(std::abs(cc - plateau) < 1e-12,
                          "plateau differs from 1 - H_b(0.925)");
            }
            prev = cc;
        }
        c.require(have_ref, "plateau never reached");

        const auto report = sudden_change_time(bell, src, 300);
        c.require(report.found(), "no crossing detected");
        if (report.found())
            c.require(std::abs(report.first() - n_star) < 1.0,
                      "crossing " + std::to_string(report.first()) + " vs predicted " +
                          std::to_string(n_star));
    });

    // 6. Entanglement sudden death and birth along the regular run.
    criterion(6, "REE death interval, rebirth after a revival, exact branch rule", [](Checker& c) {
        KickedTopParams params;
        params.nu = pi / 2.0;
        params.eta = 0.1;
        params.epsilon = 0.001;
        params.spin = SpinParams::make(100.0);
        const auto ops = build_spin_operators(params.spin);
        const VectorC psi0 = spin_coherent_state(ops, random_sphere_angles(kSeed));
        const auto series = fidelity_series(params, ops, psi0, 4000);

        const BellDiagonalParams bell{0.95, -0.85, 0.85};
        std::vector<double> e(4001);
        int first_dead = -1;
        for (int n = 0; n <= 4000; ++n) {
            const double F = series.F(n);
            e[n] = ree(bell, F);
            const auto lam = xstate_eigenvalues(bell, F);
            const double lam_max = *std::max_element(lam.begin(), lam.end());
            c.require((e[n] == 0.0) == (lam_max <= 0.5),
                      "REE zero-branch rule broken at kick " + std::to_string(n));
            if (first_dead < 0 && e[n] == 0.0) first_dead = n;
        }
        c.require(first_dead >= 0, "REE never reaches zero");

        const RevivalReport rep = detect_revivals(series, 0.5);
        c.require(!rep.revival_times.empty(), "no F revival in the window");
        if (first_dead >= 0 && !rep.revival_times.empty()) {
            const int t_rev = rep.revival_times.front();
            c.require(t_rev > first_dead, "revival precedes the death interval");
            c.require(e[t_rev] > 0.0, "REE still zero at the revival peak");
        }
    });

    // 7. Discord oracle agreement and alpha diagnostics.
    criterion(7, "numeric discord within 2e-3 of the closed form; alpha invariance", [](Checker& c) {
        Xoshiro256pp rng(7777);
        for (int draw = 0; draw < 100; ++draw) {
            const BellDiagonalParams bell = oracles::random_bell(rng);
            const double F = rng.uniform();
            for (double alpha : {0.0, pi / 2.0, pi}) {
                const double q_closed = quantum_discord(bell, F, alpha);
                const NumericDiscord nd =
                    discord_numeric(xstate(bell, std::polar(std::sqrt(F), alpha)));
                c.require(std::abs(q_closed - nd.q) < 2e-3,
                          "closed vs numeric gap " + std::to_string(std::abs(q_closed - nd.q)));
            }
        }

        const BellDiagonalParams bell{0.95, -0.85, 0.85};
        const double F = 0.9;  // above the branch crossing so theta_2 is live
        double num_lo = 2.0, num_hi = -2.0, closed_lo = 2.0, closed_hi = -2.0;
        for (int i = 0; i < 32; ++i) {
            const double alpha = pi * i / 32.0;
            const NumericDiscord nd =
                discord_numeric(xstate(bell, std::polar(std::sqrt(F), alpha)));
            num_lo = std::min(num_lo, nd.q);
            num_hi = std::max(num_hi, nd.q);
            const double qc = quantum_discord(bell, F, alpha);
            closed_lo = std::min(closed_lo, qc);
            closed_hi = std::max(closed_hi, qc);
        }
        c.require(num_hi - num_lo < 2e-3,
                  "numeric discord varies with alpha by " + std::to_string(num_hi - num_lo));
        std::printf("       (diagnostic) closed-form alpha variation at (c_fig, F=0.9): %.6f\n",
                    closed_hi - closed_lo);
    });

    // 8. Entanglement measures are blind to the amplitude phase.
    criterion(8, "concurrence and REE identical across 100 alpha values", [](Checker& c) {
        const BellDiagonalParams bell{0.95, -0.85, 0.85};
        const double F = 0.7;
        const double conc_ref =
            concurrence(xstate(bell, Complex(std::sqrt(F), 0.0)));
        const double ree_ref = ree(bell, F);
        for (int i = 0; i < 100; ++i) {
            const double alpha = -pi + 2.0 * pi * i / 100.0;
            const CorrelationRecord rec =
                correlation_record(bell, std::polar(std::sqrt(F), alpha));
            c.require(std::abs(rec.concurrence - conc_ref) < 1e-12,
                      "concurrence moved with alpha");
            c.require(std::abs(rec.ree - ree_ref) < 1e-12, "REE moved with alpha");
        }
    });

    // 9. Determinism of the fig2 preset.
    criterion(9, "repeated fig2 runs give byte-identical CSV bodies", [](Checker& c) {
        const fs::path dir = fs::temp_directory_path();
        const std::string a = (dir / "qkt_accept_fig2_a.csv").string();
        const std::string b = (dir / "qkt_accept_fig2_b.csv").string();

        ScenarioConfig cfg = preset_config("fig2");
        cfg.out = a;
        run_scenario(cfg);
        cfg.out = b;
        run_scenario(cfg);

        const std::string body_a = strip_comments(a);
        const std::string body_b = strip_comments(b);
        c.require(!body_a.empty(), "empty output");
        c.require(body_a == body_b, "CSV bodies differ between identical runs");
        fs::remove(a);
        fs::remove(b);
    });

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
