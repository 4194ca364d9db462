// qkt: command-line front end for the kicked-top dephasing toolkit.
//
// Subcommands: fd, dynamics, channel-compare, oracle, sweep.
// Exit codes: 0 success, 2 config error, 3 numerical-invariant violation,
// 4 I/O error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qkt/errors.hpp"
#include "qkt/rng.hpp"
#include "qkt/runner.hpp"
#include "qkt/version.hpp"

namespace {

using namespace qkt;

std::string g15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// Scenario flags shared by the run-style subcommands. Values land in the
// holder only when the flag was actually passed; build_config() applies
// them on top of preset and config-file values in that order.
struct ScenarioFlags {
    std::optional<std::string> config_path;
    std::optional<std::string> preset;
    std::optional<double> j, nu, eta, epsilon;
    std::optional<int> kicks;
    std::optional<double> cx, cy, cz;
    std::optional<double> theta0, phi0;
    std::optional<std::uint64_t> seed;
    std::optional<double> gamma;
    std::optional<std::string> source;
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool oracle = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON scenario file");
        cmd->add_option("--preset", preset, "fig1-chaotic | fig1-regular | fig2 | fig3");
        cmd->add_option("--j", j, "spin quantum number");
        cmd->add_option("--nu", nu, "precession angle (rad)");
        cmd->add_option("--eta", eta, "kick strength");
        cmd->add_option("--epsilon", epsilon, "qubit-top coupling");
        cmd->add_option("--kicks", kicks, "number of kicks");
        cmd->add_option("--cx", cx, "initial coefficient c_x");
        cmd->add_option("--cy", cy, "initial coefficient c_y");
        cmd->add_option("--cz", cz, "initial coefficient c_z");
        cmd->add_option("--theta0", theta0, "explicit initial polar angle");
        cmd->add_option("--phi0", phi0, "explicit initial azimuth");
        cmd->add_option("--seed", seed, "seed for the random initial direction");
        cmd->add_option("--gamma", gamma, "Markovian dephasing rate");
        cmd->add_option("--source", source, "qkt | markovian");
        cmd->add_option("--out", out, "output path");
        cmd->add_option("--format", format, "csv | json");
        cmd->add_flag("--oracle", oracle, "add the numeric-discord column Q_num");
    }

    ScenarioConfig build() const {
        ScenarioConfig cfg;
        if (preset) cfg = preset_config(*preset);
        if (config_path) cfg = scenario_from_json_file(*config_path, cfg);
        if (j) cfg.j = *j;
        if (nu) cfg.nu = *nu;
        if (eta) cfg.eta = *eta;
        if (epsilon) cfg.epsilon = *epsilon;
        if (kicks) cfg.kicks = *kicks;
        if (cx) cfg.cx = *cx;
        if (cy) cfg.cy = *cy;
        if (cz) cfg.cz = *cz;
        if (theta0 || phi0) {
            cfg.angle_mode = AngleMode::explicit_angles;
            if (theta0) cfg.theta0 = *theta0;
            if (phi0) cfg.phi0 = *phi0;
        } else if (seed) {
            cfg.angle_mode = AngleMode::random;
            cfg.seed = *seed;
        }
        if (gamma) cfg.gamma = *gamma;
        if (source) {
            if (*source == "qkt") cfg.source = SourceKind::qkt;
            else if (*source == "markovian") cfg.source = SourceKind::markovian;
            else throw ConfigError("source", "must be 'qkt' or 'markovian'");
        }
        if (out) cfg.out = *out;
        if (format) {
            if (*format == "csv") cfg.format = OutputFormat::csv;
            else if (*format == "json") cfg.format = OutputFormat::json;
            else throw ConfigError("format", "must be 'csv' or 'json'");
        }
        if (oracle) cfg.oracle = true;
        return cfg;
    }
};

void emit_run(const RunOutput& run) {
    if (!run.config.out.empty()) {
        std::cerr << "wrote " << run.config.out << " (" << run.rows.size() << " rows)\n";
        return;
    }
    if (run.config.format == OutputFormat::csv)
        run.write_csv(std::cout);
    else
        std::cout << run.to_json_text();
}

int cmd_fd(const ScenarioFlags& flags) {
    ScenarioConfig cfg = flags.build();
    cfg.columns = {Column::F, Column::alpha};
    cfg.oracle = false;
    emit_run(run_scenario(cfg));
    return 0;
}

int cmd_dynamics(const ScenarioFlags& flags) {
    emit_run(run_scenario(flags.build()));
    return 0;
}

// Peak-to-trough spread of F after the initial decay (from the first kick
// with F < e^-2, or the last third when F never drops that far).
double fluctuation_amplitude(const FidelitySeries& series) {
    const int kicks = series.kicks();
    int start = (2 * kicks) / 3;
    for (int n = 1; n <= kicks; ++n) {
        if (series.F(n) < std::exp(-2.0)) {
            start = n;
            break;
        }
    }
    double lo = 1.0;
    double hi = 0.0;
    for (int n = start; n <= kicks; ++n) {
        lo = std::min(lo, series.F(n));
        hi = std::max(hi, series.F(n));
    }
    return std::max(0.0, hi - lo);
}

int cmd_channel_compare(const ScenarioFlags& flags) {
    ScenarioConfig qkt_cfg = flags.build();
    qkt_cfg.source = SourceKind::qkt;
    const std::string out_path = qkt_cfg.out;
    qkt_cfg.out.clear();
    const RunOutput qkt_run = run_scenario(qkt_cfg);

    // Rate: explicit flag, else an exponential fit of the computed decay
    // (F = e^{-2 gamma n} makes gamma half the fitted log-F rate).
    double gamma_used;
    bool fitted = false;
    if (flags.gamma) {
        gamma_used = *flags.gamma;
    } else {
        const DecayFit fit = fit_decay(qkt_run.series, default_fit_window(qkt_run.series),
                                       DecayModel::exponential);
        gamma_used = std::max(0.0, 0.5 * fit.rate);
        fitted = true;
    }

    ScenarioConfig markov_cfg = qkt_cfg;
    markov_cfg.source = SourceKind::markovian;
    markov_cfg.gamma = gamma_used;
    markov_cfg.out.clear();
    const RunOutput markov_run = run_scenario(markov_cfg);

    std::ostringstream os;
    os << "# qkt-discord v" << version_string << " channel-compare\n";
    os << "# j=" << g15(qkt_cfg.j) << "\n# nu=" << g15(qkt_cfg.nu)
       << "\n# eta=" << g15(qkt_cfg.eta) << "\n# epsilon=" << g15(qkt_cfg.epsilon)
       << "\n# kicks=" << qkt_cfg.kicks << "\n";
    os << "# cx=" << g15(qkt_cfg.cx) << "\n# cy=" << g15(qkt_cfg.cy)
       << "\n# cz=" << g15(qkt_cfg.cz) << "\n";
    os << "# theta=" << g15(qkt_run.angles_used.theta)
       << "\n# phi=" << g15(qkt_run.angles_used.phi) << "\n";
    os << "# gamma=" << g15(gamma_used) << (fitted ? " (fitted)" : " (explicit)") << "\n";
    os << "# qkt_fluctuation_amplitude=" << g15(fluctuation_amplitude(qkt_run.series)) << "\n";
    os << "# markovian_fluctuation_amplitude="
       << g15(fluctuation_amplitude(markov_run.series)) << "\n";
    os << "n,F_qkt,alpha_qkt,Q_qkt,CC_qkt,REE_qkt,concurrence_qkt,MI_qkt,"
          "F_markov,Q_markov,CC_markov,REE_markov,concurrence_markov,MI_markov\n";
    for (std::size_t i = 0; i < qkt_run.rows.size(); ++i) {
        const CorrelationRecord& a = qkt_run.rows[i].rec;
        const CorrelationRecord& b = markov_run.rows[i].rec;
        os << qkt_run.rows[i].n << ',' << g15(a.F) << ',' << g15(a.alpha) << ',' << g15(a.q)
           << ',' << g15(a.cc) << ',' << g15(a.ree) << ',' << g15(a.concurrence) << ','
           << g15(a.mi) << ',' << g15(b.F) << ',' << g15(b.q) << ',' << g15(b.cc) << ','
           << g15(b.ree) << ',' << g15(b.concurrence) << ',' << g15(b.mi) << '\n';
    }
    if (out_path.empty())
        std::cout << os.str();
    else {
        write_file_atomic(out_path, os.str());
        std::cerr << "wrote " << out_path << "\n";
    }
    return 0;
}

struct OracleFlags {
    double cx = 0.95, cy = -0.85, cz = 0.85;
    double fd = 0.9;
    int alpha_steps = 64;
    int samples = 0;
    std::uint64_t seed = 42;
    int grid = 64;
    int refine = 40;
    std::optional<std::string> out;
};

// Draws a physical coefficient triple by rejection from the cube.
BellDiagonalParams random_bell(Xoshiro256pp& rng) {
    for (;;) {
        BellDiagonalParams c{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                             rng.uniform(-1.0, 1.0)};
        if (c.is_physical()) return c;
    }
}

int cmd_oracle(const OracleFlags& of) {
    const BellDiagonalParams c{of.cx, of.cy, of.cz};
    c.validate();
    if (!(of.fd >= 0.0 && of.fd <= 1.0)) throw ConfigError("fd", "must lie in [0, 1]");
    if (of.alpha_steps < 2) throw ConfigError("alpha-steps", "need at least 2");

    std::ostringstream os;
    os << "# qkt-discord v" << version_string << " oracle\n";
    os << "# cx=" << g15(of.cx) << "\n# cy=" << g15(of.cy) << "\n# cz=" << g15(of.cz)
       << "\n# F=" << g15(of.fd) << "\n# grid=" << of.grid << "\n# refine=" << of.refine
       << "\n";
    os << "alpha,Q_closed,Q_num,diff\n";

    double max_gap = 0.0;
    double closed_lo = std::numeric_limits<double>::infinity(), closed_hi = -closed_lo;
    double num_lo = closed_lo, num_hi = -closed_lo;
    const double root = std::sqrt(of.fd);
    for (int i = 0; i < of.alpha_steps; ++i) {
        const double alpha = std::numbers::pi * i / of.alpha_steps;
        const double q_closed = quantum_discord(c, of.fd, alpha);
        const NumericDiscord nd =
            discord_numeric(xstate(c, std::polar(root, alpha)), of.grid, of.refine);
        max_gap = std::max(max_gap, std::abs(q_closed - nd.q));
        closed_lo = std::min(closed_lo, q_closed);
        closed_hi = std::max(closed_hi, q_closed);
        num_lo = std::min(num_lo, nd.q);
        num_hi = std::max(num_hi, nd.q);
        os << g15(alpha) << ',' << g15(q_closed) << ',' << g15(nd.q) << ','
           << g15(q_closed - nd.q) << '\n';
    }

    std::cout << "alpha sweep at fixed (c, F): " << of.alpha_steps << " points\n";
    std::cout << "  max |Q_closed - Q_num|   = " << g15(max_gap) << "\n";
    std::cout << "  Q_num variation          = " << g15(num_hi - num_lo) << "\n";
    std::cout << "  Q_closed variation       = " << g15(closed_hi - closed_lo)
              << "  (diagnostic: the printed formula depends on alpha)\n";

    if (of.samples > 0) {
        Xoshiro256pp rng(of.seed);
        double sample_gap = 0.0;
        for (int s = 0; s < of.samples; ++s) {
            const BellDiagonalParams rc = random_bell(rng);
            const double F = rng.uniform();
            for (double alpha : {0.0, std::numbers::pi / 2.0, std::numbers::pi}) {
                const double q_closed = quantum_discord(rc, F, alpha);
                const NumericDiscord nd = discord_numeric(
                    xstate(rc, std::polar(std::sqrt(F), alpha)), of.grid, of.refine);
                sample_gap = std::max(sample_gap, std::abs(q_closed - nd.q));
            }
        }
        std::cout << "random samples (alpha in {0, pi/2, pi}, " << of.samples << " draws):\n";
        std::cout << "  max |Q_closed - Q_num|   = " << g15(sample_gap) << "\n";
    }

    if (of.out) {
        write_file_atomic(*of.out, os.str());
        std::cerr << "wrote " << *of.out << "\n";
    }
    return 0;
}

int cmd_sweep(const ScenarioFlags& flags, const std::string& axis,
              const std::vector<double>& values, int threads) {
    const ScenarioConfig base = flags.build();
    const SweepResult result = sweep(base, axis, values, threads);
    std::ostringstream os;
    result.write_summary_csv(os);
    std::cout << os.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kicked-top dephasing and two-qubit correlation toolkit"};
    app.set_version_flag("--version", std::string("qkt-discord ") + version_string);
    app.require_subcommand(1);

    ScenarioFlags fd_flags, dyn_flags, cc_flags, sweep_flags;

    CLI::App* fd = app.add_subcommand("fd", "fidelity series only (columns n,F,alpha)");
    fd_flags.attach(fd);

    CLI::App* dynamics = app.add_subcommand("dynamics", "full correlation record per kick");
    dyn_flags.attach(dynamics);

    CLI::App* chan =
        app.add_subcommand("channel-compare", "kicked-top vs Markovian source side by side");
    cc_flags.attach(chan);

    OracleFlags oracle_flags;
    CLI::App* oracle =
        app.add_subcommand("oracle", "closed-form vs numeric discord diagnostic");
    oracle->add_option("--cx", oracle_flags.cx, "coefficient c_x");
    oracle->add_option("--cy", oracle_flags.cy, "coefficient c_y");
    oracle->add_option("--cz", oracle_flags.cz, "coefficient c_z");
    oracle->add_option("--fd", oracle_flags.fd, "fidelity F for the alpha sweep");
    oracle->add_option("--alpha-steps", oracle_flags.alpha_steps, "alpha grid size on [0, pi)");
    oracle->add_option("--samples", oracle_flags.samples, "random (c, F) comparison draws");
    oracle->add_option("--seed", oracle_flags.seed, "seed for the random draws");
    oracle->add_option("--grid", oracle_flags.grid, "coarse measurement grid");
    oracle->add_option("--refine", oracle_flags.refine, "refinement rounds");
    oracle->add_option("--out", oracle_flags.out, "CSV path for the sweep table");

    std::string sweep_axis;
    std::vector<double> sweep_values;
    int sweep_threads = 1;
    CLI::App* sw = app.add_subcommand("sweep", "independent runs along one parameter axis");
    sweep_flags.attach(sw);
    sw->add_option("--sweep-axis", sweep_axis, "config field to vary")->required();
    sw->add_option("--sweep-values", sweep_values, "comma-separated values")
        ->required()
        ->delimiter(',');
    sw->add_option("--threads", sweep_threads, "parallel workers (results identical to serial)");

    try {
        app.parse(argc, argv);
        if (fd->parsed()) return cmd_fd(fd_flags);
        if (dynamics->parsed()) return cmd_dynamics(dyn_flags);
        if (chan->parsed()) return cmd_channel_compare(cc_flags);
        if (oracle->parsed()) return cmd_oracle(oracle_flags);
        if (sw->parsed()) return cmd_sweep(sweep_flags, sweep_axis, sweep_values, sweep_threads);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical invariant violated: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    }
}
