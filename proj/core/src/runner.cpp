#include "qkt/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qkt/errors.hpp"
#include "qkt/version.hpp"

namespace qkt {

namespace {

std::string g15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// Column headers in emission order for one config.
std::vector<std::string> header_names(const ScenarioConfig& cfg) {
    std::vector<std::string> names{"n"};
    for (Column c : cfg.columns) {
        if (c == Column::lambdas) {
            names.insert(names.end(), {"l1", "l2", "l3", "l4"});
        } else {
            names.emplace_back(column_name(c));
        }
    }
    if (cfg.oracle) names.emplace_back("Q_num");
    return names;
}

std::vector<double> row_values(const ScenarioConfig& cfg, const RunRow& row) {
    std::vector<double> vals;
    for (Column c : cfg.columns) {
        switch (c) {
            case Column::F: vals.push_back(row.rec.F); break;
            case Column::alpha: vals.push_back(row.rec.alpha); break;
            case Column::Q: vals.push_back(row.rec.q); break;
            case Column::CC: vals.push_back(row.rec.cc); break;
            case Column::REE: vals.push_back(row.rec.ree); break;
            case Column::concurrence: vals.push_back(row.rec.concurrence); break;
            case Column::MI: vals.push_back(row.rec.mi); break;
            case Column::lambdas:
                vals.insert(vals.end(), row.rec.lambda.begin(), row.rec.lambda.end());
                break;
        }
    }
    if (cfg.oracle) vals.push_back(row.q_num.value_or(0.0));
    return vals;
}

void emit_metadata(std::ostream& os, const RunOutput& out) {
    const ScenarioConfig& cfg = out.config;
    os << "# qkt-discord v" << version_string << "\n";
    if (cfg.preset) {
        os << "# preset=" << *cfg.preset << "\n";
        os << "# note=preset encodes the figure parameter set; datasets are validated by "
              "qualitative decay/revival properties, not reference tables\n";
    }
    os << "# source=" << (cfg.source == SourceKind::qkt ? "qkt" : "markovian") << "\n";
    if (cfg.source == SourceKind::qkt) {
        os << "# j=" << g15(cfg.j) << "\n"
           << "# nu=" << g15(cfg.nu) << "\n"
           << "# eta=" << g15(cfg.eta) << "\n"
           << "# epsilon=" << g15(cfg.epsilon) << "\n";
    } else {
        os << "# gamma=" << g15(cfg.gamma) << "\n";
    }
    os << "# kicks=" << cfg.kicks << "\n"
       << "# cx=" << g15(cfg.cx) << "\n"
       << "# cy=" << g15(cfg.cy) << "\n"
       << "# cz=" << g15(cfg.cz) << "\n";
    if (cfg.source == SourceKind::qkt) {
        if (cfg.angle_mode == AngleMode::random) os << "# seed=" << cfg.seed << "\n";
        os << "# theta=" << g15(out.angles_used.theta) << "\n"
           << "# phi=" << g15(out.angles_used.phi) << "\n";
    }
    os << "# columns=";
    for (std::size_t i = 0; i < cfg.columns.size(); ++i)
        os << column_name(cfg.columns[i]) << (i + 1 < cfg.columns.size() ? "," : "");
    os << "\n";
    os << "# oracle=" << (cfg.oracle ? "true" : "false") << "\n";
    os << "# qd_near_zero_kicks=" << out.qd_near_zero_kicks << "\n";
    if (out.max_oracle_gap)
        os << "# max_oracle_gap=" << g15(*out.max_oracle_gap) << "\n";
    if (out.clamp_log.count > 0)
        os << "# warning=theta2 clamped to [0,1] at " << out.clamp_log.count
           << " kicks, max excess " << g15(out.clamp_log.max_excess) << "\n";
}

} // namespace

void RunOutput::write_csv(std::ostream& os) const {
    emit_metadata(os, *this);
    const auto names = header_names(config);
    for (std::size_t i = 0; i < names.size(); ++i)
        os << names[i] << (i + 1 < names.size() ? "," : "\n");
    for (const RunRow& row : rows) {
        os << row.n;
        for (double v : row_values(config, row)) os << ',' << g15(v);
        os << '\n';
    }
}

std::string RunOutput::to_json_text() const {
    nlohmann::json meta;
    meta["version"] = version_string;
    if (config.preset) meta["preset"] = *config.preset;
    meta["source"] = config.source == SourceKind::qkt ? "qkt" : "markovian";
    if (config.source == SourceKind::qkt) {
        meta["j"] = config.j;
        meta["nu"] = config.nu;
        meta["eta"] = config.eta;
        meta["epsilon"] = config.epsilon;
        if (config.angle_mode == AngleMode::random) meta["seed"] = config.seed;
        meta["theta"] = angles_used.theta;
        meta["phi"] = angles_used.phi;
    } else {
        meta["gamma"] = config.gamma;
    }
    meta["kicks"] = config.kicks;
    meta["cx"] = config.cx;
    meta["cy"] = config.cy;
    meta["cz"] = config.cz;
    meta["oracle"] = config.oracle;
    meta["qd_near_zero_kicks"] = qd_near_zero_kicks;
    if (max_oracle_gap) meta["max_oracle_gap"] = *max_oracle_gap;
    if (clamp_log.count > 0) {
        meta["theta2_clamp_count"] = clamp_log.count;
        meta["theta2_clamp_max_excess"] = clamp_log.max_excess;
    }

    nlohmann::json doc;
    doc["meta"] = meta;
    doc["columns"] = header_names(config);
    nlohmann::json jrows = nlohmann::json::array();
    for (const RunRow& row : rows) {
        nlohmann::json r = nlohmann::json::array();
        r.push_back(row.n);
        for (double v : row_values(config, row)) r.push_back(v);
        jrows.push_back(std::move(r));
    }
    doc["rows"] = std::move(jrows);
    return doc.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path, "cannot open output file");
        out << text;
        out.flush();
        if (!out) throw IoError(path, "write failure");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError(path, "rename failure: " + ec.message());
}

RunOutput run_scenario(const ScenarioConfig& cfg_in) {
    ScenarioConfig cfg = cfg_in;
    cfg.columns = normalize_columns(cfg.columns);
    cfg.validate();

    RunOutput out;
    out.config = cfg;

    if (cfg.source == SourceKind::qkt) {
        KickedTopParams params;
        params.nu = cfg.nu;
        params.eta = cfg.eta;
        params.epsilon = cfg.epsilon;
        params.spin = SpinParams::make(cfg.j);

        const SpinOperatorSet ops = build_spin_operators(params.spin);
        out.angles_used = (cfg.angle_mode == AngleMode::random)
                              ? random_sphere_angles(cfg.seed)
                              : SpinCoherentAngles{cfg.theta0, cfg.phi0};
        const VectorC psi0 = spin_coherent_state(ops, out.angles_used);
        out.series = fidelity_series(params, ops, psi0, cfg.kicks);
    } else {
        out.series.epsilon = cfg.epsilon;
        out.series.f.resize(static_cast<std::size_t>(cfg.kicks) + 1);
        for (int n = 0; n <= cfg.kicks; ++n)
            out.series.f[static_cast<std::size_t>(n)] = markovian_amplitude(cfg.gamma, n);
    }

    const BellDiagonalParams bell = cfg.bell();
    out.rows.reserve(out.series.f.size());
    for (int n = 0; n <= cfg.kicks; ++n) {
        RunRow row;
        row.n = n;
        const Complex f = out.series.f[static_cast<std::size_t>(n)];
        row.rec = correlation_record(bell, f, &out.clamp_log);
        if (row.rec.q < 1e-4) ++out.qd_near_zero_kicks;
        if (cfg.oracle) {
            const NumericDiscord nd = discord_numeric(xstate(bell, f));
            row.q_num = nd.q;
            const double gap = std::abs(row.rec.q - nd.q);
            if (!out.max_oracle_gap || gap > *out.max_oracle_gap) out.max_oracle_gap = gap;
        }
        // Emission-time integrity check (exit code 3 at the CLI).
        if (std::abs(row.rec.cc - (row.rec.mi - row.rec.q)) > 1e-9)
            throw NumericalError("column integrity violated: CC != MI - Q at kick " +
                                 std::to_string(n));
        out.rows.push_back(std::move(row));
    }

    if (!cfg.out.empty()) {
        if (cfg.format == OutputFormat::csv) {
            std::ostringstream buf;
            out.write_csv(buf);
            write_file_atomic(cfg.out, buf.str());
        } else {
            write_file_atomic(cfg.out, out.to_json_text());
        }
    }
    return out;
}

namespace {

void set_axis(ScenarioConfig& cfg, const std::string& axis, double value) {
    if (axis == "j") cfg.j = value;
    else if (axis == "nu") cfg.nu = value;
    else if (axis == "eta") cfg.eta = value;
    else if (axis == "epsilon") cfg.epsilon = value;
    else if (axis == "kicks") cfg.kicks = static_cast<int>(std::llround(value));
    else if (axis == "cx") cfg.cx = value;
    else if (axis == "cy") cfg.cy = value;
    else if (axis == "cz") cfg.cz = value;
    else if (axis == "gamma") cfg.gamma = value;
    else if (axis == "theta0") { cfg.theta0 = value; cfg.angle_mode = AngleMode::explicit_angles; }
    else if (axis == "phi0") { cfg.phi0 = value; cfg.angle_mode = AngleMode::explicit_angles; }
    else if (axis == "seed") { cfg.seed = static_cast<std::uint64_t>(std::llround(value)); }
    else throw ConfigError("sweep-axis", "'" + axis + "' does not name a scalar config field");
}

std::string derived_out_path(const std::string& base, const std::string& axis, double value) {
    if (base.empty()) return {};
    const std::filesystem::path p(base);
    std::filesystem::path derived = p.parent_path();
    derived /= p.stem().string() + "_" + axis + "=" + g15(value) + p.extension().string();
    return derived.string();
}

SweepSummaryRow summarize(const RunOutput& run, double value) {
    SweepSummaryRow row;
    row.value = value;
    const int n = run.config.kicks;
    const int first = (2 * n) / 3;
    double sum = 0.0;
    int count = 0;
    for (int k = first; k <= n; ++k) {
        sum += run.rows[static_cast<std::size_t>(k)].rec.F;
        ++count;
    }
    row.final_window_mean_F = count > 0 ? sum / count : 0.0;

    if (run.series.f.size() >= 3) {
        const RevivalReport rep = detect_revivals(run.series, 0.5);
        row.revival_period = rep.estimated_period;
    }

    if (classify_cc_dynamics(run.config.bell()) == CCDynamicsClass::sudden_change) {
        const auto report = sudden_change_time(run.config.bell(),
                                               DephasingSource::from_series(run.series), n);
        if (report.found()) row.sudden_change_n = report.first();
    }

    row.max_oracle_gap = run.max_oracle_gap;
    double min_q = std::numeric_limits<double>::infinity();
    for (const RunRow& r : run.rows) min_q = std::min(min_q, r.rec.q);
    row.min_q = run.rows.empty() ? 0.0 : min_q;
    return row;
}

} // namespace

void SweepResult::write_summary_csv(std::ostream& os) const {
    os << "# qkt-discord v" << version_string << " sweep axis=" << axis << "\n";
    os << "value,final_mean_F,revival_period,sudden_change_n,max_oracle_gap,min_Q\n";
    for (const SweepSummaryRow& row : summary) {
        os << g15(row.value) << ',' << g15(row.final_window_mean_F) << ',';
        if (row.revival_period) os << g15(*row.revival_period);
        os << ',';
        if (row.sudden_change_n) os << g15(*row.sudden_change_n);
        os << ',';
        if (row.max_oracle_gap) os << g15(*row.max_oracle_gap);
        os << ',' << g15(row.min_q) << '\n';
    }
}

SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<double>& values, int threads) {
    SweepResult result;
    result.axis = axis;
    if (values.empty()) return result;  // empty sweep is a successful no-op

    // Validate the axis name up front (before spawning workers).
    {
        ScenarioConfig probe = base;
        set_axis(probe, axis, values.front());
    }

    result.runs.resize(values.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            try {
                ScenarioConfig cfg = base;
                set_axis(cfg, axis, values[i]);
                cfg.out = derived_out_path(base.out, axis, values[i]);
                result.runs[i] = run_scenario(cfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const int n_workers =
        std::max(1, std::min<int>(threads, static_cast<int>(values.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    result.summary.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        result.summary.push_back(summarize(result.runs[i], values[i]));
    return result;
}

} // namespace qkt
