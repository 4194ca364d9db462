#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qkt/correlations.hpp"
#include "qkt/dephasing.hpp"

namespace qkt {

/// Output columns; `lambdas` expands to l1..l4.
enum class Column { F, alpha, Q, CC, REE, concurrence, MI, lambdas };

std::vector<Column> all_columns();
const char* column_name(Column c);
Column column_from_name(const std::string& name);  // throws ConfigError

/// Canonical emission order with duplicates dropped.
std::vector<Column> normalize_columns(const std::vector<Column>& requested);

enum class OutputFormat { csv, json };
enum class SourceKind { qkt, markovian };
enum class AngleMode { random, explicit_angles };

/// One scenario: top parameters, initial two-qubit coefficients, the
/// dephasing source, and output selection. JSON schema and flag overrides
/// are documented in the README.
struct ScenarioConfig {
    double j = 100.0;
    double nu = 1.5707963267948966;  // pi/2
    double eta = 20.0;
    double epsilon = 0.001;
    int kicks = 3000;

    double cx = 0.95;
    double cy = -0.85;
    double cz = 0.85;

    AngleMode angle_mode = AngleMode::random;
    std::uint64_t seed = 42;
    double theta0 = 0.0;  // used when angle_mode == explicit_angles
    double phi0 = 0.0;

    SourceKind source = SourceKind::qkt;
    double gamma = 0.001;  // markovian rate, used when source == markovian

    std::vector<Column> columns = all_columns();
    bool oracle = false;  // add the numeric-discord column Q_num

    std::string out;  // empty = no file
    OutputFormat format = OutputFormat::csv;
    std::optional<std::string> preset;

    BellDiagonalParams bell() const { return {cx, cy, cz}; }
    void validate() const;  // throws ConfigError with the offending key
};

/// Figure presets: fig1-chaotic, fig1-regular, fig2, fig3.
ScenarioConfig preset_config(const std::string& name);  // throws ConfigError
std::vector<std::string> preset_names();

/// Parses a scenario from a JSON document (text). Unknown keys are
/// rejected. Keys absent from the document keep the base values.
ScenarioConfig scenario_from_json_text(const std::string& text,
                                       const ScenarioConfig& base = {});
ScenarioConfig scenario_from_json_file(const std::string& path,
                                       const ScenarioConfig& base = {});

/// One emitted row: kick index plus the correlation record (Q_num only
/// holds a value when the oracle column is enabled).
struct RunRow {
    int n = 0;
    CorrelationRecord rec;
    std::optional<double> q_num;
};

/// A completed run: config echo, the angles/seed actually used, the
/// amplitude series, rows, and run-level diagnostics surfaced in the
/// metadata header.
struct RunOutput {
    ScenarioConfig config;
    SpinCoherentAngles angles_used{};
    FidelitySeries series;     // the amplitudes the rows were derived from
    std::vector<RunRow> rows;  // rows.size() == kicks + 1

    ThetaClampLog clamp_log;
    int qd_near_zero_kicks = 0;            // kicks with Q < 1e-4
    std::optional<double> max_oracle_gap;  // max |Q - Q_num| when oracle enabled

    void write_csv(std::ostream& os) const;
    std::string to_json_text() const;
};

/// Builds operators once, computes the amplitude series (kicked top or
/// Markovian), maps every f_n through the correlations module and emits
/// the requested columns. Deterministic: identical (config, seed) give
/// bit-identical output. Writes config.out atomically when set.
RunOutput run_scenario(const ScenarioConfig& cfg);

/// Per-run summary line of a sweep.
struct SweepSummaryRow {
    double value = 0.0;
    double final_window_mean_F = 0.0;       // mean F over the last third
    std::optional<double> revival_period;   // detect_revivals at threshold 0.5
    std::optional<double> sudden_change_n;  // first crossing, sudden_change class only
    std::optional<double> max_oracle_gap;
    double min_q = 0.0;
};

struct SweepResult {
    std::string axis;
    std::vector<RunOutput> runs;
    std::vector<SweepSummaryRow> summary;

    void write_summary_csv(std::ostream& os) const;
};

/// Independent runs of `base` with `axis` set to each value (axis names a
/// scalar config field: j, nu, eta, epsilon, kicks, cx, cy, cz, gamma,
/// theta0, phi0, seed). Runs execute on `threads` workers; results are
/// identical to serial execution. Per-run files derive from base.out as
/// <stem>_<axis>=<value><ext>.
SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<double>& values, int threads = 1);

/// Writes text to path atomically (write to temporary, then rename).
void write_file_atomic(const std::string& path, const std::string& text);

} // namespace qkt
