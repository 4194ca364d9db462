#include "qkt/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qkt/errors.hpp"

namespace qkt {

using nlohmann::json;

std::vector<Column> all_columns() {
    return {Column::F,   Column::alpha,       Column::Q,  Column::CC,
            Column::REE, Column::concurrence, Column::MI, Column::lambdas};
}

const char* column_name(Column c) {
    switch (c) {
        case Column::F: return "F";
        case Column::alpha: return "alpha";
        case Column::Q: return "Q";
        case Column::CC: return "CC";
        case Column::REE: return "REE";
        case Column::concurrence: return "concurrence";
        case Column::MI: return "MI";
        case Column::lambdas: return "lambdas";
    }
    return "?";
}

Column column_from_name(const std::string& name) {
    for (Column c : all_columns())
        if (name == column_name(c)) return c;
    throw ConfigError("columns", "unknown column '" + name + "'");
}

// Canonical order, duplicates dropped; keeps the CSV layout stable no
// matter how the request was spelled.
std::vector<Column> normalize_columns(const std::vector<Column>& requested) {
    std::vector<Column> out;
    for (Column c : all_columns())
        if (std::find(requested.begin(), requested.end(), c) != requested.end())
            out.push_back(c);
    return out;
}

namespace {

void expect_keys(const json& obj, const char* where, const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            throw ConfigError(item.key(), std::string("unknown key in ") + where);
}

double get_number(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
}

} // namespace

void ScenarioConfig::validate() const {
    try {
        SpinParams::make(j);
    } catch (const std::exception& e) {
        throw ConfigError("j", e.what());
    }
    if (!std::isfinite(nu)) throw ConfigError("nu", "must be finite");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw ConfigError("eta", "must be >= 0");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon", "must be >= 0");
    if (kicks < 0) throw ConfigError("kicks", "must be >= 0");
    if (!bell().is_physical())
        throw ConfigError("cx,cy,cz", "coefficients describe no physical state");
    if (angle_mode == AngleMode::explicit_angles) {
        if (!(theta0 >= 0.0 && theta0 <= std::numbers::pi))
            throw ConfigError("theta0", "must lie in [0, pi]");
        if (!(phi0 >= 0.0 && phi0 < 2.0 * std::numbers::pi))
            throw ConfigError("phi0", "must lie in [0, 2*pi)");
    }
    if (source == SourceKind::markovian && (!(gamma >= 0.0) || !std::isfinite(gamma)))
        throw ConfigError("gamma", "must be >= 0");
}

ScenarioConfig preset_config(const std::string& name) {
    ScenarioConfig cfg;  // defaults carry J=100, nu=pi/2, epsilon=0.001, fig-2 coefficients
    cfg.preset = name;
    if (name == "fig1-chaotic") {
        cfg.eta = 20.0;
        cfg.kicks = 3000;
        cfg.columns = {Column::F, Column::alpha};
    } else if (name == "fig1-regular") {
        cfg.eta = 0.1;
        cfg.kicks = 3000;
        cfg.columns = {Column::F, Column::alpha};
    } else if (name == "fig2") {
        cfg.eta = 20.0;
        cfg.kicks = 3000;
    } else if (name == "fig3") {
        cfg.eta = 0.1;
        cfg.kicks = 3300;  // long-time panel extends past 3000 kicks
    } else {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
    return cfg;
}

std::vector<std::string> preset_names() {
    return {"fig1-chaotic", "fig1-regular", "fig2", "fig3"};
}

ScenarioConfig scenario_from_json_text(const std::string& text, const ScenarioConfig& base) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config", "document must be a JSON object");

    expect_keys(doc, "config",
                {"j", "nu", "eta", "epsilon", "kicks", "cx", "cy", "cz", "initial", "source",
                 "columns", "oracle", "out", "format", "preset"});

    ScenarioConfig cfg = base;
    if (doc.contains("preset")) {
        if (!doc["preset"].is_string()) throw ConfigError("preset", "expected a string");
        cfg = preset_config(doc["preset"].get<std::string>());
    }

    if (doc.contains("j")) cfg.j = get_number(doc, "j");
    if (doc.contains("nu")) cfg.nu = get_number(doc, "nu");
    if (doc.contains("eta")) cfg.eta = get_number(doc, "eta");
    if (doc.contains("epsilon")) cfg.epsilon = get_number(doc, "epsilon");
    if (doc.contains("kicks")) {
        if (!doc["kicks"].is_number_integer()) throw ConfigError("kicks", "expected an integer");
        cfg.kicks = doc["kicks"].get<int>();
    }
    if (doc.contains("cx")) cfg.cx = get_number(doc, "cx");
    if (doc.contains("cy")) cfg.cy = get_number(doc, "cy");
    if (doc.contains("cz")) cfg.cz = get_number(doc, "cz");

    if (doc.contains("initial")) {
        const json& ini = doc["initial"];
        if (!ini.is_object()) throw ConfigError("initial", "expected an object");
        expect_keys(ini, "initial", {"mode", "seed", "theta", "phi"});
        const std::string mode = ini.value("mode", "random");
        if (mode == "random") {
            cfg.angle_mode = AngleMode::random;
            if (ini.contains("seed")) {
                if (!ini["seed"].is_number_unsigned() && !ini["seed"].is_number_integer())
                    throw ConfigError("seed", "expected an integer");
                cfg.seed = ini["seed"].get<std::uint64_t>();
            }
        } else if (mode == "explicit") {
            cfg.angle_mode = AngleMode::explicit_angles;
            if (!ini.contains("theta") || !ini.contains("phi"))
                throw ConfigError("initial", "explicit mode needs theta and phi");
            cfg.theta0 = get_number(ini, "theta");
            cfg.phi0 = get_number(ini, "phi");
        } else {
            throw ConfigError("initial.mode", "must be 'random' or 'explicit'");
        }
    }

    if (doc.contains("source")) {
        const json& src = doc["source"];
        if (!src.is_object()) throw ConfigError("source", "expected an object");
        expect_keys(src, "source", {"kind", "gamma"});
        const std::string kind = src.value("kind", "qkt");
        if (kind == "qkt") {
            cfg.source = SourceKind::qkt;
        } else if (kind == "markovian") {
            cfg.source = SourceKind::markovian;
            if (src.contains("gamma")) cfg.gamma = get_number(src, "gamma");
        } else {
            throw ConfigError("source.kind", "must be 'qkt' or 'markovian'");
        }
    }

    if (doc.contains("columns")) {
        const json& cols = doc["columns"];
        if (!cols.is_array()) throw ConfigError("columns", "expected an array of names");
        std::vector<Column> req;
        for (const json& v : cols) {
            if (!v.is_string()) throw ConfigError("columns", "expected strings");
            req.push_back(column_from_name(v.get<std::string>()));
        }
        cfg.columns = req;
    }
    cfg.columns = normalize_columns(cfg.columns);

    if (doc.contains("oracle")) {
        if (!doc["oracle"].is_boolean()) throw ConfigError("oracle", "expected a boolean");
        cfg.oracle = doc["oracle"].get<bool>();
    }
    if (doc.contains("out")) {
        if (!doc["out"].is_string()) throw ConfigError("out", "expected a string");
        cfg.out = doc["out"].get<std::string>();
    }
    if (doc.contains("format")) {
        const std::string f = doc["format"].get<std::string>();
        if (f == "csv")
            cfg.format = OutputFormat::csv;
        else if (f == "json")
            cfg.format = OutputFormat::json;
        else
            throw ConfigError("format", "must be 'csv' or 'json'");
    }
    return cfg;
}

ScenarioConfig scenario_from_json_file(const std::string& path, const ScenarioConfig& base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError(path, "read failure");
    return scenario_from_json_text(buf.str(), base);
}

} // namespace qkt
