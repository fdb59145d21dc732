#include "config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trackctl/errors.hpp"

namespace trackctl::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& detail) {
    throw ConfigError("config: " + field + ": " + detail);
}

const json& require(const json& parent, const std::string& key, const std::string& path) {
    auto it = parent.find(key);
    if (it == parent.end()) {
        fail(path, "missing required field");
    }
    return *it;
}

Matrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        fail(path, "expected a non-empty array of rows");
    }
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) {
        fail(path, "expected rows to be non-empty arrays of numbers");
    }
    const std::size_t cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            fail(path, "ragged rows: row " + std::to_string(i) + " does not have " +
                           std::to_string(cols) + " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[i][c].is_number()) {
                fail(path, "entry (" + std::to_string(i) + ", " + std::to_string(c) +
                               ") is not a number");
            }
            m(i, c) = j[i][c].get<double>();
        }
    }
    if (!m.all_finite()) {
        fail(path, "matrix contains non-finite entries");
    }
    return m;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config: JSON parse failure: ") + err.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config: top level must be a JSON object");
    }

    RunConfig cfg;

    const json& plant = require(root, "plant", "plant");
    cfg.plant.a = parse_matrix(require(plant, "A", "plant.A"), "plant.A");
    cfg.plant.b = parse_matrix(require(plant, "B", "plant.B"), "plant.B");
    cfg.plant.c = parse_matrix(require(plant, "C", "plant.C"), "plant.C");
    cfg.plant.x0 = parse_matrix(require(plant, "x0", "plant.x0"), "plant.x0");

    const json& reference = require(root, "reference", "reference");
    cfg.reference.am = parse_matrix(require(reference, "Am", "reference.Am"), "reference.Am");
    cfg.reference.cm = parse_matrix(require(reference, "Cm", "reference.Cm"), "reference.Cm");
    cfg.reference.x0m = parse_matrix(require(reference, "x0m", "reference.x0m"), "reference.x0m");

    const json& gain = require(root, "gain", "gain");
    const json& mode = require(gain, "mode", "gain.mode");
    if (!mode.is_string()) {
        fail("gain.mode", "must be \"target\" or \"explicit\"");
    }
    const std::string mode_text = mode.get<std::string>();
    if (mode_text == "target") {
        cfg.mode = GainMode::target;
        cfg.a_cl_target = parse_matrix(require(gain, "a_cl", "gain.a_cl"), "gain.a_cl");
        if (gain.contains("K")) {
            fail("gain.K", "not allowed in target mode (exactly one gain spec)");
        }
    } else if (mode_text == "explicit") {
        cfg.mode = GainMode::explicit_k;
        cfg.k = parse_matrix(require(gain, "K", "gain.K"), "gain.K");
        if (gain.contains("a_cl")) {
            fail("gain.a_cl", "not allowed in explicit mode (exactly one gain spec)");
        }
    } else {
        fail("gain.mode", "unknown mode \"" + mode_text + "\", expected \"target\" or \"explicit\"");
    }
    if (gain.contains("q")) {
        cfg.q = parse_matrix(gain["q"], "gain.q");
    }

    if (root.contains("simulation")) {
        const json& sim = root["simulation"];
        if (sim.contains("horizon")) {
            if (!sim["horizon"].is_number_integer() || sim["horizon"].get<int>() < 1) {
                fail("simulation.horizon", "must be a positive integer");
            }
            cfg.horizon = sim["horizon"].get<int>();
        }
        if (sim.contains("disturbance")) {
            const json& dist = sim["disturbance"];
            Disturbance d;
            const json& alpha = require(dist, "alpha", "simulation.disturbance.alpha");
            if (!alpha.is_number()) {
                fail("simulation.disturbance.alpha", "must be a number");
            }
            d.alpha = alpha.get<double>();
            d.beta = parse_matrix(require(dist, "beta", "simulation.disturbance.beta"),
                                  "simulation.disturbance.beta");
            cfg.disturbance = std::move(d);
        }
    }

    if (root.contains("tolerance")) {
        const json& tol = root["tolerance"];
        ToleranceSpec spec;
        const json& eps = require(tol, "epsilon", "tolerance.epsilon");
        if (!eps.is_number()) {
            fail("tolerance.epsilon", "must be a number");
        }
        spec.epsilon = eps.get<double>();
        const json& t = require(tol, "T", "tolerance.T");
        if (!t.is_number_integer()) {
            fail("tolerance.T", "must be an integer");
        }
        spec.t = t.get<int>();
        try {
            spec.validate();
        } catch (const Error& err) {
            throw ConfigError(std::string("config: tolerance: ") + err.what());
        }
        cfg.tolerance = spec;
    }

    // Cross-field dimension checks, reported with config field names.
    try {
        cfg.plant.validate();
        cfg.reference.validate(cfg.plant.p());
        const std::size_t n = cfg.plant.n();
        if (cfg.mode == GainMode::target) {
            if (cfg.a_cl_target.rows() != n || cfg.a_cl_target.cols() != n) {
                fail("gain.a_cl", "must be " + std::to_string(n) + "x" + std::to_string(n));
            }
        } else {
            if (cfg.k.rows() != cfg.plant.m() || cfg.k.cols() != n) {
                fail("gain.K", "must be " + std::to_string(cfg.plant.m()) + "x" + std::to_string(n));
            }
        }
        if (cfg.q.empty()) {
            cfg.q = Matrix::identity(n);
        } else if (cfg.q.rows() != n || cfg.q.cols() != n || !is_symmetric(cfg.q)) {
            fail("gain.q", "must be a symmetric " + std::to_string(n) + "x" + std::to_string(n) +
                               " matrix");
        }
        if (cfg.disturbance &&
            (cfg.disturbance->beta.rows() != n || cfg.disturbance->beta.cols() != 1)) {
            fail("simulation.disturbance.beta", "must be " + std::to_string(n) + "x1");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }

    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot read file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

}  // namespace trackctl::cli
