// config.hpp — JSON run-configuration schema (strict: unknown keys rejected)

#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "lzm/analysis.hpp"
#include "lzm/bath.hpp"
#include "lzm/integrator.hpp"
#include "lzm/model.hpp"

namespace lzm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingleModeSpec {
    double omega_p{1.0};
    double eta_z{0.0};
    double eta_x{0.0};
    cplx f0{0.0};
};

using BathSpec = std::variant<SingleModeSpec, SpectralParams>;

inline BathModes build_bath(const BathSpec& spec) {
    if (const auto* sm = std::get_if<SingleModeSpec>(&spec))
        return single_mode(sm->omega_p, sm->eta_z, sm->eta_x, sm->f0);
    return discretize(std::get<SpectralParams>(spec));
}

struct SweepSpec {
    Axis anisotropy;
    Axis a_z;
    double t_obs{5.0};
    std::vector<double> frames;
};

struct FitSpec {
    int window{5};
    std::vector<double> alphas;  // empty: fit the configured bath as-is
};

struct RunConfig {
    ModelConfig model;
    BathSpec bath;
    PropagationConfig prop;
    std::optional<SweepSpec> sweep;
    std::optional<FitSpec> fit;
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed,
                         const std::set<std::string>& required) {
    if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
    for (const auto& key : required)
        if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
}

inline double number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return obj.at(key).get<double>();
}

inline double number_or(const json& obj, const std::string& where, const std::string& key,
                        double fallback) {
    return obj.contains(key) ? number(obj, where, key) : fallback;
}

inline DriveSpec parse_drive(const json& obj) {
    require_keys(obj, "model.drive",
                 {"type", "v", "Delta", "A_z", "omega_z", "A_x", "omega_x"}, {"type"});
    const std::string type = obj.at("type").get<std::string>();
    if (type == "linear") {
        require_keys(obj, "model.drive", {"type", "v", "Delta"}, {"v", "Delta"});
        LinearDrive drive{number(obj, "model.drive", "v"), number(obj, "model.drive", "Delta")};
        validate(DriveSpec{drive});
        return drive;
    }
    if (type == "periodic") {
        PeriodicDrive drive;
        drive.a_z = number_or(obj, "model.drive", "A_z", 0.0);
        drive.omega_z = number_or(obj, "model.drive", "omega_z", 1.0);
        drive.a_x = number_or(obj, "model.drive", "A_x", 0.0);
        drive.omega_x = number_or(obj, "model.drive", "omega_x", 1.0);
        validate(DriveSpec{drive});
        return drive;
    }
    throw ConfigError("model.drive.type: expected 'linear' or 'periodic'");
}

inline BathSpec parse_bath(const json& obj) {
    require_keys(obj, "bath",
                 {"mode", "omega_p", "eta_z", "eta_x", "f0", "alpha", "s", "omega_c", "omega_m",
                  "N_b"},
                 {"mode"});
    const std::string mode = obj.at("mode").get<std::string>();
    if (mode == "single") {
        require_keys(obj, "bath", {"mode", "omega_p", "eta_z", "eta_x", "f0"}, {"omega_p"});
        SingleModeSpec spec;
        spec.omega_p = number(obj, "bath", "omega_p");
        spec.eta_z = number_or(obj, "bath", "eta_z", 0.0);
        spec.eta_x = number_or(obj, "bath", "eta_x", 0.0);
        if (obj.contains("f0")) {
            const json& f0 = obj.at("f0");
            if (f0.is_number())
                spec.f0 = f0.get<double>();
            else if (f0.is_array() && f0.size() == 2 && f0[0].is_number() && f0[1].is_number())
                spec.f0 = cplx(f0[0].get<double>(), f0[1].get<double>());
            else
                throw ConfigError("bath.f0: expected a number or [re, im]");
        }
        return spec;
    }
    if (mode == "spectral") {
        require_keys(obj, "bath", {"mode", "alpha", "s", "omega_c", "omega_m", "N_b"},
                     {"alpha", "s", "omega_c", "omega_m", "N_b"});
        SpectralParams p;
        p.alpha = number(obj, "bath", "alpha");
        p.s = number(obj, "bath", "s");
        p.omega_c = number(obj, "bath", "omega_c");
        p.omega_m = number(obj, "bath", "omega_m");
        p.n_modes = static_cast<int>(number(obj, "bath", "N_b"));
        validate(p);
        return p;
    }
    throw ConfigError("bath.mode: expected 'single' or 'spectral'");
}

inline PropagationConfig parse_propagation(const json& obj) {
    require_keys(obj, "propagation",
                 {"M", "dt", "t_start", "t_end", "record_every", "noise", "seed",
                  "norm_tolerance", "n_max", "record_energy", "initial_spin", "eps_reg"},
                 {"M", "dt", "t_start", "t_end", "seed"});
    PropagationConfig cfg;
    cfg.multiplicity = static_cast<int>(number(obj, "propagation", "M"));
    cfg.dt = number(obj, "propagation", "dt");
    cfg.t_start = number(obj, "propagation", "t_start");
    cfg.t_end = number(obj, "propagation", "t_end");
    cfg.record_every = static_cast<int>(number_or(obj, "propagation", "record_every", 100));
    cfg.noise = number_or(obj, "propagation", "noise", 1e-4);
    cfg.seed = static_cast<std::uint64_t>(number(obj, "propagation", "seed"));
    cfg.norm_tolerance = number_or(obj, "propagation", "norm_tolerance", 1e-6);
    cfg.n_max = static_cast<int>(number_or(obj, "propagation", "n_max", -1.0));
    cfg.initial_spin = static_cast<int>(number_or(obj, "propagation", "initial_spin", 0.0));
    cfg.eps_reg = number_or(obj, "propagation", "eps_reg", 1e-8);
    if (obj.contains("record_energy")) cfg.record_energy = obj.at("record_energy").get<bool>();
    validate(cfg);
    return cfg;
}

inline Axis parse_axis(const json& obj, const std::string& where) {
    require_keys(obj, where, {"min", "max", "count"}, {"min", "max", "count"});
    Axis axis{number(obj, where, "min"), number(obj, where, "max"),
              static_cast<int>(number(obj, where, "count"))};
    if (axis.count < 2) throw ConfigError(where + ".count: must be >= 2");
    return axis;
}

inline SweepSpec parse_sweep(const json& obj) {
    require_keys(obj, "sweep", {"D", "A_z", "t_obs", "frames"}, {"D", "A_z", "t_obs"});
    SweepSpec spec;
    spec.anisotropy = parse_axis(obj.at("D"), "sweep.D");
    spec.a_z = parse_axis(obj.at("A_z"), "sweep.A_z");
    spec.t_obs = number(obj, "sweep", "t_obs");
    if (obj.contains("frames"))
        for (const auto& v : obj.at("frames")) spec.frames.push_back(v.get<double>());
    return spec;
}

inline FitSpec parse_fit(const json& obj) {
    require_keys(obj, "fit", {"window", "alphas"}, {});
    FitSpec spec;
    spec.window = static_cast<int>(number_or(obj, "fit", "window", 5.0));
    if (obj.contains("alphas"))
        for (const auto& v : obj.at("alphas")) spec.alphas.push_back(v.get<double>());
    return spec;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& doc) {
    detail::require_keys(doc, "config", {"model", "bath", "propagation", "sweep", "fit"},
                         {"model", "bath", "propagation"});
    RunConfig cfg;
    const auto& model = doc.at("model");
    detail::require_keys(model, "model", {"D", "drive"}, {"D", "drive"});
    cfg.model.anisotropy = detail::number(model, "model", "D");
    cfg.model.drive = detail::parse_drive(model.at("drive"));
    cfg.bath = detail::parse_bath(doc.at("bath"));
    cfg.prop = detail::parse_propagation(doc.at("propagation"));
    if (doc.contains("sweep")) cfg.sweep = detail::parse_sweep(doc.at("sweep"));
    if (doc.contains("fit")) cfg.fit = detail::parse_fit(doc.at("fit"));
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError("malformed JSON in " + path + ": " + ex.what());
    }
    try {
        return parse_config(doc);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("invalid configuration: ") + ex.what());
    }
}

}  // namespace lzm
