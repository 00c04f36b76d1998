#include "qotto/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "qotto/errors.hpp"
#include "qotto/numeric.hpp"

namespace qotto {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double out;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'");
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    int out;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError("key '" + key + "': cannot parse integer from '" + v + "'");
    return out;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Variant parse_variant(const std::string& key, const std::string& v) {
    if (v == "bare") return Variant::kBare;
    if (v == "adiabatic") return Variant::kAdiabatic;
    if (v == "sta") return Variant::kSta;
    if (v == "beqe") return Variant::kBeqe;
    if (v == "beqe-single-stroke") return Variant::kBeqeSingleStroke;
    if (v == "beqe-both-strokes") return Variant::kBeqeBothStrokes;
    throw ConfigError("key '" + key + "': unknown variant '" + v + "'");
}

std::vector<double> parse_tau_grid(const std::string& v) {
    if (v.rfind("geom(", 0) == 0) {
        if (v.back() != ')') throw ConfigError("key 'tau_grid': malformed geom(...) expression");
        std::vector<std::string> args = split_list(v.substr(5, v.size() - 6));
        if (args.size() != 3)
            throw ConfigError("key 'tau_grid': geom takes (lo, hi, n), got " +
                              std::to_string(args.size()) + " arguments");
        double lo = parse_double("tau_grid", args[0]);
        double hi = parse_double("tau_grid", args[1]);
        int n = parse_int("tau_grid", args[2]);
        if (n < 2) throw ConfigError("key 'tau_grid': geom needs at least 2 points");
        return geometric_grid(lo, hi, static_cast<std::size_t>(n));
    }
    std::vector<double> taus;
    for (const std::string& item : split_list(v)) taus.push_back(parse_double("tau_grid", item));
    return taus;
}

}  // namespace

RunManifest parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key)) throw ConfigError("duplicate key '" + key + "'");
        kv[key] = value;
    }

    RunManifest m;
    CycleConfig& c = m.config;
    auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return "";
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto require = [&](const char* key) -> std::string {
        std::string v = take(key);
        if (v.empty()) throw ConfigError(std::string("missing required key '") + key + "'");
        return v;
    };

    std::string model = take("model");
    if (model.empty() || model == "tim") {
        c.model = Model::kTim;
    } else if (model == "ltim") {
        c.model = Model::kLtim;
    } else {
        throw ConfigError("key 'model': expected tim or ltim, got '" + model + "'");
    }

    c.L = parse_int("L", require("L"));
    c.h1 = parse_double("h1", require("h1"));
    c.h2 = parse_double("h2", require("h2"));
    c.T_hot = parse_double("T_hot", require("T_hot"));
    c.T_cold = parse_double("T_cold", require("T_cold"));
    m.tau_grid = parse_tau_grid(require("tau_grid"));

    if (std::string v = take("tau_hot"); !v.empty()) c.tau_hot = parse_double("tau_hot", v);
    if (std::string v = take("tau_cold"); !v.empty()) c.tau_cold = parse_double("tau_cold", v);

    m.variants = {Variant::kBare};
    if (std::string v = take("variants"); !v.empty()) {
        m.variants.clear();
        for (const std::string& item : split_list(v))
            m.variants.push_back(parse_variant("variants", item));
        if (m.variants.empty()) throw ConfigError("key 'variants': list is empty");
    }

    if (std::string v = take("cutoff.kind"); !v.empty()) {
        if (v == "kz-critical") {
            c.cutoff.kind = CutoffKind::kKzCritical;
        } else if (v == "non-critical") {
            c.cutoff.kind = CutoffKind::kNonCritical;
        } else if (v == "constant") {
            c.cutoff.kind = CutoffKind::kConstant;
        } else {
            throw ConfigError(
                "key 'cutoff.kind': expected kz-critical, non-critical or constant, got '" + v +
                "'");
        }
    }
    if (std::string v = take("cutoff.C1"); !v.empty()) c.cutoff.C1 = parse_double("cutoff.C1", v);
    if (std::string v = take("cutoff.C2"); !v.empty()) c.cutoff.C2 = parse_double("cutoff.C2", v);
    if (std::string v = take("cutoff.C3"); !v.empty()) c.cutoff.C3 = parse_double("cutoff.C3", v);
    if (std::string v = take("cutoff.value"); !v.empty())
        c.cutoff.value = parse_double("cutoff.value", v);
    if (std::string v = take("gamma"); !v.empty()) c.cutoff.gamma = parse_double("gamma", v);

    if (std::string v = take("sta.truncation"); !v.empty()) {
        if (v == "exact") {
            c.sta_exact = true;
        } else {
            c.sta_exact = false;
            c.sta_M = parse_int("sta.truncation", v);
        }
    }

    if (std::string v = take("cycles"); !v.empty()) c.cycles = parse_int("cycles", v);
    if (std::string v = take("integrator.steps"); !v.empty())
        c.ramp_steps = parse_int("integrator.steps", v);

    if (std::string v = take("boundary"); !v.empty()) {
        if (v == "open") {
            c.boundary = Boundary::kOpen;
        } else if (v == "periodic") {
            c.boundary = Boundary::kPeriodic;
        } else {
            throw ConfigError("key 'boundary': expected open or periodic, got '" + v + "'");
        }
    }
    if (std::string v = take("J"); !v.empty()) c.J = parse_double("J", v);
    if (std::string v = take("Bz"); !v.empty()) c.Bz = parse_double("Bz", v);

    if (!kv.empty()) throw ConfigError("unknown key '" + kv.begin()->first + "'");

    // Manifest invariants, then one full config validation per variant.
    if (m.tau_grid.empty()) throw ConfigError("key 'tau_grid': grid is empty");
    for (std::size_t i = 0; i < m.tau_grid.size(); ++i) {
        if (!(m.tau_grid[i] > 0.0)) throw ConfigError("key 'tau_grid': entries must be positive");
        if (i > 0 && !(m.tau_grid[i] > m.tau_grid[i - 1]))
            throw ConfigError("key 'tau_grid': entries must be strictly increasing");
    }
    for (Variant v : m.variants) {
        CycleConfig probe = c;
        probe.variant = v;
        probe.tau1 = probe.tau2 = m.tau_grid.front();
        probe.validate();
    }
    c.variant = m.variants.front();
    return m;
}

RunManifest parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string variant_label(Variant v, const CycleConfig& config) {
    if (v == Variant::kSta && !config.sta_exact)
        return "sta-m" + std::to_string(config.sta_M);
    return variant_name(v);
}

namespace {

RunManifest figure_base() {
    RunManifest m;
    m.config.model = Model::kTim;
    m.config.L = 1000;
    m.config.h1 = 10.0;
    m.config.h2 = 1.0;
    m.config.T_hot = 20.0;
    m.config.T_cold = 1.0;
    m.tau_grid = geometric_grid(5.0, 5000.0, 40);
    return m;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"};
}

std::vector<RunManifest> preset(const std::string& name) {
    if (name == "fig3") {
        RunManifest m = figure_base();
        m.preset_name = name;
        m.config.cutoff = {CutoffKind::kKzCritical, 1.0, 0.0, 0.0, 0.0, 6.5};
        m.variants = {Variant::kBare, Variant::kSta, Variant::kAdiabatic, Variant::kBeqe};
        m.output = "fig3_sweep.csv";
        return {m};
    }
    if (name == "fig4") {
        RunManifest m = figure_base();
        m.preset_name = name;
        m.kind = ProductKind::kModes;
        m.variants = {Variant::kAdiabatic};
        m.tau_grid = {100.0};
        m.output = "fig4_modes.csv";
        return {m};
    }
    if (name == "fig5" || name == "fig8") {
        RunManifest a = figure_base();
        a.preset_name = name;
        a.config.cutoff = {CutoffKind::kConstant, 1.0, 0.0, 0.0, 2.1, 9.0};
        a.variants = name == "fig5"
                         ? std::vector<Variant>{Variant::kBare, Variant::kAdiabatic, Variant::kBeqe}
                         : std::vector<Variant>{Variant::kBare, Variant::kSta, Variant::kAdiabatic,
                                                Variant::kBeqe};
        a.output = name + "_dstar2.1_sweep.csv";
        RunManifest b = a;
        b.config.cutoff = {CutoffKind::kConstant, 1.0, 0.0, 0.0, 0.3, 62.0};
        b.output = name + "_dstar0.3_sweep.csv";
        return {a, b};
    }
    if (name == "fig6") {
        RunManifest m = figure_base();
        m.preset_name = name;
        m.config.cutoff = {CutoffKind::kConstant, 1.0, 0.0, 0.0, 0.3, 62.0};
        m.variants = {Variant::kBare, Variant::kAdiabatic, Variant::kBeqe,
                      Variant::kBeqeSingleStroke};
        m.output = "fig6_sweep.csv";
        return {m};
    }
    if (name == "fig7" || name == "fig9") {
        RunManifest a = figure_base();
        a.preset_name = name;
        a.config.h2 = 0.5;
        a.config.cutoff = {CutoffKind::kNonCritical, 1.0, 2.0, 0.02, 0.0, 6.5};
        a.variants = {Variant::kBare, Variant::kAdiabatic, Variant::kBeqe};
        a.output = name + "_h2_0.5_sweep.csv";
        RunManifest b = a;
        b.config.h2 = 0.8;
        b.config.cutoff.C3 = 0.08;
        b.output = name + "_h2_0.8_sweep.csv";
        return {a, b};
    }
    if (name == "fig10") {
        RunManifest m;
        m.preset_name = name;
        m.config.model = Model::kLtim;
        m.config.L = 6;
        m.config.h1 = 10.0;
        m.config.h2 = 0.75;
        m.config.T_hot = 500.0;
        m.config.T_cold = 0.1;
        m.config.J = 1.0;
        m.config.Bz = 1.0;
        m.config.boundary = Boundary::kOpen;
        m.config.cutoff = {CutoffKind::kKzCritical, 1.0, 0.0, 0.0, 0.0, 1.0};
        m.variants = {Variant::kBare, Variant::kBeqe};
        m.tau_grid = geometric_grid(5.0, 5000.0, 40);
        m.output = "fig10_sweep.csv";
        return {m};
    }
    throw ConfigError("unknown preset '" + name + "' (known: fig3..fig10)");
}

}  // namespace qotto
