#pragma once

#include <string>
#include <vector>

#include "qotto/cycle.hpp"

namespace qotto {

enum class ProductKind { kSweep, kModes };

// One runnable product: a tau sweep table or a per-mode profile table.
struct RunManifest {
    ProductKind kind = ProductKind::kSweep;
    CycleConfig config;
    std::vector<double> tau_grid;
    std::vector<Variant> variants;
    std::string output = "-";  // file path, or "-" for stdout
    std::string preset_name;
};

// Parses a flat key = value document (# comments, comma lists). Recognized
// keys: model, L, h1, h2, T_hot, T_cold, tau_grid, tau_hot, tau_cold,
// variants, cutoff.kind, cutoff.C1, cutoff.C2, cutoff.C3, cutoff.value,
// gamma, sta.truncation, cycles, integrator.steps, boundary, J, Bz.
// tau_grid accepts an explicit increasing list or geom(lo, hi, n).
RunManifest parse_config(const std::string& text);
RunManifest parse_config_file(const std::string& path);

// Built-in figure presets fig3..fig10; caption parameters, default tau grid
// of 40 geometric points in [5, 5000]. Some presets carry two products.
std::vector<RunManifest> preset(const std::string& name);
std::vector<std::string> preset_names();

std::string variant_label(Variant v, const CycleConfig& config);

}  // namespace qotto
