#pragma once

#include <string>
#include <vector>

#include "qotto/manifest.hpp"

namespace qotto {

// Sweep table (variant, tau, W, abs_W, eta, P, Q_in, Q_out). Failed rows
// carry nan fields; their errors are reported in outcome.errors.
std::string sweep_csv(const CycleConfig& config, const std::vector<Variant>& variants,
                      const std::vector<double>& taus, std::vector<std::string>* errors = nullptr);

// Formats precomputed sweep rows (same table as sweep_csv).
std::string sweep_rows_csv(const CycleConfig& config, const std::vector<SweepRow>& rows,
                           std::vector<std::string>* errors = nullptr);

// Per-mode profile (k, gap_h1, gap_h2, Q_in_k, Q_out_k, W_k, engine_mode,
// frozen_hot, frozen_cold) for one variant at one tau.
std::string modes_csv(const CycleConfig& config, Variant variant, double tau);

struct RunOutcome {
    std::vector<std::string> files;   // paths written
    std::vector<std::string> errors;  // per-row computation errors
};

// Computes the manifest's product and writes it to manifest.output
// (file path, or "-" for stdout), resolved inside out_dir when given.
RunOutcome run_manifest(const RunManifest& manifest, const std::string& out_dir = "");

}  // namespace qotto
