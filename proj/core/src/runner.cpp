#include "qotto/runner.hpp"

#include <fstream>
#include <iostream>
#include <limits>

#include "qotto/errors.hpp"
#include "qotto/numeric.hpp"

namespace qotto {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += format_sci(v);
        first = false;
    }
}

}  // namespace

std::string sweep_csv(const CycleConfig& config, const std::vector<Variant>& variants,
                      const std::vector<double>& taus, std::vector<std::string>* errors) {
    return sweep_rows_csv(config, sweep_tau(config, variants, taus), errors);
}

std::string sweep_rows_csv(const CycleConfig& config, const std::vector<SweepRow>& rows,
                           std::vector<std::string>* errors) {
    std::string out = "variant,tau,W,abs_W,eta,P,Q_in,Q_out\n";
    for (const SweepRow& row : rows) {
        CycleConfig labeled = config;
        labeled.variant = row.variant;
        out += variant_label(row.variant, labeled);
        out += ',';
        out += format_sci(row.tau);
        out += ',';
        if (row.failed) {
            append_row(out, {kNan, kNan, kNan, kNan, kNan, kNan});
            if (errors != nullptr)
                errors->push_back(variant_label(row.variant, labeled) + " tau=" +
                                  format_sci(row.tau) + ": " + row.error);
        } else {
            const CycleResult& r = row.result;
            append_row(out, {r.W, std::abs(r.W), r.eta, r.P, r.Q_in, r.Q_out});
        }
        out += '\n';
    }
    return out;
}

std::string modes_csv(const CycleConfig& config, Variant variant, double tau) {
    CycleConfig c = config;
    c.variant = variant;
    c.tau1 = c.tau2 = tau;
    if (c.model != Model::kTim)
        throw ConfigError("mode profiles are defined for the tim model only");
    CycleResult res = run_cycle(c);
    std::string out = "k,gap_h1,gap_h2,Q_in_k,Q_out_k,W_k,engine_mode,frozen_hot,frozen_cold\n";
    for (const ModeRecord& rec : res.per_mode) {
        append_row(out, {rec.k, rec.gap_h1, rec.gap_h2, rec.Q_in, rec.Q_out, rec.W});
        out += ',';
        out += rec.engine_mode ? '1' : '0';
        out += ',';
        out += rec.frozen_hot ? '1' : '0';
        out += ',';
        out += rec.frozen_cold ? '1' : '0';
        out += '\n';
    }
    return out;
}

RunOutcome run_manifest(const RunManifest& manifest, const std::string& out_dir) {
    RunOutcome outcome;
    std::string csv;
    if (manifest.kind == ProductKind::kModes) {
        csv = modes_csv(manifest.config, manifest.variants.front(), manifest.tau_grid.front());
    } else {
        csv = sweep_csv(manifest.config, manifest.variants, manifest.tau_grid, &outcome.errors);
    }

    if (manifest.output == "-") {
        std::cout << csv;
        std::cout.flush();
        return outcome;
    }
    std::string path = manifest.output;
    if (!out_dir.empty() && out_dir != ".") path = out_dir + "/" + path;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file '" + path + "'");
    f << csv;
    f.close();
    if (!f) throw IoError("failed writing output file '" + path + "'");
    outcome.files.push_back(path);
    return outcome;
}

}  // namespace qotto
