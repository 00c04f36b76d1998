// Command-line front end: tau sweeps, per-mode profiles, figure presets.
#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "qotto/errors.hpp"
#include "qotto/manifest.hpp"
#include "qotto/parallel.hpp"
#include "qotto/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;
constexpr int kExitIo = 4;

int run_products(const std::vector<qotto::RunManifest>& manifests, const std::string& out_dir) {
    bool any_row_failed = false;
    for (const qotto::RunManifest& m : manifests) {
        qotto::RunOutcome outcome = qotto::run_manifest(m, out_dir);
        for (const std::string& f : outcome.files) std::cerr << "wrote " << f << "\n";
        for (const std::string& e : outcome.errors) {
            std::cerr << "row failed: " << e << "\n";
            any_row_failed = true;
        }
    }
    return any_row_failed ? kExitCompute : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Otto engine sweeps for a driven transverse-Ising working medium"};
    app.require_subcommand(1);

    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker count (0 = hardware concurrency)");

    std::string config_path, out = "-", out_dir = ".", preset_name;

    CLI::App* sweep = app.add_subcommand("sweep", "Run a tau sweep from a config file");
    sweep->add_option("config", config_path, "Config file")->required();
    sweep->add_option("--out", out, "Output CSV path ('-' for stdout)");

    CLI::App* modes = app.add_subcommand("modes", "Per-mode profile (first variant, first tau)");
    modes->add_option("config", config_path, "Config file")->required();
    modes->add_option("--out", out, "Output CSV path ('-' for stdout)");

    CLI::App* preset = app.add_subcommand("preset", "Run a named figure preset (fig3..fig10)");
    preset->add_option("name", preset_name, "Preset name")->required();
    preset->add_option("--out", out_dir, "Output directory");

    CLI::App* validate = app.add_subcommand("validate", "Parse and validate a config file");
    validate->add_option("config", config_path, "Config file")->required();

    CLI11_PARSE(app, argc, argv);
    qotto::set_worker_count(threads);

    try {
        if (sweep->parsed() || modes->parsed()) {
            qotto::RunManifest m = qotto::parse_config_file(config_path);
            m.kind = sweep->parsed() ? qotto::ProductKind::kSweep : qotto::ProductKind::kModes;
            m.output = out;
            return run_products({m}, "");
        }
        if (preset->parsed()) {
            return run_products(qotto::preset(preset_name), out_dir);
        }
        if (validate->parsed()) {
            qotto::RunManifest m = qotto::parse_config_file(config_path);
            std::cout << "ok: " << m.variants.size() << " variant(s), " << m.tau_grid.size()
                      << " tau point(s)\n";
            return kExitOk;
        }
    } catch (const qotto::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qotto::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const qotto::ComputeError& e) {
        std::cerr << "compute error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }
    return kExitOk;
}
