#pragma once

#include <string>
#include <vector>

#include "qotto/dynamics.hpp"
#include "qotto/tim.hpp"

namespace qotto {

enum class Model { kTim, kLtim };
enum class Variant { kBare, kAdiabatic, kSta, kBeqe, kBeqeSingleStroke, kBeqeBothStrokes };
enum class Boundary { kOpen, kPeriodic };

std::string variant_name(Variant v);

// Full parameter set of one engine run.
struct CycleConfig {
    Model model = Model::kTim;
    int L = 0;
    double h1 = 0.0;
    double h2 = 0.0;
    double T_hot = 0.0;
    double T_cold = 0.0;
    double tau1 = 1.0;
    double tau2 = 1.0;
    double tau_hot = 2.0;   // bookkeeping for power
    double tau_cold = 2.0;  // bookkeeping for power
    Variant variant = Variant::kBare;
    CutoffPolicy cutoff;
    CriticalExponents exponents;
    IntegratorOptions integrator;
    int ramp_steps = 200;  // floor on substeps per unitary stroke
    int cycles = 1;        // iterate the stroke map; heats from the last pass

    // STA drive (variant == kSta)
    bool sta_exact = true;
    int sta_M = 0;

    // Dense model extras (model == kLtim)
    double J = 1.0;
    double Bz = 1.0;
    Boundary boundary = Boundary::kOpen;

    void validate() const;
    bool gates_cold() const {
        return variant == Variant::kBeqe || variant == Variant::kBeqeSingleStroke ||
               variant == Variant::kBeqeBothStrokes;
    }
    bool gates_hot() const {
        return variant == Variant::kBeqe || variant == Variant::kBeqeBothStrokes;
    }
};

struct ModeRecord {
    double k = 0.0;
    double gap_h1 = 0.0;
    double gap_h2 = 0.0;
    double Q_in = 0.0;
    double Q_out = 0.0;
    double W = 0.0;
    bool frozen_hot = false;
    bool frozen_cold = false;
    bool engine_mode = false;
};

struct CycleResult {
    double E_A = 0.0, E_B = 0.0, E_C = 0.0, E_D = 0.0;
    double Q_in = 0.0, Q_out = 0.0;
    double W = 0.0;    // = -(Q_in + Q_out)
    double eta = 0.0;  // -W/Q_in when Q_in > 0, else NaN
    double P = 0.0;    // -W / (tau1 + tau2 + tau_hot + tau_cold)
    std::vector<ModeRecord> per_mode;  // empty for the dense model
};

// Appendix-style closed-form sums in the ideal adiabatic limit (no dynamics).
struct AdiabaticClosedForm {
    double W = 0.0;
    double eta = 0.0;
    double Q_in = 0.0;
    double Q_out = 0.0;
};
AdiabaticClosedForm adiabatic_closed_form(const CycleConfig& config);

// Per-mode closed-form heats in the adiabatic limit.
void adiabatic_mode_heats(double k, double h1, double h2, double T_hot, double T_cold,
                          double* q_in, double* q_out);

// Whether mode k can absorb heat over a cycle (positive closed-form Q_in^k):
// true iff beta_H eps_k(h1) < beta_C eps_k(h2).
bool is_engine_mode(double k, const CycleConfig& config);

// P = -W / (tau1 + tau2 + tau_hot + tau_cold).
double power(double W, const CycleConfig& config);

// One pass (or config.cycles passes) of the four strokes for every mode.
CycleResult run_cycle(const CycleConfig& config);

struct SweepRow {
    Variant variant = Variant::kBare;
    double tau = 0.0;
    CycleResult result;
    bool failed = false;
    std::string error;
};

// One row per (variant, tau), variants outermost, deterministic order.
// tau1 = tau2 = tau for every row. Row failures are recorded, not thrown.
std::vector<SweepRow> sweep_tau(const CycleConfig& config, const std::vector<Variant>& variants,
                                const std::vector<double>& taus);

}  // namespace qotto
