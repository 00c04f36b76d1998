#include "qotto/cycle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qotto/errors.hpp"
#include "qotto/ltim.hpp"
#include "qotto/numeric.hpp"
#include "qotto/parallel.hpp"

namespace qotto {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::kBare: return "bare";
        case Variant::kAdiabatic: return "adiabatic";
        case Variant::kSta: return "sta";
        case Variant::kBeqe: return "beqe";
        case Variant::kBeqeSingleStroke: return "beqe-single-stroke";
        case Variant::kBeqeBothStrokes: return "beqe-both-strokes";
    }
    return "?";
}

void CycleConfig::validate() const {
    if (model == Model::kTim) {
        if (L < 2 || L % 2 != 0)
            throw ConfigError("config: L must be a positive even integer for the tim model");
        if (variant == Variant::kBeqeBothStrokes)
            throw ConfigError("config: beqe-both-strokes applies to the ltim model only "
                              "(beqe already gates both strokes for tim)");
    } else {
        if (L < 2 || L > 12) throw ConfigError("config: L must lie in [2, 12] for the ltim model");
        if (variant == Variant::kSta)
            throw ConfigError("config: the sta variant is not defined for the ltim model");
    }
    if (!(h1 > h2)) throw ConfigError("config: h1 must exceed h2");
    if (!(T_cold > 0.0)) throw ConfigError("config: T_cold must be positive");
    if (!(T_hot > T_cold)) throw ConfigError("config: T_hot must exceed T_cold");
    if (!(tau1 > 0.0) || !(tau2 > 0.0)) throw ConfigError("config: tau1 and tau2 must be positive");
    if (tau_hot < 0.0 || tau_cold < 0.0)
        throw ConfigError("config: non-unitary durations cannot be negative");
    if (ramp_steps < 1) throw ConfigError("config: integrator steps must be >= 1");
    if (cycles < 1) throw ConfigError("config: cycles must be >= 1");
    if (!(cutoff.gamma > 0.0)) throw ConfigError("config: gamma must be positive");
    if (cutoff.kind == CutoffKind::kKzCritical && !(cutoff.C1 > 0.0))
        throw ConfigError("config: C1 must be positive for the kz-critical cutoff");
    if (cutoff.kind == CutoffKind::kNonCritical && !(cutoff.C2 > 0.0))
        throw ConfigError("config: C2 must be positive for the non-critical cutoff");
    if (cutoff.kind == CutoffKind::kConstant && cutoff.value < 0.0)
        throw ConfigError("config: constant cutoff cannot be negative");
    if (!(exponents.nu > 0.0) || !(exponents.z > 0.0))
        throw ConfigError("config: critical exponents must be positive");
    if (variant == Variant::kSta && !sta_exact) {
        if (sta_M < 1 || sta_M > L / 2)
            throw ConfigError("config: sta truncation order must lie in [1, L/2]");
    }
}

namespace {

// (e^{-x} - 1)/(e^{-x} + 1) = -tanh(x/2), evaluated overflow-free.
double boltzmann_asymmetry(double eps, double T) {
    double w = std::exp(-eps / T);
    return (w - 1.0) / (w + 1.0);
}

}  // namespace

void adiabatic_mode_heats(double k, double h1, double h2, double T_hot, double T_cold,
                          double* q_in, double* q_out) {
    double e1 = mode_gap(k, h1), e2 = mode_gap(k, h2);
    double hot = boltzmann_asymmetry(e1, T_hot);   // (e^{-bH e1} - e^{bH e1})/Z(h1)
    double cold = boltzmann_asymmetry(e2, T_cold); // (e^{-bC e2} - e^{bC e2})/Z(h2)
    if (q_in != nullptr) *q_in = e1 * (hot - cold);
    if (q_out != nullptr) *q_out = e2 * (cold - hot);
}

AdiabaticClosedForm adiabatic_closed_form(const CycleConfig& config) {
    config.validate();
    if (config.model != Model::kTim)
        throw ConfigError("adiabatic_closed_form: defined for the tim model");
    ModeGrid grid = mode_grid(config.L);
    KahanSum q_in, q_out;
    for (double k : grid.momenta) {
        double qi, qo;
        adiabatic_mode_heats(k, config.h1, config.h2, config.T_hot, config.T_cold, &qi, &qo);
        q_in.add(qi);
        q_out.add(qo);
    }
    AdiabaticClosedForm out;
    out.Q_in = q_in.value();
    out.Q_out = q_out.value();
    out.W = -(out.Q_in + out.Q_out);
    out.eta = out.Q_in > 0.0 ? -out.W / out.Q_in : std::numeric_limits<double>::quiet_NaN();
    return out;
}

bool is_engine_mode(double k, const CycleConfig& config) {
    // Positive closed-form Q_in^k. Both this form and the sinh/(2+cosh)
    // criterion are strictly increasing in beta*eps, so each is equivalent
    // to beta_H eps(h1) < beta_C eps(h2).
    double q_in;
    adiabatic_mode_heats(k, config.h1, config.h2, config.T_hot, config.T_cold, &q_in, nullptr);
    return q_in > 0.0;
}

double power(double W, const CycleConfig& config) {
    double total = config.tau1 + config.tau2 + config.tau_hot + config.tau_cold;
    if (!(total > 0.0)) throw ConfigError("power: total cycle duration must be positive");
    return -W / total;
}

namespace {

struct ModeOutcome {
    double e_b, e_c, e_d, e_a, e_b_next;
    double q_in, q_out;
    bool frozen_hot, frozen_cold;
};

// One mode's pass(es) through B -> C -> D -> A -> B'. The initial B is the
// full thermal state; heats are measured over the final pass.
ModeOutcome run_mode(double k, const CycleConfig& config, const Eigen::Matrix2cd* u_down,
                     const Eigen::Matrix2cd* u_up, const BathSpec& cold_bath,
                     const BathSpec& hot_bath) {
    bool adiabatic = config.variant == Variant::kAdiabatic;
    ModeState state = thermal_state(k, config.h1, config.T_hot);
    ModeOutcome out{};
    out.frozen_cold = !cold_bath.couples(mode_gap(k, config.h2));
    out.frozen_hot = !hot_bath.couples(mode_gap(k, config.h1));
    for (int cycle = 0; cycle < config.cycles; ++cycle) {
        out.e_b = mode_energy(state, k, config.h1);
        state = adiabatic ? adiabatic_map(state, k, config.h1, config.h2)
                          : apply_block_unitary(state, *u_down);
        out.e_c = mode_energy(state, k, config.h2);
        state = dissipative_stroke(state, k, config.h2, cold_bath);
        out.e_d = out.frozen_cold ? out.e_c : mode_energy(state, k, config.h2);
        state = adiabatic ? adiabatic_map(state, k, config.h2, config.h1)
                          : apply_block_unitary(state, *u_up);
        out.e_a = mode_energy(state, k, config.h1);
        state = dissipative_stroke(state, k, config.h1, hot_bath);
        out.e_b_next = out.frozen_hot ? out.e_a : mode_energy(state, k, config.h1);
    }
    out.q_in = out.e_b_next - out.e_a;
    out.q_out = out.e_d - out.e_c;
    return out;
}

std::vector<CycleResult> run_tim_cycle_batch(const CycleConfig& config,
                                             const std::vector<Variant>& variants) {
    config.validate();
    ModeGrid grid = mode_grid(config.L);
    std::size_t n_modes = grid.momenta.size();

    bool need_bare = false, need_sta = false, any_gate = false;
    for (Variant v : variants) {
        CycleConfig probe = config;
        probe.variant = v;
        probe.validate();
        if (v == Variant::kBare || v == Variant::kBeqe || v == Variant::kBeqeSingleStroke)
            need_bare = true;
        if (v == Variant::kSta) need_sta = true;
        if (v == Variant::kBeqe || v == Variant::kBeqeSingleStroke) any_gate = true;
    }

    double delta_star = 0.0;
    if (any_gate)
        delta_star =
            kz_cutoff(config.cutoff, config.h1, config.h2, config.tau2, config.exponents);

    SineProjector* projector = nullptr;
    SineProjector projector_storage = [&]() -> SineProjector {
        if (need_sta && !config.sta_exact) return SineProjector(grid, config.sta_M);
        return SineProjector(mode_grid(2), 1);  // unused placeholder
    }();
    if (need_sta && !config.sta_exact) projector = &projector_storage;

    RampProtocol down{config.h1, config.h2, config.tau1, config.ramp_steps};
    RampProtocol up{config.h2, config.h1, config.tau2, config.ramp_steps};

    std::vector<std::vector<ModeOutcome>> outcomes(
        variants.size(), std::vector<ModeOutcome>(n_modes, ModeOutcome{}));

    parallel_for(n_modes, [&](std::size_t i) {
        double k = grid.momenta[i];
        Eigen::Matrix2cd ud_bare, uu_bare, ud_sta, uu_sta;
        if (need_bare) {
            ud_bare = block_propagator(k, down, nullptr, config.integrator);
            uu_bare = block_propagator(k, up, nullptr, config.integrator);
        }
        if (need_sta) {
            StaDrive drive{config.sta_exact, config.sta_M, projector};
            ud_sta = block_propagator(k, down, &drive, config.integrator);
            uu_sta = block_propagator(k, up, &drive, config.integrator);
        }
        for (std::size_t vi = 0; vi < variants.size(); ++vi) {
            CycleConfig vc = config;
            vc.variant = variants[vi];
            bool gate_cold = vc.variant == Variant::kBeqe ||
                             vc.variant == Variant::kBeqeSingleStroke;
            bool gate_hot = vc.variant == Variant::kBeqe;
            BathSpec cold{config.T_cold, 1.0, gate_cold ? delta_star : 0.0};
            BathSpec hot{config.T_hot, 1.0, gate_hot ? config.cutoff.gamma * delta_star : 0.0};
            const Eigen::Matrix2cd* d = vc.variant == Variant::kSta ? &ud_sta : &ud_bare;
            const Eigen::Matrix2cd* u = vc.variant == Variant::kSta ? &uu_sta : &uu_bare;
            outcomes[vi][i] = run_mode(k, vc, d, u, cold, hot);
        }
    });

    std::vector<CycleResult> results(variants.size());
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        CycleResult& res = results[vi];
        res.per_mode.resize(n_modes);
        KahanSum e_a, e_b, e_c, e_d, q_in, q_out;
        for (std::size_t i = 0; i < n_modes; ++i) {
            const ModeOutcome& mo = outcomes[vi][i];
            double k = grid.momenta[i];
            e_b.add(mo.e_b);
            e_c.add(mo.e_c);
            e_d.add(mo.e_d);
            e_a.add(mo.e_a);
            q_in.add(mo.q_in);
            q_out.add(mo.q_out);
            ModeRecord& rec = res.per_mode[i];
            rec.k = k;
            rec.gap_h1 = mode_gap(k, config.h1);
            rec.gap_h2 = mode_gap(k, config.h2);
            rec.Q_in = mo.q_in;
            rec.Q_out = mo.q_out;
            rec.W = -(mo.q_in + mo.q_out);
            rec.frozen_hot = mo.frozen_hot;
            rec.frozen_cold = mo.frozen_cold;
            rec.engine_mode = is_engine_mode(k, config);
        }
        res.E_A = e_a.value();
        res.E_B = e_b.value();
        res.E_C = e_c.value();
        res.E_D = e_d.value();
        res.Q_in = q_in.value();
        res.Q_out = q_out.value();
        res.W = -(res.Q_in + res.Q_out);
        res.eta = res.Q_in > 0.0 ? -res.W / res.Q_in : std::numeric_limits<double>::quiet_NaN();
        CycleConfig pc = config;
        pc.variant = variants[vi];
        res.P = power(res.W, pc);
    }
    return results;
}

}  // namespace

CycleResult run_cycle(const CycleConfig& config) {
    if (config.model == Model::kLtim) return run_ltim_cycle(config);
    return run_tim_cycle_batch(config, {config.variant}).front();
}

std::vector<SweepRow> sweep_tau(const CycleConfig& config, const std::vector<Variant>& variants,
                                const std::vector<double>& taus) {
    if (variants.empty()) throw ConfigError("sweep: need at least one variant");
    if (taus.empty()) throw ConfigError("sweep: tau grid is empty");
    for (double t : taus)
        if (!(t > 0.0)) throw ConfigError("sweep: every tau must be positive");

    std::vector<SweepRow> rows(variants.size() * taus.size());
    auto run_point = [&](std::size_t ti) {
        CycleConfig c = config;
        c.tau1 = c.tau2 = taus[ti];
        try {
            std::vector<CycleResult> batch = config.model == Model::kLtim
                                                 ? run_ltim_cycle_batch(c, variants)
                                                 : run_tim_cycle_batch(c, variants);
            for (std::size_t vi = 0; vi < variants.size(); ++vi) {
                SweepRow& row = rows[vi * taus.size() + ti];
                row.variant = variants[vi];
                row.tau = taus[ti];
                row.result = std::move(batch[vi]);
            }
        } catch (const std::exception& ex) {
            for (std::size_t vi = 0; vi < variants.size(); ++vi) {
                SweepRow& row = rows[vi * taus.size() + ti];
                row.variant = variants[vi];
                row.tau = taus[ti];
                row.failed = true;
                row.error = ex.what();
            }
        }
    };

    if (config.model == Model::kLtim) {
        // Dense runs are single-threaded; spread tau points across workers.
        parallel_for(taus.size(), run_point);
    } else {
        // Mode loops inside each point are parallel already.
        for (std::size_t ti = 0; ti < taus.size(); ++ti) run_point(ti);
    }
    return rows;
}

}  // namespace qotto
