#pragma once

#include <Eigen/Dense>
#include <optional>

#include "qotto/state.hpp"
#include "qotto/tim.hpp"

namespace qotto {

// Linear field ramp h(t) = h_start + (h_end - h_start) t/tau.
struct RampProtocol {
    double h_start = 0.0;
    double h_end = 0.0;
    double tau = 1.0;
    int steps = 200;  // floor on the substep count; the integrator may use more

    double field_at(double t) const { return h_start + (h_end - h_start) * (t / tau); }
    double rate() const { return (h_end - h_start) / tau; }
};

// Fermionic bath: flat spectral amplitude G0 above a hard lower cutoff,
// with KMS weights G(-d) = e^{-d/T} G(d).
struct BathSpec {
    double T = 1.0;
    double G0 = 1.0;
    double delta_cut = 0.0;

    double spectral(double delta) const {
        double mag = std::abs(delta);
        if (mag < delta_cut) return 0.0;
        return delta >= 0.0 ? G0 : std::exp(delta / T) * G0;
    }
    bool couples(double gap) const { return !(gap < delta_cut); }
};

// Substep control for the ramp integrators. The base count is
// max(ramp.steps, tau * max||H|| / theta); when check is on, the result is
// compared against a half-resolution run and refined by doubling until the
// eigenbasis transition probabilities agree to check_tol.
struct IntegratorOptions {
    double theta = 0.2;             // mode propagator
    double theta_dense = 6.0;       // dense (2^L) propagator
    double check_tol = 1e-8;        // mode transition probabilities
    double check_tol_dense = 1e-6;  // dense transition probabilities
    int max_refinements = 8;
    bool check = true;
};

// Counterdiabatic drive selection for evolve_sta.
class SineProjector;
struct StaDrive {
    bool exact = true;
    int M = 0;                             // number of sin(mk) terms when truncated
    const SineProjector* projector = nullptr;  // required when truncated
};

// Least-squares projection of momentum profiles onto {sin(mk), m=1..M}
// over a fixed mode grid.
class SineProjector {
public:
    SineProjector(const ModeGrid& grid, int M);
    // Weights r such that the projected profile at momentum k equals
    // r . f(grid), for any grid-sampled profile f.
    Eigen::VectorXd weight_row(double k) const;
    const ModeGrid& grid() const { return grid_; }
    int terms() const { return M_; }

private:
    ModeGrid grid_;
    int M_;
    Eigen::MatrixXd pseudo_;  // M x N, (A^T A)^{-1} A^T
};

// Exact counterdiabatic coefficient theta_dot/2 of the two-level corner
// block, with tan(theta_k) = sin k / (h - cos k):
//   (hdot/2) (-sin k) / ((h - cos k)^2 + sin^2 k).
double cd_field(double k, double h, double hdot);

// Unitary propagator of the corner block over a ramp, optionally with the
// counterdiabatic drive. Exactly unitary by construction.
Eigen::Matrix2cd block_propagator(double k, const RampProtocol& ramp,
                                  const StaDrive* sta = nullptr,
                                  const IntegratorOptions& opts = {});

// Conjugate a state by the block propagator embedded in the 4x4 basis.
ModeState apply_block_unitary(const ModeState& state, const Eigen::Matrix2cd& u);

// rho(tau) from d rho/dt = -i [H_k(h(t)), rho].
ModeState evolve_unitary(const ModeState& state, double k, const RampProtocol& ramp,
                         const IntegratorOptions& opts = {});

// Same with the counterdiabatic term added to the generator.
ModeState evolve_sta(const ModeState& state, double k, const RampProtocol& ramp,
                     const StaDrive& sta, const IntegratorOptions& opts = {});

// Ideal adiabatic limit: eigen-populations transported to the target
// eigenbasis; coherences between non-degenerate levels dropped, the
// degenerate |+-k> block kept verbatim.
ModeState adiabatic_map(const ModeState& state, double k, double h_from, double h_to);

// Non-unitary stroke at fixed field. Gated modes (gap below the bath cutoff)
// pass through untouched. Instantaneous form jumps to the Gibbs state.
ModeState dissipative_stroke(const ModeState& state, double k, double h, const BathSpec& bath);

// Timed form: KMS-consistent Lindblad evolution with lowering operators on
// all four adjacent non-degenerate level pairs.
ModeState dissipative_stroke(const ModeState& state, double k, double h, const BathSpec& bath,
                             double duration, const IntegratorOptions& opts = {});

}  // namespace qotto
