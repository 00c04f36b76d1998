#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qotto {

// Critical exponents of the working medium's universality class.
// The transverse Ising chain has nu = z = 1.
struct CriticalExponents {
    double nu = 1.0;
    double z = 1.0;
    double nu_z() const { return nu * z; }
};

// Critical field of the transverse Ising chain with J = 1.
inline constexpr double kCriticalField = 1.0;

// Momenta of the even-parity (antiperiodic) sector, k_n = (2n-1)pi/L,
// n = 1..L/2. All of them lie strictly inside (0, pi).
struct ModeGrid {
    int L = 0;
    std::vector<double> momenta;
};

ModeGrid mode_grid(int L);

// Single-mode Hamiltonian in the basis |0>, |k>, |-k>, |k,-k>.
// Only the (|0>, |k,-k>) corner block is nonzero; |+-k> are zero modes.
struct ModeHamiltonian {
    double k = 0.0;
    double h = 0.0;
    Eigen::Matrix4d matrix = Eigen::Matrix4d::Zero();
};

ModeHamiltonian mode_hamiltonian(double k, double h);

// Gap between adjacent non-degenerate levels,
// epsilon_k = 2 sqrt((h - cos k)^2 + sin^2 k).
double mode_gap(double k, double h);

// Closed-form spectral data of the 2x2 corner block. The block reads
//   [ -a   b ]        a = 2 (h - cos k),  b = 2 sin k,
//   [  b   a ]
// with eigenvalues -+ eps/..., eps = sqrt(a^2 + b^2) = mode_gap. The ground
// eigenvector is (cos(phi), sin(phi)) in (|0>, |k,-k>), tan(phi) = -b/(a+eps).
struct ModeBlock {
    double a = 0.0;
    double b = 0.0;
    double eps = 0.0;  // == mode_gap(k, h)
    double gc = 1.0;   // ground-state components (gc, gs)
    double gs = 0.0;   // excited state is (-gs, gc)
};

ModeBlock mode_block(double k, double h);

// Spectral-cutoff policy for bath engineering.
enum class CutoffKind { kKzCritical, kNonCritical, kConstant };

struct CutoffPolicy {
    CutoffKind kind = CutoffKind::kKzCritical;
    double C1 = 1.0;     // kz-critical scale
    double C2 = 0.0;     // non-critical gap scale
    double C3 = 0.0;     // non-critical offset
    double value = 0.0;  // constant cutoff
    double gamma = 1.0;  // energizing-stroke scale factor
};

// Time at which a linear ramp h1 -> h2 of duration tau stops following
// adiabatically: t* = t_c + (tau/(h1-h2)) (nu z (h1-h2)/tau)^(1/(1+nu z)),
// with t_c the crossing time of the critical field.
double kz_freezeout_time(double h1, double h2, double tau,
                         const CriticalExponents& exps = {});

// Freeze-out gap used as the lower spectral cutoff.
//   kz-critical:  C1 * (nu z (h1-h2)/tau)^(nu z/(1+nu z))
//   non-critical: C2 |h2 - 1| + C3
//   constant:     the configured value
double kz_cutoff(const CutoffPolicy& policy, double h1, double h2, double tau,
                 const CriticalExponents& exps = {});

}  // namespace qotto
