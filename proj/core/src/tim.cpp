#include "qotto/tim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qotto/errors.hpp"

namespace qotto {

ModeGrid mode_grid(int L) {
    if (L < 2 || L % 2 != 0)
        throw ConfigError("mode_grid: L must be a positive even integer, got " + std::to_string(L));
    ModeGrid grid;
    grid.L = L;
    grid.momenta.resize(L / 2);
    for (int n = 1; n <= L / 2; ++n)
        grid.momenta[n - 1] = (2.0 * n - 1.0) * std::numbers::pi / L;
    return grid;
}

ModeHamiltonian mode_hamiltonian(double k, double h) {
    ModeHamiltonian hk;
    hk.k = k;
    hk.h = h;
    double d = 2.0 * (h - std::cos(k));
    double o = 2.0 * std::sin(k);
    hk.matrix(0, 0) = -d;
    hk.matrix(3, 3) = d;
    hk.matrix(0, 3) = o;
    hk.matrix(3, 0) = o;
    return hk;
}

double mode_gap(double k, double h) {
    double x = h - std::cos(k);
    double s = std::sin(k);
    return 2.0 * std::sqrt(x * x + s * s);
}

ModeBlock mode_block(double k, double h) {
    ModeBlock blk;
    blk.a = 2.0 * (h - std::cos(k));
    blk.b = 2.0 * std::sin(k);
    blk.eps = std::hypot(blk.a, blk.b);
    // Ground eigenvector of [[-a, b], [b, a]], angle from tan(phi) = -b/(a+eps).
    // b > 0 on the grid, so the denominator a + eps only vanishes as k -> 0.
    double phi = std::atan2(-blk.b, blk.a + blk.eps);
    blk.gc = std::cos(phi);
    blk.gs = std::sin(phi);
    return blk;
}

double kz_freezeout_time(double h1, double h2, double tau, const CriticalExponents& exps) {
    if (!(tau > 0.0)) throw ConfigError("kz_freezeout_time: tau must be positive");
    if (h1 == h2) throw ConfigError("kz_freezeout_time: h1 and h2 must differ");
    double dh = h1 - h2;
    double nz = exps.nu_z();
    double tc = tau * (kCriticalField - h2) / dh;
    return tc + (tau / dh) * std::pow(nz * dh / tau, 1.0 / (1.0 + nz));
}

double kz_cutoff(const CutoffPolicy& policy, double h1, double h2, double tau,
                 const CriticalExponents& exps) {
    switch (policy.kind) {
        case CutoffKind::kKzCritical: {
            if (!(tau > 0.0)) throw ConfigError("kz_cutoff: tau must be positive");
            double nz = exps.nu_z();
            return policy.C1 * std::pow(nz * (h1 - h2) / tau, nz / (1.0 + nz));
        }
        case CutoffKind::kNonCritical: {
            if (h2 == kCriticalField && policy.C3 == 0.0)
                throw ConfigError(
                    "kz_cutoff: non-critical cutoff degenerates to zero at h2 = 1 with C3 = 0 "
                    "(filter would be a no-op)");
            return policy.C2 * std::abs(h2 - kCriticalField) + policy.C3;
        }
        case CutoffKind::kConstant:
            return policy.value;
    }
    throw ConfigError("kz_cutoff: unknown cutoff kind");
}

}  // namespace qotto
