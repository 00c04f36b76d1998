#include "qotto/state.hpp"

#include <cmath>

#include "qotto/errors.hpp"

namespace qotto {

double ModeState::trace_error() const { return std::abs(rho.trace() - std::complex<double>(1.0)); }

double ModeState::hermiticity_error() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double ModeState::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool ModeState::is_valid(double tol) const {
    return trace_error() < tol && hermiticity_error() < tol && min_eigenvalue() > -tol;
}

ModeState thermal_state(double k, double h, double T) {
    if (!(T > 0.0)) throw ConfigError("thermal_state: T must be positive");
    ModeBlock blk = mode_block(k, h);
    double w = std::exp(-blk.eps / T);
    double norm = 1.0 / ((1.0 + w) * (1.0 + w));
    double pg = norm;          // e^{beta eps}/Z
    double pm = w * norm;      // 1/Z
    double pe = w * w * norm;  // e^{-beta eps}/Z

    ModeState st;
    double gg = blk.gc * blk.gc, ss = blk.gs * blk.gs, gs = blk.gc * blk.gs;
    st.rho(0, 0) = pg * gg + pe * ss;
    st.rho(3, 3) = pg * ss + pe * gg;
    st.rho(0, 3) = (pg - pe) * gs;
    st.rho(3, 0) = st.rho(0, 3);
    st.rho(1, 1) = pm;
    st.rho(2, 2) = pm;
    return st;
}

double mode_energy(const ModeState& state, double k, double h) {
    double d = 2.0 * (h - std::cos(k));
    double o = 2.0 * std::sin(k);
    return -d * state.rho(0, 0).real() + d * state.rho(3, 3).real() +
           o * (state.rho(0, 3).real() + state.rho(3, 0).real());
}

Eigen::Vector4d eigen_populations(const ModeState& state, double k, double h) {
    ModeBlock blk = mode_block(k, h);
    Eigen::Vector2cd g(blk.gc, blk.gs), e(-blk.gs, blk.gc);
    Eigen::Matrix2cd corner;
    corner << state.rho(0, 0), state.rho(0, 3), state.rho(3, 0), state.rho(3, 3);
    Eigen::Vector4d p;
    p(0) = (g.adjoint() * corner * g).value().real();
    p(1) = state.rho(1, 1).real();
    p(2) = state.rho(2, 2).real();
    p(3) = (e.adjoint() * corner * e).value().real();
    return p;
}

}  // namespace qotto
