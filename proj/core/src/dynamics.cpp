#include "qotto/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qotto/errors.hpp"

namespace qotto {

namespace {

// SU(2) element U = w I - i (x sx + y sy + z sz), |q| = 1.
struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;
};

// U_p U_q
inline Quat qmul(const Quat& p, const Quat& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + q.w * p.x + (p.y * q.z - p.z * q.y),
            p.w * q.y + q.w * p.y + (p.z * q.x - p.x * q.z),
            p.w * q.z + q.w * p.z + (p.x * q.y - p.y * q.x)};
}

inline void qnormalize(Quat& q) {
    double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
    q.w /= n;
    q.x /= n;
    q.y /= n;
    q.z /= n;
}

// exp(-i m.sigma)
inline Quat axis_step(double mx, double my, double mz) {
    double th = std::sqrt(mx * mx + my * my + mz * mz);
    double s = th > 1e-290 ? std::sin(th) / th : 1.0;
    return {std::cos(th), s * mx, s * my, s * mz};
}

inline Eigen::Matrix2cd quat_to_matrix(const Quat& q) {
    Eigen::Matrix2cd u;
    const std::complex<double> i(0.0, 1.0);
    u(0, 0) = q.w - i * q.z;
    u(0, 1) = -q.y - i * q.x;
    u(1, 0) = q.y - i * q.x;
    u(1, 1) = q.w + i * q.z;
    return u;
}

// Fourth-order Magnus step over two Gauss nodes, in axis-vector form:
//   m = (dt/2)(u1 + u2) - (sqrt(3) dt^2/6) (u1 x u2),  U_step = exp(-i m.sigma).
// The generator is u(t).sigma with u = (2 sin k, -cd(t), -2(h(t) - cos k)).
Eigen::Matrix2cd compose_block(double k, const RampProtocol& ramp, const StaDrive* sta,
                               long n) {
    const double ck = std::cos(k);
    const double bx = 2.0 * std::sin(k);
    const double dt = ramp.tau / static_cast<double>(n);
    const double hdot = ramp.rate();
    const double node1 = 0.5 - std::sqrt(3.0) / 6.0;
    const double node2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double cross = std::sqrt(3.0) * dt * dt / 6.0;

    const bool trunc = sta != nullptr && !sta->exact;
    Eigen::VectorXd wrow;
    const std::vector<double>* momenta = nullptr;
    if (trunc) {
        wrow = sta->projector->weight_row(k);
        momenta = &sta->projector->grid().momenta;
    }
    auto drive = [&](double h) -> double {
        if (sta == nullptr) return 0.0;
        if (!trunc) return -cd_field(k, h, hdot);
        double acc = 0.0;
        for (Eigen::Index j = 0; j < wrow.size(); ++j)
            acc += wrow(j) * cd_field((*momenta)[static_cast<std::size_t>(j)], h, 1.0);
        return -hdot * acc;
    };

    Quat acc;
    for (long j = 0; j < n; ++j) {
        double t0 = static_cast<double>(j) * dt;
        double ha = ramp.field_at(t0 + node1 * dt);
        double hb = ramp.field_at(t0 + node2 * dt);
        double bza = -2.0 * (ha - ck);
        double bzb = -2.0 * (hb - ck);
        double cya = drive(ha);
        double cyb = drive(hb);
        double mx = dt * bx - cross * (cya * bzb - bza * cyb);
        double my = 0.5 * dt * (cya + cyb) - cross * bx * (bza - bzb);
        double mz = 0.5 * dt * (bza + bzb) - cross * bx * (cyb - cya);
        acc = qmul(axis_step(mx, my, mz), acc);
        if ((j & 1023) == 1023) qnormalize(acc);
    }
    qnormalize(acc);
    return quat_to_matrix(acc);
}

// Eigenbasis transition probabilities |<e_i(h_end)|U|e_j(h_start)>|^2.
Eigen::Matrix2d transition_probs(const Eigen::Matrix2cd& u, double k, double h_from,
                                 double h_to) {
    ModeBlock f = mode_block(k, h_from), t = mode_block(k, h_to);
    Eigen::Matrix2d vf, vt;
    vf << f.gc, -f.gs, f.gs, f.gc;
    vt << t.gc, -t.gs, t.gs, t.gc;
    Eigen::Matrix2cd amp = vt.transpose() * u * vf;
    return amp.cwiseAbs2();
}

long base_step_count(double k, const RampProtocol& ramp, const StaDrive* sta,
                     const IntegratorOptions& opts) {
    double eps_max = std::max(mode_gap(k, ramp.h_start), mode_gap(k, ramp.h_end));
    double omega = eps_max;
    if (sta != nullptr) {
        double lo = std::min(ramp.h_start, ramp.h_end);
        double hi = std::max(ramp.h_start, ramp.h_end);
        double hstar = std::clamp(std::cos(k), lo, hi);
        double cd_max = std::abs(cd_field(k, hstar, ramp.rate()));
        omega = std::hypot(eps_max, cd_max);
    }
    double want = ramp.tau * omega / opts.theta;
    long n = static_cast<long>(ramp.steps);
    if (want > static_cast<double>(n)) n = static_cast<long>(std::ceil(want));
    return std::max<long>(n, 1);
}

void validate_ramp(const RampProtocol& ramp) {
    if (!(ramp.tau > 0.0)) throw ConfigError("ramp: tau must be positive");
    if (ramp.steps < 1) throw ConfigError("ramp: steps must be >= 1");
}

}  // namespace

SineProjector::SineProjector(const ModeGrid& grid, int M) : grid_(grid), M_(M) {
    int n = static_cast<int>(grid.momenta.size());
    if (M < 1 || M > n)
        throw ConfigError("SineProjector: truncation order must lie in [1, L/2], got " +
                          std::to_string(M));
    Eigen::MatrixXd a(n, M);
    for (int i = 0; i < n; ++i)
        for (int m = 1; m <= M; ++m) a(i, m - 1) = std::sin(m * grid.momenta[i]);
    pseudo_ = (a.transpose() * a).ldlt().solve(a.transpose());
}

Eigen::VectorXd SineProjector::weight_row(double k) const {
    Eigen::VectorXd s(M_);
    for (int m = 1; m <= M_; ++m) s(m - 1) = std::sin(m * k);
    return pseudo_.transpose() * s;
}

double cd_field(double k, double h, double hdot) {
    double x = h - std::cos(k);
    double s = std::sin(k);
    return -0.5 * hdot * s / (x * x + s * s);
}

Eigen::Matrix2cd block_propagator(double k, const RampProtocol& ramp, const StaDrive* sta,
                                  const IntegratorOptions& opts) {
    validate_ramp(ramp);
    long n = base_step_count(k, ramp, sta, opts);
    if (!opts.check) return compose_block(k, ramp, sta, n);

    Eigen::Matrix2cd coarse = compose_block(k, ramp, sta, std::max<long>(n / 2, 1));
    for (int r = 0;; ++r) {
        Eigen::Matrix2cd fine = compose_block(k, ramp, sta, n);
        double diff = (transition_probs(fine, k, ramp.h_start, ramp.h_end) -
                       transition_probs(coarse, k, ramp.h_start, ramp.h_end))
                          .cwiseAbs()
                          .maxCoeff();
        if (diff <= opts.check_tol) return fine;
        if (r >= opts.max_refinements)
            throw ComputeError("block_propagator: step-halving check did not converge (tau=" +
                               std::to_string(ramp.tau) + ", k=" + std::to_string(k) + ")");
        coarse = fine;
        n *= 2;
    }
}

ModeState apply_block_unitary(const ModeState& state, const Eigen::Matrix2cd& u) {
    Eigen::Matrix4cd u4 = Eigen::Matrix4cd::Identity();
    u4(0, 0) = u(0, 0);
    u4(0, 3) = u(0, 1);
    u4(3, 0) = u(1, 0);
    u4(3, 3) = u(1, 1);
    ModeState out;
    out.rho = u4 * state.rho * u4.adjoint();
    return out;
}

ModeState evolve_unitary(const ModeState& state, double k, const RampProtocol& ramp,
                         const IntegratorOptions& opts) {
    return apply_block_unitary(state, block_propagator(k, ramp, nullptr, opts));
}

ModeState evolve_sta(const ModeState& state, double k, const RampProtocol& ramp,
                     const StaDrive& sta, const IntegratorOptions& opts) {
    if (!sta.exact && sta.projector == nullptr)
        throw ConfigError("evolve_sta: truncated drive needs a SineProjector");
    return apply_block_unitary(state, block_propagator(k, ramp, &sta, opts));
}

ModeState adiabatic_map(const ModeState& state, double k, double h_from, double h_to) {
    if (h_from == h_to) return state;
    ModeBlock f = mode_block(k, h_from), t = mode_block(k, h_to);
    Eigen::Vector2cd gf(f.gc, f.gs), ef(-f.gs, f.gc);
    Eigen::Matrix2cd corner;
    corner << state.rho(0, 0), state.rho(0, 3), state.rho(3, 0), state.rho(3, 3);
    double pg = (gf.adjoint() * corner * gf).value().real();
    double pe = (ef.adjoint() * corner * ef).value().real();

    ModeState out;
    out.rho(1, 1) = state.rho(1, 1);
    out.rho(2, 2) = state.rho(2, 2);
    out.rho(1, 2) = state.rho(1, 2);
    out.rho(2, 1) = state.rho(2, 1);
    double gg = t.gc * t.gc, ss = t.gs * t.gs, gs = t.gc * t.gs;
    out.rho(0, 0) = pg * gg + pe * ss;
    out.rho(3, 3) = pg * ss + pe * gg;
    out.rho(0, 3) = (pg - pe) * gs;
    out.rho(3, 0) = out.rho(0, 3);
    return out;
}

ModeState dissipative_stroke(const ModeState& state, double k, double h, const BathSpec& bath) {
    if (!bath.couples(mode_gap(k, h))) return state;
    return thermal_state(k, h, bath.T);
}

namespace {

// Lindblad generator at fixed field in the instantaneous eigenbasis.
// Populations follow the Pauli rate equation of the four lowering channels
// (E1->E0, E2->E0, E3->E1, E3->E2) plus KMS-weighted raising partners;
// coherences rotate at the level splitting and decay at half the summed
// outflow rates of their endpoints.
struct FixedBathGenerator {
    double eps, gd, gu;

    Eigen::Matrix4cd operator()(const Eigen::Matrix4cd& s) const {
        Eigen::Matrix4cd d;
        double p0 = s(0, 0).real(), p1 = s(1, 1).real(), p2 = s(2, 2).real(),
               p3 = s(3, 3).real();
        d(0, 0) = gd * (p1 + p2) - 2.0 * gu * p0;
        d(1, 1) = gd * p3 + gu * p0 - (gd + gu) * p1;
        d(2, 2) = gd * p3 + gu * p0 - (gd + gu) * p2;
        d(3, 3) = gu * (p1 + p2) - 2.0 * gd * p3;
        const double out[4] = {2.0 * gu, gd + gu, gd + gu, 2.0 * gd};
        const double energy[4] = {-eps, 0.0, 0.0, eps};
        const std::complex<double> i(0.0, 1.0);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                if (a == b) continue;
                d(a, b) = (-i * (energy[a] - energy[b]) - 0.5 * (out[a] + out[b])) * s(a, b);
            }
        return d;
    }
};

}  // namespace

ModeState dissipative_stroke(const ModeState& state, double k, double h, const BathSpec& bath,
                             double duration, const IntegratorOptions& opts) {
    if (duration < 0.0) throw ConfigError("dissipative_stroke: negative duration");
    double eps = mode_gap(k, h);
    if (!bath.couples(eps) || duration == 0.0) return state;

    ModeBlock blk = mode_block(k, h);
    Eigen::Matrix4d v = Eigen::Matrix4d::Identity();
    v(0, 0) = blk.gc;
    v(3, 0) = blk.gs;
    v(0, 3) = -blk.gs;
    v(3, 3) = blk.gc;

    FixedBathGenerator gen{eps, bath.spectral(eps), bath.spectral(-eps)};
    Eigen::Matrix4cd sigma0 = v.transpose() * state.rho * v;

    double scale = 2.0 * eps + 4.0 * (gen.gd + gen.gu);
    long n = std::max<long>(200, static_cast<long>(std::ceil(duration * scale / 0.05)));

    auto integrate = [&](long steps) {
        Eigen::Matrix4cd s = sigma0;
        double dt = duration / static_cast<double>(steps);
        for (long j = 0; j < steps; ++j) {
            Eigen::Matrix4cd k1 = gen(s);
            Eigen::Matrix4cd k2 = gen(s + 0.5 * dt * k1);
            Eigen::Matrix4cd k3 = gen(s + 0.5 * dt * k2);
            Eigen::Matrix4cd k4 = gen(s + dt * k3);
            s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return s;
    };

    Eigen::Matrix4cd coarse = integrate(std::max<long>(n / 2, 1));
    Eigen::Matrix4cd fine;
    for (int r = 0;; ++r) {
        fine = integrate(n);
        if ((fine.diagonal() - coarse.diagonal()).cwiseAbs().maxCoeff() <= opts.check_tol) break;
        if (r >= opts.max_refinements)
            throw ComputeError("dissipative_stroke: step-halving check did not converge");
        coarse = fine;
        n *= 2;
    }

    ModeState out;
    out.rho = v * fine * v.transpose();
    return out;
}

}  // namespace qotto
