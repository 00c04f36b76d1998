#include "qotto/ltim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qotto/errors.hpp"
#include "qotto/numeric.hpp"

namespace qotto {

namespace {

int reverse_sites(int s, int L) {
    int r = 0;
    for (int q = 0; q < L; ++q)
        if (s & (1 << q)) r |= 1 << (L - 1 - q);
    return r;
}

double diagonal_energy(int s, int L, double J, double Bz, Boundary boundary) {
    auto z = [&](int q) { return (s >> q) & 1 ? 1.0 : -1.0; };
    double e = 0.0;
    for (int q = 0; q + 1 < L; ++q) e += J * z(q) * z(q + 1);
    if (boundary == Boundary::kPeriodic && L > 2) e += J * z(L - 1) * z(0);
    for (int q = 0; q < L; ++q) e -= Bz * z(q);
    return e;
}

}  // namespace

DenseModel ltim_hamiltonian(int L, double J, double Bx, double Bz, Boundary boundary) {
    if (L < 2 || L > 12)
        throw ConfigError("ltim_hamiltonian: L must lie in [2, 12], got " + std::to_string(L));
    int dim = 1 << L;
    DenseModel model;
    model.L = L;
    model.J = J;
    model.Bx = Bx;
    model.Bz = Bz;
    model.boundary = boundary;
    model.H = Eigen::MatrixXd::Zero(dim, dim);
    for (int s = 0; s < dim; ++s) {
        model.H(s, s) = diagonal_energy(s, L, J, Bz, boundary);
        for (int q = 0; q < L; ++q) model.H(s ^ (1 << q), s) -= Bx;
    }
    return model;
}

namespace {

// The chain commutes with site reflection, so everything runs in the two
// reflection sectors. Orbit vectors are (|s> + |rs>)/sqrt(2), palindromes
// carry weight 1; the antisymmetric sector drops palindromes.
struct Sector {
    int dim = 0;
    Eigen::VectorXd a0;  // diagonal part (J, Bz) in the orbit basis
    Eigen::MatrixXd x;   // sum sigma_x in the orbit basis
};

struct Spectrum {
    std::array<Eigen::MatrixXd, 2> vectors;
    std::array<Eigen::VectorXd, 2> values;
    Eigen::VectorXd merged;                    // ascending
    std::vector<std::pair<int, int>> order;    // merged index -> (sector, local)
    std::array<std::vector<int>, 2> to_merged;  // (sector, local) -> merged index
    double radius = 0.0;
};

class LtimEngine {
public:
    explicit LtimEngine(const LtimParams& p) : params_(p) {
        int L = p.L;
        if (L < 2 || L > 12)
            throw ConfigError("ltim: L must lie in [2, 12], got " + std::to_string(L));
        dim_ = 1 << L;
        rev_.resize(dim_);
        orbit_index_.assign(dim_, {-1, -1});
        orbit_coeff_.assign(dim_, {0.0, 0.0});
        const double isq2 = 1.0 / std::sqrt(2.0);
        std::vector<double> a0sym, a0anti;
        for (int s = 0; s < dim_; ++s) rev_[s] = reverse_sites(s, L);
        for (int s = 0; s < dim_; ++s) {
            int r = rev_[s];
            if (s > r) continue;
            double e = diagonal_energy(s, L, p.J, p.Bz, p.boundary);
            int id0 = static_cast<int>(a0sym.size());
            a0sym.push_back(e);
            if (s == r) {
                orbit_index_[s][0] = id0;
                orbit_coeff_[s][0] = 1.0;
            } else {
                int id1 = static_cast<int>(a0anti.size());
                a0anti.push_back(e);
                orbit_index_[s][0] = id0;
                orbit_coeff_[s][0] = isq2;
                orbit_index_[r][0] = id0;
                orbit_coeff_[r][0] = isq2;
                orbit_index_[s][1] = id1;
                orbit_coeff_[s][1] = isq2;
                orbit_index_[r][1] = id1;
                orbit_coeff_[r][1] = -isq2;
            }
        }
        sector_[0].dim = static_cast<int>(a0sym.size());
        sector_[1].dim = static_cast<int>(a0anti.size());
        sector_[0].a0 = Eigen::Map<Eigen::VectorXd>(a0sym.data(), sector_[0].dim);
        sector_[1].a0 = Eigen::Map<Eigen::VectorXd>(a0anti.data(), sector_[1].dim);
        for (int p2 = 0; p2 < 2; ++p2)
            sector_[p2].x = Eigen::MatrixXd::Zero(sector_[p2].dim, sector_[p2].dim);
        for (int s = 0; s < dim_; ++s) {
            for (int q = 0; q < L; ++q) {
                int t = s ^ (1 << q);
                for (int p2 = 0; p2 < 2; ++p2) {
                    if (orbit_index_[s][p2] < 0 || orbit_index_[t][p2] < 0) continue;
                    // <orbit(t)|X|orbit(s)> picks up each computational pair once
                    // per source member; summing over all s covers both members.
                    sector_[p2].x(orbit_index_[t][p2], orbit_index_[s][p2]) +=
                        orbit_coeff_[t][p2] * orbit_coeff_[s][p2];
                }
            }
        }
    }

    int dim() const { return dim_; }

    Eigen::MatrixXd sector_hamiltonian(int p, double bx) const {
        Eigen::MatrixXd h = -bx * sector_[p].x;
        h.diagonal() += sector_[p].a0;
        return h;
    }

    Spectrum spectrum(double bx) const {
        Spectrum sp;
        std::vector<std::pair<double, std::pair<int, int>>> all;
        all.reserve(dim_);
        for (int p = 0; p < 2; ++p) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sector_hamiltonian(p, bx));
            sp.vectors[p] = es.eigenvectors();
            sp.values[p] = es.eigenvalues();
            for (int i = 0; i < sector_[p].dim; ++i) all.push_back({sp.values[p](i), {p, i}});
        }
        std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        });
        sp.merged.resize(dim_);
        sp.order.resize(dim_);
        sp.to_merged[0].assign(sector_[0].dim, -1);
        sp.to_merged[1].assign(sector_[1].dim, -1);
        for (int m = 0; m < dim_; ++m) {
            sp.merged(m) = all[m].first;
            sp.order[m] = all[m].second;
            sp.to_merged[all[m].second.first][all[m].second.second] = m;
        }
        sp.radius = std::max(std::abs(sp.merged(0)), std::abs(sp.merged(dim_ - 1)));
        return sp;
    }

    struct Prop {
        std::array<Eigen::MatrixXcd, 2> u;
    };

    Prop compose(const RampProtocol& ramp, long n) const {
        // Fourth-order commutator-free Magnus: two exponentials per step with
        // Gauss-node weights (beta, alpha) and (alpha, beta). Each exponent is
        // A0/2 - c X, kept exactly unitary through the eigensolver.
        const double alpha = 0.25 - std::sqrt(3.0) / 6.0;
        const double beta = 0.25 + std::sqrt(3.0) / 6.0;
        const double node1 = 0.5 - std::sqrt(3.0) / 6.0;
        const double node2 = 0.5 + std::sqrt(3.0) / 6.0;
        const double dt = ramp.tau / static_cast<double>(n);
        Prop prop;
        for (int p = 0; p < 2; ++p) {
            int d = sector_[p].dim;
            Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
            Eigen::MatrixXd s(d, d);
            for (long j = 0; j < n; ++j) {
                double t0 = static_cast<double>(j) * dt;
                double b1 = ramp.field_at(t0 + node1 * dt);
                double b2 = ramp.field_at(t0 + node2 * dt);
                apply_exponential(p, 0.5, beta * b1 + alpha * b2, dt, s, u);
                apply_exponential(p, 0.5, alpha * b1 + beta * b2, dt, s, u);
            }
            prop.u[p] = std::move(u);
        }
        return prop;
    }

    Prop propagator(const RampProtocol& ramp, const Spectrum& from, const Spectrum& to,
                    const IntegratorOptions& opts) const {
        if (!(ramp.tau > 0.0)) throw ConfigError("ltim ramp: tau must be positive");
        double omega = std::max(from.radius, to.radius);
        double want = ramp.tau * omega / opts.theta_dense;
        long n = std::max<long>(ramp.steps, 1);
        if (want > static_cast<double>(n)) n = static_cast<long>(std::ceil(want));
        if (!opts.check) return compose(ramp, n);

        Prop coarse = compose(ramp, std::max<long>(n / 2, 1));
        Eigen::MatrixXd tc = transition(coarse, from, to);
        for (int r = 0;; ++r) {
            Prop fine = compose(ramp, n);
            Eigen::MatrixXd tf = transition(fine, from, to);
            if ((tf - tc).cwiseAbs().maxCoeff() <= opts.check_tol_dense) return fine;
            if (r >= opts.max_refinements)
                throw ComputeError("ltim propagator: step-halving check did not converge (tau=" +
                                   std::to_string(ramp.tau) + ")");
            tc = std::move(tf);
            n *= 2;
        }
    }

    // T(j, i) = |<to_j|U|from_i>|^2 in merged index order.
    Eigen::MatrixXd transition(const Prop& prop, const Spectrum& from, const Spectrum& to) const {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim_, dim_);
        for (int p = 0; p < 2; ++p) {
            int d = sector_[p].dim;
            if (d == 0) continue;
            Eigen::MatrixXcd amp = to.vectors[p].transpose().cast<std::complex<double>>() *
                                   prop.u[p] * from.vectors[p].cast<std::complex<double>>();
            Eigen::MatrixXd probs = amp.cwiseAbs2();
            for (int i = 0; i < d; ++i)
                for (int jj = 0; jj < d; ++jj)
                    t(to.to_merged[p][jj], from.to_merged[p][i]) = probs(jj, i);
        }
        return t;
    }

    // Merged-order permutation of ideal adiabatic transport: levels follow
    // their sector-local rank.
    std::vector<int> adiabatic_map_indices(const Spectrum& from, const Spectrum& to) const {
        std::vector<int> map(dim_);
        for (int m = 0; m < dim_; ++m) {
            auto [p, i] = from.order[m];
            map[m] = to.to_merged[p][i];
        }
        return map;
    }

    // Computational-basis matrix of a sector-block operator.
    Eigen::MatrixXcd to_computational(const Prop& prop) const {
        Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim_, dim_);
        for (int s = 0; s < dim_; ++s)
            for (int t = 0; t < dim_; ++t)
                for (int p = 0; p < 2; ++p) {
                    int os = orbit_index_[s][p], ot = orbit_index_[t][p];
                    if (os < 0 || ot < 0) continue;
                    full(t, s) += orbit_coeff_[t][p] * prop.u[p](ot, os) * orbit_coeff_[s][p];
                }
        return full;
    }

private:
    void apply_exponential(int p, double a0_scale, double c, double dt, Eigen::MatrixXd& scratch,
                           Eigen::MatrixXcd& u) const {
        int d = sector_[p].dim;
        if (d == 0) return;
        scratch = -c * sector_[p].x;
        scratch.diagonal() += a0_scale * sector_[p].a0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scratch);
        Eigen::MatrixXcd w =
            es.eigenvectors().transpose().cast<std::complex<double>>() * u;
        for (int r = 0; r < d; ++r) {
            double th = -dt * es.eigenvalues()(r);
            w.row(r) *= std::complex<double>(std::cos(th), std::sin(th));
        }
        u.noalias() = es.eigenvectors().cast<std::complex<double>>() * w;
    }

    LtimParams params_;
    int dim_ = 0;
    std::vector<int> rev_;
    std::array<Sector, 2> sector_;
    std::vector<std::array<int, 2>> orbit_index_;
    std::vector<std::array<double, 2>> orbit_coeff_;
};

Eigen::VectorXd gibbs_populations(const Eigen::VectorXd& energies, double T) {
    Eigen::VectorXd p(energies.size());
    double e0 = energies(0);
    for (Eigen::Index i = 0; i < energies.size(); ++i) p(i) = std::exp(-(energies(i) - e0) / T);
    return p / p.sum();
}

}  // namespace

LevelPopulations gap_filtered_thermalize(const LevelPopulations& pops, double T,
                                         double delta_star) {
    const Eigen::VectorXd& e = pops.energies;
    const Eigen::VectorXd& p = pops.populations;
    Eigen::Index n = e.size();
    if (n == 0 || p.size() != n)
        throw ConfigError("gap_filtered_thermalize: level list is empty or mismatched");
    for (Eigen::Index i = 1; i < n; ++i)
        if (e(i) < e(i - 1)) throw ConfigError("gap_filtered_thermalize: energies not ascending");
    for (Eigen::Index i = 0; i < n; ++i)
        if (p(i) < -1e-12) throw ConfigError("gap_filtered_thermalize: negative population");
    if (std::abs(p.sum() - 1.0) > 1e-9)
        throw ConfigError("gap_filtered_thermalize: populations not normalized");
    if (!(T > 0.0)) throw ConfigError("gap_filtered_thermalize: T must be positive");
    if (delta_star < 0.0) throw ConfigError("gap_filtered_thermalize: negative cutoff");
    if (delta_star == 0.0)
        throw ConfigError(
            "gap_filtered_thermalize: cutoff zero makes the filter a no-op; "
            "use full thermalization instead");

    LevelPopulations out = pops;
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && e(j + 1) - e(j) > delta_star) ++j;
        if (j > i) {
            double mass = 0.0;
            for (Eigen::Index t = i; t <= j; ++t) mass += p(t);
            double z = 0.0;
            for (Eigen::Index t = i; t <= j; ++t) z += std::exp(-(e(t) - e(i)) / T);
            for (Eigen::Index t = i; t <= j; ++t)
                out.populations(t) = mass * std::exp(-(e(t) - e(i)) / T) / z;
        }
        i = j + 1;
    }
    return out;
}

Eigen::MatrixXcd evolve_dense(const Eigen::MatrixXcd& rho, const LtimParams& params,
                              const RampProtocol& ramp, const IntegratorOptions& opts) {
    int dim = 1 << params.L;
    if (rho.rows() != dim || rho.cols() != dim)
        throw ConfigError("evolve_dense: state dimension does not match 2^L");
    if (!(ramp.tau > 0.0)) throw ConfigError("evolve_dense: tau must be positive");
    LtimEngine engine(params);
    Spectrum from = engine.spectrum(ramp.h_start);
    Spectrum to = engine.spectrum(ramp.h_end);
    LtimEngine::Prop prop = engine.propagator(ramp, from, to, opts);
    Eigen::MatrixXcd u = engine.to_computational(prop);
    return u * rho * u.adjoint();
}

namespace {

struct LtimStageEnergies {
    double e_b, e_c, e_d, e_a, e_b_next;
};

}  // namespace

std::vector<CycleResult> run_ltim_cycle_batch(const CycleConfig& config,
                                              const std::vector<Variant>& variants) {
    config.validate();
    if (config.model != Model::kLtim)
        throw ConfigError("run_ltim_cycle: config.model must be ltim");

    LtimParams params{config.L, config.J, config.Bz, config.boundary};
    LtimEngine engine(params);
    Spectrum hot = engine.spectrum(config.h1);
    Spectrum cold = engine.spectrum(config.h2);

    bool needs_dynamics = false;
    for (Variant v : variants)
        if (v != Variant::kAdiabatic) needs_dynamics = true;

    Eigen::MatrixXd t_down, t_up;
    if (needs_dynamics) {
        RampProtocol down{config.h1, config.h2, config.tau1, config.ramp_steps};
        RampProtocol up{config.h2, config.h1, config.tau2, config.ramp_steps};
        t_down = engine.transition(engine.propagator(down, hot, cold, config.integrator), hot,
                                   cold);
        t_up = engine.transition(engine.propagator(up, cold, hot, config.integrator), cold, hot);
    }
    std::vector<int> perm_down = engine.adiabatic_map_indices(hot, cold);
    std::vector<int> perm_up = engine.adiabatic_map_indices(cold, hot);

    Eigen::VectorXd p_b0 = gibbs_populations(hot.merged, config.T_hot);
    Eigen::VectorXd p_cold_gibbs = gibbs_populations(cold.merged, config.T_cold);

    double delta_star = 0.0;
    double gamma = config.cutoff.gamma;
    bool any_gate = false;
    for (Variant v : variants)
        if (v != Variant::kAdiabatic && v != Variant::kBare && v != Variant::kSta) any_gate = true;
    if (any_gate)
        delta_star =
            kz_cutoff(config.cutoff, config.h1, config.h2, config.tau2, config.exponents);

    auto transport = [&](const Eigen::VectorXd& p, bool adiabatic, bool downward) {
        if (!adiabatic) return Eigen::VectorXd((downward ? t_down : t_up) * p);
        const std::vector<int>& perm = downward ? perm_down : perm_up;
        Eigen::VectorXd out(p.size());
        for (Eigen::Index i = 0; i < p.size(); ++i) out(perm[static_cast<std::size_t>(i)]) = p(i);
        return out;
    };

    std::vector<CycleResult> results;
    results.reserve(variants.size());
    for (Variant variant : variants) {
        if (variant == Variant::kSta)
            throw ConfigError("ltim: the sta variant is not defined for the dense model");
        bool adiabatic = variant == Variant::kAdiabatic;
        bool gate_cold = (variant == Variant::kBeqe || variant == Variant::kBeqeSingleStroke ||
                          variant == Variant::kBeqeBothStrokes) &&
                         delta_star > 0.0;
        bool gate_hot = variant == Variant::kBeqeBothStrokes && delta_star > 0.0;

        Eigen::VectorXd p_b = p_b0;
        LtimStageEnergies st{};
        for (int cycle = 0; cycle < config.cycles; ++cycle) {
            st.e_b = hot.merged.dot(p_b);
            Eigen::VectorXd p_c = transport(p_b, adiabatic, true);
            st.e_c = cold.merged.dot(p_c);
            Eigen::VectorXd p_d;
            if (gate_cold) {
                LevelPopulations in{cold.merged, p_c.cwiseMax(0.0)};
                p_d = gap_filtered_thermalize(in, config.T_cold, delta_star).populations;
            } else {
                p_d = p_cold_gibbs;
            }
            st.e_d = cold.merged.dot(p_d);
            Eigen::VectorXd p_a = transport(p_d, adiabatic, false);
            st.e_a = hot.merged.dot(p_a);
            Eigen::VectorXd p_b_next;
            if (gate_hot) {
                LevelPopulations in{hot.merged, p_a.cwiseMax(0.0)};
                p_b_next =
                    gap_filtered_thermalize(in, config.T_hot, gamma * delta_star).populations;
            } else {
                p_b_next = p_b0;
            }
            st.e_b_next = hot.merged.dot(p_b_next);
            p_b = std::move(p_b_next);
        }

        CycleResult res;
        res.E_B = st.e_b;
        res.E_C = st.e_c;
        res.E_D = st.e_d;
        res.E_A = st.e_a;
        res.Q_in = st.e_b_next - st.e_a;
        res.Q_out = st.e_d - st.e_c;
        res.W = -(res.Q_in + res.Q_out);
        res.eta = res.Q_in > 0.0 ? -res.W / res.Q_in : std::numeric_limits<double>::quiet_NaN();
        res.P = power(res.W, config);
        results.push_back(std::move(res));
    }
    return results;
}

CycleResult run_ltim_cycle(const CycleConfig& config) {
    return run_ltim_cycle_batch(config, {config.variant}).front();
}

}  // namespace qotto
