#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qotto/dynamics.hpp"
#include "qotto/errors.hpp"
#include "qotto/state.hpp"
#include "support/oracles.hpp"

using namespace qotto;
constexpr double pi = std::numbers::pi;

namespace {
Eigen::Vector4d pops(const ModeState& s, double k, double h) {
    return eigen_populations(s, k, h);
}
}  // namespace

TEST_CASE("thermal state limits") {
    double k = pi / 2, h = 1.0;
    ModeState hot = thermal_state(k, h, 1e12);
    CHECK((hot.rho - 0.25 * Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-11);

    ModeState cold = thermal_state(k, h, 1e-3);
    ModeBlock blk = mode_block(k, h);
    Eigen::Matrix4cd proj = Eigen::Matrix4cd::Zero();
    proj(0, 0) = blk.gc * blk.gc;
    proj(0, 3) = blk.gc * blk.gs;
    proj(3, 0) = blk.gc * blk.gs;
    proj(3, 3) = blk.gs * blk.gs;
    CHECK((cold.rho - proj).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("thermal state at beta*eps = ln 2") {
    double k = pi / 2, h = 1.0;
    double eps = mode_gap(k, h);
    double T = eps / std::log(2.0);
    Eigen::Vector4d p = pops(thermal_state(k, h, T), k, h);
    CHECK(p(0) == doctest::Approx(4.0 / 9.0).epsilon(1e-13));
    CHECK(p(1) == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
    CHECK(p(2) == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
    CHECK(p(3) == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
    CHECK(thermal_state(k, h, T).is_valid());
    CHECK_THROWS_AS(thermal_state(k, h, 0.0), ConfigError);
}

TEST_CASE("stationary state under constant Hamiltonian") {
    double k = 0.7, h = 2.5;
    ModeState th = thermal_state(k, h, 3.0);
    RampProtocol flat{h, h, 4.0, 200};
    ModeState out = evolve_unitary(th, k, flat);
    CHECK((out.rho - th.rho).cwiseAbs().maxCoeff() < 1e-12);
    // energy conservation under constant H
    CHECK(std::abs(mode_energy(out, k, h) - mode_energy(th, k, h)) < 1e-9);
}

TEST_CASE("sudden quench is the identity map") {
    std::mt19937_64 rng(11);
    ModeState st = oracle::random_state(rng);
    RampProtocol ramp{10.0, 1.0, 1e-12, 1};
    ModeState out = evolve_unitary(st, 0.4, ramp);
    CHECK((out.rho - st.rho).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("slow ramp approaches the adiabatic map") {
    double k = 0.9;
    ModeState th = thermal_state(k, 10.0, 20.0);
    RampProtocol ramp{10.0, 1.0, 5000.0, 200};
    ModeState evolved = evolve_unitary(th, k, ramp);
    ModeState mapped = adiabatic_map(th, k, 10.0, 1.0);
    CHECK((pops(evolved, k, 1.0) - pops(mapped, k, 1.0)).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("unitary evolution against the brute-force oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uk(0.1, pi - 0.1), ut(0.5, 6.0);
    for (int trial = 0; trial < 3; ++trial) {
        double k = uk(rng), tau = ut(rng);
        ModeState st = oracle::random_state(rng);
        RampProtocol ramp{10.0, 1.0, tau, 200};
        ModeState lib = evolve_unitary(st, k, ramp);
        long fine = 10L * static_cast<long>(std::ceil(tau * mode_gap(k, 10.0) / 0.05));
        ModeState ref = oracle::evolve_mode(st, k, ramp, fine);
        CHECK((pops(lib, k, 1.0) - pops(ref, k, 1.0)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("zero-mode sector is untouched by unitary strokes") {
    std::mt19937_64 rng(5);
    ModeState st = oracle::random_state(rng);
    RampProtocol ramp{7.0, 0.5, 2.0, 200};
    ModeState out = evolve_unitary(st, 1.1, ramp);
    CHECK(std::abs(out.rho(1, 1) - st.rho(1, 1)) < 1e-12);
    CHECK(std::abs(out.rho(2, 2) - st.rho(2, 2)) < 1e-12);
    CHECK(std::abs(out.rho(1, 2) - st.rho(1, 2)) < 1e-12);
}

TEST_CASE("state validity under unitary strokes") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        ModeState st = oracle::random_state(rng);
        RampProtocol ramp{8.0, 0.3, 1.5, 200};
        ModeState out = evolve_unitary(st, 0.5 + 0.1 * trial, ramp);
        CHECK(out.trace_error() < 1e-10);
        CHECK(out.hermiticity_error() < 1e-10);
        CHECK(out.min_eigenvalue() > -1e-10);
    }
}

TEST_CASE("adiabatic map basics") {
    double k = 0.8;
    ModeState th = thermal_state(k, 4.0, 2.0);
    ModeState same = adiabatic_map(th, k, 4.0, 4.0);
    CHECK((same.rho - th.rho).cwiseAbs().maxCoeff() == 0.0);

    // pure ground state transports to pure ground state
    ModeState cold = thermal_state(k, 4.0, 1e-4);
    ModeState moved = adiabatic_map(cold, k, 4.0, 0.7);
    Eigen::Vector4d p = pops(moved, k, 0.7);
    CHECK(p(0) == doctest::Approx(1.0).epsilon(1e-9));

    // thermal transport reproduces the closed-form target energy
    double beta = 1.0 / 3.0;
    double e1 = mode_gap(k, 4.0), e2 = mode_gap(k, 0.7);
    ModeState th2 = thermal_state(k, 4.0, 3.0);
    ModeState tr = adiabatic_map(th2, k, 4.0, 0.7);
    double z = 2.0 + std::exp(beta * e1) + std::exp(-beta * e1);
    double expected = (e2 / z) * (std::exp(-beta * e1) - std::exp(beta * e1));
    CHECK(mode_energy(tr, k, 0.7) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("counterdiabatic coefficient") {
    CHECK(cd_field(0.7, 3.0, 0.0) == 0.0);
    CHECK(cd_field(pi / 2, 1.0, 1.0) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(cd_field(0.9, 2.0, -1.5) == doctest::Approx(-1.5 * cd_field(0.9, 2.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("exact counterdiabatic drive reproduces adiabatic transport") {
    StaDrive exact;
    for (double tau : {0.3, 3.0}) {
        for (double k : {0.05, 0.9, 2.8}) {
            ModeState th = thermal_state(k, 10.0, 20.0);
            RampProtocol ramp{10.0, 1.0, tau, 200};
            ModeState sta = evolve_sta(th, k, ramp, exact);
            ModeState mapped = adiabatic_map(th, k, 10.0, 1.0);
            CHECK((pops(sta, k, 1.0) - pops(mapped, k, 1.0)).cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("exact counterdiabatic drive against the brute-force oracle") {
    double k = 0.6, tau = 1.2;
    ModeState th = thermal_state(k, 6.0, 5.0);
    RampProtocol ramp{6.0, 0.8, tau, 200};
    StaDrive exact;
    ModeState lib = evolve_sta(th, k, ramp, exact);
    long fine = 10L * static_cast<long>(std::ceil(tau * mode_gap(k, 6.0) / 0.05));
    ModeState ref = oracle::evolve_mode(th, k, ramp, fine, true);
    CHECK((lib.rho - ref.rho).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("full sine basis reproduces the exact drive") {
    ModeGrid grid = mode_grid(16);
    SineProjector proj(grid, 8);  // M = L/2: complete on the grid
    StaDrive exact;
    StaDrive full{false, 8, &proj};
    RampProtocol ramp{5.0, 0.5, 2.0, 200};
    for (double k : grid.momenta) {
        ModeState th = thermal_state(k, 5.0, 4.0);
        ModeState a = evolve_sta(th, k, ramp, exact);
        ModeState b = evolve_sta(th, k, ramp, full);
        CHECK((pops(a, k, 0.5) - pops(b, k, 0.5)).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("truncated drive converges with M") {
    ModeGrid grid = mode_grid(16);
    RampProtocol ramp{5.0, 0.5, 2.0, 200};
    double k = grid.momenta[2];
    ModeState th = thermal_state(k, 5.0, 4.0);
    ModeState target = adiabatic_map(th, k, 5.0, 0.5);
    auto err_at = [&](int m) {
        SineProjector proj(grid, m);
        StaDrive drive{false, m, &proj};
        ModeState out = evolve_sta(th, k, ramp, drive);
        return (pops(out, k, 0.5) - pops(target, k, 0.5)).cwiseAbs().maxCoeff();
    };
    // the least-squares projection is not pointwise monotone in M, but the
    // full basis must reach the exact drive
    double coarse = err_at(1);
    double full = err_at(8);
    CHECK(full < coarse);
    CHECK(full < 1e-6);
}

TEST_CASE("zero ramp rate makes the drive inert") {
    double k = 1.3;
    std::mt19937_64 rng(3);
    ModeState st = oracle::random_state(rng);
    RampProtocol flat{2.0, 2.0, 1.0, 200};
    StaDrive exact;
    ModeState a = evolve_sta(st, k, flat, exact);
    ModeState b = evolve_unitary(st, k, flat);
    CHECK((a.rho - b.rho).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("sta validation") {
    StaDrive broken{false, 4, nullptr};
    ModeState th = thermal_state(0.5, 2.0, 1.0);
    RampProtocol ramp{2.0, 1.5, 1.0, 200};
    CHECK_THROWS_AS(evolve_sta(th, 0.5, ramp, broken), ConfigError);
    CHECK_THROWS_AS(SineProjector(mode_grid(8), 5), ConfigError);
    CHECK_THROWS_AS(SineProjector(mode_grid(8), 0), ConfigError);
}

TEST_CASE("instantaneous bath stroke") {
    double k = 0.8, h = 1.5, T = 2.0;
    std::mt19937_64 rng(17);
    ModeState st = oracle::random_state(rng);
    BathSpec open_bath{T, 1.0, 0.0};
    ModeState out = dissipative_stroke(st, k, h, open_bath);
    CHECK((out.rho - thermal_state(k, h, T).rho).cwiseAbs().maxCoeff() == 0.0);

    BathSpec gated{T, 1.0, mode_gap(k, h) + 0.5};
    ModeState frozen = dissipative_stroke(st, k, h, gated);
    CHECK((frozen.rho - st.rho).cwiseAbs().maxCoeff() == 0.0);

    // tie: a gap exactly at the cutoff still couples
    BathSpec tie{T, 1.0, mode_gap(k, h)};
    ModeState tied = dissipative_stroke(st, k, h, tie);
    CHECK((tied.rho - thermal_state(k, h, T).rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("timed bath stroke relaxes to the Gibbs state") {
    double k = 1.0, h = 1.2, T = 2.5;
    BathSpec bath{T, 1.0, 0.0};
    ModeState th = thermal_state(k, h, T);
    ModeState kept = dissipative_stroke(th, k, h, bath, 3.0);
    CHECK(oracle::trace_distance(kept.rho, th.rho) < 1e-9);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        ModeState st = oracle::random_state(rng);
        ModeState out = dissipative_stroke(st, k, h, bath, 50.0);
        CHECK(oracle::trace_distance(out.rho, th.rho) < 1e-6);
        CHECK(out.trace_error() < 1e-10);
        CHECK(out.hermiticity_error() < 1e-10);
        CHECK(out.min_eigenvalue() > -1e-10);
    }
}

TEST_CASE("timed bath stroke obeys detailed balance") {
    double k = 0.7, h = 2.0, T = 3.0;
    double eps = mode_gap(k, h);
    BathSpec bath{T, 1.0, 0.0};
    std::mt19937_64 rng(29);
    ModeState out = dissipative_stroke(oracle::random_state(rng), k, h, bath, 60.0);
    Eigen::Vector4d p = eigen_populations(out, k, h);
    double ratio = std::exp(-eps / T);
    CHECK(std::abs(p(1) / p(0) - ratio) < 1e-8);
    CHECK(std::abs(p(2) / p(0) - ratio) < 1e-8);
    CHECK(std::abs(p(3) / p(1) - ratio) < 1e-8);
}

TEST_CASE("timed bath stroke respects the cutoff") {
    double k = 0.4, h = 1.0;
    std::mt19937_64 rng(31);
    ModeState st = oracle::random_state(rng);
    BathSpec gated{1.0, 1.0, mode_gap(k, h) * 1.01};
    ModeState out = dissipative_stroke(st, k, h, gated, 10.0);
    CHECK((out.rho - st.rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral function satisfies the KMS relation") {
    BathSpec bath{1.7, 0.9, 0.6};
    for (double d : {0.7, 1.3, 5.0})
        CHECK(bath.spectral(-d) == doctest::Approx(std::exp(-d / bath.T) * bath.spectral(d))
                                        .epsilon(1e-14));
    CHECK(bath.spectral(0.5) == 0.0);   // below cutoff
    CHECK(bath.spectral(-0.5) == 0.0);  // KMS partner of a gated gap
    CHECK(bath.spectral(0.6) == doctest::Approx(0.9));
}
