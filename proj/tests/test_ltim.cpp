#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qotto/errors.hpp"
#include "qotto/ltim.hpp"
#include "support/oracles.hpp"

using namespace qotto;

namespace {

Eigen::MatrixXd oracle_diag_part(int L, double J, double Bz, bool periodic) {
    int dim = 1 << L;
    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::Matrix2d z = oracle::pauli_z_bit();
    for (int q = 0; q + 1 < L; ++q)
        a0 += J * oracle::site_operator(L, q, z) * oracle::site_operator(L, q + 1, z);
    if (periodic && L > 2)
        a0 += J * oracle::site_operator(L, L - 1, z) * oracle::site_operator(L, 0, z);
    for (int q = 0; q < L; ++q) a0 -= Bz * oracle::site_operator(L, q, z);
    return a0;
}

Eigen::MatrixXd oracle_x_part(int L) {
    int dim = 1 << L;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
    for (int q = 0; q < L; ++q) x += oracle::site_operator(L, q, oracle::pauli_x_bit());
    return x;
}

Eigen::MatrixXcd random_density(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Eigen::MatrixXcd a(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) a(r, c) = std::complex<double>(n(rng), n(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace();
}

LevelPopulations random_levels(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> gap(0.0, 2.0), pop(0.0, 1.0);
    LevelPopulations lp;
    lp.energies.resize(n);
    lp.populations.resize(n);
    double e = -3.0;
    for (int i = 0; i < n; ++i) {
        lp.energies(i) = e;
        e += gap(rng);
        lp.populations(i) = pop(rng);
    }
    lp.populations /= lp.populations.sum();
    return lp;
}

}  // namespace

TEST_CASE("dense hamiltonian small cases") {
    DenseModel m = ltim_hamiltonian(2, 1.0, 0.0, 0.0);
    Eigen::Vector4d diag = m.H.diagonal();
    CHECK(diag(0) == 1.0);   // both spins down
    CHECK(diag(1) == -1.0);
    CHECK(diag(2) == -1.0);
    CHECK(diag(3) == 1.0);
    CHECK(m.H.cwiseAbs().sum() == doctest::Approx(4.0));  // diagonal only at Bx = 0

    DenseModel m2 = ltim_hamiltonian(2, 0.0, 1.0, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m2.H);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(std::abs(es.eigenvalues()(1)) < 1e-12);
    CHECK(std::abs(es.eigenvalues()(2)) < 1e-12);
    CHECK(es.eigenvalues()(3) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(ltim_hamiltonian(1, 1.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(ltim_hamiltonian(13, 1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("dense hamiltonian matches the kron oracle") {
    for (bool periodic : {false, true}) {
        int L = 5;
        Boundary b = periodic ? Boundary::kPeriodic : Boundary::kOpen;
        DenseModel m = ltim_hamiltonian(L, 1.3, 0.7, 0.4, b);
        Eigen::MatrixXd ref =
            oracle_diag_part(L, 1.3, 0.4, periodic) - 0.7 * oracle_x_part(L);
        CHECK((m.H - ref).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((m.H - m.H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("gap filter reproduces the worked three-level case") {
    LevelPopulations in;
    in.energies.resize(3);
    in.energies << 0.0, 2.0, 2.1;
    in.populations.resize(3);
    in.populations << 0.5, 0.3, 0.2;
    LevelPopulations out = gap_filtered_thermalize(in, 2.0, 1.0);
    double r = std::exp(-1.0);
    CHECK(out.populations(0) == doctest::Approx(0.8 / (1.0 + r)).epsilon(1e-14));
    CHECK(out.populations(1) == doctest::Approx(0.8 * r / (1.0 + r)).epsilon(1e-14));
    CHECK(out.populations(2) == 0.2);
}

TEST_CASE("gap filter limits") {
    std::mt19937_64 rng(7);
    LevelPopulations in = random_levels(12, rng);

    // cutoff below every gap: full Gibbs
    double min_gap = 1e300;
    for (int i = 1; i < 12; ++i)
        min_gap = std::min(min_gap, in.energies(i) - in.energies(i - 1));
    REQUIRE(min_gap > 0.0);
    LevelPopulations gibbs = gap_filtered_thermalize(in, 1.7, min_gap * 0.5);
    Eigen::VectorXd w =
        (-(in.energies.array() - in.energies(0)) / 1.7).exp();
    w /= w.sum();
    CHECK((gibbs.populations - w).cwiseAbs().maxCoeff() < 1e-12);

    // cutoff above every gap: identity, bit for bit
    double max_gap = 0.0;
    for (int i = 1; i < 12; ++i)
        max_gap = std::max(max_gap, in.energies(i) - in.energies(i - 1));
    LevelPopulations frozen = gap_filtered_thermalize(in, 1.7, max_gap * 1.01);
    for (int i = 0; i < 12; ++i) CHECK(frozen.populations(i) == in.populations(i));
}

TEST_CASE("gap filter rejects bad input") {
    std::mt19937_64 rng(9);
    LevelPopulations in = random_levels(6, rng);
    CHECK_THROWS_AS(gap_filtered_thermalize(in, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(gap_filtered_thermalize(in, 0.0, 0.5), ConfigError);
    CHECK_THROWS_AS(gap_filtered_thermalize(in, 1.0, -0.5), ConfigError);
    LevelPopulations unsorted = in;
    std::swap(unsorted.energies(1), unsorted.energies(2));
    CHECK_THROWS_AS(gap_filtered_thermalize(unsorted, 1.0, 0.5), ConfigError);
    LevelPopulations skewed = in;
    skewed.populations(0) += 0.5;
    CHECK_THROWS_AS(gap_filtered_thermalize(skewed, 1.0, 0.5), ConfigError);
}

TEST_CASE("gap filter properties on random spectra") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> ud(0.05, 2.5), ut(0.2, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng() % 30);
        LevelPopulations in = random_levels(n, rng);
        double delta = ud(rng), temp = ut(rng);
        LevelPopulations out = gap_filtered_thermalize(in, temp, delta);

        CHECK(std::abs(out.populations.sum() - 1.0) < 1e-12);
        CHECK(out.populations.minCoeff() >= 0.0);

        // thermal blocks carry Boltzmann ratios; frozen links conserve both sides
        for (int i = 1; i < n; ++i) {
            double gap = out.energies(i) - out.energies(i - 1);
            if (gap > delta) {
                double expect = std::exp(-gap / temp);
                if (out.populations(i - 1) > 1e-300)
                    CHECK(std::abs(out.populations(i) / out.populations(i - 1) - expect) <
                          1e-10 * std::max(1.0, expect));
            }
        }

        // frozen singletons are bit-identical
        for (int i = 0; i < n; ++i) {
            bool open_below = i > 0 && out.energies(i) - out.energies(i - 1) > delta;
            bool open_above = i + 1 < n && out.energies(i + 1) - out.energies(i) > delta;
            if (!open_below && !open_above) CHECK(out.populations(i) == in.populations(i));
        }

        // idempotence
        LevelPopulations twice = gap_filtered_thermalize(out, temp, delta);
        CHECK((twice.populations - out.populations).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("degenerate adjacent levels never exchange through the filter") {
    LevelPopulations in;
    in.energies.resize(3);
    in.energies << 0.0, 0.0, 5.0;
    in.populations.resize(3);
    in.populations << 0.1, 0.5, 0.4;
    LevelPopulations out = gap_filtered_thermalize(in, 1.0, 1.0);
    CHECK(out.populations(0) == 0.1);  // frozen singleton
    // block {1, 2} re-thermalizes on mass 0.9
    double r = std::exp(-5.0);
    CHECK(out.populations(1) == doctest::Approx(0.9 / (1.0 + r)));
    CHECK(out.populations(2) == doctest::Approx(0.9 * r / (1.0 + r)));
}

TEST_CASE("dense evolution: stationary and sudden limits") {
    LtimParams params{3, 1.0, 0.6, Boundary::kOpen};
    DenseModel m = ltim_hamiltonian(3, 1.0, 2.0, 0.6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.H);
    Eigen::MatrixXcd proj = (es.eigenvectors().col(0) * es.eigenvectors().col(0).transpose())
                                .cast<std::complex<double>>();
    RampProtocol flat{2.0, 2.0, 3.0, 200};
    Eigen::MatrixXcd kept = evolve_dense(proj, params, flat);
    CHECK((kept - proj).cwiseAbs().maxCoeff() < 1e-10);

    std::mt19937_64 rng(3);
    Eigen::MatrixXcd rho = random_density(8, rng);
    RampProtocol sudden{2.0, 0.3, 1e-12, 1};
    CHECK((evolve_dense(rho, params, sudden) - rho).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("dense evolution against the brute-force oracle") {
    LtimParams params{3, 1.0, 0.6, Boundary::kOpen};
    std::mt19937_64 rng(5);
    Eigen::MatrixXcd rho = random_density(8, rng);
    RampProtocol ramp{4.0, 0.3, 2.0, 200};
    Eigen::MatrixXcd lib = evolve_dense(rho, params, ramp);
    Eigen::MatrixXd a0 = oracle_diag_part(3, 1.0, 0.6, false);
    Eigen::MatrixXd x = oracle_x_part(3);
    Eigen::MatrixXcd ref = oracle::evolve_dense_rk4(rho, a0, x, ramp, 200000);
    CHECK((lib - ref).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("dense evolution preserves state validity") {
    LtimParams params{4, 1.0, 1.0, Boundary::kOpen};
    std::mt19937_64 rng(11);
    Eigen::MatrixXcd rho = random_density(16, rng);
    RampProtocol ramp{10.0, 0.75, 5.0, 200};
    Eigen::MatrixXcd out = evolve_dense(rho, params, ramp);
    CHECK(std::abs(out.trace().real() - 1.0) < 1e-9);
    CHECK(std::abs(out.trace().imag()) < 1e-12);
    CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out);
    CHECK(es.eigenvalues().minCoeff() > -1e-9);
}

TEST_CASE("slow dense ramp approaches population transport") {
    LtimParams params{4, 1.0, 1.0, Boundary::kOpen};
    DenseModel m1 = ltim_hamiltonian(4, 1.0, 10.0, 1.0);
    DenseModel m2 = ltim_hamiltonian(4, 1.0, 0.75, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es1(m1.H), es2(m2.H);
    Eigen::VectorXd w = (-(es1.eigenvalues().array() - es1.eigenvalues()(0)) / 4.0).exp();
    w /= w.sum();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(16, 16);
    for (int i = 0; i < 16; ++i)
        rho += w(i) * (es1.eigenvectors().col(i) * es1.eigenvectors().col(i).transpose())
                          .cast<std::complex<double>>();
    RampProtocol ramp{10.0, 0.75, 2000.0, 200};
    Eigen::MatrixXcd out = evolve_dense(rho, params, ramp);
    for (int i = 0; i < 16; ++i) {
        double p = (es2.eigenvectors().col(i).transpose().cast<std::complex<double>>() * out *
                    es2.eigenvectors().col(i).cast<std::complex<double>>())(0)
                       .real();
        CHECK(std::abs(p - w(i)) < 1e-3);
    }
}

namespace {

CycleConfig ltim_config() {
    CycleConfig c;
    c.model = Model::kLtim;
    c.L = 2;
    c.J = 1.0;
    c.Bz = 0.0;
    c.h1 = 3.0;
    c.h2 = 0.5;
    c.T_hot = 5.0;
    c.T_cold = 0.5;
    c.tau1 = c.tau2 = 3.0;
    c.variant = Variant::kBare;
    return c;
}

}  // namespace

TEST_CASE("two-qubit cycle against a hand-built oracle") {
    CycleConfig c = ltim_config();
    CycleResult r = run_ltim_cycle(c);

    Eigen::MatrixXd a0 = oracle_diag_part(2, c.J, c.Bz, false);
    Eigen::MatrixXd x = oracle_x_part(2);
    Eigen::MatrixXd hh = a0 - c.h1 * x;
    Eigen::MatrixXd hc = a0 - c.h2 * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es1(hh), es2(hc);
    auto gibbs = [](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es, double T) {
        Eigen::VectorXd w = (-(es.eigenvalues().array() - es.eigenvalues()(0)) / T).exp();
        w /= w.sum();
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(es.eigenvalues().size(),
                                                      es.eigenvalues().size());
        for (int i = 0; i < w.size(); ++i)
            rho += w(i) * (es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose())
                              .cast<std::complex<double>>();
        return rho;
    };

    Eigen::MatrixXcd rho_b = gibbs(es1, c.T_hot);
    double e_b = (hh.cast<std::complex<double>>() * rho_b).trace().real();
    RampProtocol down{c.h1, c.h2, c.tau1, 200};
    Eigen::MatrixXcd rho_c = oracle::evolve_dense_rk4(rho_b, a0, x, down, 60000);
    double e_c = (hc.cast<std::complex<double>>() * rho_c).trace().real();
    Eigen::MatrixXcd rho_d = gibbs(es2, c.T_cold);
    double e_d = (hc.cast<std::complex<double>>() * rho_d).trace().real();
    RampProtocol up{c.h2, c.h1, c.tau2, 200};
    Eigen::MatrixXcd rho_a = oracle::evolve_dense_rk4(rho_d, a0, x, up, 60000);
    double e_a = (hh.cast<std::complex<double>>() * rho_a).trace().real();

    double q_in = e_b - e_a, q_out = e_d - e_c;
    CHECK(r.W == doctest::Approx(-(q_in + q_out)).epsilon(1e-8));
    CHECK(r.Q_in == doctest::Approx(q_in).epsilon(1e-8));
    CHECK(r.Q_out == doctest::Approx(q_out).epsilon(1e-8));
}

TEST_CASE("zero cutoff makes the gated dense cycle equal the bare one") {
    CycleConfig c = ltim_config();
    c.cutoff = {CutoffKind::kConstant, 1.0, 0.0, 0.0, 0.0, 1.0};
    std::vector<CycleResult> res =
        run_ltim_cycle_batch(c, {Variant::kBare, Variant::kBeqe});
    CHECK(res[0].W == res[1].W);
    CHECK(res[0].Q_in == res[1].Q_in);
    CHECK(res[0].Q_out == res[1].Q_out);
}

TEST_CASE("dense cycle variants stay well-formed") {
    CycleConfig c = ltim_config();
    c.L = 4;
    c.Bz = 1.0;
    c.h1 = 10.0;
    c.h2 = 0.75;
    c.T_hot = 500.0;
    c.T_cold = 0.1;
    c.cutoff = {CutoffKind::kKzCritical, 1.0, 0.0, 0.0, 0.0, 1.0};
    std::vector<SweepRow> rows = sweep_tau(
        c, {Variant::kBare, Variant::kBeqe, Variant::kBeqeBothStrokes, Variant::kAdiabatic},
        {4.0, 40.0});
    for (const SweepRow& row : rows) {
        REQUIRE_FALSE(row.failed);
        const CycleResult& r = row.result;
        CHECK(std::abs(r.W + r.Q_in + r.Q_out) < 1e-10 * std::max(1.0, std::abs(r.Q_in)));
        CHECK(std::isfinite(r.W));
    }
    // sta has no dense counterpart
    CycleConfig bad = c;
    bad.variant = Variant::kSta;
    CHECK_THROWS_AS(run_ltim_cycle(bad), ConfigError);
}
