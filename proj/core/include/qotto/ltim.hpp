#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qotto/cycle.hpp"
#include "qotto/dynamics.hpp"

namespace qotto {

// Antiferromagnetic transverse-field Ising chain with a longitudinal field,
// H = J sum sz_i sz_{i+1} - Bx sum sx_i - Bz sum sz_i, dense form.
struct DenseModel {
    int L = 0;
    double J = 0.0;
    double Bz = 0.0;
    double Bx = 0.0;
    Boundary boundary = Boundary::kOpen;
    Eigen::MatrixXd H;  // 2^L x 2^L, computational sigma-z product basis
};

DenseModel ltim_hamiltonian(int L, double J, double Bx, double Bz,
                            Boundary boundary = Boundary::kOpen);

struct LtimParams {
    int L = 0;
    double J = 1.0;
    double Bz = 1.0;
    Boundary boundary = Boundary::kOpen;
};

// Ascending spectrum with occupation probabilities.
struct LevelPopulations {
    Eigen::VectorXd energies;
    Eigen::VectorXd populations;
};

// Bath contact restricted to level pairs separated by more than delta_star:
// consecutive levels connected by gaps > delta_star form thermal blocks that
// re-equilibrate on their conserved total mass; everything else freezes.
LevelPopulations gap_filtered_thermalize(const LevelPopulations& pops, double T,
                                         double delta_star);

// rho(tau) under the time-dependent dense Hamiltonian with Bx ramped
// linearly (ramp.h_start -> ramp.h_end).
Eigen::MatrixXcd evolve_dense(const Eigen::MatrixXcd& rho, const LtimParams& params,
                              const RampProtocol& ramp, const IntegratorOptions& opts = {});

// Otto cycle on the dense model. The beqe variant gap-filters the decaying
// stroke only; beqe-both-strokes also filters the energizing stroke at
// gamma * delta_star.
CycleResult run_ltim_cycle(const CycleConfig& config);

// All variants at one tau, sharing the two ramp propagators.
std::vector<CycleResult> run_ltim_cycle_batch(const CycleConfig& config,
                                              const std::vector<Variant>& variants);

}  // namespace qotto
