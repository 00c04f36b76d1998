#pragma once

#include <Eigen/Dense>

#include "qotto/tim.hpp"

namespace qotto {

// Density matrix of one momentum mode in the basis |0>, |k>, |-k>, |k,-k>.
struct ModeState {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();

    double trace_error() const;        // |Tr rho - 1|
    double hermiticity_error() const;  // max |rho - rho^dagger|
    double min_eigenvalue() const;
    bool is_valid(double tol = 1e-10) const;
};

// Gibbs state of mode k at field h and temperature T > 0: diagonal in the
// eigenbasis with weights (1, w, w, w^2)/(1+w)^2 ground to top, w = e^{-eps/T}.
ModeState thermal_state(double k, double h, double T);

// Energy expectation Tr(H_k(h) rho).
double mode_energy(const ModeState& state, double k, double h);

// Eigen-populations (ground, |k>, |-k>, top) of a state at field h.
Eigen::Vector4d eigen_populations(const ModeState& state, double k, double h);

}  // namespace qotto
