// metrology.hpp — the <J~^2_yz> estimator, error propagation and reference curves

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "becgrad/dynamics.hpp"
#include "becgrad/hamiltonian.hpp"
#include "becgrad/wells.hpp"

namespace becgrad {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// O = (J_Ly - J_Ry)^2 - (J_Lz + J_Rz)^2 on the joint basis of `wells`.
Operator estimator_operator(const WellPair& wells);

struct EstimatorSeries {
    std::vector<double> times;
    std::vector<double> estimator;     // <O>
    std::vector<double> estimator_sq;  // <O^2>
    std::vector<double> jz_sq;         // <(J_Lz + J_Rz)^2>
    std::vector<double> uncertainty;   // delta phi_D, kUnbounded at stationary points
    PhysicalParams params;
    LossRates rates;

    double variance(std::size_t i) const;  // clamped at 0
};

/// Moments of O per sample and delta phi_D = sqrt(<O^2> - <O>^2) / |d<O>/d phi_D|
/// with d/d phi_D = (1/Omega_D) d/dt by three-point differences on the sample
/// grid (one-sided second order at the ends). Needs at least three samples.
EstimatorSeries estimator_series(const std::vector<QuantumState>& states, const std::vector<double>& times,
                                 const WellPair& wells, const PhysicalParams& params, const LossRates& rates = {});

double analytic_variance(std::size_t N, double phi_D);     // N(N+4)/12 cos(phi_D)
double analytic_uncertainty(std::size_t N, double phi_D);  // kUnbounded where sin(phi_D) = 0
double heisenberg_minimum(std::size_t N);                  // sqrt(3 / (N(N+4)))
double sql_baseline(std::size_t N);                        // 1/sqrt(N)
// Quantum Cramer-Rao bound for phi_D on the singlet: 1/sqrt(F_Q) with
// F_Q = 4 Var((J_Lx - J_Rx)/2) = N(N+4)/12, i.e. sqrt(12/(N(N+4))).
double cramer_rao_bound(std::size_t N);

// Magnetic field (tesla) whose Bohr-magneton coupling mu_B B / hbar equals
// omega * 2 pi * omega_ref_hz rad/s.
double field_from_coupling(double omega, double omega_ref_hz);

enum class InitialState { singlet, synthesized, product };

const char* to_string(InitialState s);
std::optional<InitialState> initial_state_from_string(const std::string& s);

struct DetectionSetup {
    PhysicalParams params;    // N, Omega, Omega_D, chi (U_ee = U_gg assumed)
    LossRates rates;
    InitialState initial{InitialState::singlet};
    double u_over_ej{10.0};   // synthesis strength for InitialState::synthesized
};

// Fixed N/2 per well without losses, at most N/2 per well with losses.
WellPair detection_space(const DetectionSetup& setup);

QuantumState detection_initial_state(const DetectionSetup& setup, const WellPair& wells);

// H_1 + chi sum J_z^2 per well, with the loss jumps of `rates`.
SeparableLindbladModel detection_model(const PhysicalParams& params, const LossRates& rates, const WellPair& wells);

struct SimulationResult {
    EstimatorSeries series;
    std::vector<QuantumState> states;
    std::optional<IntegrationReport> integration;  // set for Lindblad runs
};

// Unitary propagation when no loss is active, separable Lindblad otherwise.
SimulationResult simulate_detection(const DetectionSetup& setup, const TimeGrid& grid);

struct UncertaintyPoint {
    double time{0.0};
    double estimator{0.0};
    double estimator_sq{0.0};
    double uncertainty{0.0};
};

// delta phi_D at t from the three-point grid {t - h, t, t + h}.
UncertaintyPoint uncertainty_at(const DetectionSetup& setup, double t, double h = 0.01);

struct UncertaintyRow {
    std::size_t N{0};
    double uncertainty{0.0};  // at t = pi / (2 Omega_D)
    double estimator{0.0};
    double heisenberg{0.0};
    double sql{0.0};
};

struct MinUncertaintyConfig {
    DetectionSetup setup;  // setup.params.N is overridden per row
    std::vector<std::size_t> N_list;
};

std::vector<UncertaintyRow> min_uncertainty_vs_N(const MinUncertaintyConfig& config);

}  // namespace becgrad
