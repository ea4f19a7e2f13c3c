// statesynth.hpp — preparation of the two-well singlet and its dynamical approximation

#pragma once

#include <cstddef>
#include <vector>

#include "becgrad/dynamics.hpp"
#include "becgrad/hamiltonian.hpp"
#include "becgrad/wells.hpp"

namespace becgrad {

struct SynthesisReport {
    double t_star{0.0};        // first zero of <n_gL - n_gR>, in 1/E_J
    double fidelity_max{0.0};  // best |<singlet|psi(t)>|^2 over the phase search
    double t_phase{0.0};       // phase-evolution time achieving it
    std::vector<double> times;
    std::vector<double> population_difference;
    std::vector<double> phase_times;
    std::vector<double> fidelity;
};

struct SynthesisResult {
    QuantumState state;
    SynthesisReport report;
};

/// (2j+1)^{-1/2} sum_m (-1)^{j-m} |j,m>_L |j,-m>_R with j = N/4, on
/// WellPair::fixed(N/2). For integer j the (-1)^{j-m} phase differs from
/// (-1)^m by the global factor (-1)^j; for half-integer j it is the
/// integer-valued choice of the same singlet.
QuantumState singlet_state(std::size_t N);
// The same state expressed on any basis containing its occupations.
QuantumState singlet_state(std::size_t N, const BasisPtr& target);

// Four-mode basis with N/2 atoms of each species spread over both wells.
BasisPtr species_sector_basis(std::size_t N);

// E_J = 1, U_ee = U_gg = U_eg = U (so 2 U_eg n_e n_g = 2U n_e n_g and chi = 0),
// delta_L = delta = E_J, delta_R = 0.
PhysicalParams tunneling_params(std::size_t N, double u_over_ej);

/// Evolves e-atoms-left / g-atoms-right under the Bose-Hubbard Hamiltonian and
/// stops at the first sign change of <n_gL - n_gR> on `grid`, refined by
/// bisection. Throws std::runtime_error when the grid holds no crossing.
SynthesisResult generate_entangled(const PhysicalParams& params, const TimeGrid& grid);

/// Applies exp(-i H_rp t) and keeps the t on `search` (refined by
/// golden-section search) maximizing the fidelity to the singlet.
SynthesisResult apply_phase_correction(const QuantumState& state, const PhysicalParams& params, const TimeGrid& search);

// generate_entangled + apply_phase_correction with grids chosen from the
// spectrum: scans for t* in growing windows and searches one phase period.
SynthesisResult synthesize(std::size_t N, double u_over_ej);

// Wells are separated once per-well numbers are equal; keep the N/2-per-well
// component and renormalize.
QuantumState to_detection_space(const QuantumState& synthesized, const WellPair& wells);

struct FidelityRow {
    std::size_t N{0};
    double u_over_ej{0.0};
    double t_star{0.0};
    double t_phase{0.0};
    double fidelity{0.0};
};

std::vector<FidelityRow> fidelity_vs_N_sweep(const std::vector<double>& u_over_ej, const std::vector<std::size_t>& N_list);

}  // namespace becgrad
