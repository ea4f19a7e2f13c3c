// hamiltonian.hpp — two-well Bose-Hubbard, microwave coupling and spin-form Hamiltonians
//
// Units: hbar = 1 and the mean coupling Omega sets the frequency scale, so
// every rate below is in units of Omega and time in units of 1/Omega.

#pragma once

#include <cstddef>

#include "becgrad/fock.hpp"
#include "becgrad/wells.hpp"

namespace becgrad {

struct PhysicalParams {
    std::size_t N{4};      // total atom count, N/2 per well
    double E_J_e{0.0};     // tunneling, |e> component
    double E_J_g{0.0};     // tunneling, |g> component
    double U_ee{0.0};
    double U_gg{0.0};
    double U_eg{0.0};
    double Delta{0.0};     // detuning omega_e - omega
    double Omega{1.0};     // mean Rabi coupling
    double Omega_D{0.05};  // gradient coupling Omega_L - Omega_R
    double chi{0.0};       // one-axis twisting strength used by build_collective
    double delta_L{0.0};   // relative-phase rates
    double delta_R{0.0};

    double omega_left() const { return Omega + 0.5 * Omega_D; }
    double omega_right() const { return Omega - 0.5 * Omega_D; }
    double derived_chi() const { return U_ee + U_gg - 2.0 * U_eg; }

    // Throws unless N is even and >= 2 and every rate is finite.
    void validate() const;
};

/// H0 = -(E_J^e e_L^dag e_R + E_J^g g_L^dag g_R + h.c.)/2
///      + sum_alpha (U_ee n_e^2 + 2 U_eg n_e n_g + U_gg n_g^2)
/// on any four-mode basis.
Operator build_bose_hubbard(const PhysicalParams& params, const BasisPtr& basis);

/// Rotating-frame coupling sum_alpha [Delta n_e + (Omega_alpha/2)(e^dag g + h.c.)]
/// with Omega_L,R = Omega +- Omega_D/2, on any four-mode basis.
Operator build_coupling(const PhysicalParams& params, const BasisPtr& basis);

// Omega (J_Lx + J_Rx) + (Omega_D/2)(J_Lx - J_Rx), assembled from per-well spins.
Operator build_gradient_spin(const PhysicalParams& params, const WellPair& wells);

// delta_L J_Lz + delta_R J_Rz.
Operator build_phase_shift(const PhysicalParams& params, const WellPair& wells);
Operator build_phase_shift(const PhysicalParams& params, const BasisPtr& four_mode);

// sum_alpha [(U_ee - U_gg) N J_alpha,z / 2 + chi J_alpha,z^2]; the constant
// (U_ee + U_gg + 2 U_eg) N^2 / 8 of the mode form is dropped.
Operator build_collective(const PhysicalParams& params, const WellPair& wells);

// Per-well pieces of the spin-form Hamiltonians, used by separable dynamics.
Operator well_gradient_term(const PhysicalParams& params, const BasisPtr& well, bool left);
Operator well_collective_term(const PhysicalParams& params, const BasisPtr& well);

}  // namespace becgrad
