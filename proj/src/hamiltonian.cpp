// hamiltonian.cpp — Bose-Hubbard, coupling and collective Hamiltonians

#include "becgrad/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace becgrad {

namespace {

void require_four_modes(const BasisPtr& basis, const char* who) {
    if (!basis || basis->modes() != 4)
        throw std::invalid_argument(std::string(who) + ": expected a four-mode (e_L, g_L, e_R, g_R) basis");
}

}  // namespace

void PhysicalParams::validate() const {
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("PhysicalParams: N must be even and >= 2, got " + std::to_string(N));
    for (double v : {E_J_e, E_J_g, U_ee, U_gg, U_eg, Delta, Omega, Omega_D, chi, delta_L, delta_R})
        if (!std::isfinite(v)) throw std::invalid_argument("PhysicalParams: non-finite rate");
}

Operator build_bose_hubbard(const PhysicalParams& p, const BasisPtr& basis) {
    require_four_modes(basis, "build_bose_hubbard");
    const Operator hop_e = transfer(basis, mode::e_left, mode::e_right);
    const Operator hop_g = transfer(basis, mode::g_left, mode::g_right);
    Operator h = cplx{-0.5 * p.E_J_e} * (hop_e + hop_e.adjoint()) + cplx{-0.5 * p.E_J_g} * (hop_g + hop_g.adjoint());
    for (auto [e, g] : {std::pair{mode::e_left, mode::g_left}, std::pair{mode::e_right, mode::g_right}}) {
        const Operator ne = number(basis, e);
        const Operator ng = number(basis, g);
        h += cplx{p.U_ee} * (ne * ne) + cplx{2.0 * p.U_eg} * (ne * ng) + cplx{p.U_gg} * (ng * ng);
    }
    return h;
}

Operator build_coupling(const PhysicalParams& p, const BasisPtr& basis) {
    require_four_modes(basis, "build_coupling");
    Operator h = Operator::zero(basis);
    const double omegas[2] = {p.omega_left(), p.omega_right()};
    const std::pair<std::size_t, std::size_t> wells[2] = {{mode::e_left, mode::g_left}, {mode::e_right, mode::g_right}};
    for (int w = 0; w < 2; ++w) {
        const auto [e, g] = wells[w];
        const Operator flip = transfer(basis, e, g);
        h += cplx{p.Delta} * number(basis, e) + cplx{0.5 * omegas[w]} * (flip + flip.adjoint());
    }
    return h;
}

Operator well_gradient_term(const PhysicalParams& p, const BasisPtr& well, bool left) {
    return cplx{left ? p.omega_left() : p.omega_right()} * schwinger_spin(well, mode::e, mode::g).x;
}

Operator well_collective_term(const PhysicalParams& p, const BasisPtr& well) {
    const Operator jz = schwinger_spin(well, mode::e, mode::g).z;
    return cplx{0.5 * (p.U_ee - p.U_gg) * static_cast<double>(p.N)} * jz + cplx{p.chi} * (jz * jz);
}

Operator build_gradient_spin(const PhysicalParams& p, const WellPair& wells) {
    return wells.lift_left(well_gradient_term(p, wells.left, true)) +
           wells.lift_right(well_gradient_term(p, wells.right, false));
}

Operator build_phase_shift(const PhysicalParams& p, const WellPair& wells) {
    return cplx{p.delta_L} * wells.left_spin().z + cplx{p.delta_R} * wells.right_spin().z;
}

Operator build_phase_shift(const PhysicalParams& p, const BasisPtr& four_mode) {
    require_four_modes(four_mode, "build_phase_shift");
    return cplx{p.delta_L} * schwinger_spin(four_mode, mode::e_left, mode::g_left).z +
           cplx{p.delta_R} * schwinger_spin(four_mode, mode::e_right, mode::g_right).z;
}

Operator build_collective(const PhysicalParams& p, const WellPair& wells) {
    return wells.lift_left(well_collective_term(p, wells.left)) +
           wells.lift_right(well_collective_term(p, wells.right));
}

}  // namespace becgrad
