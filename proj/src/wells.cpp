// wells.cpp — per-well bases and their Kronecker lift

#include "becgrad/wells.hpp"

#include <stdexcept>

namespace becgrad {

BasisPtr well_basis(std::size_t atoms, bool fixed_number) {
    if (!fixed_number) return build_basis(2, atoms);
    return build_basis(2, atoms, {SectorConstraint::exactly({mode::e, mode::g}, atoms)});
}

namespace {

WellPair make_pair(std::size_t atoms, bool fixed_number) {
    WellPair p;
    p.left = well_basis(atoms, fixed_number);
    p.right = well_basis(atoms, fixed_number);
    p.joint = tensor_product(*p.left, *p.right);
    p.atoms_per_well = atoms;
    p.fixed_number = fixed_number;
    return p;
}

SpinOperators lift(const SpinOperators& s, const WellPair& p, bool left) {
    auto f = [&](const Operator& op) { return left ? p.lift_left(op) : p.lift_right(op); };
    return {f(s.x), f(s.y), f(s.z)};
}

}  // namespace

WellPair WellPair::fixed(std::size_t atoms_per_well) { return make_pair(atoms_per_well, true); }

WellPair WellPair::at_most(std::size_t atoms_per_well) { return make_pair(atoms_per_well, false); }

Operator WellPair::lift_left(const Operator& op) const {
    if (!op.basis()->same_space(*left)) throw std::invalid_argument("lift_left: operator is not on the left-well basis");
    return kron(op, Operator::identity(right), joint);
}

Operator WellPair::lift_right(const Operator& op) const {
    if (!op.basis()->same_space(*right)) throw std::invalid_argument("lift_right: operator is not on the right-well basis");
    return kron(Operator::identity(left), op, joint);
}

SpinOperators WellPair::left_spin() const { return lift(schwinger_spin(left, mode::e, mode::g), *this, true); }

SpinOperators WellPair::right_spin() const { return lift(schwinger_spin(right, mode::e, mode::g), *this, false); }

}  // namespace becgrad
