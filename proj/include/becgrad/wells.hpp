// wells.hpp — two-well, two-component mode layout

#pragma once

#include <cstddef>

#include "becgrad/fock.hpp"

namespace becgrad {

// Mode layout shared by every four-mode basis: (e_L, g_L, e_R, g_R).
// A single well uses (e, g).
namespace mode {
inline constexpr std::size_t e_left = 0;
inline constexpr std::size_t g_left = 1;
inline constexpr std::size_t e_right = 2;
inline constexpr std::size_t g_right = 3;

inline constexpr std::size_t e = 0;
inline constexpr std::size_t g = 1;
}  // namespace mode

/// Per-well bases and their tensor product.
///
/// `joint` is a four-mode FockBasis whose lexicographic order equals the
/// Kronecker order of (left, right), so per-well operators lift with kron().
/// Loss dynamics only lowers occupations, so the "at most n atoms per well"
/// space is closed under the dissipator and truncation is exact.
struct WellPair {
    BasisPtr left;
    BasisPtr right;
    BasisPtr joint;
    std::size_t atoms_per_well{0};
    bool fixed_number{true};

    static WellPair fixed(std::size_t atoms_per_well);
    static WellPair at_most(std::size_t atoms_per_well);

    Operator lift_left(const Operator& op) const;
    Operator lift_right(const Operator& op) const;

    SpinOperators left_spin() const;   // on joint
    SpinOperators right_spin() const;  // on joint
};

BasisPtr well_basis(std::size_t atoms, bool fixed_number);

}  // namespace becgrad
