// oracle.hpp — brute-force reference implementations used to cross-check the
// production paths. Slow by construction; shipped so the CLI can verify runs.

#pragma once

#include <cstddef>

#include <Eigen/Sparse>

#include "becgrad/dynamics.hpp"
#include "becgrad/fock.hpp"

namespace becgrad::oracle {

inline constexpr std::size_t kMaxDimension = 100;

using SparseSuperoperator = Eigen::SparseMatrix<cplx>;

// Column-stacking Liouvillian, vec(A rho B) = (B^T (x) A) vec(rho):
//   -i (I (x) H - H^T (x) I) + sum rate (conj(L) (x) L - I (x) L^dag L / 2 - (L^dag L)^T (x) I / 2)
SparseSuperoperator liouvillian(const LindbladModel& model);

// exp(t A) v by Taylor series on s = ceil(|t| ||A||_1) substeps, each summed
// until the next term falls below machine precision relative to the partial sum.
CVector expm_action(const SparseSuperoperator& a, const CVector& v, double t);

/// rho(t) = exp(t L) rho0 for joint dimension <= kMaxDimension.
QuantumState lindblad_exact(const LindbladModel& model, const QuantumState& rho0, double t);

cplx expectation_direct(const Operator& op, const QuantumState& state);

}  // namespace becgrad::oracle
