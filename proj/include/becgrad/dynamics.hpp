// dynamics.hpp — states, unitary propagation and Lindblad integration

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "becgrad/fock.hpp"
#include "becgrad/wells.hpp"

namespace becgrad {

class QuantumState {
public:
    enum class Kind { pure, mixed };

    // Pure states must be normalized within 1e-10.
    static QuantumState pure(BasisPtr basis, CVector amplitudes);
    // Mixed states must be Hermitian (1e-10), unit trace (1e-8) and
    // positive (min eigenvalue >= -1e-8) unless `validate` is false.
    static QuantumState mixed(BasisPtr basis, CMatrix rho, bool validate = true);
    static QuantumState occupation(BasisPtr basis, const Occupation& occ);

    Kind kind() const { return kind_; }
    bool is_pure() const { return kind_ == Kind::pure; }
    const BasisPtr& basis() const { return basis_; }
    std::size_t dim() const { return basis_->size(); }

    const CVector& amplitudes() const;  // pure only
    const CMatrix& density() const;     // mixed only
    CMatrix density_matrix() const;     // either kind
    QuantumState to_mixed() const;

    double trace() const;
    double norm() const;  // pure: vector norm, mixed: trace
    cplx expectation(const Operator& op) const;

    // Same state expressed on `target`; throws if any amplitude lies on an
    // occupation missing from `target`.
    QuantumState embed(const BasisPtr& target) const;
    // Pure only: keep the components on `target` and renormalize.
    QuantumState project(const BasisPtr& target) const;

private:
    QuantumState(Kind kind, BasisPtr basis, CVector psi, CMatrix rho)
        : kind_(kind), basis_(std::move(basis)), psi_(std::move(psi)), rho_(std::move(rho)) {}

    Kind kind_;
    BasisPtr basis_;
    CVector psi_;
    CMatrix rho_;
};

double fidelity(const QuantumState& a, const QuantumState& b);

/// Sample times in units of 1/Omega. Initial states are given at t = 0, so
/// every sample must be >= 0; samples are strictly increasing.
class TimeGrid {
public:
    static TimeGrid uniform(double t_start, double t_end, std::size_t samples);
    static TimeGrid points(std::vector<double> times);

    const std::vector<double>& times() const { return times_; }
    double t_start() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    std::size_t samples() const { return times_.size(); }

private:
    explicit TimeGrid(std::vector<double> times);
    std::vector<double> times_;
};

/// exp(-i H t) from one eigendecomposition of a Hermitian H.
class UnitaryPropagator {
public:
    explicit UnitaryPropagator(const Operator& hamiltonian);

    CVector apply(const CVector& psi0, double t) const;
    // Amplitudes of psi0 in the eigenbasis; apply_coefficients avoids
    // re-projecting psi0 for every sample.
    CVector coefficients(const CVector& psi0) const;
    CVector apply_coefficients(const CVector& coeffs, double t) const;

    const Eigen::VectorXd& energies() const { return energies_; }
    const CMatrix& eigenvectors() const { return vectors_; }
    const BasisPtr& basis() const { return basis_; }

private:
    BasisPtr basis_;
    Eigen::VectorXd energies_;
    CMatrix vectors_;
};

std::vector<QuantumState> evolve_unitary(const Operator& hamiltonian, const QuantumState& psi0, const TimeGrid& grid);

struct Jump {
    double rate{0.0};
    Operator op;
};

struct LindbladModel {
    Operator hamiltonian;
    std::vector<Jump> jumps;

    void validate() const;
};

struct IntegratorOptions {
    double tolerance{1e-9};       // max-norm change of the final state between halvings
    int max_halvings{16};
    bool check_positivity{true};  // min eigenvalue >= -1e-6 at every sample
};

struct IntegrationReport {
    std::size_t substeps{0};          // RK4 steps of the accepted run
    double step{0.0};                 // largest substep of the accepted run
    int halvings{0};
    double final_change{0.0};         // between the last two runs
    double max_hermiticity_defect{0.0};
    double max_trace_drift{0.0};
    double min_eigenvalue{0.0};       // over samples; 0 when not checked
};

struct LindbladTrajectory {
    std::vector<QuantumState> states;
    IntegrationReport report;
};

/// drho/dt = -i[H, rho] + sum_k rate_k (L rho L^dag - {L^dag L, rho}/2),
/// integrated with classical RK4; the substep is halved until the final
/// state moves by less than `tolerance`.
LindbladTrajectory evolve_lindblad(const LindbladModel& model, const QuantumState& rho0, const TimeGrid& grid,
                                   const IntegratorOptions& options = {});

// Generator acting on one well only.
struct WellLindblad {
    Operator hamiltonian;
    std::vector<Jump> jumps;
};

/// Lindblad model whose generator is a sum of left-well and right-well terms.
/// Every model of the detection stage has this form.
struct SeparableLindbladModel {
    WellPair wells;
    WellLindblad left;
    WellLindblad right;

    LindbladModel joint() const;
};

/// Same RK4 scheme as above, applied to each well's vectorized Liouvillian:
/// the RK4 step map of each well is formed explicitly, raised to the number
/// of substeps per sample interval, and the pair acts on the joint density
/// matrix. Cost is set by the per-well dimension, not the joint one.
LindbladTrajectory evolve_lindblad(const SeparableLindbladModel& model, const QuantumState& rho0,
                                   const TimeGrid& grid, const IntegratorOptions& options = {});

struct LossRates {
    double gamma_o{0.0};     // one-body, equal for e and g
    double gamma_t_ee{0.0};  // two-body e-e
    double gamma_t_eg{0.0};  // two-body e-g

    bool any() const { return gamma_o > 0.0 || gamma_t_ee > 0.0 || gamma_t_eg > 0.0; }
};

// Jumps {e, g} at gamma_o, e^2 at gamma_t_ee and e g at gamma_t_eg on one well.
std::vector<Jump> well_loss_jumps(const LossRates& rates, const BasisPtr& well);

}  // namespace becgrad
