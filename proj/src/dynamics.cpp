// dynamics.cpp — states, unitary propagation, RK4 Lindblad integration

#include "becgrad/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

namespace becgrad {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;

constexpr double kPureNormTol = 1e-10;
constexpr double kMixedHermTol = 1e-10;
constexpr double kMixedTraceTol = 1e-8;
constexpr double kMixedPosTol = 1e-8;
constexpr double kSamplePosTol = 1e-6;

double min_eigenvalue(const CMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("min_eigenvalue: eigensolver failed");
    return es.eigenvalues().minCoeff();
}

void symmetrize(CMatrix& rho) { rho = (0.5 * (rho + rho.adjoint())).eval(); }

double inf_norm(const CMatrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

// --- QuantumState ----------------------------------------------------------

QuantumState QuantumState::pure(BasisPtr basis, CVector amplitudes) {
    if (!basis) throw std::invalid_argument("QuantumState: null basis");
    if (static_cast<std::size_t>(amplitudes.size()) != basis->size())
        throw std::invalid_argument("QuantumState: amplitude count does not match basis size");
    if (std::abs(amplitudes.norm() - 1.0) > kPureNormTol)
        throw std::invalid_argument("QuantumState: pure state is not normalized (norm " +
                                    std::to_string(amplitudes.norm()) + ")");
    return {Kind::pure, std::move(basis), std::move(amplitudes), {}};
}

QuantumState QuantumState::mixed(BasisPtr basis, CMatrix rho, bool validate) {
    if (!basis) throw std::invalid_argument("QuantumState: null basis");
    const auto n = static_cast<Eigen::Index>(basis->size());
    if (rho.rows() != n || rho.cols() != n)
        throw std::invalid_argument("QuantumState: density matrix dimension does not match basis size");
    if (validate) {
        if (max_norm(rho - rho.adjoint()) > kMixedHermTol)
            throw std::invalid_argument("QuantumState: density matrix is not Hermitian");
        if (std::abs(rho.trace().real() - 1.0) > kMixedTraceTol)
            throw std::invalid_argument("QuantumState: density matrix trace is not 1");
        if (min_eigenvalue(rho) < -kMixedPosTol)
            throw std::invalid_argument("QuantumState: density matrix is not positive semidefinite");
    }
    return {Kind::mixed, std::move(basis), {}, std::move(rho)};
}

QuantumState QuantumState::occupation(BasisPtr basis, const Occupation& occ) {
    auto idx = basis->index_of(occ);
    if (!idx) throw std::invalid_argument("QuantumState::occupation: occupation not in basis");
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(basis->size()));
    psi(static_cast<Eigen::Index>(*idx)) = 1.0;
    return pure(std::move(basis), std::move(psi));
}

const CVector& QuantumState::amplitudes() const {
    if (kind_ != Kind::pure) throw std::logic_error("QuantumState: amplitudes() on a mixed state");
    return psi_;
}

const CMatrix& QuantumState::density() const {
    if (kind_ != Kind::mixed) throw std::logic_error("QuantumState: density() on a pure state");
    return rho_;
}

CMatrix QuantumState::density_matrix() const { return kind_ == Kind::pure ? CMatrix(psi_ * psi_.adjoint()) : rho_; }

QuantumState QuantumState::to_mixed() const {
    if (kind_ == Kind::mixed) return *this;
    return {Kind::mixed, basis_, {}, density_matrix()};
}

double QuantumState::trace() const { return kind_ == Kind::pure ? psi_.squaredNorm() : rho_.trace().real(); }

double QuantumState::norm() const { return kind_ == Kind::pure ? psi_.norm() : rho_.trace().real(); }

cplx QuantumState::expectation(const Operator& op) const {
    if (!op.basis()->same_space(*basis_)) throw std::invalid_argument("expectation: operator and state bases differ");
    if (kind_ == Kind::pure) return psi_.dot(op.matrix() * psi_);
    // tr(O rho) without forming the product
    return op.matrix().cwiseProduct(rho_.transpose()).sum();
}

namespace {

std::vector<Eigen::Index> index_map(const FockBasis& from, const FockBasis& to) {
    std::vector<Eigen::Index> map(from.size(), -1);
    for (std::size_t i = 0; i < from.size(); ++i)
        if (auto j = to.index_of(from.state(i))) map[i] = static_cast<Eigen::Index>(*j);
    return map;
}

}  // namespace

QuantumState QuantumState::embed(const BasisPtr& target) const {
    const auto map = index_map(*basis_, *target);
    const auto n = static_cast<Eigen::Index>(target->size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i] >= 0) continue;
        const auto ii = static_cast<Eigen::Index>(i);
        const double weight = kind_ == Kind::pure ? std::abs(psi_(ii)) : rho_.row(ii).cwiseAbs().maxCoeff();
        if (weight > 0.0) throw std::invalid_argument("embed: state has weight outside the target basis");
    }
    if (kind_ == Kind::pure) {
        CVector psi = CVector::Zero(n);
        for (std::size_t i = 0; i < map.size(); ++i)
            if (map[i] >= 0) psi(map[i]) = psi_(static_cast<Eigen::Index>(i));
        return {Kind::pure, target, std::move(psi), {}};
    }
    CMatrix rho = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < map.size(); ++i)
        for (std::size_t j = 0; j < map.size(); ++j)
            if (map[i] >= 0 && map[j] >= 0) rho(map[i], map[j]) = rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return {Kind::mixed, target, {}, std::move(rho)};
}

QuantumState QuantumState::project(const BasisPtr& target) const {
    const auto map = index_map(*basis_, *target);
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(target->size()));
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i] >= 0) psi(map[i]) = amplitudes()(static_cast<Eigen::Index>(i));
    const double norm = psi.norm();
    if (norm == 0.0) throw std::invalid_argument("project: state has no weight on the target basis");
    return pure(target, psi / norm);
}

double fidelity(const QuantumState& a, const QuantumState& b) {
    if (!a.basis()->same_space(*b.basis())) throw std::invalid_argument("fidelity: states live on different bases");
    if (!a.is_pure() || !b.is_pure()) throw std::invalid_argument("fidelity: defined here for pure states only");
    return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

// --- TimeGrid ----------------------------------------------------------------

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw std::invalid_argument("TimeGrid: at least two samples are required");
    for (double t : times_)
        if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("TimeGrid: sample times must be finite and >= 0");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("TimeGrid: sample times must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double t_start, double t_end, std::size_t samples) {
    if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
    if (samples < 2) throw std::invalid_argument("TimeGrid: at least two samples are required");
    std::vector<double> times(samples);
    const double dt = (t_end - t_start) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) times[i] = t_start + dt * static_cast<double>(i);
    times.back() = t_end;
    return TimeGrid(std::move(times));
}

TimeGrid TimeGrid::points(std::vector<double> times) { return TimeGrid(std::move(times)); }

// --- unitary ------------------------------------------------------------------

UnitaryPropagator::UnitaryPropagator(const Operator& hamiltonian) : basis_(hamiltonian.basis()) {
    const double scale = std::max(1.0, max_norm(hamiltonian.matrix()));
    if (hamiltonian.hermiticity_defect() > 1e-12 * scale)
        throw std::invalid_argument("UnitaryPropagator: Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hamiltonian.matrix());
    if (es.info() != Eigen::Success) throw std::runtime_error("UnitaryPropagator: eigendecomposition failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
}

CVector UnitaryPropagator::coefficients(const CVector& psi0) const { return vectors_.adjoint() * psi0; }

CVector UnitaryPropagator::apply_coefficients(const CVector& coeffs, double t) const {
    CVector phased(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) phased(k) = std::polar(1.0, -energies_(k) * t) * coeffs(k);
    return vectors_ * phased;
}

CVector UnitaryPropagator::apply(const CVector& psi0, double t) const { return apply_coefficients(coefficients(psi0), t); }

std::vector<QuantumState> evolve_unitary(const Operator& hamiltonian, const QuantumState& psi0, const TimeGrid& grid) {
    if (!psi0.is_pure()) throw std::invalid_argument("evolve_unitary: initial state must be pure");
    if (!hamiltonian.basis()->same_space(*psi0.basis()))
        throw std::invalid_argument("evolve_unitary: Hamiltonian and state bases differ");
    const UnitaryPropagator prop(hamiltonian);
    const CVector coeffs = prop.coefficients(psi0.amplitudes());
    std::vector<QuantumState> out;
    out.reserve(grid.samples());
    for (double t : grid.times()) {
        CVector psi = prop.apply_coefficients(coeffs, t);
        psi /= psi.norm();
        out.push_back(QuantumState::pure(psi0.basis(), std::move(psi)));
    }
    return out;
}

// --- Lindblad -------------------------------------------------------------------

void LindbladModel::validate() const {
    for (const auto& j : jumps) {
        if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) throw std::invalid_argument("LindbladModel: rates must be finite and >= 0");
        if (!j.op.basis()->same_space(*hamiltonian.basis()))
            throw std::invalid_argument("LindbladModel: jump operator basis differs from the Hamiltonian basis");
    }
    const double scale = std::max(1.0, max_norm(hamiltonian.matrix()));
    if (hamiltonian.hermiticity_defect() > 1e-12 * scale) throw std::invalid_argument("LindbladModel: Hamiltonian is not Hermitian");
}

namespace {

// Matrix-form right-hand side with H_eff = H - (i/2) sum rate L^dag L:
//   f(rho) = -i (H_eff rho - rho H_eff^dag) + sum rate L rho L^dag.
class Generator {
public:
    Generator(const CMatrix& h, const std::vector<std::pair<double, CMatrix>>& jumps) {
        CMatrix h_eff = h;
        norm_bound_ = 0.0;
        for (const auto& [rate, l] : jumps) {
            if (rate == 0.0) continue;
            h_eff -= cplx{0.0, 0.5 * rate} * (l.adjoint() * l);
            jumps_.push_back({rate, l.sparseView(), l.adjoint().sparseView()});
            norm_bound_ += rate * inf_norm(l) * inf_norm(l.adjoint());
        }
        norm_bound_ += 2.0 * inf_norm(h_eff);
        h_eff_ = h_eff.sparseView();
        h_eff_adj_ = CMatrix(h_eff.adjoint()).sparseView();
    }

    CMatrix operator()(const CMatrix& rho) const {
        const cplx i{0.0, 1.0};
        CMatrix out = -i * (h_eff_ * rho);
        out.noalias() += i * (rho * h_eff_adj_);
        for (const auto& j : jumps_) {
            const CMatrix l_rho = j.l * rho;
            out.noalias() += j.rate * (l_rho * j.l_adj);
        }
        return out;
    }

    // Upper bound on the induced infinity norm of the generator.
    double norm_bound() const { return norm_bound_; }

private:
    struct SparseJump {
        double rate;
        SpMat l;
        SpMat l_adj;
    };
    SpMat h_eff_;
    SpMat h_eff_adj_;
    std::vector<SparseJump> jumps_;
    double norm_bound_{0.0};
};

Generator make_generator(const Operator& h, const std::vector<Jump>& jumps) {
    std::vector<std::pair<double, CMatrix>> dense;
    dense.reserve(jumps.size());
    for (const auto& j : jumps) dense.emplace_back(j.rate, j.op.matrix());
    return Generator(h.matrix(), dense);
}

// Lengths of the intervals 0 -> t_0 (when t_0 > 0) and t_k -> t_{k+1}.
std::vector<double> interval_lengths(const TimeGrid& grid) {
    std::vector<double> out;
    if (grid.t_start() > 0.0) out.push_back(grid.t_start());
    for (std::size_t k = 1; k < grid.samples(); ++k) out.push_back(grid.times()[k] - grid.times()[k - 1]);
    return out;
}

std::size_t substeps_for(double interval, double h) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(interval / h - 1e-9)));
}

struct SampleStats {
    double max_trace_drift{0.0};
    double min_eigenvalue{std::numeric_limits<double>::infinity()};

    void record(const CMatrix& rho, bool positivity) {
        max_trace_drift = std::max(max_trace_drift, std::abs(rho.trace().real() - 1.0));
        if (positivity) min_eigenvalue = std::min(min_eigenvalue, becgrad::min_eigenvalue(rho));
    }
};

void finish_report(IntegrationReport& report, const SampleStats& stats, bool positivity) {
    report.max_trace_drift = stats.max_trace_drift;
    report.min_eigenvalue = positivity ? stats.min_eigenvalue : 0.0;
    if (positivity && stats.min_eigenvalue < -kSamplePosTol) {
        std::ostringstream msg;
        msg << "evolve_lindblad: density matrix lost positivity (min eigenvalue " << stats.min_eigenvalue << ")";
        throw std::runtime_error(msg.str());
    }
}

[[noreturn]] void fail_convergence(int halvings, double step, double change, double tol) {
    std::ostringstream msg;
    msg << "evolve_lindblad: step-size underflow; after " << halvings << " halvings (substep " << step
        << ") the final state still changes by " << change << " > tolerance " << tol;
    throw std::runtime_error(msg.str());
}

struct Rk4Run {
    std::vector<CMatrix> samples;
    std::size_t substeps{0};
    double step{0.0};
    double max_defect{0.0};
};

Rk4Run run_rk4(const Generator& f, const CMatrix& rho0, const TimeGrid& grid, double h) {
    Rk4Run run;
    CMatrix rho = rho0;
    if (grid.t_start() == 0.0) run.samples.push_back(rho);
    for (double dt_total : interval_lengths(grid)) {
        const std::size_t n = substeps_for(dt_total, h);
        const double dt = dt_total / static_cast<double>(n);
        run.step = std::max(run.step, dt);
        for (std::size_t s = 0; s < n; ++s) {
            const CMatrix k1 = f(rho);
            const CMatrix k2 = f(rho + 0.5 * dt * k1);
            const CMatrix k3 = f(rho + 0.5 * dt * k2);
            const CMatrix k4 = f(rho + dt * k3);
            rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            run.max_defect = std::max(run.max_defect, max_norm(rho - rho.adjoint()));
            symmetrize(rho);
        }
        run.substeps += n;
        run.samples.push_back(rho);
    }
    return run;
}

}  // namespace

LindbladTrajectory evolve_lindblad(const LindbladModel& model, const QuantumState& rho0, const TimeGrid& grid,
                                   const IntegratorOptions& options) {
    model.validate();
    if (!rho0.basis()->same_space(*model.hamiltonian.basis()))
        throw std::invalid_argument("evolve_lindblad: state and model bases differ");
    const CMatrix rho_init = rho0.density_matrix();
    const Generator f = make_generator(model.hamiltonian, model.jumps);

    const auto lengths = interval_lengths(grid);
    const double longest = *std::max_element(lengths.begin(), lengths.end());
    double h = f.norm_bound() > 0.0 ? std::min(longest, 1.0 / f.norm_bound()) : longest;

    Rk4Run prev = run_rk4(f, rho_init, grid, h);
    IntegrationReport report;
    if (f.norm_bound() == 0.0) {
        report.substeps = prev.substeps;
        report.step = prev.step;
    } else {
        bool converged = false;
        double change = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= options.max_halvings; ++k) {
            h *= 0.5;
            Rk4Run next = run_rk4(f, rho_init, grid, h);
            change = max_norm(next.samples.back() - prev.samples.back());
            if (!std::isfinite(change)) change = std::numeric_limits<double>::infinity();
            prev = std::move(next);
            report.halvings = k;
            if (change < options.tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) fail_convergence(report.halvings, prev.step, change, options.tolerance);
        report.final_change = change;
        report.substeps = prev.substeps;
        report.step = prev.step;
    }
    report.max_hermiticity_defect = prev.max_defect;

    LindbladTrajectory out;
    SampleStats stats;
    out.states.reserve(prev.samples.size());
    for (auto& rho : prev.samples) {
        stats.record(rho, options.check_positivity);
        out.states.push_back(QuantumState::mixed(rho0.basis(), std::move(rho), false));
    }
    finish_report(report, stats, options.check_positivity);
    out.report = report;
    return out;
}

// --- separable Lindblad ---------------------------------------------------------

LindbladModel SeparableLindbladModel::joint() const {
    LindbladModel m{wells.lift_left(left.hamiltonian) + wells.lift_right(right.hamiltonian), {}};
    for (const auto& j : left.jumps) m.jumps.push_back({j.rate, wells.lift_left(j.op)});
    for (const auto& j : right.jumps) m.jumps.push_back({j.rate, wells.lift_right(j.op)});
    return m;
}

namespace {

// Column i + j d of the vectorized generator is f(|i><j|), column-stacked.
CMatrix vectorized_generator(const Generator& f, Eigen::Index d) {
    CMatrix l(d * d, d * d);
    CMatrix unit = CMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            unit(i, j) = 1.0;
            const CMatrix col = f(unit);
            l.col(i + j * d) = Eigen::Map<const CVector>(col.data(), d * d);
            unit(i, j) = 0.0;
        }
    }
    return l;
}

// One classical RK4 step of a linear autonomous system is the degree-4
// Taylor polynomial of exp(h L).
CMatrix rk4_step_map(const CMatrix& l, double h) {
    const auto n = l.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix m = h * l;
    CMatrix p = id + m / 4.0;
    p = id + (m / 3.0) * p;
    p = id + (m / 2.0) * p;
    p = id + m * p;
    return p;
}

CMatrix matrix_power(CMatrix base, std::size_t n) {
    CMatrix result = CMatrix::Identity(base.rows(), base.cols());
    bool first = true;
    while (n > 0) {
        if (n & 1U) {
            result = first ? base : CMatrix(result * base);
            first = false;
        }
        n >>= 1U;
        if (n > 0) base = base * base;
    }
    return result;
}

// rho -> (E_L (x) E_R) rho with rho indexed (iL dR + iR, jL dR + jR).
CMatrix apply_pair(const CMatrix& e_left, const CMatrix& e_right, const CMatrix& rho, Eigen::Index dl, Eigen::Index dr) {
    CMatrix x(dl * dl, dr * dr);
    for (Eigen::Index jl = 0; jl < dl; ++jl)
        for (Eigen::Index jr = 0; jr < dr; ++jr)
            for (Eigen::Index il = 0; il < dl; ++il)
                for (Eigen::Index ir = 0; ir < dr; ++ir)
                    x(il + jl * dl, ir + jr * dr) = rho(il * dr + ir, jl * dr + jr);
    const CMatrix y = e_left * x * e_right.transpose();
    CMatrix out(dl * dr, dl * dr);
    for (Eigen::Index jl = 0; jl < dl; ++jl)
        for (Eigen::Index jr = 0; jr < dr; ++jr)
            for (Eigen::Index il = 0; il < dl; ++il)
                for (Eigen::Index ir = 0; ir < dr; ++ir)
                    out(il * dr + ir, jl * dr + jr) = y(il + jl * dl, ir + jr * dr);
    return out;
}

struct IntervalMaps {
    std::vector<CMatrix> left;   // one per interval length class
    std::vector<CMatrix> right;
    std::vector<std::size_t> klass;  // interval -> class
    std::vector<std::size_t> count;  // intervals per class
    std::size_t substeps{0};
    double step{0.0};
};

IntervalMaps interval_maps(const CMatrix& l_left, const CMatrix& l_right, const std::vector<double>& lengths, double h) {
    IntervalMaps maps;
    std::vector<double> classes;
    for (double len : lengths) {
        std::size_t c = 0;
        while (c < classes.size() && std::abs(classes[c] - len) > 1e-12 * std::max(1.0, len)) ++c;
        if (c == classes.size()) {
            classes.push_back(len);
            maps.count.push_back(0);
            const std::size_t n = substeps_for(len, h);
            const double dt = len / static_cast<double>(n);
            maps.step = std::max(maps.step, dt);
            maps.left.push_back(matrix_power(rk4_step_map(l_left, dt), n));
            maps.right.push_back(matrix_power(rk4_step_map(l_right, dt), n));
        }
        maps.klass.push_back(c);
        ++maps.count[c];
        maps.substeps += substeps_for(classes[c], h);
    }
    return maps;
}

CMatrix final_state(const IntervalMaps& maps, const CMatrix& rho0, Eigen::Index dl, Eigen::Index dr) {
    // Interval maps are polynomials in the same generator and commute, so the
    // composition can be grouped by class.
    CMatrix fl = CMatrix::Identity(dl * dl, dl * dl);
    CMatrix fr = CMatrix::Identity(dr * dr, dr * dr);
    for (std::size_t c = 0; c < maps.count.size(); ++c) {
        fl = matrix_power(maps.left[c], maps.count[c]) * fl;
        fr = matrix_power(maps.right[c], maps.count[c]) * fr;
    }
    return apply_pair(fl, fr, rho0, dl, dr);
}

void check_well(const WellLindblad& w, const BasisPtr& basis, const char* side) {
    auto bad = [&](const Operator& op) { return !op.basis()->same_space(*basis); };
    bool mismatch = bad(w.hamiltonian);
    for (const auto& j : w.jumps) {
        mismatch = mismatch || bad(j.op);
        if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) throw std::invalid_argument("SeparableLindbladModel: rates must be finite and >= 0");
    }
    if (mismatch) throw std::invalid_argument(std::string("SeparableLindbladModel: ") + side + " operators are not on the well basis");
    const double scale = std::max(1.0, max_norm(w.hamiltonian.matrix()));
    if (w.hamiltonian.hermiticity_defect() > 1e-12 * scale)
        throw std::invalid_argument("SeparableLindbladModel: Hamiltonian is not Hermitian");
}

}  // namespace

LindbladTrajectory evolve_lindblad(const SeparableLindbladModel& model, const QuantumState& rho0, const TimeGrid& grid,
                                   const IntegratorOptions& options) {
    check_well(model.left, model.wells.left, "left");
    check_well(model.right, model.wells.right, "right");
    if (!rho0.basis()->same_space(*model.wells.joint))
        throw std::invalid_argument("evolve_lindblad: state is not on the joint two-well basis");

    const auto dl = static_cast<Eigen::Index>(model.wells.left->size());
    const auto dr = static_cast<Eigen::Index>(model.wells.right->size());
    const Generator f_left = make_generator(model.left.hamiltonian, model.left.jumps);
    const Generator f_right = make_generator(model.right.hamiltonian, model.right.jumps);
    const CMatrix l_left = vectorized_generator(f_left, dl);
    const CMatrix l_right = vectorized_generator(f_right, dr);
    const CMatrix rho_init = rho0.density_matrix();

    const auto lengths = interval_lengths(grid);
    const double longest = *std::max_element(lengths.begin(), lengths.end());
    const double bound = std::max(inf_norm(l_left), inf_norm(l_right));
    double h = bound > 0.0 ? std::min(longest, 1.0 / bound) : longest;

    IntegrationReport report;
    IntervalMaps maps = interval_maps(l_left, l_right, lengths, h);
    if (bound > 0.0) {
        CMatrix prev_final = final_state(maps, rho_init, dl, dr);
        bool converged = false;
        double change = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= options.max_halvings; ++k) {
            h *= 0.5;
            IntervalMaps next = interval_maps(l_left, l_right, lengths, h);
            CMatrix next_final = final_state(next, rho_init, dl, dr);
            change = max_norm(next_final - prev_final);
            if (!std::isfinite(change)) change = std::numeric_limits<double>::infinity();
            maps = std::move(next);
            prev_final = std::move(next_final);
            report.halvings = k;
            if (change < options.tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) fail_convergence(report.halvings, maps.step, change, options.tolerance);
        report.final_change = change;
    }
    report.substeps = maps.substeps;
    report.step = maps.step;

    LindbladTrajectory out;
    SampleStats stats;
    CMatrix rho = rho_init;
    std::size_t interval = 0;
    auto emit = [&](CMatrix r) {
        stats.record(r, options.check_positivity);
        out.states.push_back(QuantumState::mixed(model.wells.joint, std::move(r), false));
    };
    if (grid.t_start() == 0.0) emit(rho);
    for (; interval < lengths.size(); ++interval) {
        const std::size_t c = maps.klass[interval];
        rho = apply_pair(maps.left[c], maps.right[c], rho, dl, dr);
        report.max_hermiticity_defect = std::max(report.max_hermiticity_defect, max_norm(rho - rho.adjoint()));
        symmetrize(rho);
        emit(rho);
    }
    finish_report(report, stats, options.check_positivity);
    out.report = report;
    return out;
}

std::vector<Jump> well_loss_jumps(const LossRates& rates, const BasisPtr& well) {
    if (rates.gamma_o < 0.0 || rates.gamma_t_ee < 0.0 || rates.gamma_t_eg < 0.0)
        throw std::invalid_argument("well_loss_jumps: rates must be >= 0");
    for (const auto& c : well->sectors())
        if (c.kind == SectorConstraint::Kind::exactly && rates.any())
            throw std::invalid_argument("well_loss_jumps: losses leave a fixed-number basis; use an at-most basis");
    std::vector<Jump> jumps;
    const Operator e = annihilation(well, mode::e);
    const Operator g = annihilation(well, mode::g);
    if (rates.gamma_o > 0.0) {
        jumps.push_back({rates.gamma_o, e});
        jumps.push_back({rates.gamma_o, g});
    }
    if (rates.gamma_t_ee > 0.0) jumps.push_back({rates.gamma_t_ee, e * e});
    if (rates.gamma_t_eg > 0.0) jumps.push_back({rates.gamma_t_eg, e * g});
    return jumps;
}

}  // namespace becgrad
