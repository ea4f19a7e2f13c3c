// oracle.cpp — Kronecker Liouvillian and Taylor exp-action reference

#include "becgrad/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace becgrad::oracle {

namespace {

using Triplet = Eigen::Triplet<cplx>;

// Appends coeff * (a (x) b) to the triplet list, with a, b dense d x d.
void add_kron(std::vector<Triplet>& out, const CMatrix& a, const CMatrix& b, cplx coeff) {
    const auto d = b.rows();
    for (Eigen::Index ai = 0; ai < a.rows(); ++ai)
        for (Eigen::Index aj = 0; aj < a.cols(); ++aj) {
            const cplx av = a(ai, aj);
            if (av == cplx{}) continue;
            for (Eigen::Index bi = 0; bi < d; ++bi)
                for (Eigen::Index bj = 0; bj < d; ++bj) {
                    const cplx bv = b(bi, bj);
                    if (bv == cplx{}) continue;
                    out.emplace_back(ai * d + bi, aj * d + bj, coeff * av * bv);
                }
        }
}

}  // namespace

SparseSuperoperator liouvillian(const LindbladModel& model) {
    model.validate();
    const CMatrix& h = model.hamiltonian.matrix();
    const auto d = h.rows();
    const CMatrix id = CMatrix::Identity(d, d);
    const cplx i{0.0, 1.0};
    std::vector<Triplet> trips;
    add_kron(trips, id, h, -i);
    add_kron(trips, h.transpose(), id, i);
    for (const auto& jump : model.jumps) {
        if (jump.rate == 0.0) continue;
        const CMatrix& l = jump.op.matrix();
        const CMatrix ldl = l.adjoint() * l;
        add_kron(trips, l.conjugate(), l, jump.rate);
        add_kron(trips, id, ldl, -0.5 * jump.rate);
        add_kron(trips, ldl.transpose(), id, -0.5 * jump.rate);
    }
    SparseSuperoperator out(d * d, d * d);
    out.setFromTriplets(trips.begin(), trips.end());  // duplicates are summed
    out.makeCompressed();
    return out;
}

CVector expm_action(const SparseSuperoperator& a, const CVector& v, double t) {
    double norm1 = 0.0;  // max column sum
    for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
        double col = 0.0;
        for (SparseSuperoperator::InnerIterator it(a, k); it; ++it) col += std::abs(it.value());
        norm1 = std::max(norm1, col);
    }
    const double scaled = std::abs(t) * norm1;
    const auto steps = static_cast<long>(std::max(1.0, std::ceil(scaled)));
    const double dt = t / static_cast<double>(steps);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    CVector x = v;
    for (long s = 0; s < steps; ++s) {
        CVector term = x;
        CVector sum = x;
        for (int k = 1; k < 200; ++k) {
            term = (a * term) * (dt / static_cast<double>(k));
            sum += term;
            if (term.norm() <= eps * sum.norm()) break;
        }
        x = std::move(sum);
    }
    return x;
}

QuantumState lindblad_exact(const LindbladModel& model, const QuantumState& rho0, double t) {
    const std::size_t d = model.hamiltonian.dim();
    if (d > kMaxDimension)
        throw std::invalid_argument("lindblad_exact: dimension " + std::to_string(d) + " exceeds the oracle limit of " +
                                    std::to_string(kMaxDimension));
    if (!rho0.basis()->same_space(*model.hamiltonian.basis()))
        throw std::invalid_argument("lindblad_exact: state and model bases differ");
    const CMatrix rho = rho0.density_matrix();
    const CVector vec = Eigen::Map<const CVector>(rho.data(), rho.size());
    const CVector out = expm_action(liouvillian(model), vec, t);
    const auto n = static_cast<Eigen::Index>(d);
    CMatrix rho_t = Eigen::Map<const CMatrix>(out.data(), n, n);
    return QuantumState::mixed(rho0.basis(), std::move(rho_t), false);
}

cplx expectation_direct(const Operator& op, const QuantumState& state) {
    if (!op.basis()->same_space(*state.basis())) throw std::invalid_argument("expectation_direct: bases differ");
    const CMatrix& o = op.matrix();
    const auto n = o.rows();
    cplx sum{};
    if (state.is_pure()) {
        const CVector& psi = state.amplitudes();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) sum += std::conj(psi(i)) * o(i, j) * psi(j);
    } else {
        const CMatrix& rho = state.density();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) sum += o(i, j) * rho(j, i);
    }
    return sum;
}

}  // namespace becgrad::oracle
