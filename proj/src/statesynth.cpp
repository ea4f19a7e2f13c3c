// statesynth.cpp — pair tunneling, crossing search and phase correction

#include "becgrad/statesynth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace becgrad {

namespace {

void require_even(std::size_t N, const char* who) {
    if (N < 2 || N % 2 != 0) throw std::invalid_argument(std::string(who) + ": N must be even and >= 2");
}

}  // namespace

QuantumState singlet_state(std::size_t N) {
    require_even(N, "singlet_state");
    const std::size_t n = N / 2;
    const WellPair wells = WellPair::fixed(n);
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(wells.joint->size()));
    const double amp = 1.0 / std::sqrt(static_cast<double>(n + 1));
    // |j,m>_L = |n_e = j+m, n_g = j-m>; the partner |j,-m>_R swaps e and g,
    // and j - m = n_gL.
    for (std::size_t ng = 0; ng <= n; ++ng) {
        const std::size_t ne = n - ng;
        const auto idx = wells.joint->index_of({ne, ng, ng, ne});
        psi(static_cast<Eigen::Index>(*idx)) = (ng % 2 == 0 ? amp : -amp);
    }
    return QuantumState::pure(wells.joint, std::move(psi));
}

QuantumState singlet_state(std::size_t N, const BasisPtr& target) { return singlet_state(N).embed(target); }

BasisPtr species_sector_basis(std::size_t N) {
    require_even(N, "species_sector_basis");
    return build_basis(4, N,
                       {SectorConstraint::exactly({mode::e_left, mode::e_right}, N / 2),
                        SectorConstraint::exactly({mode::g_left, mode::g_right}, N / 2)});
}

PhysicalParams tunneling_params(std::size_t N, double u_over_ej) {
    PhysicalParams p;
    p.N = N;
    p.E_J_e = p.E_J_g = 1.0;
    p.U_ee = p.U_gg = u_over_ej;
    p.U_eg = u_over_ej;  // n_e n_g coefficient 2U: interaction depends on n_e + n_g only
    p.delta_L = 1.0;
    p.delta_R = 0.0;
    p.Omega = 0.0;
    p.Omega_D = 0.0;
    return p;
}

namespace {

struct TunnelingSetup {
    BasisPtr basis;
    UnitaryPropagator propagator;
    CVector coeffs;
    Eigen::VectorXd imbalance;  // diagonal of n_gL - n_gR

    explicit TunnelingSetup(const PhysicalParams& p)
        : basis(species_sector_basis(p.N)),
          propagator(build_bose_hubbard(p, basis)),
          coeffs(),
          imbalance(static_cast<Eigen::Index>(basis->size())) {
        const std::size_t half = p.N / 2;
        const auto start = QuantumState::occupation(basis, {half, 0, 0, half});
        coeffs = propagator.coefficients(start.amplitudes());
        for (std::size_t i = 0; i < basis->size(); ++i) {
            const auto& s = basis->state(i);
            imbalance(static_cast<Eigen::Index>(i)) =
                static_cast<double>(s[mode::g_left]) - static_cast<double>(s[mode::g_right]);
        }
    }

    CVector state(double t) const { return propagator.apply_coefficients(coeffs, t); }

    double population_difference(double t) const {
        const CVector psi = state(t);
        return (psi.cwiseAbs2().array() * imbalance.array()).sum();
    }
};

}  // namespace

SynthesisResult generate_entangled(const PhysicalParams& params, const TimeGrid& grid) {
    params.validate();
    const TunnelingSetup setup(params);

    SynthesisReport report;
    report.times = grid.times();
    report.population_difference.reserve(grid.samples());
    for (double t : grid.times()) report.population_difference.push_back(setup.population_difference(t));

    const auto& f = report.population_difference;
    std::size_t hit = grid.samples();
    for (std::size_t k = 0; k + 1 < grid.samples(); ++k) {
        if (f[k] == 0.0 || f[k] * f[k + 1] < 0.0 || f[k + 1] == 0.0) {
            hit = k;
            break;
        }
    }
    if (hit == grid.samples())
        throw std::runtime_error("generate_entangled: <n_gL - n_gR> has no zero crossing on [" +
                                 std::to_string(grid.t_start()) + ", " + std::to_string(grid.t_end()) +
                                 "]; extend the time grid");

    double a = grid.times()[hit];
    double b = grid.times()[hit + 1];
    double fa = f[hit];
    if (fa == 0.0) {
        b = a;
    } else if (f[hit + 1] == 0.0) {
        a = b;
    }
    while (b - a > 1e-9) {
        const double mid = 0.5 * (a + b);
        const double fm = setup.population_difference(mid);
        if (fm == 0.0) {
            a = b = mid;
            break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    report.t_star = 0.5 * (a + b);
    CVector psi = setup.state(report.t_star);
    psi /= psi.norm();
    return {QuantumState::pure(setup.basis, std::move(psi)), std::move(report)};
}

SynthesisResult apply_phase_correction(const QuantumState& state, const PhysicalParams& params, const TimeGrid& search) {
    params.validate();
    if (params.delta_L == params.delta_R)
        throw std::invalid_argument("apply_phase_correction: delta_L must differ from delta_R");
    if (!state.is_pure()) throw std::invalid_argument("apply_phase_correction: state must be pure");

    const BasisPtr& basis = state.basis();
    const CVector target = singlet_state(params.N, basis).amplitudes();
    const Operator h_rp = build_phase_shift(params, basis);
    const Eigen::VectorXd phases = h_rp.matrix().diagonal().real();
    // only the singlet support contributes to the overlap
    const CVector weights = target.conjugate().cwiseProduct(state.amplitudes());

    auto fid = [&](double t) {
        cplx overlap{};
        for (Eigen::Index k = 0; k < weights.size(); ++k)
            if (weights(k) != cplx{}) overlap += weights(k) * std::polar(1.0, -phases(k) * t);
        return std::norm(overlap);
    };

    SynthesisReport report;
    report.phase_times = search.times();
    std::size_t best = 0;
    for (std::size_t k = 0; k < search.samples(); ++k) {
        report.fidelity.push_back(fid(search.times()[k]));
        if (report.fidelity[k] > report.fidelity[best]) best = k;
    }

    // golden-section refinement on the bracketing samples
    double lo = search.times()[best == 0 ? 0 : best - 1];
    double hi = search.times()[std::min(best + 1, search.samples() - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = fid(x1), f2 = fid(x2);
    while (hi - lo > 1e-8) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = fid(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = fid(x1);
        }
    }
    double t_best = 0.5 * (lo + hi);
    double f_best = fid(t_best);
    if (report.fidelity[best] > f_best) {
        t_best = search.times()[best];
        f_best = report.fidelity[best];
    }

    report.t_phase = t_best;
    report.fidelity_max = std::min(1.0, f_best);
    CVector psi = state.amplitudes();
    for (Eigen::Index k = 0; k < psi.size(); ++k) psi(k) *= std::polar(1.0, -phases(k) * t_best);
    return {QuantumState::pure(basis, std::move(psi)), std::move(report)};
}

SynthesisResult synthesize(std::size_t N, double u_over_ej) {
    const PhysicalParams p = tunneling_params(N, u_over_ej);
    p.validate();

    // Sample below the Nyquist interval of the fastest Bohr frequency, capped
    // per window; for U >> E_J the fast components have amplitude ~ (E_J/U)^2
    // and only the slow pair-tunneling crossing needs resolving.
    const TunnelingSetup setup(p);
    const auto& e = setup.propagator.energies();
    const double width = std::max(1e-12, e.maxCoeff() - e.minCoeff());
    // Pair tunneling runs on the scale U / E_J^2 per exchanged pair.
    const double window = 10.0 * (1.0 + u_over_ej) * static_cast<double>(N);
    const double dt = std::min(0.05, std::numbers::pi / (4.0 * width));
    const auto samples = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(window / dt)) + 1, 20001);

    SynthesisResult tunnel{QuantumState::occupation(setup.basis, {N / 2, 0, 0, N / 2}), {}};
    bool found = false;
    for (int chunk = 0; chunk < 8 && !found; ++chunk) {
        const TimeGrid grid = TimeGrid::uniform(window * chunk, window * (chunk + 1), samples);
        try {
            tunnel = generate_entangled(p, grid);
            found = true;
        } catch (const std::runtime_error&) {
        }
    }
    if (!found) throw std::runtime_error("synthesize: no zero crossing of the population difference found");

    const TimeGrid search = TimeGrid::uniform(0.0, 2.0 * std::numbers::pi / std::abs(p.delta_L - p.delta_R), 4001);
    SynthesisResult corrected = apply_phase_correction(tunnel.state, p, search);
    corrected.report.t_star = tunnel.report.t_star;
    corrected.report.times = std::move(tunnel.report.times);
    corrected.report.population_difference = std::move(tunnel.report.population_difference);
    return corrected;
}

QuantumState to_detection_space(const QuantumState& synthesized, const WellPair& wells) {
    if (!wells.fixed_number) throw std::invalid_argument("to_detection_space: expects a fixed-number well pair");
    return synthesized.project(wells.joint);
}

std::vector<FidelityRow> fidelity_vs_N_sweep(const std::vector<double>& u_over_ej, const std::vector<std::size_t>& N_list) {
    std::vector<FidelityRow> rows;
    for (std::size_t N : N_list) {
        for (double u : u_over_ej) {
            const SynthesisResult r = synthesize(N, u);
            rows.push_back({N, u, r.report.t_star, r.report.t_phase, r.report.fidelity_max});
        }
    }
    return rows;
}

}  // namespace becgrad
