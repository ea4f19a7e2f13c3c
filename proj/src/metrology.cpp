// metrology.cpp — estimator moments, error propagation, detection runs

#include "becgrad/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "becgrad/statesynth.hpp"

namespace becgrad {

namespace {

constexpr double kHbar = 1.054571817e-34;        // J s
constexpr double kBohrMagneton = 9.2740100783e-24;  // J / T

}  // namespace

Operator estimator_operator(const WellPair& wells) {
    const SpinOperators l = wells.left_spin();
    const SpinOperators r = wells.right_spin();
    const Operator y_minus = l.y - r.y;
    const Operator z_plus = l.z + r.z;
    return y_minus * y_minus - z_plus * z_plus;
}

double EstimatorSeries::variance(std::size_t i) const {
    return std::max(0.0, estimator_sq.at(i) - estimator.at(i) * estimator.at(i));
}

EstimatorSeries estimator_series(const std::vector<QuantumState>& states, const std::vector<double>& times,
                                 const WellPair& wells, const PhysicalParams& params, const LossRates& rates) {
    if (states.size() != times.size()) throw std::invalid_argument("estimator_series: states and times differ in length");
    if (states.size() < 3) throw std::invalid_argument("estimator_series: at least three samples are required");
    if (params.Omega_D == 0.0) throw std::invalid_argument("estimator_series: Omega_D must be nonzero");

    const Operator o = estimator_operator(wells);
    const Operator o2 = o * o;
    const Operator z_plus = wells.left_spin().z + wells.right_spin().z;
    const Operator z2 = z_plus * z_plus;

    EstimatorSeries s;
    s.times = times;
    s.params = params;
    s.rates = rates;
    const std::size_t n = states.size();
    for (const auto& st : states) {
        s.estimator.push_back(st.expectation(o).real());
        s.estimator_sq.push_back(st.expectation(o2).real());
        s.jz_sq.push_back(st.expectation(z2).real());
    }

    double scale = 1.0;
    for (double v : s.estimator) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) {
        const double e = s.estimator[i];
        if (s.estimator_sq[i] < e * e - 1e-9 * std::max(1.0, e * e))
            throw std::runtime_error("estimator_series: negative variance at sample " + std::to_string(i));
    }

    const auto& t = s.times;
    const auto& f = s.estimator;
    for (std::size_t i = 0; i < n; ++i) {
        // quadratic through three neighbouring samples, differentiated at t[i]
        const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
        const double a = t[c - 1] - t[i], b = t[c] - t[i], d = t[c + 1] - t[i];
        const double dfdt = -(f[c - 1] * (b + d) / ((a - b) * (a - d)) + f[c] * (a + d) / ((b - a) * (b - d)) +
                              f[c + 1] * (a + b) / ((d - a) * (d - b)));
        const double slope = std::abs(dfdt / params.Omega_D);
        s.uncertainty.push_back(slope <= 1e-12 * scale ? kUnbounded : std::sqrt(s.variance(i)) / slope);
    }
    return s;
}

double analytic_variance(std::size_t N, double phi_D) {
    const double n = static_cast<double>(N);
    return n * (n + 4.0) / 12.0 * std::cos(phi_D);
}

double analytic_uncertainty(std::size_t N, double phi_D) {
    const double n = static_cast<double>(N);
    const double s2 = std::pow(std::sin(phi_D), 2);
    const double c2 = std::pow(std::cos(phi_D), 2);
    if (s2 == 0.0) return kUnbounded;
    return std::sqrt((15.0 * s2 + (n - 2.0) * (n + 6.0) * c2) / (5.0 * n * (n + 4.0) * s2));
}

double heisenberg_minimum(std::size_t N) {
    const double n = static_cast<double>(N);
    return std::sqrt(3.0 / (n * (n + 4.0)));
}

double cramer_rao_bound(std::size_t N) {
    const double n = static_cast<double>(N);
    return std::sqrt(12.0 / (n * (n + 4.0)));
}

double sql_baseline(std::size_t N) {
    if (N == 0) throw std::invalid_argument("sql_baseline: N must be positive");
    return 1.0 / std::sqrt(static_cast<double>(N));
}

double field_from_coupling(double omega, double omega_ref_hz) {
    const double rad_per_s = omega * 2.0 * std::numbers::pi * omega_ref_hz;
    return kHbar * rad_per_s / kBohrMagneton;
}

const char* to_string(InitialState s) {
    switch (s) {
        case InitialState::singlet: return "singlet";
        case InitialState::synthesized: return "synthesized";
        case InitialState::product: return "product";
    }
    return "unknown";
}

std::optional<InitialState> initial_state_from_string(const std::string& s) {
    if (s == "singlet") return InitialState::singlet;
    if (s == "synthesized") return InitialState::synthesized;
    if (s == "product") return InitialState::product;
    return std::nullopt;
}

WellPair detection_space(const DetectionSetup& setup) {
    setup.params.validate();
    const std::size_t half = setup.params.N / 2;
    return setup.rates.any() ? WellPair::at_most(half) : WellPair::fixed(half);
}

QuantumState detection_initial_state(const DetectionSetup& setup, const WellPair& wells) {
    const std::size_t N = setup.params.N;
    switch (setup.initial) {
        case InitialState::singlet:
            return singlet_state(N, wells.joint);
        case InitialState::synthesized: {
            const SynthesisResult r = synthesize(N, setup.u_over_ej);
            return to_detection_space(r.state, WellPair::fixed(N / 2)).embed(wells.joint);
        }
        case InitialState::product:
            return QuantumState::occupation(wells.joint, {0, N / 2, 0, N / 2});
    }
    throw std::invalid_argument("detection_initial_state: unknown initial state");
}

SeparableLindbladModel detection_model(const PhysicalParams& params, const LossRates& rates, const WellPair& wells) {
    auto well = [&](const BasisPtr& basis, bool left) {
        return WellLindblad{well_gradient_term(params, basis, left) + well_collective_term(params, basis),
                            well_loss_jumps(rates, basis)};
    };
    return {wells, well(wells.left, true), well(wells.right, false)};
}

SimulationResult simulate_detection(const DetectionSetup& setup, const TimeGrid& grid) {
    const WellPair wells = detection_space(setup);
    const QuantumState psi0 = detection_initial_state(setup, wells);
    SimulationResult out{{}, {}, std::nullopt};
    if (!setup.rates.any()) {
        const Operator h = build_gradient_spin(setup.params, wells) + build_collective(setup.params, wells);
        out.states = evolve_unitary(h, psi0, grid);
    } else {
        auto traj = evolve_lindblad(detection_model(setup.params, setup.rates, wells), psi0.to_mixed(), grid);
        out.states = std::move(traj.states);
        out.integration = traj.report;
    }
    out.series = estimator_series(out.states, grid.times(), wells, setup.params, setup.rates);
    return out;
}

UncertaintyPoint uncertainty_at(const DetectionSetup& setup, double t, double h) {
    if (!(h > 0.0) || t - h < 0.0) throw std::invalid_argument("uncertainty_at: need 0 < h <= t");
    const SimulationResult r = simulate_detection(setup, TimeGrid::points({t - h, t, t + h}));
    return {t, r.series.estimator[1], r.series.estimator_sq[1], r.series.uncertainty[1]};
}

std::vector<UncertaintyRow> min_uncertainty_vs_N(const MinUncertaintyConfig& config) {
    std::vector<UncertaintyRow> rows;
    const double t_min = std::numbers::pi / (2.0 * config.setup.params.Omega_D);
    for (std::size_t N : config.N_list) {
        DetectionSetup setup = config.setup;
        setup.params.N = N;
        const UncertaintyPoint p = uncertainty_at(setup, t_min);
        rows.push_back({N, p.uncertainty, p.estimator, heisenberg_minimum(N), sql_baseline(N)});
    }
    return rows;
}

}  // namespace becgrad
