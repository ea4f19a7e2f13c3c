// test_statesynth.cpp — state synthesis tests

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "becgrad/metrology.hpp"
#include "becgrad/statesynth.hpp"
#include "helpers.hpp"

using namespace becgrad;
using testing::max_abs;

TEST_CASE("singlet is annihilated by every total spin component") {
    for (std::size_t N : {2, 4, 6, 8, 12}) {
        const WellPair w = WellPair::fixed(N / 2);
        const QuantumState s = singlet_state(N);
        const SpinOperators l = w.left_spin(), r = w.right_spin();
        CHECK(((l.x + r.x).matrix() * s.amplitudes()).norm() < 1e-12);
        CHECK(((l.y + r.y).matrix() * s.amplitudes()).norm() < 1e-12);
        CHECK(((l.z + r.z).matrix() * s.amplitudes()).norm() < 1e-12);
        const double n = static_cast<double>(N);
        CHECK(s.expectation(estimator_operator(w)).real() == doctest::Approx(n * (n + 4.0) / 12.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(singlet_state(3), std::invalid_argument);
}

TEST_CASE("species sector basis") {
    for (std::size_t N : {2, 4, 8}) CHECK(species_sector_basis(N)->size() == (N / 2 + 1) * (N / 2 + 1));
}

TEST_CASE("pair tunneling reaches equal populations with near-uniform amplitudes") {
    const PhysicalParams p = tunneling_params(4, 10.0);
    const SynthesisResult r = generate_entangled(p, TimeGrid::uniform(0.0, 100.0, 2001));
    CHECK(r.report.t_star > 0.0);
    CHECK(r.state.norm() == doctest::Approx(1.0).epsilon(1e-10));
    const auto& f = r.report.population_difference;
    CHECK(f.front() == doctest::Approx(-2.0));
    // |c_n|^2 on |n>_gL |2-n>_gR |2-n>_eL |n>_eR, each close to 1/3
    double on_pairs = 0.0;
    for (std::size_t n = 0; n <= 2; ++n) {
        const auto idx = *r.state.basis()->index_of({2 - n, n, n, 2 - n});
        const double w = std::norm(r.state.amplitudes()(static_cast<Eigen::Index>(idx)));
        on_pairs += w;
        CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(0.35));
    }
    CHECK(on_pairs > 0.9);
}

TEST_CASE("no tunneling, no crossing") {
    PhysicalParams p = tunneling_params(4, 10.0);
    p.E_J_e = p.E_J_g = 0.0;
    CHECK_THROWS_AS(generate_entangled(p, TimeGrid::uniform(0.0, 100.0, 101)), std::runtime_error);
}

TEST_CASE("crossing time agrees with a ten times finer scan") {
    const PhysicalParams p = tunneling_params(2, 10.0);
    const TimeGrid coarse = TimeGrid::uniform(0.0, 60.0, 601);
    const SynthesisResult r = generate_entangled(p, coarse);

    // independent scan: eigendecomposition of H on the same sector, 10x denser
    const BasisPtr b = species_sector_basis(2);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(build_bose_hubbard(p, b).matrix());
    CVector psi0 = CVector::Zero(static_cast<Eigen::Index>(b->size()));
    psi0(static_cast<Eigen::Index>(*b->index_of({1, 0, 0, 1}))) = 1.0;
    const CVector c = es.eigenvectors().adjoint() * psi0;
    auto imbalance = [&](double t) {
        CVector phase(c.size());
        for (Eigen::Index k = 0; k < c.size(); ++k) phase(k) = std::polar(1.0, -es.eigenvalues()(k) * t) * c(k);
        const CVector psi = es.eigenvectors() * phase;
        double v = 0.0;
        for (std::size_t i = 0; i < b->size(); ++i)
            v += std::norm(psi(static_cast<Eigen::Index>(i))) *
                 (static_cast<double>(b->state(i)[1]) - static_cast<double>(b->state(i)[3]));
        return v;
    };
    const double dt = 0.01;
    double prev = imbalance(0.0), t_cross = -1.0;
    for (int k = 1; k <= 6000 && t_cross < 0.0; ++k) {
        const double cur = imbalance(k * dt);
        if (prev * cur <= 0.0) t_cross = (k - 1) * dt + dt * prev / (prev - cur);
        prev = cur;
    }
    REQUIRE(t_cross > 0.0);
    CHECK(std::abs(r.report.t_star - t_cross) < 1e-4);
    CHECK(std::abs(imbalance(r.report.t_star)) < 1e-8);
}

TEST_CASE("phase correction") {
    PhysicalParams p = tunneling_params(4, 10.0);
    const TimeGrid one = TimeGrid::uniform(0.0, 2.0 * std::numbers::pi, 801);
    const TimeGrid two = TimeGrid::uniform(0.0, 4.0 * std::numbers::pi, 1601);

    SUBCASE("the singlet itself is already optimal") {
        const QuantumState s = singlet_state(4, species_sector_basis(4));
        const SynthesisResult r = apply_phase_correction(s, p, one);
        CHECK(r.report.fidelity_max == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.report.fidelity.front() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("populations are untouched and the search is periodic") {
        const SynthesisResult t = generate_entangled(p, TimeGrid::uniform(0.0, 100.0, 2001));
        const SynthesisResult a = apply_phase_correction(t.state, p, one);
        const SynthesisResult b = apply_phase_correction(t.state, p, two);
        CHECK(max_abs(a.state.amplitudes().cwiseAbs2().cast<cplx>() - t.state.amplitudes().cwiseAbs2().cast<cplx>()) < 1e-12);
        CHECK(a.report.fidelity_max == doctest::Approx(b.report.fidelity_max).epsilon(1e-10));
        CHECK(a.report.fidelity_max > 0.9);
    }
    SUBCASE("equal phase rates are rejected") {
        p.delta_R = p.delta_L;
        CHECK_THROWS_AS(apply_phase_correction(singlet_state(4, species_sector_basis(4)), p, one), std::invalid_argument);
    }
}

TEST_CASE("synthesis pipeline") {
    const SynthesisResult r = synthesize(4, 10.0);
    CHECK(r.report.fidelity_max > 0.9);
    CHECK(fidelity(r.state, singlet_state(4, r.state.basis())) == doctest::Approx(r.report.fidelity_max).epsilon(1e-12));
    // regression values pinned from the first run
    CHECK(r.report.t_star == doctest::Approx(24.0581).epsilon(1e-4));
    CHECK(r.report.fidelity_max == doctest::Approx(0.909133).epsilon(1e-5));

    const QuantumState d = to_detection_space(r.state, WellPair::fixed(2));
    CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.basis()->size() == 9);
}

TEST_CASE("stronger interactions give higher fidelity") {
    const auto rows = fidelity_vs_N_sweep({5.0, 50.0}, {4, 8});
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].fidelity >= rows[0].fidelity);
    CHECK(rows[3].fidelity >= rows[2].fidelity);
    CHECK(rows[2].fidelity < rows[0].fidelity);  // larger N is harder
}
