// acceptance.cpp — runs the numbered acceptance criteria, one PASS/FAIL line each

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "becgrad/experiments.hpp"
#include "becgrad/metrology.hpp"
#include "becgrad/oracle.hpp"
#include "becgrad/statesynth.hpp"

using namespace becgrad;

namespace {

struct Outcome {
    bool pass{true};
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[x] ";
        }
        detail << what << "; ";
    }
};

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double amplitude(std::size_t N) {
    const double n = static_cast<double>(N);
    return n * (n + 4.0) / 12.0;
}

DetectionSetup setup_for(std::size_t N, LossRates r = {}, double chi = 0.0) {
    DetectionSetup s;
    s.params.N = N;
    s.params.Omega = 1.0;
    s.params.Omega_D = 0.05;
    s.params.chi = chi;
    s.rates = r;
    return s;
}

double quarter(const DetectionSetup& s) { return std::numbers::pi / (2.0 * s.params.Omega_D); }

// Configurations handed to the oracle check: setup and the final time used.
struct OracleCase {
    std::string label;
    DetectionSetup setup;
    double t;
};
std::vector<OracleCase> oracle_cases;

void c1(Outcome& o) {
    const DetectionSetup s = setup_for(4);
    const TimeGrid g = TimeGrid::uniform(0.0, std::numbers::pi / s.params.Omega_D, 801);
    const SimulationResult r = simulate_detection(s, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.samples(); ++i)
        worst = std::max(worst, std::abs(r.series.estimator[i] - 8.0 / 3.0 * std::cos(s.params.Omega_D * g.times()[i])));
    o.check(worst < 1e-6 * 8.0 / 3.0, "max |<O> - (8/3)cos| = " + fmt(worst) + " (< " + fmt(1e-6 * 8.0 / 3.0) + ")");
    oracle_cases.push_back({"c1 N=4", s, g.t_end()});
}

void c2(Outcome& o) {
    double at20 = 0.0;
    for (std::size_t N : {4, 8, 12, 16, 20}) {
        const DetectionSetup s = setup_for(N);
        const double u = uncertainty_at(s, quarter(s)).uncertainty;
        const double target = heisenberg_minimum(N);
        const double rel = std::abs(u - target) / target;
        o.check(rel < 1e-6, "N=" + std::to_string(N) + " dphi=" + fmt(u) + " vs " + fmt(target) + " (ratio " +
                                fmt(u / target) + ", Cramer-Rao " + fmt(cramer_rao_bound(N)) + ")");
        if (N == 20) at20 = u;
        oracle_cases.push_back({"c2 N=" + std::to_string(N), s, quarter(s)});
    }
    const double prod = at20 * 20.0;
    o.check(std::abs(prod - std::sqrt(3.0)) < 0.1 * std::sqrt(3.0), "N*dphi at N=20 = " + fmt(prod) + " vs sqrt3");
}

void c3(Outcome& o) {
    const SynthesisResult r = synthesize(4, 10.0);
    o.check(r.report.fidelity_max > 0.9, "N=4 U=10 fidelity " + fmt(r.report.fidelity_max) + " (> 0.9)");
    const auto rows = fidelity_vs_N_sweep({5.0, 50.0}, {4, 8});
    for (std::size_t N : {4, 8}) {
        double f5 = 0.0, f50 = 0.0;
        for (const auto& row : rows)
            if (row.N == N) (row.u_over_ej == 5.0 ? f5 : f50) = row.fidelity;
        o.check(f50 >= f5, "N=" + std::to_string(N) + " F(U=50)=" + fmt(f50) + " >= F(U=5)=" + fmt(f5));
    }
}

void c4(Outcome& o) {
    DetectionSetup s = setup_for(4);
    const double ideal = uncertainty_at(s, quarter(s)).uncertainty;
    s.initial = InitialState::synthesized;
    s.u_over_ej = 10.0;
    const double synth = uncertainty_at(s, quarter(s)).uncertainty;
    const double rel = std::abs(synth - ideal) / ideal;
    o.check(rel < 0.2, "synthesized " + fmt(synth) + " vs singlet " + fmt(ideal) + " (rel " + fmt(rel, 3) + " < 0.2)");
    oracle_cases.push_back({"c4 synthesized", s, quarter(s)});
}

// |<O>| at odd multiples of pi/(2 Omega_D)
void zero_crossings(Outcome& o, const DetectionSetup& s, const std::string& label, std::initializer_list<int> ks) {
    std::vector<double> ts{0.0};  // estimator_series wants three samples
    for (int k : ks) ts.push_back(k * quarter(s));
    const SimulationResult r = simulate_detection(s, TimeGrid::points(ts));
    const double tol = 1e-3 * amplitude(s.params.N);
    std::size_t i = 1;
    for (int k : ks) {
        const double v = std::abs(r.series.estimator[i++]);
        o.check(v < tol, label + " t=" + std::to_string(k) + "pi/2W: " + fmt(v, 3));
    }
    oracle_cases.push_back({label, s, quarter(s)});
}

void c5(Outcome& o) {
    for (double g : {0.0025, 0.005, 0.0075, 0.01})
        zero_crossings(o, setup_for(2, {g, 0.0, 0.0}), "N=2 g1=" + fmt(g), {1, 3});
    o.detail << "tol " << fmt(1e-3 * amplitude(2)) << "; ";
}

void c6(Outcome& o) {
    for (double eg : {0.005, 0.01}) zero_crossings(o, setup_for(4, {0.0, 0.0, eg}), "N=4 eg=" + fmt(eg), {1, 3});
    for (double eg : {0.001, 0.002})
        zero_crossings(o, setup_for(4, {0.0, 1.5 * eg, eg}), "N=4 eg=" + fmt(eg) + " ee=" + fmt(1.5 * eg), {1, 3});
    o.detail << "tol " << fmt(1e-3 * amplitude(4)) << "; ";
}

void c7(Outcome& o) {
    bool ordered = true;
    std::string worst_sql;
    bool sql_ok = true;
    for (std::size_t N = 2; N <= 10; N += 2) {
        std::vector<double> u;
        for (double g : {0.0, 0.005, 0.01}) {
            const DetectionSetup s = setup_for(N, {g, 0.0, 0.0});
            u.push_back(uncertainty_at(s, quarter(s)).uncertainty);
            if (g > 0.0 && N <= 6) oracle_cases.push_back({"c7 N=" + std::to_string(N) + " g1=" + fmt(g), s, quarter(s)});
        }
        if (!(u[0] <= u[1] && u[1] <= u[2])) ordered = false;
        const double ratio = u[2] * std::sqrt(static_cast<double>(N));
        const bool near = std::abs(ratio - 1.0) < 0.3;
        sql_ok = sql_ok && near;
        worst_sql += "N=" + std::to_string(N) + ":" + fmt(u[0], 4) + "/" + fmt(u[1], 4) + "/" + fmt(u[2], 4) +
                     " (x sqrtN " + fmt(ratio, 4) + ") ";
        std::cout << "  c7 one-body " << worst_sql.substr(worst_sql.rfind("N=")) << std::endl;
    }
    o.check(ordered, "one-body dphi non-decreasing in gamma");
    o.check(sql_ok, "one-body dphi(0.01) within 30% of 1/sqrtN: " + worst_sql);
    std::vector<double> two;
    for (std::size_t N : {8, 10}) {
        const DetectionSetup s = setup_for(N, {0.0, 0.0, 0.0075});
        two.push_back(uncertainty_at(s, quarter(s)).uncertainty);
    }
    o.check(two[1] >= two[0], "two-body eg=0.0075 dphi N=8 " + fmt(two[0]) + " <= N=10 " + fmt(two[1]));
}

void c8(Outcome& o) {
    const std::size_t N = 50;
    std::vector<double> amps;
    double cross = 0.0;
    for (double chi : {0.0, 1e-4, 5e-4, 1e-3}) {
        const DetectionSetup s = setup_for(N, {}, chi);
        const double w = s.params.Omega_D;
        const TimeGrid g = TimeGrid::uniform(std::numbers::pi / (2.0 * w), 5.0 * std::numbers::pi / (2.0 * w), 801);
        const SimulationResult r = simulate_detection(s, g);
        double a = 0.0;
        for (double v : r.series.estimator) a = std::max(a, std::abs(v));
        amps.push_back(a);
        if (chi == 1e-4) cross = std::abs(r.series.estimator.front());
    }
    bool dec = true;
    std::string list;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        list += fmt(amps[i]) + (i + 1 < amps.size() ? " > " : "");
        if (i > 0 && !(amps[i] < amps[i - 1])) dec = false;
    }
    o.check(dec, "amplitudes " + list);
    o.check(cross < 1e-2 * amplitude(N),
            "chi=1e-4 |<O>(pi/2W)| = " + fmt(cross) + " (< " + fmt(1e-2 * amplitude(N)) + ")");
}

void c9(Outcome& o) {
    std::size_t checked = 0;
    double worst = 0.0, drift = 0.0, min_eig = 0.0;
    for (const auto& c : oracle_cases) {
        const WellPair w = detection_space(c.setup);
        if (w.joint->size() > oracle::kMaxDimension) continue;
        const SimulationResult sim = simulate_detection(c.setup, TimeGrid::points({0.5 * c.t, c.t, c.t + 1e-3 * c.t}));
        const QuantumState rho0 = detection_initial_state(c.setup, w).to_mixed();
        const QuantumState exact =
            oracle::lindblad_exact(detection_model(c.setup.params, c.setup.rates, w).joint(), rho0, c.t);
        const double d = max_norm(exact.density_matrix() - sim.states[1].density_matrix());
        worst = std::max(worst, d);
        if (d >= 1e-7) o.check(false, c.label + " diff " + fmt(d));
        for (const auto& st : sim.states) drift = std::max(drift, std::abs(st.trace() - 1.0));
        if (sim.integration) {
            drift = std::max(drift, sim.integration->max_trace_drift);
            min_eig = std::min(min_eig, sim.integration->min_eigenvalue);
        }
        ++checked;
    }
    o.check(checked > 0, std::to_string(checked) + " configurations with d <= 100");
    o.check(worst < 1e-7, "max oracle difference " + fmt(worst));
    o.check(drift < 1e-8, "trace drift " + fmt(drift));
    o.check(min_eig >= -1e-6, "min eigenvalue " + fmt(min_eig));
}

void c10(Outcome& o) {
    for (std::size_t N : {4, 8, 12}) {
        const WellPair w = WellPair::fixed(N / 2);
        const QuantumState s = singlet_state(N);
        const SpinOperators l = w.left_spin(), r = w.right_spin();
        double worst = 0.0;
        for (const Operator& j : {l.x + r.x, l.y + r.y, l.z + r.z})
            worst = std::max(worst, (j.matrix() * s.amplitudes()).norm());
        const double e = s.expectation(estimator_operator(w)).real();
        const double rel = std::abs(e - amplitude(N)) / amplitude(N);
        o.check(worst < 1e-12, "N=" + std::to_string(N) + " |J_tot psi| " + fmt(worst, 3));
        o.check(rel < 1e-12, "N=" + std::to_string(N) + " <O>(0) rel err " + fmt(rel, 3));
    }
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> expected;
    std::vector<int> only;
    app.add_option("--expected-failures", expected, "criteria known to fail; reported as FAIL but not fatal")->delimiter(',');
    app.add_option("--only", only, "run only these criteria (9 checks the configurations run before it)")->delimiter(',');
    CLI11_PARSE(app, argc, argv);
    const std::set<int> expect(expected.begin(), expected.end());

    const std::vector<Criterion> all{
        {1, "estimator cosine law", 5, c1},
        {2, "Heisenberg scaling of dphi", 60, c2},
        {3, "state synthesis fidelity", 120, c3},
        {4, "synthesized vs singlet dphi", 0, c4},
        {5, "one-body loss zero crossings", 120, c5},
        {6, "two-body loss zero crossings", 300, c6},
        {7, "loss degradation ordering", 600, c7},
        {8, "nonlinearity amplitude and crossing", 300, c8},
        {9, "integrator vs oracle", 0, c9},
        {10, "singlet algebra", 0, c10},
    };

    int unexpected = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0) o.check(secs < c.limit_s, "runtime " + fmt(secs, 3) + " s (< " + fmt(c.limit_s) + " s)");
        else o.detail << "runtime " << fmt(secs, 3) << " s";
        const bool known = expect.count(c.id) > 0;
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << (known ? " (expected failure)" : "")
                  << " - " << c.name << " | " << o.detail.str() << std::endl;
        if (o.pass == known) ++unexpected;  // unexpected failure or unexpected pass
    }
    std::cout << (unexpected == 0 ? "acceptance: all outcomes as expected" : "acceptance: unexpected outcomes") << std::endl;
    return unexpected == 0 ? 0 : 1;
}
