// serialization.cpp — JSON form of bases and states

#include "becgrad/serialization.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace becgrad {

using nlohmann::json;

namespace {

json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

cplx parse_pair(const json& p) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("state json: expected [re, im] pair");
    return {p[0].get<double>(), p[1].get<double>()};
}

}  // namespace

json basis_to_json(const FockBasis& basis) {
    json sectors = json::array();
    for (const auto& c : basis.sectors())
        sectors.push_back({{"modes", c.modes},
                           {"kind", c.kind == SectorConstraint::Kind::exactly ? "exactly" : "at_most"},
                           {"total", c.total}});
    return {{"modes", basis.modes()},
            {"max_total", basis.max_total()},
            {"sectors", sectors},
            {"dimension", basis.size()}};
}

BasisPtr basis_from_json(const json& j) {
    std::vector<SectorConstraint> sectors;
    for (const auto& s : j.at("sectors")) {
        const std::string kind = s.at("kind").get<std::string>();
        if (kind != "exactly" && kind != "at_most") throw std::invalid_argument("basis json: unknown sector kind " + kind);
        sectors.push_back({s.at("modes").get<std::vector<std::size_t>>(),
                           kind == "exactly" ? SectorConstraint::Kind::exactly : SectorConstraint::Kind::at_most,
                           s.at("total").get<std::size_t>()});
    }
    BasisPtr basis = build_basis(j.at("modes").get<std::size_t>(), j.at("max_total").get<std::size_t>(), sectors);
    if (j.contains("dimension") && j["dimension"].get<std::size_t>() != basis->size())
        throw std::invalid_argument("basis json: dimension " + j["dimension"].dump() + " does not match the enumerated " +
                                    std::to_string(basis->size()));
    return basis;
}

json state_to_json(const QuantumState& state) {
    json j{{"basis", basis_to_json(*state.basis())}};
    if (state.is_pure()) {
        j["kind"] = "pure";
        json amps = json::array();
        const CVector& psi = state.amplitudes();
        for (Eigen::Index i = 0; i < psi.size(); ++i) amps.push_back(complex_pair(psi(i)));
        j["amplitudes"] = amps;
    } else {
        j["kind"] = "mixed";
        json rows = json::array();
        const CMatrix& rho = state.density();
        for (Eigen::Index r = 0; r < rho.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < rho.cols(); ++c) row.push_back(complex_pair(rho(r, c)));
            rows.push_back(row);
        }
        j["density"] = rows;
    }
    return j;
}

QuantumState state_from_json(const json& j) {
    BasisPtr basis = basis_from_json(j.at("basis"));
    const auto d = static_cast<Eigen::Index>(basis->size());
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "pure") {
        const json& amps = j.at("amplitudes");
        if (static_cast<Eigen::Index>(amps.size()) != d) throw std::invalid_argument("state json: amplitude count mismatch");
        CVector psi(d);
        for (Eigen::Index i = 0; i < d; ++i) psi(i) = parse_pair(amps[static_cast<std::size_t>(i)]);
        return QuantumState::pure(basis, std::move(psi));
    }
    if (kind == "mixed") {
        const json& rows = j.at("density");
        if (static_cast<Eigen::Index>(rows.size()) != d) throw std::invalid_argument("state json: density row count mismatch");
        CMatrix rho(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            const json& row = rows[static_cast<std::size_t>(r)];
            if (static_cast<Eigen::Index>(row.size()) != d) throw std::invalid_argument("state json: density column count mismatch");
            for (Eigen::Index c = 0; c < d; ++c) rho(r, c) = parse_pair(row[static_cast<std::size_t>(c)]);
        }
        return QuantumState::mixed(basis, std::move(rho));
    }
    throw std::invalid_argument("state json: unknown kind " + kind);
}

void save_state(const QuantumState& state, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_state: cannot open " + path.string());
    out << state_to_json(state).dump(2) << '\n';
    if (!out) throw std::runtime_error("save_state: write failed for " + path.string());
}

QuantumState load_state(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_state: cannot open " + path.string());
    return state_from_json(json::parse(in));
}

}  // namespace becgrad
