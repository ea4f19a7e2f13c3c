// serialization.hpp — JSON form of bases and states

#pragma once

#include <filesystem>

#include <json.hpp>

#include "becgrad/dynamics.hpp"
#include "becgrad/fock.hpp"

namespace becgrad {

/// {"modes", "max_total", "sectors": [{"modes", "kind", "total"}], "dimension"}.
/// States are re-enumerated on load, so the descriptor fixes the ordering.
nlohmann::json basis_to_json(const FockBasis& basis);
BasisPtr basis_from_json(const nlohmann::json& j);

// Pure states store "amplitudes" as [re, im] pairs, mixed states store
// "density" as rows of [re, im] pairs.
nlohmann::json state_to_json(const QuantumState& state);
QuantumState state_from_json(const nlohmann::json& j);

void save_state(const QuantumState& state, const std::filesystem::path& path);
QuantumState load_state(const std::filesystem::path& path);

}  // namespace becgrad
