// experiments.hpp — figure recipes, config parsing and run artifacts

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "becgrad/hamiltonian.hpp"
#include "becgrad/metrology.hpp"

namespace becgrad {

inline constexpr const char* kVersion = "0.1.0";

enum class RecipeKind {
    synthesis,       // population difference and phase-search fidelity
    fidelity_table,  // peak fidelity over (N, U/E_J)
    curves,          // estimator time series, one CSV per variant
    min_table,       // delta phi at t = pi/(2 Omega_D) over (variant, N)
};

struct RecipeInfo {
    std::string name;
    RecipeKind kind;
    std::string description;
};

const std::vector<RecipeInfo>& recipes();
std::optional<RecipeInfo> find_recipe(const std::string& name);

// Settings that differ between the curves of one recipe. Unset fields take
// the base config value.
struct Variant {
    std::string label;
    std::optional<InitialState> initial_state;
    std::optional<double> gamma_o;
    std::optional<double> gamma_t_ee;
    std::optional<double> gamma_t_eg;
    std::optional<double> chi;
};

/// t_end = t_start + periods * 2 pi / Omega_D unless t_end is given.
struct GridSpec {
    double t_start{0.0};
    std::optional<double> t_end;
    double periods{2.0};
    std::size_t samples{401};

    TimeGrid resolve(double omega_d) const;
};

struct ExperimentConfig {
    std::string recipe{"custom"};
    PhysicalParams params;
    LossRates rates;
    GridSpec grid;
    InitialState initial_state{InitialState::singlet};
    double u_over_ej{10.0};
    std::vector<Variant> variants;       // curves and min_table recipes
    std::vector<std::size_t> N_list;     // table recipes
    std::vector<double> u_list;          // fidelity_table
    bool write_jz_sq{false};             // extra <J_z+^2> CSV per curve
    std::filesystem::path output_dir;
    bool verify{false};

    void validate() const;  // throws ConfigError
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caption parameters of each recipe; throws ConfigError for unknown names.
ExperimentConfig preset(const std::string& recipe);

nlohmann::json config_to_json(const ExperimentConfig& config);
/// Applies `j` on top of the preset named by j["recipe"] (or `base` when
/// absent). Unknown keys and type mismatches throw ConfigError naming the
/// key path, e.g. "rates.gamm_o".
ExperimentConfig config_from_json(const nlohmann::json& j, const std::optional<ExperimentConfig>& base = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path, const std::optional<ExperimentConfig>& base = std::nullopt);

// Command-line overrides. A flag that sets a field swept by the variants
// collapses the variant list to one curve labelled "override"; --n on a
// table recipe replaces N_list with {n}.
struct Overrides {
    std::optional<std::size_t> N;
    std::optional<double> omega_d;
    std::optional<double> gamma_o;
    std::optional<std::filesystem::path> output_dir;
    bool verify{false};
};

void apply_overrides(ExperimentConfig& config, const Overrides& o);

// Base setup with one variant applied.
DetectionSetup resolve_variant(const ExperimentConfig& config, const Variant& v);

struct VerificationEntry {
    std::string label;
    std::size_t N{0};
    std::size_t dimension{0};
    double time{0.0};
    bool checked{false};  // false when the joint dimension exceeds the oracle limit
    double max_difference{0.0};
    bool passed{true};
};

struct RunResult {
    std::vector<std::filesystem::path> files;  // relative to output_dir, manifest last
    std::vector<VerificationEntry> verification;
    double wall_time{0.0};
    bool verified_ok() const;
};

/// Runs a recipe and writes its CSVs, then manifest.json. On an exception
/// every file written by this run is removed before rethrowing.
RunResult run(const ExperimentConfig& config);

// 12 significant digits, "inf" / "-inf" / "nan" spelled out.
std::string format_number(double v);

// Oracle comparison of the production state at time t against lindblad_exact.
VerificationEntry verify_point(const DetectionSetup& setup, const std::string& label, double t,
                               double tolerance = 1e-7);

// Machine-readable record for a failure, e.g. {"error": {"type": ..., "message": ...}}.
nlohmann::json error_record(const std::string& type, const std::string& message);

}  // namespace becgrad
