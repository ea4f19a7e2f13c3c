// experiments.cpp — recipe presets, config parsing, CSV and manifest output

#include "becgrad/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "becgrad/oracle.hpp"
#include "becgrad/statesynth.hpp"

namespace becgrad {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<RecipeInfo>& recipes() {
    static const std::vector<RecipeInfo> list{
        {"fig2", RecipeKind::synthesis, "pair tunneling population difference and phase-search fidelity, N=4, U=10E_J"},
        {"fig3", RecipeKind::fidelity_table, "peak singlet fidelity vs N for U = 5, 10, 50 E_J"},
        {"fig4", RecipeKind::curves, "estimator vs time, N=4, singlet and synthesized initial states"},
        {"fig5", RecipeKind::min_table, "delta phi at pi/(2 Omega_D) vs N, singlet and synthesized"},
        {"fig6", RecipeKind::curves, "estimator and <J_z+^2> vs time under one-body loss, N=2"},
        {"fig7", RecipeKind::min_table, "delta phi vs N under one-body loss 0, 0.005, 0.01"},
        {"fig8", RecipeKind::curves, "estimator vs time under two-body loss, N=4 (panels a, b)"},
        {"fig9", RecipeKind::min_table, "delta phi vs N under two-body loss (panels a, b)"},
        {"fig10", RecipeKind::curves, "estimator vs time for chi = 0, 1e-4, 5e-4, 1e-3, N=50"},
        {"fig11", RecipeKind::min_table, "delta phi at pi/(2 Omega_D) vs N for the same chi values"},
        {"custom", RecipeKind::curves, "single curve from the given params, rates and initial state"},
    };
    return list;
}

std::optional<RecipeInfo> find_recipe(const std::string& name) {
    for (const auto& r : recipes())
        if (r.name == name) return r;
    return std::nullopt;
}

TimeGrid GridSpec::resolve(double omega_d) const {
    const double end = t_end ? *t_end : t_start + periods * 2.0 * std::numbers::pi / omega_d;
    return TimeGrid::uniform(t_start, end, samples);
}

namespace {

bool safe_label(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

void check_rate(double v, const std::string& key) {
    require(std::isfinite(v) && v >= 0.0, key + ": must be a finite non-negative rate");
}

}  // namespace

void ExperimentConfig::validate() const {
    const auto info = find_recipe(recipe);
    require(info.has_value(), "recipe: unknown recipe '" + recipe + "'");
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    check_rate(rates.gamma_o, "rates.gamma_o");
    check_rate(rates.gamma_t_ee, "rates.gamma_t_ee");
    check_rate(rates.gamma_t_eg, "rates.gamma_t_eg");
    require(std::isfinite(u_over_ej) && u_over_ej > 0.0, "u_over_ej: must be positive");
    require(!output_dir.empty(), "output_dir: required");

    const RecipeKind kind = info->kind;
    if (kind == RecipeKind::curves || kind == RecipeKind::min_table) {
        require(std::isfinite(params.Omega_D) && params.Omega_D > 0.0, "params.Omega_D: must be positive");
        require(!variants.empty(), "variants: at least one variant is required");
        std::set<std::string> labels;
        for (std::size_t i = 0; i < variants.size(); ++i) {
            const Variant& v = variants[i];
            const std::string key = "variants[" + std::to_string(i) + "]";
            require(safe_label(v.label), key + ".label: must be non-empty and use [A-Za-z0-9._-]");
            require(labels.insert(v.label).second, key + ".label: duplicate '" + v.label + "'");
            if (v.gamma_o) check_rate(*v.gamma_o, key + ".gamma_o");
            if (v.gamma_t_ee) check_rate(*v.gamma_t_ee, key + ".gamma_t_ee");
            if (v.gamma_t_eg) check_rate(*v.gamma_t_eg, key + ".gamma_t_eg");
            if (v.chi) require(std::isfinite(*v.chi), key + ".chi: must be finite");
        }
    }
    if (kind == RecipeKind::curves) {
        require(grid.samples >= 3, "grid.samples: at least 3 samples are required");
        require(std::isfinite(grid.t_start) && grid.t_start >= 0.0, "grid.t_start: must be >= 0");
        if (grid.t_end) require(std::isfinite(*grid.t_end) && *grid.t_end > grid.t_start, "grid.t_end: must exceed t_start");
        else require(std::isfinite(grid.periods) && grid.periods > 0.0, "grid.periods: must be positive");
    }
    if (kind == RecipeKind::fidelity_table || kind == RecipeKind::min_table) {
        require(!N_list.empty(), "N_list: at least one N is required");
        for (std::size_t n : N_list) require(n >= 2 && n % 2 == 0, "N_list: every N must be even and >= 2");
    }
    if (kind == RecipeKind::fidelity_table) {
        require(!u_list.empty(), "u_list: at least one U/E_J is required");
        for (double u : u_list) require(std::isfinite(u) && u > 0.0, "u_list: values must be positive");
    }
}

ExperimentConfig preset(const std::string& recipe) {
    if (!find_recipe(recipe)) throw ConfigError("recipe: unknown recipe '" + recipe + "'");
    ExperimentConfig c;
    c.recipe = recipe;
    c.params.N = 4;
    c.params.Omega = 1.0;
    c.params.Omega_D = 0.05;
    auto rate_variant = [](const std::string& prefix, double eg, double ee) {
        Variant v;
        v.label = prefix + format_number(eg);
        v.gamma_t_eg = eg;
        v.gamma_t_ee = ee;
        return v;
    };
    const std::vector<double> chis{0.0, 1e-4, 5e-4, 1e-3};

    if (recipe == "fig2") {
        c.N_list = {4};
    } else if (recipe == "fig3") {
        c.N_list = {2, 4, 6, 8, 10, 12};
        c.u_list = {5.0, 10.0, 50.0};
    } else if (recipe == "fig4" || recipe == "fig5") {
        Variant s, t;
        s.label = "singlet";
        s.initial_state = InitialState::singlet;
        t.label = "synthesized";
        t.initial_state = InitialState::synthesized;
        c.variants = {s, t};
        if (recipe == "fig5") c.N_list = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    } else if (recipe == "fig6" || recipe == "fig7") {
        const std::vector<double> rates = recipe == "fig6" ? std::vector<double>{0.0, 0.0025, 0.005, 0.0075, 0.01}
                                                           : std::vector<double>{0.0, 0.005, 0.01};
        for (double g : rates) {
            Variant v;
            v.label = "gamma_o_" + format_number(g);
            v.gamma_o = g;
            c.variants.push_back(v);
        }
        if (recipe == "fig6") {
            c.params.N = 2;
            c.write_jz_sq = true;
        } else {
            c.N_list = {2, 4, 6, 8, 10};
        }
    } else if (recipe == "fig8" || recipe == "fig9") {
        const std::vector<double> a = recipe == "fig8" ? std::vector<double>{0.0, 0.005, 0.01}
                                                       : std::vector<double>{0.0, 0.0025, 0.005, 0.0075, 0.01};
        for (double eg : a) c.variants.push_back(rate_variant("a_gamma_eg_", eg, 0.0));
        for (double eg : {0.0, 0.001, 0.002}) c.variants.push_back(rate_variant("b_gamma_eg_", eg, 1.5 * eg));
        if (recipe == "fig9") c.N_list = {2, 4, 6, 8, 10};
    } else if (recipe == "fig10" || recipe == "fig11") {
        for (double chi : chis) {
            Variant v;
            v.label = "chi_" + format_number(chi);
            v.chi = chi;
            c.variants.push_back(v);
        }
        if (recipe == "fig10") {
            c.params.N = 50;
            c.grid.samples = 801;
        } else {
            c.N_list = {10, 20, 30, 40, 50};
        }
    } else {
        Variant v;
        v.label = "custom";
        c.variants = {v};
    }
    return c;
}

// --- JSON ----------------------------------------------------------------

namespace {

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json variant_to_json(const Variant& v) {
    json j{{"label", v.label}};
    if (v.initial_state) j["initial_state"] = to_string(*v.initial_state);
    if (v.gamma_o) j["gamma_o"] = *v.gamma_o;
    if (v.gamma_t_ee) j["gamma_t_ee"] = *v.gamma_t_ee;
    if (v.gamma_t_eg) j["gamma_t_eg"] = *v.gamma_t_eg;
    if (v.chi) j["chi"] = *v.chi;
    return j;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError((path.empty() ? std::string("config") : path) + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(join(path, key) + ": unknown key");
    }
}

double read_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

std::size_t read_count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path + ": expected a non-negative integer");
    return j.get<std::size_t>();
}

bool read_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path + ": expected true or false");
    return j.get<bool>();
}

std::string read_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

InitialState read_initial(const json& j, const std::string& path) {
    const auto s = initial_state_from_string(read_string(j, path));
    if (!s) throw ConfigError(path + ": expected singlet, synthesized or product");
    return *s;
}

template <class F>
void with(const json& j, const char* key, const std::string& path, F&& f) {
    if (j.contains(key)) f(j.at(key), join(path, key));
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
    const PhysicalParams& p = c.params;
    json variants = json::array();
    for (const auto& v : c.variants) variants.push_back(variant_to_json(v));
    return {
        {"recipe", c.recipe},
        {"params",
         {{"N", p.N}, {"E_J_e", p.E_J_e}, {"E_J_g", p.E_J_g}, {"U_ee", p.U_ee}, {"U_gg", p.U_gg}, {"U_eg", p.U_eg},
          {"Delta", p.Delta}, {"Omega", p.Omega}, {"Omega_D", p.Omega_D}, {"chi", p.chi}, {"delta_L", p.delta_L},
          {"delta_R", p.delta_R}}},
        {"rates", {{"gamma_o", c.rates.gamma_o}, {"gamma_t_ee", c.rates.gamma_t_ee}, {"gamma_t_eg", c.rates.gamma_t_eg}}},
        {"grid",
         {{"t_start", c.grid.t_start}, {"t_end", opt(c.grid.t_end)}, {"periods", c.grid.periods}, {"samples", c.grid.samples}}},
        {"initial_state", to_string(c.initial_state)},
        {"u_over_ej", c.u_over_ej},
        {"variants", variants},
        {"N_list", c.N_list},
        {"u_list", c.u_list},
        {"write_jz_sq", c.write_jz_sq},
        {"output_dir", c.output_dir.string()},
        {"verify", c.verify},
    };
}

ExperimentConfig config_from_json(const json& j, const std::optional<ExperimentConfig>& base) {
    check_keys(j, "", {"recipe", "params", "rates", "grid", "initial_state", "u_over_ej", "variants", "N_list", "u_list",
                       "write_jz_sq", "output_dir", "verify"});
    ExperimentConfig c = base ? *base : preset("custom");
    if (j.contains("recipe")) c = preset(read_string(j["recipe"], "recipe"));

    with(j, "params", "", [&](const json& p, const std::string& path) {
        check_keys(p, path, {"N", "E_J_e", "E_J_g", "U_ee", "U_gg", "U_eg", "Delta", "Omega", "Omega_D", "chi", "delta_L",
                             "delta_R"});
        PhysicalParams& q = c.params;
        with(p, "N", path, [&](const json& v, const std::string& k) { q.N = read_count(v, k); });
        const std::pair<const char*, double*> fields[] = {
            {"E_J_e", &q.E_J_e}, {"E_J_g", &q.E_J_g}, {"U_ee", &q.U_ee},       {"U_gg", &q.U_gg},
            {"U_eg", &q.U_eg},   {"Delta", &q.Delta}, {"Omega", &q.Omega},     {"Omega_D", &q.Omega_D},
            {"chi", &q.chi},     {"delta_L", &q.delta_L}, {"delta_R", &q.delta_R}};
        for (auto [name, dst] : fields) with(p, name, path, [&](const json& v, const std::string& k) { *dst = read_number(v, k); });
    });
    with(j, "rates", "", [&](const json& r, const std::string& path) {
        check_keys(r, path, {"gamma_o", "gamma_t_ee", "gamma_t_eg"});
        with(r, "gamma_o", path, [&](const json& v, const std::string& k) { c.rates.gamma_o = read_number(v, k); });
        with(r, "gamma_t_ee", path, [&](const json& v, const std::string& k) { c.rates.gamma_t_ee = read_number(v, k); });
        with(r, "gamma_t_eg", path, [&](const json& v, const std::string& k) { c.rates.gamma_t_eg = read_number(v, k); });
    });
    with(j, "grid", "", [&](const json& g, const std::string& path) {
        check_keys(g, path, {"t_start", "t_end", "periods", "samples"});
        with(g, "t_start", path, [&](const json& v, const std::string& k) { c.grid.t_start = read_number(v, k); });
        with(g, "t_end", path, [&](const json& v, const std::string& k) {
            c.grid.t_end = v.is_null() ? std::nullopt : std::optional<double>(read_number(v, k));
        });
        with(g, "periods", path, [&](const json& v, const std::string& k) { c.grid.periods = read_number(v, k); });
        with(g, "samples", path, [&](const json& v, const std::string& k) { c.grid.samples = read_count(v, k); });
    });
    with(j, "initial_state", "", [&](const json& v, const std::string& k) { c.initial_state = read_initial(v, k); });
    with(j, "u_over_ej", "", [&](const json& v, const std::string& k) { c.u_over_ej = read_number(v, k); });
    with(j, "variants", "", [&](const json& arr, const std::string& path) {
        if (!arr.is_array()) throw ConfigError(path + ": expected an array");
        c.variants.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const json& v = arr[i];
            const std::string vp = path + "[" + std::to_string(i) + "]";
            check_keys(v, vp, {"label", "initial_state", "gamma_o", "gamma_t_ee", "gamma_t_eg", "chi"});
            Variant out;
            if (!v.contains("label")) throw ConfigError(vp + ".label: required");
            out.label = read_string(v["label"], vp + ".label");
            with(v, "initial_state", vp, [&](const json& x, const std::string& k) { out.initial_state = read_initial(x, k); });
            with(v, "gamma_o", vp, [&](const json& x, const std::string& k) { out.gamma_o = read_number(x, k); });
            with(v, "gamma_t_ee", vp, [&](const json& x, const std::string& k) { out.gamma_t_ee = read_number(x, k); });
            with(v, "gamma_t_eg", vp, [&](const json& x, const std::string& k) { out.gamma_t_eg = read_number(x, k); });
            with(v, "chi", vp, [&](const json& x, const std::string& k) { out.chi = read_number(x, k); });
            c.variants.push_back(std::move(out));
        }
    });
    with(j, "N_list", "", [&](const json& arr, const std::string& path) {
        if (!arr.is_array()) throw ConfigError(path + ": expected an array");
        c.N_list.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) c.N_list.push_back(read_count(arr[i], path + "[" + std::to_string(i) + "]"));
    });
    with(j, "u_list", "", [&](const json& arr, const std::string& path) {
        if (!arr.is_array()) throw ConfigError(path + ": expected an array");
        c.u_list.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) c.u_list.push_back(read_number(arr[i], path + "[" + std::to_string(i) + "]"));
    });
    with(j, "write_jz_sq", "", [&](const json& v, const std::string& k) { c.write_jz_sq = read_bool(v, k); });
    with(j, "output_dir", "", [&](const json& v, const std::string& k) { c.output_dir = read_string(v, k); });
    with(j, "verify", "", [&](const json& v, const std::string& k) { c.verify = read_bool(v, k); });
    return c;
}

ExperimentConfig load_config(const fs::path& path, const std::optional<ExperimentConfig>& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
    return config_from_json(j, base);
}

void apply_overrides(ExperimentConfig& c, const Overrides& o) {
    const auto info = find_recipe(c.recipe);
    if (o.N) {
        c.params.N = *o.N;
        if (info && (info->kind == RecipeKind::min_table || info->kind == RecipeKind::fidelity_table)) c.N_list = {*o.N};
    }
    if (o.omega_d) c.params.Omega_D = *o.omega_d;
    if (o.gamma_o) {
        c.rates.gamma_o = *o.gamma_o;
        const bool swept = std::any_of(c.variants.begin(), c.variants.end(), [](const Variant& v) { return v.gamma_o.has_value(); });
        if (swept) c.variants = {Variant{"override", std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt}};
    }
    if (o.output_dir) c.output_dir = *o.output_dir;
    if (o.verify) c.verify = true;
}

DetectionSetup resolve_variant(const ExperimentConfig& c, const Variant& v) {
    DetectionSetup s;
    s.params = c.params;
    s.rates = c.rates;
    s.initial = v.initial_state.value_or(c.initial_state);
    s.u_over_ej = c.u_over_ej;
    if (v.gamma_o) s.rates.gamma_o = *v.gamma_o;
    if (v.gamma_t_ee) s.rates.gamma_t_ee = *v.gamma_t_ee;
    if (v.gamma_t_eg) s.rates.gamma_t_eg = *v.gamma_t_eg;
    if (v.chi) s.params.chi = *v.chi;
    return s;
}

// --- output --------------------------------------------------------------

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json error_record(const std::string& type, const std::string& message) {
    return {{"error", {{"type", type}, {"message", message}}}};
}

bool RunResult::verified_ok() const {
    return std::all_of(verification.begin(), verification.end(), [](const VerificationEntry& e) { return e.passed; });
}

namespace {

// Oracle check of `state` = production result at time t.
VerificationEntry compare_with_oracle(const DetectionSetup& setup, const QuantumState& state, const std::string& label,
                                      double t, double tolerance) {
    const WellPair wells = detection_space(setup);
    VerificationEntry e;
    e.label = label;
    e.N = setup.params.N;
    e.dimension = wells.joint->size();
    e.time = t;
    if (e.dimension > oracle::kMaxDimension) return e;
    const QuantumState rho0 = detection_initial_state(setup, wells).to_mixed();
    const QuantumState exact = oracle::lindblad_exact(detection_model(setup.params, setup.rates, wells).joint(), rho0, t);
    e.checked = true;
    e.max_difference = max_norm(exact.density_matrix() - state.density_matrix());
    e.passed = e.max_difference < tolerance;
    return e;
}

class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
        created_dir_ = !fs::exists(dir_);
        fs::create_directories(dir_);
    }

    void write(const fs::path& name, const std::string& content) {
        const fs::path full = dir_ / name;
        std::ofstream out(full, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + full.string() + " for writing");
        written_.push_back(name);
        out << content;
        if (!out) throw std::runtime_error("write failed for " + full.string());
    }

    void discard() noexcept {
        std::error_code ec;
        for (const auto& f : written_) fs::remove(dir_ / f, ec);
        if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
    }

    const std::vector<fs::path>& files() const { return written_; }

private:
    fs::path dir_;
    bool created_dir_{false};
    std::vector<fs::path> written_;
};

class Csv {
public:
    explicit Csv(std::initializer_list<const char*> header) {
        bool first = true;
        for (const char* h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << '\n';
    }

    template <class... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    static std::string cell(double v) { return format_number(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(const std::string& s) { return s; }

    std::ostringstream out_;
};

void run_synthesis(const ExperimentConfig& c, OutputSet& out) {
    const std::size_t N = c.params.N;
    const SynthesisResult r = synthesize(N, c.u_over_ej);
    Csv pop({"t", "population_difference"});
    for (std::size_t i = 0; i < r.report.times.size(); ++i) pop.row(r.report.times[i], r.report.population_difference[i]);
    Csv fid({"t", "fidelity"});
    for (std::size_t i = 0; i < r.report.phase_times.size(); ++i) fid.row(r.report.phase_times[i], r.report.fidelity[i]);
    Csv summary({"N", "u_over_ej", "t_star", "t_phase", "fidelity"});
    summary.row(N, c.u_over_ej, r.report.t_star, r.report.t_phase, r.report.fidelity_max);
    out.write("population.csv", pop.str());
    out.write("fidelity.csv", fid.str());
    out.write("synthesis.csv", summary.str());
}

void run_fidelity_table(const ExperimentConfig& c, OutputSet& out) {
    Csv t({"N", "u_over_ej", "t_star", "t_phase", "fidelity"});
    for (const auto& row : fidelity_vs_N_sweep(c.u_list, c.N_list)) t.row(row.N, row.u_over_ej, row.t_star, row.t_phase, row.fidelity);
    out.write("table.csv", t.str());
}

void run_curves(const ExperimentConfig& c, OutputSet& out, RunResult& result) {
    const TimeGrid grid = c.grid.resolve(c.params.Omega_D);
    for (const Variant& v : c.variants) {
        const DetectionSetup setup = resolve_variant(c, v);
        const SimulationResult sim = simulate_detection(setup, grid);
        const EstimatorSeries& s = sim.series;
        Csv csv({"t", "estimator", "variance", "uncertainty"});
        for (std::size_t i = 0; i < s.times.size(); ++i) csv.row(s.times[i], s.estimator[i], s.variance(i), s.uncertainty[i]);
        out.write(v.label + ".csv", csv.str());
        if (c.write_jz_sq) {
            Csv jz({"t", "jz_sq"});
            for (std::size_t i = 0; i < s.times.size(); ++i) jz.row(s.times[i], s.jz_sq[i]);
            out.write(v.label + "_jz2.csv", jz.str());
        }
        if (c.verify) result.verification.push_back(compare_with_oracle(setup, sim.states.back(), v.label, grid.t_end(), 1e-7));
    }
}

void run_min_table(const ExperimentConfig& c, OutputSet& out, RunResult& result) {
    Csv t({"N", "variant", "uncertainty", "estimator", "heisenberg", "sql"});
    for (const Variant& v : c.variants) {
        MinUncertaintyConfig mc{resolve_variant(c, v), c.N_list};
        for (const auto& row : min_uncertainty_vs_N(mc)) {
            t.row(row.N, v.label, row.uncertainty, row.estimator, row.heisenberg, row.sql);
            if (c.verify) {
                DetectionSetup s = mc.setup;
                s.params.N = row.N;
                result.verification.push_back(verify_point(s, v.label, std::numbers::pi / (2.0 * s.params.Omega_D)));
            }
        }
    }
    out.write("table.csv", t.str());
}

json verification_json(const RunResult& r, bool requested) {
    json entries = json::array();
    for (const auto& e : r.verification)
        entries.push_back({{"label", e.label},
                           {"N", e.N},
                           {"dimension", e.dimension},
                           {"time", e.time},
                           {"checked", e.checked},
                           {"max_difference", e.max_difference},
                           {"passed", e.passed}});
    return {{"requested", requested}, {"tolerance", 1e-7}, {"all_passed", r.verified_ok()}, {"entries", entries}};
}

}  // namespace

VerificationEntry verify_point(const DetectionSetup& setup, const std::string& label, double t, double tolerance) {
    const SimulationResult sim = simulate_detection(setup, TimeGrid::points({0.5 * t, t, t + 1e-3 * t}));
    return compare_with_oracle(setup, sim.states[1], label, t, tolerance);
}

RunResult run(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const RecipeKind kind = find_recipe(config.recipe)->kind;
    OutputSet out(config.output_dir);
    RunResult result;
    try {
        switch (kind) {
            case RecipeKind::synthesis: run_synthesis(config, out); break;
            case RecipeKind::fidelity_table: run_fidelity_table(config, out); break;
            case RecipeKind::curves: run_curves(config, out, result); break;
            case RecipeKind::min_table: run_min_table(config, out, result); break;
        }
        result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json files = json::array();
        for (const auto& f : out.files()) files.push_back(f.string());
        const json manifest{{"recipe", config.recipe},
                            {"version", kVersion},
                            {"config", config_to_json(config)},
                            {"wall_time_s", result.wall_time},
                            {"files", files},
                            {"verification", verification_json(result, config.verify)}};
        out.write("manifest.json", manifest.dump(2) + "\n");
    } catch (...) {
        out.discard();
        throw;
    }
    result.files = out.files();
    return result;
}

}  // namespace becgrad
