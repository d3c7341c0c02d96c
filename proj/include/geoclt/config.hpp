#pragma once

#include "geoclt/geometries.hpp"
#include "geoclt/measure.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace geoclt {

enum class ModelKind { RiemannianVolume, FinslerVolume, DualVolume, MeanWidth };

std::string model_name(ModelKind m);
ModelKind parse_model(const std::string& s);

/// Options of the `diagnose` subcommand ([diagnose] table).
struct DiagnoseConfig {
    std::string kind = "visibility"; ///< visibility | overlap | containment | difference | surface_body | cap
    std::vector<double> t_list{0.002, 0.005, 0.01, 0.02, 0.05};
    std::vector<int> n_list{200, 400, 800};
    double c = 8.0;
    int reps = 200;
    long mc_budget = 20000;
    int z_count = 8;   ///< Boundary points z over which the visibility supremum is taken.
    int grid = 0;      ///< Surface-body direction grid (0: default).
};

struct ExperimentConfig {
    std::string name = "experiment";
    ModelKind model = ModelKind::RiemannianVolume;
    double j = 0.0;              ///< Dual-volume exponent.
    nlohmann::json body;         ///< SupportBody spec.
    GeometrySpec geometry;
    QuadratureSpec quadrature;
    std::optional<nlohmann::json> T;  ///< Inner polytope spec (dual volume).
    std::optional<nlohmann::json> L;  ///< Window spec (mean width).
    std::vector<int> n_list;
    int reps = 0;
    std::uint64_t master_seed = 0;
    int threads = 0;             ///< 0: hardware concurrency (GEOCLT_THREADS still caps).
    bool check_dual = false;     ///< Mean width: also evaluate the dual route per replication.
    std::optional<DiagnoseConfig> diagnose;

    /// Throws ConfigError on any violated invariant (n >= d+1, T in int K,
    /// K in int L, model/geometry compatibility, ...).
    void validate() const;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);

    /// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
    std::string hash() const;
};

/// TOML document to JSON (tables to objects, arrays to arrays).
nlohmann::json toml_to_json(const std::string& text, const std::string& source = "<string>");

/// Read, parse and validate a TOML config. Every failure is a ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& toml_text);

/// Polytope from a {kind = cross_polytope | box | vertices, ...} spec.
Polytope polytope_from_spec(const nlohmann::json& spec, int dim);

/// Inner polytope T: the configured one, else a cross-polytope of radius 0.25 * inradius(K).
Polytope inner_polytope(const ExperimentConfig& cfg, const SupportBody& K);

/// Window L: the configured one, else the box circumscribing the parallel body K + B.
Polytope window_polytope(const ExperimentConfig& cfg, const SupportBody& K);

std::string fnv1a_hex(const std::string& bytes);

} // namespace geoclt
