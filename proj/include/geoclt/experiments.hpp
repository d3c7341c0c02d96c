#pragma once

#include "geoclt/config.hpp"
#include "geoclt/sampling.hpp"
#include "geoclt/stats.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace geoclt {

/// Body, weights, sampler and auxiliary polytopes of a config, built once
/// and shared read-only by all replications.
class ExperimentModel {
  public:
    explicit ExperimentModel(const ExperimentConfig& cfg);
    ExperimentModel(const ExperimentModel&) = delete;
    ExperimentModel& operator=(const ExperimentModel&) = delete;

    const ExperimentConfig& config() const { return cfg_; }
    const SupportBody& body() const { return K_; }
    const GeometryWeights& weights() const { return w_; }
    const BoundarySampler& sampler() const { return *sampler_; }
    const Polytope& inner() const { return T_; }
    const Polytope& window() const { return L_; }
    int dim() const { return K_.dim(); }

    struct Evaluation {
        double value = 0.0;
        /// Volume models: hull vertex count. Dual volume: 1 if T changed the
        /// hull, else 0. Mean width: dual-route value (NaN unless check_dual).
        double aux = 0.0;
    };

    /// The model functional on a given point sample.
    Evaluation evaluate(const std::vector<BoundaryPoint>& points) const;

    /// Sample n points from `stream` and evaluate.
    Evaluation replicate(int n, SeedStream& stream) const;

  private:
    ExperimentConfig cfg_;
    SupportBody K_;
    GeometryWeights w_;
    std::unique_ptr<BoundarySampler> sampler_;
    Polytope T_;
    Polytope L_;
};

struct ReplicationRecord {
    int n = 0;
    int replication = 0;
    std::string seed_path;
    double value = 0.0;
    double aux = 0.0;
    double wall_time = 0.0; ///< Seconds; written to timings.csv, not records.csv.
    int attempts = 1;
    std::string failure;    ///< Message of the failed first attempt, if any.
};

struct NSummary {
    int n = 0;
    int reps = 0;
    double mean = 0.0;
    double variance = 0.0;
    double kolmogorov = 0.0;
    int failures = 0;
    double aux_mean = 0.0;
    double dual_max_abs_diff = NAN; ///< Mean width with check_dual only.
    std::vector<double> standardized;
};

struct CLTReport {
    nlohmann::json config;
    std::string config_hash;
    std::uint64_t master_seed = 0;
    std::string version;
    std::string model;
    int dim = 0;
    std::vector<NSummary> per_n;
    std::optional<LinearFit> variance_fit;
    std::optional<RateFit> rate_fit;
    std::vector<std::string> notes;
    std::vector<ReplicationRecord> records;

    nlohmann::json to_json(bool with_standardized = true) const;
    static CLTReport from_json(const nlohmann::json& j);
};

/// Aggregate records (sorted by n, then replication) into a report.
CLTReport summarize(const nlohmann::json& config, const std::string& config_hash, std::uint64_t master_seed,
                    int dim, std::vector<ReplicationRecord> records);

struct RunOptions {
    int threads = 0; ///< Overrides the config when positive; GEOCLT_THREADS still caps.
    std::function<void(const std::string&)> log;
};

/**
 * Replication (i, r) for the i-th n uses the stream path (i, r); a failed
 * attempt is retried once on (i, r, 1). ConfigError propagates at once; a
 * second failure, or first-attempt failures above 0.1% of all replications,
 * throw ExperimentAbort.
 */
CLTReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

struct DiagnosticRow {
    double param = 0.0;    ///< t or n.
    std::string quantity;  ///< e.g. "sup_visibility", "B3_hat".
    double estimate = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
};

/**
 * The [diagnose] table of a config:
 *   visibility    max over z_count sampled z of Phi(Vis(z, t)), per t
 *   overlap       max over z of sigma{y : Vis(z, t) meets Vis(y, t)}, per t
 *   containment   P(surface body at c log n / n not in the hull), per n
 *   difference    B3_hat and the D_{1,2} nonzero rate of the model functional, per n
 *   surface_body  volume of the surface-body polytope, per t
 *   cap           offset s(e_1) with cap measure t, and its recomputed measure, per t
 * Throws ConfigError if the table is missing.
 */
std::vector<DiagnosticRow> run_diagnostic(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// "param,quantity,estimate,stderr,samples,config_hash" rows.
std::string diagnostics_csv(const std::vector<DiagnosticRow>& rows, const std::string& config_hash);

} // namespace geoclt
