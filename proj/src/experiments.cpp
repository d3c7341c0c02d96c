#include "geoclt/experiments.hpp"

#include "geoclt/diagnostics.hpp"
#include "geoclt/hull.hpp"
#include "geoclt/measure.hpp"
#include "geoclt/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace geoclt {

ExperimentModel::ExperimentModel(const ExperimentConfig& cfg)
    : cfg_(cfg), K_(SupportBody::from_json(cfg.body)), w_(make_weights(cfg.geometry, K_))
{
    sampler_ = std::make_unique<BoundarySampler>(K_, w_);
    if (cfg_.model == ModelKind::DualVolume)
        T_ = inner_polytope(cfg_, K_);
    if (cfg_.model == ModelKind::MeanWidth)
        L_ = window_polytope(cfg_, K_);
}

ExperimentModel::Evaluation ExperimentModel::evaluate(const std::vector<BoundaryPoint>& points) const
{
    const int d = dim();
    const QuadratureSpec& q = cfg_.quadrature;
    Evaluation e;
    switch (cfg_.model) {
    case ModelKind::RiemannianVolume:
    case ModelKind::FinslerVolume: {
        std::vector<Vec> xs;
        xs.reserve(points.size());
        for (const BoundaryPoint& p : points)
            xs.push_back(p.x);
        const Polytope P = convex_hull(xs, d);
        e.value = w_.phi_constant ? w_.phi_value * polytope_volume(P) : weighted_volume(P, w_.phi, q);
        e.aux = static_cast<double>(P.vertices().size());
        break;
    }
    case ModelKind::DualVolume: {
        std::vector<Vec> xs;
        xs.reserve(points.size());
        for (const BoundaryPoint& p : points)
            xs.push_back(p.x);
        const Polytope P = hull_with_body(xs, T_);
        e.value = dual_volume(P, cfg_.j, q);
        bool changed = false;
        for (const Vec& v : P.vertices())
            for (const Vec& t : T_.vertices())
                changed = changed || v == t;
        e.aux = changed ? 1.0 : 0.0;
        break;
    }
    case ModelKind::MeanWidth: {
        std::vector<Halfspace> hs;
        hs.reserve(points.size());
        for (const BoundaryPoint& p : points)
            hs.push_back({p.normal, p.normal.dot(p.x)});
        const Polytope P = halfspace_intersection(hs, L_, Vec::Zero(d));
        e.value = mean_width(P, q);
        e.aux = cfg_.check_dual ? mean_width_dual(hs, L_, q) : NAN;
        break;
    }
    }
    if (!std::isfinite(e.value) || !(e.value > 0.0))
        throw NumericalError("functional value is not finite and positive", e.value);
    return e;
}

ExperimentModel::Evaluation ExperimentModel::replicate(int n, SeedStream& stream) const
{
    return evaluate(sampler_->sample(stream, n));
}

nlohmann::json CLTReport::to_json(bool with_standardized) const
{
    nlohmann::json j;
    j["config"] = config;
    j["config_hash"] = config_hash;
    j["master_seed"] = master_seed;
    j["version"] = version;
    j["model"] = model;
    j["dim"] = dim;
    j["notes"] = notes;
    nlohmann::json rows = nlohmann::json::array();
    for (const NSummary& s : per_n) {
        nlohmann::json r{{"n", s.n},
                         {"reps", s.reps},
                         {"mean", s.mean},
                         {"variance", s.variance},
                         {"kolmogorov", s.kolmogorov},
                         {"failures", s.failures},
                         {"aux_mean", s.aux_mean}};
        if (!std::isnan(s.dual_max_abs_diff))
            r["dual_max_abs_diff"] = s.dual_max_abs_diff;
        if (with_standardized)
            r["standardized"] = s.standardized;
        rows.push_back(r);
    }
    j["per_n"] = rows;
    if (variance_fit)
        j["variance_fit"] = {{"slope", variance_fit->slope},
                             {"intercept", variance_fit->intercept},
                             {"r2", variance_fit->r2},
                             {"reference_slope", -(dim + 3.0) / (dim - 1.0)}};
    else
        j["variance_fit"] = nullptr;
    if (rate_fit) {
        auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
        j["rate_fit"] = {{"exponent", rate_fit->exponent},
                         {"intercept", rate_fit->intercept},
                         {"r2", rate_fit->r2},
                         {"exponent_adjusted", num(rate_fit->exponent_adjusted)},
                         {"loglog_coefficient", num(rate_fit->loglog_coefficient)},
                         {"envelope_power", rate_fit->envelope_power},
                         {"envelope_constant", rate_fit->envelope_constant},
                         {"below_envelope", rate_fit->below_envelope}};
    } else {
        j["rate_fit"] = nullptr;
    }
    return j;
}

CLTReport CLTReport::from_json(const nlohmann::json& j)
{
    CLTReport r;
    r.config = j.at("config");
    r.config_hash = j.at("config_hash").get<std::string>();
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.dim = j.at("dim").get<int>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& row : j.at("per_n")) {
        NSummary s;
        s.n = row.at("n").get<int>();
        s.reps = row.at("reps").get<int>();
        s.mean = row.at("mean").get<double>();
        s.variance = row.at("variance").get<double>();
        s.kolmogorov = row.at("kolmogorov").get<double>();
        s.failures = row.at("failures").get<int>();
        s.aux_mean = row.at("aux_mean").get<double>();
        if (row.contains("dual_max_abs_diff"))
            s.dual_max_abs_diff = row.at("dual_max_abs_diff").get<double>();
        if (row.contains("standardized"))
            s.standardized = row.at("standardized").get<std::vector<double>>();
        r.per_n.push_back(std::move(s));
    }
    if (!j.at("variance_fit").is_null()) {
        const auto& v = j.at("variance_fit");
        r.variance_fit = LinearFit{v.at("slope").get<double>(), v.at("intercept").get<double>(),
                                   v.at("r2").get<double>()};
    }
    if (!j.at("rate_fit").is_null()) {
        const auto& v = j.at("rate_fit");
        auto num = [&](const char* k) { return v.at(k).is_null() ? NAN : v.at(k).get<double>(); };
        RateFit f;
        f.exponent = num("exponent");
        f.intercept = num("intercept");
        f.r2 = num("r2");
        f.exponent_adjusted = num("exponent_adjusted");
        f.loglog_coefficient = num("loglog_coefficient");
        f.envelope_power = num("envelope_power");
        f.envelope_constant = num("envelope_constant");
        f.below_envelope = v.at("below_envelope").get<bool>();
        r.rate_fit = f;
    }
    return r;
}

CLTReport summarize(const nlohmann::json& config, const std::string& config_hash, std::uint64_t master_seed,
                    int dim, std::vector<ReplicationRecord> records)
{
    std::sort(records.begin(), records.end(), [](const ReplicationRecord& a, const ReplicationRecord& b) {
        return a.n != b.n ? a.n < b.n : a.replication < b.replication;
    });
    CLTReport rep;
    rep.config = config;
    rep.config_hash = config_hash;
    rep.master_seed = master_seed;
    rep.version = GEOCLT_VERSION;
    rep.model = config.value("model", std::string());
    rep.dim = dim;
    rep.notes = {"standardization uses the empirical mean and standard deviation at each n",
                 "variance is the unbiased sample variance"};

    std::map<int, std::vector<const ReplicationRecord*>> by_n;
    for (const ReplicationRecord& r : records)
        by_n[r.n].push_back(&r);
    std::vector<std::pair<double, double>> var_rows;
    std::vector<std::pair<double, double>> kol_rows;
    for (const auto& [n, rs] : by_n) {
        NSummary s;
        s.n = n;
        s.reps = static_cast<int>(rs.size());
        std::vector<double> values;
        KahanSum aux;
        int aux_count = 0;
        for (const ReplicationRecord* r : rs) {
            values.push_back(r->value);
            s.failures += r->attempts > 1 ? 1 : 0;
            if (!std::isnan(r->aux)) {
                aux.add(r->aux);
                ++aux_count;
                if (rep.model == "mean_width") {
                    const double diff = std::abs(r->value - r->aux);
                    s.dual_max_abs_diff = std::isnan(s.dual_max_abs_diff) ? diff : std::max(s.dual_max_abs_diff, diff);
                }
            }
        }
        s.aux_mean = aux_count ? aux.value() / aux_count : NAN;
        const MeanVar mv = mean_variance(values);
        s.mean = mv.mean;
        s.variance = mv.variance;
        s.standardized = standardize(values);
        s.kolmogorov = kolmogorov_distance(s.standardized);
        var_rows.emplace_back(n, s.variance);
        kol_rows.emplace_back(n, s.kolmogorov);
        rep.per_n.push_back(std::move(s));
    }
    try {
        rep.variance_fit = variance_scaling_fit(var_rows);
        rep.rate_fit = rate_curve(kol_rows, dim);
    } catch (const DataError& e) {
        rep.notes.push_back(std::string("scaling fits skipped: ") + e.what());
    }
    rep.records = std::move(records);
    return rep;
}

CLTReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts)
{
    cfg.validate();
    auto log = [&](const std::string& s) {
        if (opts.log)
            opts.log(s);
    };
    const ExperimentModel model(cfg);
    const SeedStream root(cfg.master_seed);
    const int threads = worker_count(opts.threads > 0 ? opts.threads : cfg.threads);
    log("model " + model_name(cfg.model) + ", geometry " + cfg.geometry.geometry + ", d = " +
        std::to_string(model.dim()) + ", " + std::to_string(threads) + " worker(s)");

    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    const std::size_t total = reps * cfg.n_list.size();
    std::vector<ReplicationRecord> records(total);
    parallel_for(total, threads, [&](std::size_t idx) {
        const std::size_t ni = idx / reps;
        const std::size_t r = idx % reps;
        ReplicationRecord& rec = records[idx];
        rec.n = cfg.n_list[ni];
        rec.replication = static_cast<int>(r);
        const auto start = std::chrono::steady_clock::now();
        SeedStream stream = root.child({ni, r});
        try {
            const auto e = model.replicate(rec.n, stream);
            rec.value = e.value;
            rec.aux = e.aux;
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& first) {
            rec.failure = first.what();
            rec.attempts = 2;
            stream = root.child({ni, r, 1});
            try {
                const auto e = model.replicate(rec.n, stream);
                rec.value = e.value;
                rec.aux = e.aux;
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& second) {
                throw ExperimentAbort("replication " + stream.path_string() + " failed twice: " + first.what() +
                                      " / " + second.what());
            }
        }
        rec.seed_path = stream.path_string();
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    std::size_t failed = 0;
    for (const ReplicationRecord& r : records) {
        if (r.attempts > 1) {
            ++failed;
            log("replication " + std::to_string(r.n) + "/" + std::to_string(r.replication) +
                " retried after: " + r.failure);
        }
    }
    if (static_cast<double>(failed) > 1e-3 * static_cast<double>(total))
        throw ExperimentAbort(std::to_string(failed) + " of " + std::to_string(total) +
                              " replications failed (more than 0.1%)");
    return summarize(cfg.to_json(), cfg.hash(), cfg.master_seed, model.dim(), std::move(records));
}

} // namespace geoclt

namespace geoclt {

std::vector<DiagnosticRow> run_diagnostic(const ExperimentConfig& cfg, const RunOptions& opts)
{
    if (!cfg.diagnose)
        throw ConfigError("config has no [diagnose] table");
    const DiagnoseConfig& dc = *cfg.diagnose;
    const ExperimentModel model(cfg);
    const SupportBody& K = model.body();
    const GeometryWeights& w = model.weights();
    const int d = K.dim();
    if (d != 2 && d != 3)
        throw ConfigError("diagnostics support d = 2 and d = 3 only");
    const SeedStream root(cfg.master_seed);
    auto log = [&](const std::string& s) {
        if (opts.log)
            opts.log(s);
    };
    std::vector<DiagnosticRow> rows;
    const bool per_t = dc.kind == "visibility" || dc.kind == "overlap" || dc.kind == "surface_body" || dc.kind == "cap";
    if (per_t) {
        for (std::size_t ti = 0; ti < dc.t_list.size(); ++ti) {
            const double t = dc.t_list[ti];
            log(dc.kind + ": t = " + std::to_string(t));
            const SurfaceBodyApprox sb = surface_body(K, w, t, dc.grid);
            if (dc.kind == "surface_body") {
                rows.push_back({t, "volume", polytope_volume(sb.polytope), 0.0, static_cast<long>(sb.directions.size())});
                continue;
            }
            if (dc.kind == "cap") {
                const Vec e1 = unit(d, 0);
                std::size_t best = 0;
                for (std::size_t i = 1; i < sb.directions.size(); ++i)
                    if (sb.directions[i].dot(e1) > sb.directions[best].dot(e1))
                        best = i;
                rows.push_back({t, "offset", sb.offsets[best], 0.0, 1});
                rows.push_back({t, "measure", cap_measure(K, w, sb.directions[best], sb.offsets[best]), 0.0, 1});
                continue;
            }
            SeedStream zs = root.child({ti, 0});
            const std::vector<BoundaryPoint> zpts = model.sampler().sample(zs, dc.z_count);
            std::vector<Estimate> est(zpts.size());
            parallel_for(zpts.size(), worker_count(opts.threads > 0 ? opts.threads : cfg.threads),
                         [&](std::size_t zi) {
                             SeedStream s = root.child({ti, 1, zi});
                             est[zi] = dc.kind == "visibility"
                                           ? visibility_measure(K, w.phi, sb, zpts[zi], dc.mc_budget, s)
                                           : overlap_measure(K, w, sb, zpts[zi], dc.mc_budget, s);
                         });
            const auto best = std::max_element(est.begin(), est.end(), [](const Estimate& a, const Estimate& b) {
                return a.value < b.value;
            });
            rows.push_back({t, dc.kind == "visibility" ? "sup_visibility" : "sup_overlap", best->value, best->stderr_,
                            best->samples});
        }
        return rows;
    }
    for (std::size_t ni = 0; ni < dc.n_list.size(); ++ni) {
        const int n = dc.n_list[ni];
        log(dc.kind + ": n = " + std::to_string(n));
        if (dc.kind == "containment") {
            const Estimate e = containment_probability(K, w, n, dc.c, dc.reps, root.child(ni), dc.grid);
            rows.push_back({static_cast<double>(n), "failure_rate", e.value, e.stderr_, e.samples});
        } else {
            const SetFunctional f = [&](const std::vector<Vec>& pts) {
                const Polytope P = convex_hull(pts, d);
                return w.phi_constant ? w.phi_value * polytope_volume(P)
                                      : weighted_volume(P, w.phi, cfg.quadrature);
            };
            const DifferenceStats s = difference_moments(K, w, f, n, dc.reps, root.child(ni));
            rows.push_back({static_cast<double>(n), "B3_hat", s.B3_hat, s.B3_stderr, s.rep_count});
            rows.push_back({static_cast<double>(n), "D1_mean_abs", s.D1_mean_abs, 0.0, s.rep_count});
            rows.push_back({static_cast<double>(n), "D12_nonzero_rate", s.D12_nonzero_rate, s.D12_stderr, s.rep_count});
        }
    }
    return rows;
}

std::string diagnostics_csv(const std::vector<DiagnosticRow>& rows, const std::string& config_hash)
{
    std::string out = "param,quantity,estimate,stderr,samples,config_hash\n";
    char buf[128];
    for (const DiagnosticRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,", r.param);
        out += buf + r.quantity + ',';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%ld,", r.estimate, r.stderr_, r.samples);
        out += buf + config_hash + '\n';
    }
    return out;
}

} // namespace geoclt
